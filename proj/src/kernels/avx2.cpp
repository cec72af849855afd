// Compiled with -mavx2; only reached through the runtime dispatch in
// dispatch.cpp after the CPU has reported AVX2 support.

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace sea::kernels::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
}

inline double hmin(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return std::min(std::min(lanes[0], lanes[1]), std::min(lanes[2], lanes[3]));
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
    acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(x + i + 4));
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(x + i));
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i];
  return acc;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void affine_avx2(const double* slope, double x, const double* offset, double* out, std::size_t n) {
  const __m256d xv = _mm256_set1_pd(x);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(slope + i), xv), _mm256_loadu_pd(offset + i));
    _mm256_storeu_pd(out + i, v);
  }
  for (; i < n; ++i) out[i] = slope[i] * x + offset[i];
}

double max_abs_avx2(const double* x, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) best = _mm256_max_pd(best, _mm256_andnot_pd(sign, _mm256_loadu_pd(x + i)));
  double out = hmax(best);
  for (; i < n; ++i) out = std::max(out, std::fabs(x[i]));
  return out;
}

double max_excess_avx2(const double* d, const double* e, double x, std::size_t n) {
  const __m256d xv = _mm256_set1_pd(x);
  __m256d best = _mm256_set1_pd(-kInf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_sub_pd(_mm256_mul_pd(_mm256_loadu_pd(d + i), xv), _mm256_loadu_pd(e + i));
    best = _mm256_max_pd(best, v);
  }
  double out = hmax(best);
  for (; i < n; ++i) out = std::max(out, d[i] * x - e[i]);
  return out;
}

RatioBounds ratio_bounds_avx2(const double* d, const double* e, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d pinf = _mm256_set1_pd(kInf);
  const __m256d ninf = _mm256_set1_pd(-kInf);
  __m256d lo = ninf;
  __m256d hi = pinf;
  __m256d gate = pinf;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d dv = _mm256_loadu_pd(d + i);
    const __m256d ev = _mm256_loadu_pd(e + i);
    const __m256d q = _mm256_div_pd(ev, dv);
    const __m256d pos = _mm256_cmp_pd(dv, zero, _CMP_GT_OQ);
    const __m256d neg = _mm256_cmp_pd(dv, zero, _CMP_LT_OQ);
    const __m256d eq = _mm256_cmp_pd(dv, zero, _CMP_EQ_OQ);
    hi = _mm256_min_pd(hi, _mm256_blendv_pd(pinf, q, pos));
    lo = _mm256_max_pd(lo, _mm256_blendv_pd(ninf, q, neg));
    gate = _mm256_min_pd(gate, _mm256_blendv_pd(pinf, ev, eq));
  }
  RatioBounds out{hmax(lo), hmin(hi), hmin(gate)};
  for (; i < n; ++i) {
    if (d[i] > 0.0) {
      out.hi = std::min(out.hi, e[i] / d[i]);
    } else if (d[i] < 0.0) {
      out.lo = std::max(out.lo, e[i] / d[i]);
    } else {
      out.gate_min = std::min(out.gate_min, e[i]);
    }
  }
  return out;
}

double motor_energy_sum_avx2(const MotorEnergyArgs& a) {
  const double am_s = a.alpha * a.m;
  const double etar_s = a.eta * a.r;
  const __m256d am = _mm256_set1_pd(am_s);
  const __m256d r = _mm256_set1_pd(a.r);
  const __m256d m = _mm256_set1_pd(a.m);
  const __m256d etar = _mm256_set1_pd(etar_s);
  const __m256d inertia = _mm256_set1_pd(a.inertia);
  const __m256d damping = _mm256_set1_pd(a.damping);
  const __m256d tau_u = _mm256_set1_pd(a.tau_u);
  const __m256d inv_km2 = _mm256_set1_pd(a.inv_km2);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= a.n; i += 4) {
    const __m256d dq_m = _mm256_mul_pd(
        r, _mm256_sub_pd(_mm256_loadu_pd(a.dq_l + i), _mm256_mul_pd(am, _mm256_loadu_pd(a.dtau_pm + i))));
    const __m256d ddq_m = _mm256_mul_pd(
        r, _mm256_sub_pd(_mm256_loadu_pd(a.ddq_l + i), _mm256_mul_pd(am, _mm256_loadu_pd(a.ddtau_pm + i))));
    const __m256d tau_s = _mm256_mul_pd(m, _mm256_loadu_pd(a.tau_pm + i));
    __m256d tau_m = _mm256_add_pd(_mm256_mul_pd(inertia, ddq_m), _mm256_mul_pd(damping, dq_m));
    tau_m = _mm256_sub_pd(tau_m, _mm256_div_pd(tau_s, etar));
    tau_m = _mm256_sub_pd(tau_m, tau_u);
    const __m256d joule = _mm256_mul_pd(_mm256_mul_pd(tau_m, tau_m), inv_km2);
    acc = _mm256_add_pd(acc, _mm256_add_pd(joule, _mm256_mul_pd(tau_m, dq_m)));
  }
  double out = hsum(acc);
  for (; i < a.n; ++i) {
    const double dq_m = a.r * (a.dq_l[i] - am_s * a.dtau_pm[i]);
    const double ddq_m = a.r * (a.ddq_l[i] - am_s * a.ddtau_pm[i]);
    const double tau_s = a.m * a.tau_pm[i];
    const double tau_m = a.inertia * ddq_m + a.damping * dq_m - tau_s / etar_s - a.tau_u;
    out += tau_m * tau_m * a.inv_km2 + tau_m * dq_m;
  }
  return out;
}

}  // namespace

const Table kAvx2Table{
    "avx2",
    sum_avx2,
    dot_avx2,
    affine_avx2,
    max_abs_avx2,
    max_excess_avx2,
    ratio_bounds_avx2,
    motor_energy_sum_avx2,
};

}  // namespace sea::kernels::detail
