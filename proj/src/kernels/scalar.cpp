#include <algorithm>
#include <cmath>
#include <limits>

#include "kernels_impl.hpp"

namespace sea::kernels::detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void affine_scalar(const double* slope, double x, const double* offset, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = slope[i] * x + offset[i];
}

double max_abs_scalar(const double* x, std::size_t n) {
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::fabs(x[i]));
  return best;
}

double max_excess_scalar(const double* d, const double* e, double x, std::size_t n) {
  double best = -kInf;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, d[i] * x - e[i]);
  return best;
}

RatioBounds ratio_bounds_scalar(const double* d, const double* e, std::size_t n) {
  RatioBounds out{-kInf, kInf, kInf};
  for (std::size_t i = 0; i < n; ++i) {
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

double motor_energy_sum_scalar(const MotorEnergyArgs& a) {
  const double am = a.alpha * a.m;
  const double etar = a.eta * a.r;
  double acc = 0.0;
  for (std::size_t i = 0; i < a.n; ++i) {
    const double dq_m = a.r * (a.dq_l[i] - am * a.dtau_pm[i]);
    const double ddq_m = a.r * (a.ddq_l[i] - am * a.ddtau_pm[i]);
    const double tau_s = a.m * a.tau_pm[i];
    const double tau_m = a.inertia * ddq_m + a.damping * dq_m - tau_s / etar - a.tau_u;
    acc += tau_m * tau_m * a.inv_km2 + tau_m * dq_m;
  }
  return acc;
}

}  // namespace

const Table kScalarTable{
    "scalar",
    sum_scalar,
    dot_scalar,
    affine_scalar,
    max_abs_scalar,
    max_excess_scalar,
    ratio_bounds_scalar,
    motor_energy_sum_scalar,
};

}  // namespace sea::kernels::detail
