#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <vector>

#include "seaforge/error.hpp"
#include "seaforge/gait_io.hpp"

namespace sea {
namespace {

// The FFTW planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

// Transforms `samples`, multiplies harmonic j by `weight(j)` and transforms back.
template <class Weight>
std::vector<double> filter_spectrum(std::span<const double> samples, Weight weight) {
  const std::size_t n = samples.size();
  if (n < PeriodicTrajectory::kMinSamples) {
    throw Error(ErrorKind::TooFewSamples,
                "need at least " + std::to_string(PeriodicTrajectory::kMinSamples) + " samples, got " +
                    std::to_string(n));
  }
  const std::size_t half = n / 2 + 1;
  std::vector<double> real(samples.begin(), samples.end());
  std::vector<std::complex<double>> spec(half);
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  const int len = static_cast<int>(n);

  Plans plans;
  {
    std::lock_guard lock(planner_mutex());
    plans.forward = fftw_plan_dft_r2c_1d(len, real.data(), cplx, FFTW_ESTIMATE);
    plans.backward = fftw_plan_dft_c2r_1d(len, cplx, real.data(), FFTW_ESTIMATE);
  }
  if (!plans.forward || !plans.backward) throw Error(ErrorKind::InvariantViolation, "FFTW planning failed");

  fftw_execute(plans.forward);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t j = 0; j < half; ++j) spec[j] *= weight(j) * inv_n;
  fftw_execute(plans.backward);
  return real;
}

}  // namespace

std::vector<double> differentiate(std::span<const double> samples, double dt, int order, int max_harmonic) {
  if (order != 1 && order != 2) throw Error(ErrorKind::InvariantViolation, "derivative order must be 1 or 2");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvariantViolation, "dt must be positive");
  const std::size_t n = samples.size();
  const double w0 = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
  const bool even = n % 2 == 0;
  return filter_spectrum(samples, [&](std::size_t j) -> std::complex<double> {
    if (max_harmonic > 0 && j > static_cast<std::size_t>(max_harmonic)) return 0.0;
    // The Nyquist mode of an even grid is dropped for every order so that the
    // second derivative equals the first applied twice.
    if (even && j == n / 2) return 0.0;
    const double w = w0 * static_cast<double>(j);
    if (order == 1) return {0.0, w};
    return -w * w;
  });
}

std::vector<double> low_pass(std::span<const double> samples, int max_harmonic) {
  if (max_harmonic <= 0) return {samples.begin(), samples.end()};
  return filter_spectrum(samples, [&](std::size_t j) -> std::complex<double> {
    return j > static_cast<std::size_t>(max_harmonic) ? 0.0 : 1.0;
  });
}

}  // namespace sea
