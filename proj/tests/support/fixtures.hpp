#pragma once

// Shared test fixtures: EC30 motor, random band-limited trajectories with
// closed-form derivatives, and the bundled ankle case study.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "seaforge/gait_io.hpp"

namespace fixtures {

inline sea::MotorParams ec30() {
  return {0.0136, 0.102, 33.3e-7, 1.665e-6, 600.0, 0.8, 0.3375, 30.0, 21065.0 * 2.0 * std::numbers::pi / 60.0};
}

inline sea::SpringSpec spring() { return {0.8}; }

inline constexpr double kSubjectMass = 69.1;

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

/// x(t) = sum_k a_k cos(k w t) + b_k sin(k w t) with closed-form derivatives.
struct Fourier {
  double omega;
  std::vector<double> a, b;  // index 0 is harmonic 1

  double operator()(double t, int order = 0) const {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double k = static_cast<double>(j + 1) * omega;
      const double c = std::cos(k * t), sn = std::sin(k * t);
      switch (order) {
        case 0: s += a[j] * c + b[j] * sn; break;
        case 1: s += k * (-a[j] * sn + b[j] * c); break;
        default: s += -k * k * (a[j] * c + b[j] * sn); break;
      }
    }
    return s;
  }

  std::vector<double> sample(std::size_t n, double dt, int order = 0) const {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(static_cast<double>(i) * dt, order);
    return out;
  }
};

inline Fourier random_fourier(std::mt19937_64& rng, double period, int harmonics, double amplitude) {
  Fourier f{2.0 * std::numbers::pi / period, {}, {}};
  for (int k = 1; k <= harmonics; ++k) {
    const double scale = amplitude / static_cast<double>(k);
    f.a.push_back(uniform(rng, -scale, scale));
    f.b.push_back(uniform(rng, -scale, scale));
  }
  return f;
}

struct GaitLike {
  Fourier q;
  Fourier tau;
  double offset_tau;  // mean torque, N*m/kg
  double period;
  std::size_t n;

  sea::PeriodicTrajectory spectral() const {
    const double dt = period / static_cast<double>(n);
    auto t = tau.sample(n, dt);
    for (double& v : t) v += offset_tau;
    return sea::PeriodicTrajectory::from_samples(q.sample(n, dt), std::move(t), dt);
  }

  sea::PeriodicTrajectory analytic() const {
    const double dt = period / static_cast<double>(n);
    auto t = tau.sample(n, dt);
    for (double& v : t) v += offset_tau;
    return sea::PeriodicTrajectory::from_arrays(dt, q.sample(n, dt), q.sample(n, dt, 1), q.sample(n, dt, 2),
                                                std::move(t), tau.sample(n, dt, 1), tau.sample(n, dt, 2));
  }
};

/// Random periodic fixture on the scale of human ankle gait: position within a
/// few tenths of a radian, torque around 1 N*m/kg, 1 to 6 harmonics.
inline GaitLike random_gait(std::mt19937_64& rng, std::size_t n = 512) {
  const int hq = 1 + static_cast<int>(rng() % 6);
  const int ht = 1 + static_cast<int>(rng() % 6);
  const double period = uniform(rng, 0.9, 1.4);
  return {random_fourier(rng, period, hq, uniform(rng, 0.05, 0.3)),
          random_fourier(rng, period, ht, uniform(rng, 0.2, 1.0)), uniform(rng, -0.3, 0.5), period, n};
}

inline std::string data_path(const std::string& name) { return std::string(SEA_FORGE_DATA_DIR) + "/" + name; }

inline sea::Config case_config() { return sea::parse_config(sea::read_file(data_path("case_study.json"))); }

inline sea::PeriodicTrajectory case_trajectory(const sea::Config& cfg) {
  return sea::load_trajectory(sea::read_file(data_path("ankle_level_walking.csv")), cfg.trajectory);
}

}  // namespace fixtures
