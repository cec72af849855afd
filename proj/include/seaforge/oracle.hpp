#pragma once

// Brute-force ground truth: direct time-domain integration of the motor
// energy and pointwise simulation of the actuator limits. Nothing here uses
// the quadratic coefficients or the constraint rows.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "seaforge/constraints.hpp"
#include "seaforge/gait_io.hpp"

namespace sea {

/// Integral of tau_m^2 / k_m^2 + tau_m dq_m over one period, J.
double oracle_energy(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha,
                     double tau_u = 0.0);

struct EnergyTerms {
  double joule;       // winding loss, J
  double mechanical;  // motor shaft work, J
  double total() const noexcept { return joule + mechanical; }
};

/// Same integral split into its two terms, evaluated from a MotorState.
EnergyTerms oracle_energy_terms(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha,
                                double tau_u = 0.0);

/// Net work delivered to the load over one period, J, reconstructed from the
/// motor-side state at compliance `alpha` (spring torque times spring output
/// velocity). Independent of alpha up to rounding.
double load_work(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha);

/// oracle_energy minus load_work.
double dissipated_energy(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha);

/// One realization of the uncertain quantities. Empty offset spans mean no
/// kinematic perturbation.
struct Perturbation {
  double m;
  double eta;
  double tau_u;
  double spring_factor = 1.0;  // realized compliance is spring_factor * alpha
  std::span<const double> dq_offset{};
  std::span<const double> ddq_offset{};
};

/// Largest constraint excess per family, normalized by that family's limit
/// (delta_max, tau_max, v_in k_t / R or dq_max). Positive means violated.
struct PointCheck {
  std::array<double, kFamilyCount> excess;
  std::array<std::size_t, kFamilyCount> sample;
};

/// Simulates the motor at compliance `alpha` under `p` and measures every
/// active limit sample by sample.
PointCheck simulate_constraints(const DesignProblem& problem, double alpha, const Perturbation& p);

struct SweepResult {
  std::vector<double> alphas;
  std::vector<double> energies;
  std::vector<bool> feasible;
  double argmin_alpha = 0.0;
};

/// Relative slack allowed before a simulated limit counts as violated.
inline constexpr double kViolationTolerance = 1e-9;

/// Energy and nominal pointwise feasibility on a strictly increasing grid of
/// compliances, evaluated at the problem's load scale with unmodeled torque
/// `tau_u`.
SweepResult sweep(const DesignProblem& problem, std::span<const double> alpha_grid, double tau_u = 0.0);

}  // namespace sea
