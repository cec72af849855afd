#pragma once

// Actuator limits written as affine rows d * alpha <= e in compliance.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "seaforge/gait_io.hpp"

namespace sea {

/// Row families. Speed-torque blocks are the four sign combinations
/// (s_tau, s_v) of s_tau * tau_m + s_v * (k_t^2 / R) * dq_m <= v_in k_t / R:
/// A = (+, +), B = (-, -), C = (+, -), D = (-, +).
enum class RowFamily : std::uint8_t {
  ElongationPos,
  ElongationNeg,
  TorquePos,
  TorqueNeg,
  SpeedTorqueA,
  SpeedTorqueB,
  SpeedTorqueC,
  SpeedTorqueD,
  SpeedPos,
  SpeedNeg,
};

inline constexpr std::size_t kFamilyCount = 10;

inline constexpr std::array<RowFamily, kFamilyCount> kAllFamilies{
    RowFamily::ElongationPos, RowFamily::ElongationNeg, RowFamily::TorquePos,    RowFamily::TorqueNeg,
    RowFamily::SpeedTorqueA,  RowFamily::SpeedTorqueB,  RowFamily::SpeedTorqueC, RowFamily::SpeedTorqueD,
    RowFamily::SpeedPos,      RowFamily::SpeedNeg,
};

std::string_view to_string(RowFamily family) noexcept;

struct RowLabel {
  RowFamily family;
  std::size_t sample;

  friend bool operator==(const RowLabel&, const RowLabel&) = default;
};

/// Stacked rows, family-major: all samples of one family, then the next.
struct ConstraintSystem {
  std::vector<double> d;
  std::vector<double> e;
  std::vector<RowLabel> labels;

  std::size_t size() const noexcept { return d.size(); }
  void append(const ConstraintSystem& other);
};

/// Everything a row needs besides the uncertain quantities.
struct DesignProblem {
  const PeriodicTrajectory& trajectory;
  MotorParams motor;
  SpringSpec spring;
  double m;  // load scale at which rows are materialized, kg
};

/// Load-side kinematics and per-unit-mass torque at one sample.
struct SampleState {
  double dq_l;
  double ddq_l;
  double tau_pm;
  double dtau_pm;
  double ddtau_pm;
};

/// Load scale, transmission efficiency and unmodeled torque of one realization.
struct LoadScalars {
  double m;
  double eta;
  double tau_u;
};

struct Row {
  double d;
  double e;
};

/// The single row formula shared by nominal construction and the robust
/// worst-case search.
Row make_row(RowFamily family, const MotorParams& motor, const SpringSpec& spring, const SampleState& s,
             const LoadScalars& load) noexcept;

SampleState sample_state(const PeriodicTrajectory& traj, std::size_t i) noexcept;

/// True when the no-load speed v_in / k_t exceeds dq_max, so explicit speed
/// rows are needed.
bool needs_speed_rows(const MotorParams& motor) noexcept;

/// Families emitted for this motor: eight always, plus the two speed families
/// when needs_speed_rows.
std::vector<RowFamily> active_families(const MotorParams& motor);

ConstraintSystem elongation_rows(const PeriodicTrajectory& traj, const SpringSpec& spring, double m);
ConstraintSystem torque_rows(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double tau_u_worst);
ConstraintSystem speed_torque_rows(const PeriodicTrajectory& traj, const MotorParams& motor, double m,
                                   double tau_u_worst);
ConstraintSystem speed_rows(const PeriodicTrajectory& traj, const MotorParams& motor, double m);

/// All active families at load scale problem.m with unmodeled torque `tau_u`.
ConstraintSystem build_nominal(const DesignProblem& problem, double tau_u = 0.0);

/// RMS motor torque over one period at compliance `alpha`. Reported only; it
/// never becomes a constraint row.
double rms_torque_diagnostic(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha);

}  // namespace sea
