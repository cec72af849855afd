#pragma once

// Motor-side dynamics of a series elastic actuator driving a known load.

#include <vector>

#include "seaforge/gait_io.hpp"

namespace sea {

/// Motor torque as an affine function of compliance, tau_m = gamma1 * alpha +
/// gamma2, sampled along a trajectory at load scale `m_used`.
struct AffineTorque {
  std::vector<double> gamma1;  // N*m per unit compliance
  std::vector<double> gamma2;  // N*m
  double m_used = 0.0;         // kg
};

struct MotorState {
  std::vector<double> q_m;
  std::vector<double> dq_m;
  std::vector<double> ddq_m;
  std::vector<double> tau_m;
};

/// gamma1 = -m (I_m ddtau r + b_m dtau r),
/// gamma2 = I_m ddq r + b_m dq r - m tau / (eta r) - tau_u.
AffineTorque affine_torque(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double tau_u = 0.0);

/// Reconstructs the motor trajectory for compliance `alpha` (0 is rigid). The
/// torque comes from the torque balance, not from the affine coefficients.
MotorState motor_trajectory(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha,
                            double tau_u = 0.0);

/// Spring deflection alpha * m * tau_pm, rad.
std::vector<double> spring_elongation(const PeriodicTrajectory& traj, double m, double alpha);

}  // namespace sea
