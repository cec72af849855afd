#include "seaforge/sea_model.hpp"

#include <cmath>
#include <string>

#include "seaforge/error.hpp"

namespace sea {
namespace {

void require_positive_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::InvariantViolation, "load scale m must be positive");
}

void require_compliance(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvariantViolation, "compliance must be finite and >= 0, got " + std::to_string(alpha));
  }
}

}  // namespace

AffineTorque affine_torque(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double tau_u) {
  require_positive_mass(m);
  const std::size_t n = traj.size();
  const auto dq = traj.dq_l();
  const auto ddq = traj.ddq_l();
  const auto tau = traj.tau_pm();
  const auto dtau = traj.dtau_pm();
  const auto ddtau = traj.ddtau_pm();
  const double etar = motor.eta * motor.r;
  AffineTorque out{std::vector<double>(n), std::vector<double>(n), m};
  for (std::size_t i = 0; i < n; ++i) {
    out.gamma1[i] = -m * (motor.I_m * ddtau[i] * motor.r + motor.b_m * dtau[i] * motor.r);
    out.gamma2[i] = motor.I_m * ddq[i] * motor.r + motor.b_m * dq[i] * motor.r - m * tau[i] / etar - tau_u;
  }
  return out;
}

MotorState motor_trajectory(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha,
                            double tau_u) {
  require_positive_mass(m);
  require_compliance(alpha);
  const std::size_t n = traj.size();
  const double am = alpha * m;
  const double etar = motor.eta * motor.r;
  MotorState s{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    s.q_m[i] = motor.r * (traj.q_l()[i] - am * traj.tau_pm()[i]);
    s.dq_m[i] = motor.r * (traj.dq_l()[i] - am * traj.dtau_pm()[i]);
    s.ddq_m[i] = motor.r * (traj.ddq_l()[i] - am * traj.ddtau_pm()[i]);
    const double tau_s = m * traj.tau_pm()[i];
    s.tau_m[i] = motor.I_m * s.ddq_m[i] + motor.b_m * s.dq_m[i] - tau_s / etar - tau_u;
  }
  return s;
}

std::vector<double> spring_elongation(const PeriodicTrajectory& traj, double m, double alpha) {
  require_positive_mass(m);
  require_compliance(alpha);
  std::vector<double> out(traj.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = alpha * m * traj.tau_pm()[i];
  return out;
}

}  // namespace sea
