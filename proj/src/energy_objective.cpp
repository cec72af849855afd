#include "seaforge/energy_objective.hpp"

#include <cmath>
#include <string>

#include "seaforge/error.hpp"
#include "seaforge/kernels.hpp"
#include "seaforge/sea_model.hpp"

namespace sea {

QuadraticObjective::QuadraticObjective(double a, double b, double c) : a_(a), b_(b), c_(c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw Error(ErrorKind::InvariantViolation, "objective coefficients must be finite");
  }
  if (a < 0.0) throw Error(ErrorKind::InvariantViolation, "quadratic coefficient a = " + std::to_string(a) + " < 0");
}

QuadraticObjective energy_coefficients(const PeriodicTrajectory& traj, const MotorParams& motor, double m) {
  const AffineTorque g = affine_torque(traj, motor, m, 0.0);
  const double h = traj.dt();
  const double inv_km2 = motor.R / (motor.k_t * motor.k_t);
  const double br2 = motor.b_m * motor.r * motor.r;
  const auto dq = traj.dq_l();
  const auto tau = traj.tau_pm();
  const auto dtau = traj.dtau_pm();

  const double g11 = kernels::dot(g.gamma1, g.gamma1);
  const double g12 = kernels::dot(g.gamma1, g.gamma2);
  const double g22 = kernels::dot(g.gamma2, g.gamma2);
  const double tt = kernels::dot(dtau, dtau);
  const double qt = kernels::dot(dq, dtau);
  const double qq = kernels::dot(dq, dq);
  const double qtau = kernels::dot(dq, tau);

  const double a = h * (g11 * inv_km2 + br2 * m * m * tt);
  const double b = h * (2.0 * g12 * inv_km2 - 2.0 * br2 * m * qt);
  const double c = h * (g22 * inv_km2 + br2 * qq - m * qtau / motor.eta);
  return QuadraticObjective(a, b, c);
}

UnconstrainedOptimum unconstrained_optimum(const QuadraticObjective& obj) noexcept {
  if (obj.b() >= 0.0) return {OptimumKind::RigidIsOptimal, 0.0};
  if (obj.a() == 0.0) return {OptimumKind::UnboundedBelow, 0.0};
  return {OptimumKind::Interior, -obj.b() / (2.0 * obj.a())};
}

bool benefit_condition(const QuadraticObjective& obj) noexcept { return obj.b() < 0.0; }

}  // namespace sea
