#pragma once

// Motor energy per period as a quadratic in compliance.

#include "seaforge/gait_io.hpp"

namespace sea {

/// E(alpha) = a alpha^2 + b alpha + c, in joules per period.
class QuadraticObjective {
 public:
  /// Throws InvariantViolation unless a >= 0 and all coefficients are finite.
  QuadraticObjective(double a, double b, double c);

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }

  double evaluate(double alpha) const noexcept { return (a_ * alpha + b_) * alpha + c_; }

 private:
  double a_, b_, c_;
};

enum class OptimumKind { Interior, RigidIsOptimal, UnboundedBelow };

struct UnconstrainedOptimum {
  OptimumKind kind;
  double alpha;  // -b / (2a) for Interior, 0 otherwise
};

/// Trapezoid quadrature over one period of
///   a: gamma1^2 / k_m^2 + b_m r^2 dtau_s^2
///   b: 2 gamma1 gamma2 / k_m^2 - 2 b_m r^2 dq_l dtau_s
///   c: gamma2^2 / k_m^2 + b_m r^2 dq_l^2 - dq_l tau_s / eta
/// with tau_u = 0.
QuadraticObjective energy_coefficients(const PeriodicTrajectory& traj, const MotorParams& motor, double m);

UnconstrainedOptimum unconstrained_optimum(const QuadraticObjective& obj) noexcept;

/// True when some positive compliance uses less energy than the rigid drive (b < 0).
bool benefit_condition(const QuadraticObjective& obj) noexcept;

}  // namespace sea
