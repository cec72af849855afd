#include "seaforge/constraints.hpp"

#include <cmath>

#include "seaforge/error.hpp"
#include "seaforge/sea_model.hpp"

namespace sea {
namespace {

ConstraintSystem build_families(const PeriodicTrajectory& traj, const MotorParams& motor, const SpringSpec& spring,
                                std::span<const RowFamily> families, const LoadScalars& load) {
  if (!(load.m > 0.0)) throw Error(ErrorKind::InvariantViolation, "load scale m must be positive");
  const std::size_t n = traj.size();
  ConstraintSystem sys;
  sys.d.reserve(n * families.size());
  sys.e.reserve(n * families.size());
  sys.labels.reserve(n * families.size());
  for (RowFamily f : families) {
    for (std::size_t i = 0; i < n; ++i) {
      const Row row = make_row(f, motor, spring, sample_state(traj, i), load);
      if (!std::isfinite(row.d) || !std::isfinite(row.e)) {
        throw Error(ErrorKind::InvariantViolation,
                    std::string(to_string(f)) + " row at sample " + std::to_string(i) + " is not finite");
      }
      sys.d.push_back(row.d);
      sys.e.push_back(row.e);
      sys.labels.push_back({f, i});
    }
  }
  return sys;
}

}  // namespace

std::string_view to_string(RowFamily family) noexcept {
  switch (family) {
    case RowFamily::ElongationPos: return "elongation+";
    case RowFamily::ElongationNeg: return "elongation-";
    case RowFamily::TorquePos: return "torque+";
    case RowFamily::TorqueNeg: return "torque-";
    case RowFamily::SpeedTorqueA: return "speed_torque_a";
    case RowFamily::SpeedTorqueB: return "speed_torque_b";
    case RowFamily::SpeedTorqueC: return "speed_torque_c";
    case RowFamily::SpeedTorqueD: return "speed_torque_d";
    case RowFamily::SpeedPos: return "speed+";
    case RowFamily::SpeedNeg: return "speed-";
  }
  return "unknown";
}

void ConstraintSystem::append(const ConstraintSystem& other) {
  d.insert(d.end(), other.d.begin(), other.d.end());
  e.insert(e.end(), other.e.begin(), other.e.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
}

Row make_row(RowFamily family, const MotorParams& motor, const SpringSpec& spring, const SampleState& s,
             const LoadScalars& load) noexcept {
  const double r = motor.r;
  const double gamma1 = -load.m * (motor.I_m * s.ddtau_pm * r + motor.b_m * s.dtau_pm * r);
  const double gamma2 =
      motor.I_m * s.ddq_l * r + motor.b_m * s.dq_l * r - load.m * s.tau_pm / (load.eta * r) - load.tau_u;
  const double ct = motor.k_t * motor.k_t / motor.R;
  const double stall = motor.v_in * motor.k_t / motor.R;

  auto speed_torque = [&](double st, double sv) -> Row {
    return {st * gamma1 - sv * ct * r * load.m * s.dtau_pm, stall - st * gamma2 - sv * ct * r * s.dq_l};
  };

  switch (family) {
    case RowFamily::ElongationPos: return {load.m * s.tau_pm, spring.delta_max};
    case RowFamily::ElongationNeg: return {-load.m * s.tau_pm, spring.delta_max};
    case RowFamily::TorquePos: return {gamma1, motor.tau_max - gamma2};
    case RowFamily::TorqueNeg: return {-gamma1, motor.tau_max + gamma2};
    case RowFamily::SpeedTorqueA: return speed_torque(1.0, 1.0);
    case RowFamily::SpeedTorqueB: return speed_torque(-1.0, -1.0);
    case RowFamily::SpeedTorqueC: return speed_torque(1.0, -1.0);
    case RowFamily::SpeedTorqueD: return speed_torque(-1.0, 1.0);
    case RowFamily::SpeedPos: return {-r * load.m * s.dtau_pm, motor.dq_max - r * s.dq_l};
    case RowFamily::SpeedNeg: return {r * load.m * s.dtau_pm, motor.dq_max + r * s.dq_l};
  }
  return {0.0, 0.0};
}

SampleState sample_state(const PeriodicTrajectory& traj, std::size_t i) noexcept {
  return {traj.dq_l()[i], traj.ddq_l()[i], traj.tau_pm()[i], traj.dtau_pm()[i], traj.ddtau_pm()[i]};
}

bool needs_speed_rows(const MotorParams& motor) noexcept { return motor.v_in / motor.k_t > motor.dq_max; }

std::vector<RowFamily> active_families(const MotorParams& motor) {
  std::vector<RowFamily> out(kAllFamilies.begin(), kAllFamilies.begin() + 8);
  if (needs_speed_rows(motor)) {
    out.push_back(RowFamily::SpeedPos);
    out.push_back(RowFamily::SpeedNeg);
  }
  return out;
}

ConstraintSystem elongation_rows(const PeriodicTrajectory& traj, const SpringSpec& spring, double m) {
  const RowFamily fam[] = {RowFamily::ElongationPos, RowFamily::ElongationNeg};
  // The elongation formula touches neither motor constants nor eta.
  const MotorParams unused{1, 1, 1, 1, 1, 1, 1, 1, 1};
  return build_families(traj, unused, spring, fam, {m, 1.0, 0.0});
}

ConstraintSystem torque_rows(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double tau_u_worst) {
  const RowFamily fam[] = {RowFamily::TorquePos, RowFamily::TorqueNeg};
  return build_families(traj, motor, SpringSpec{1.0}, fam, {m, motor.eta, tau_u_worst});
}

ConstraintSystem speed_torque_rows(const PeriodicTrajectory& traj, const MotorParams& motor, double m,
                                   double tau_u_worst) {
  const RowFamily fam[] = {RowFamily::SpeedTorqueA, RowFamily::SpeedTorqueB, RowFamily::SpeedTorqueC,
                           RowFamily::SpeedTorqueD};
  return build_families(traj, motor, SpringSpec{1.0}, fam, {m, motor.eta, tau_u_worst});
}

ConstraintSystem speed_rows(const PeriodicTrajectory& traj, const MotorParams& motor, double m) {
  const RowFamily fam[] = {RowFamily::SpeedPos, RowFamily::SpeedNeg};
  return build_families(traj, motor, SpringSpec{1.0}, fam, {m, motor.eta, 0.0});
}

ConstraintSystem build_nominal(const DesignProblem& problem, double tau_u) {
  const auto families = active_families(problem.motor);
  return build_families(problem.trajectory, problem.motor, problem.spring, families,
                        {problem.m, problem.motor.eta, tau_u});
}

double rms_torque_diagnostic(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha) {
  const MotorState s = motor_trajectory(traj, motor, m, alpha);
  double ss = 0.0;
  for (double t : s.tau_m) ss += t * t;
  return std::sqrt(ss / static_cast<double>(s.tau_m.size()));
}

}  // namespace sea
