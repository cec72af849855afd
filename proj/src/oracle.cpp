#include "seaforge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "seaforge/error.hpp"
#include "seaforge/kernels.hpp"
#include "seaforge/sea_model.hpp"

namespace sea {

double oracle_energy(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha,
                     double tau_u) {
  if (!(alpha >= 0.0)) throw Error(ErrorKind::InvariantViolation, "compliance must be >= 0");
  if (!(m > 0.0)) throw Error(ErrorKind::InvariantViolation, "load scale m must be positive");
  const kernels::MotorEnergyArgs args{
      traj.dq_l().data(), traj.ddq_l().data(), traj.tau_pm().data(), traj.dtau_pm().data(),
      traj.ddtau_pm().data(), traj.size(), m, alpha, motor.r, motor.I_m, motor.b_m, motor.eta, tau_u,
      motor.R / (motor.k_t * motor.k_t)};
  return traj.dt() * kernels::motor_energy_sum(args);
}

EnergyTerms oracle_energy_terms(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha,
                                double tau_u) {
  const MotorState s = motor_trajectory(traj, motor, m, alpha, tau_u);
  const double km = motor.k_m();
  double joule = 0.0, mech = 0.0;
  for (std::size_t i = 0; i < s.tau_m.size(); ++i) {
    joule += s.tau_m[i] * s.tau_m[i] / (km * km);
    mech += s.tau_m[i] * s.dq_m[i];
  }
  return {traj.dt() * joule, traj.dt() * mech};
}

double load_work(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha) {
  const MotorState s = motor_trajectory(traj, motor, m, alpha);
  const auto elong = spring_elongation(traj, m, alpha);
  const auto delong = differentiate(elong, traj.dt(), 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    // The spring output turns at dq_m / r plus the deflection rate; the load
    // pushes back with tau_s, so the work done on it carries a minus sign.
    const double out_speed = s.dq_m[i] / motor.r + delong[i];
    acc -= m * traj.tau_pm()[i] * out_speed;
  }
  return traj.dt() * acc;
}

double dissipated_energy(const PeriodicTrajectory& traj, const MotorParams& motor, double m, double alpha) {
  return oracle_energy(traj, motor, m, alpha) - load_work(traj, motor, m, alpha);
}

PointCheck simulate_constraints(const DesignProblem& problem, double alpha, const Perturbation& p) {
  const PeriodicTrajectory& traj = problem.trajectory;
  const MotorParams& motor = problem.motor;
  const std::size_t n = traj.size();
  const bool speed = needs_speed_rows(motor);
  const double a_eff = p.spring_factor * alpha;
  const double am = a_eff * p.m;
  const double etar = p.eta * motor.r;
  const double ct = motor.k_t * motor.k_t / motor.R;
  const double stall = motor.v_in * motor.k_t / motor.R;
  const double inf = std::numeric_limits<double>::infinity();

  PointCheck out{};
  out.excess.fill(-inf);
  out.sample.fill(0);
  auto record = [&](RowFamily f, double value, double limit, std::size_t i) {
    const double ex = (value - limit) / limit;
    auto& slot = out.excess[static_cast<std::size_t>(f)];
    if (ex > slot) {
      slot = ex;
      out.sample[static_cast<std::size_t>(f)] = i;
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    const double dq = traj.dq_l()[i] + (p.dq_offset.empty() ? 0.0 : p.dq_offset[i]);
    const double ddq = traj.ddq_l()[i] + (p.ddq_offset.empty() ? 0.0 : p.ddq_offset[i]);
    const double dq_m = motor.r * (dq - am * traj.dtau_pm()[i]);
    const double ddq_m = motor.r * (ddq - am * traj.ddtau_pm()[i]);
    const double tau_s = p.m * traj.tau_pm()[i];
    const double tau_m = motor.I_m * ddq_m + motor.b_m * dq_m - tau_s / etar - p.tau_u;
    const double delta = a_eff * tau_s;

    record(RowFamily::ElongationPos, delta, problem.spring.delta_max, i);
    record(RowFamily::ElongationNeg, -delta, problem.spring.delta_max, i);
    record(RowFamily::TorquePos, tau_m, motor.tau_max, i);
    record(RowFamily::TorqueNeg, -tau_m, motor.tau_max, i);
    record(RowFamily::SpeedTorqueA, tau_m + ct * dq_m, stall, i);
    record(RowFamily::SpeedTorqueB, -tau_m - ct * dq_m, stall, i);
    record(RowFamily::SpeedTorqueC, tau_m - ct * dq_m, stall, i);
    record(RowFamily::SpeedTorqueD, -tau_m + ct * dq_m, stall, i);
    if (speed) {
      record(RowFamily::SpeedPos, dq_m, motor.dq_max, i);
      record(RowFamily::SpeedNeg, -dq_m, motor.dq_max, i);
    }
  }
  return out;
}

SweepResult sweep(const DesignProblem& problem, std::span<const double> alpha_grid, double tau_u) {
  if (alpha_grid.empty()) throw Error(ErrorKind::InvariantViolation, "sweep grid is empty");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] >= 0.0) || (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))) {
      throw Error(ErrorKind::InvariantViolation, "sweep grid must be non-negative and strictly increasing");
    }
  }
  SweepResult out;
  out.alphas.assign(alpha_grid.begin(), alpha_grid.end());
  out.energies.resize(alpha_grid.size());
  out.feasible.resize(alpha_grid.size());
  const Perturbation nominal{problem.m, problem.motor.eta, tau_u};
  std::size_t best = 0;
  for (std::size_t k = 0; k < alpha_grid.size(); ++k) {
    out.energies[k] = oracle_energy(problem.trajectory, problem.motor, problem.m, alpha_grid[k], tau_u);
    const PointCheck check = simulate_constraints(problem, alpha_grid[k], nominal);
    out.feasible[k] = std::all_of(check.excess.begin(), check.excess.end(),
                                  [](double ex) { return ex <= kViolationTolerance; });
    if (out.energies[k] < out.energies[best]) best = k;
  }
  out.argmin_alpha = out.alphas[best];
  return out;
}

}  // namespace sea
