#include "seaforge/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "seaforge/error.hpp"

namespace sea {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_interval(const Interval& iv, const char* name) {
  if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
    throw Error(ErrorKind::InvariantViolation, std::string("uncertainty interval for ") + name + " is empty");
  }
}

double pick(const Interval& iv, bool hi) noexcept { return hi ? iv.hi : iv.lo; }

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double draw(std::mt19937_64& rng, const Interval& iv) { return iv.lo + (iv.hi - iv.lo) * uniform01(rng); }

// Signs (s_tau, s_v) of the torque and speed terms of each family; elongation
// rows carry neither.
struct FamilySigns {
  double s_tau;
  double s_v;
};

FamilySigns signs(RowFamily f) noexcept {
  switch (f) {
    case RowFamily::TorquePos: return {1, 0};
    case RowFamily::TorqueNeg: return {-1, 0};
    case RowFamily::SpeedTorqueA: return {1, 1};
    case RowFamily::SpeedTorqueB: return {-1, -1};
    case RowFamily::SpeedTorqueC: return {1, -1};
    case RowFamily::SpeedTorqueD: return {-1, 1};
    default: return {0, 0};
  }
}

}  // namespace

UncertaintyBox build_box(const UncertaintySpec& spec, const PeriodicTrajectory& traj, const MotorParams& motor) {
  spec.validate(motor);
  UncertaintyBox box;
  const std::size_t n = traj.size();
  box.eps_dq = spec.eps_dq.resolve(traj.dq_l());
  box.eps_ddq = spec.eps_ddq.resolve(traj.ddq_l());
  box.q_l.resize(n);
  box.dq_l.resize(n);
  box.ddq_l.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    box.q_l[i] = {traj.q_l()[i] - spec.eps_q, traj.q_l()[i] + spec.eps_q};
    box.dq_l[i] = {traj.dq_l()[i] - box.eps_dq, traj.dq_l()[i] + box.eps_dq};
    box.ddq_l[i] = {traj.ddq_l()[i] - box.eps_ddq, traj.ddq_l()[i] + box.eps_ddq};
  }
  box.m = {spec.m_bar - spec.eps_m, spec.m_bar + spec.eps_m};
  box.eta = {motor.eta - spec.eps_eta, motor.eta + spec.eps_eta};
  box.tau_u = {spec.tau_u_bar - spec.eps_tau_u, spec.tau_u_bar + spec.eps_tau_u};
  box.spring_factor = {1.0 - spec.eps_d, 1.0 + spec.eps_d};
  box.m_bar = spec.m_bar;
  box.tau_u_bar = spec.tau_u_bar;
  box.eps_tau_u = spec.eps_tau_u;
  box.eps_d = spec.eps_d;

  check_interval(box.m, "m");
  check_interval(box.eta, "eta");
  check_interval(box.tau_u, "tau_u");
  check_interval(box.spring_factor, "spring factor");
  if (!(box.m.lo > 0.0)) throw Error(ErrorKind::InvariantViolation, "mass interval must be strictly positive");
  if (!(box.eta.lo > 0.0) || box.eta.hi > 1.0) throw Error(ErrorKind::InvariantViolation, "eta interval leaves (0, 1]");
  if (!(box.spring_factor.lo > 0.0)) throw Error(ErrorKind::InvariantViolation, "spring factor must stay positive");
  return box;
}

RowPoint vertex_point(const UncertaintyBox& box, std::size_t sample, std::uint8_t vertex) noexcept {
  return {pick(box.m, vertex & kVertexMassHi), pick(box.eta, vertex & kVertexEtaHi),
          pick(box.tau_u, vertex & kVertexTauUHi), pick(box.dq_l[sample], vertex & kVertexDqHi),
          pick(box.ddq_l[sample], vertex & kVertexDdqHi)};
}

double row_bound_at(const DesignProblem& problem, RowFamily family, std::size_t sample, const RowPoint& point) noexcept {
  SampleState s = sample_state(problem.trajectory, sample);
  s.dq_l = point.dq_l;
  s.ddq_l = point.ddq_l;
  const Row row = make_row(family, problem.motor, problem.spring, s, {point.m, point.eta, point.tau_u});
  return (problem.m / point.m) * row.e;
}

ConstraintSystem RobustConstraintSystem::as_system() const { return {d_bar, e_under, labels}; }

RobustConstraintSystem tighten(const DesignProblem& problem, const UncertaintyBox& box) {
  const std::size_t n = problem.trajectory.size();
  if (box.dq_l.size() != n) throw Error(ErrorKind::InvariantViolation, "box and trajectory sizes differ");
  if (problem.m != box.m_bar) {
    throw Error(ErrorKind::InvariantViolation, "robust rows must be materialized at the nominal mass m_bar");
  }
  const double eps_d = box.eps_d;
  const ConstraintSystem nominal = build_nominal(problem, box.tau_u_bar);

  RobustConstraintSystem out;
  out.labels = nominal.labels;
  out.d_bar.resize(nominal.size());
  out.e_under.resize(nominal.size());
  out.provenance.resize(nominal.size());
  for (std::size_t k = 0; k < nominal.size(); ++k) {
    out.d_bar[k] = nominal.d[k] + eps_d * std::fabs(nominal.d[k]);
    const RowLabel label = nominal.labels[k];
    double best = kInf;
    std::uint8_t arg = 0;
    for (std::uint8_t v = 0; v < kVertexCount; ++v) {
      const double bound = row_bound_at(problem, label.family, label.sample, vertex_point(box, label.sample, v));
      if (bound < best) {
        best = bound;
        arg = v;
      }
    }
    if (!std::isfinite(best)) {
      throw Error(ErrorKind::DegenerateBound, std::string(to_string(label.family)) + " row at sample " +
                                                  std::to_string(label.sample) + " has no finite worst case");
    }
    out.e_under[k] = best;
    out.provenance[k] = arg;
  }
  return out;
}

std::vector<double> tighten_closed_form(const DesignProblem& problem, const UncertaintyBox& box) {
  const MotorParams& motor = problem.motor;
  const PeriodicTrajectory& traj = problem.trajectory;
  const double r = motor.r;
  const double ct = motor.k_t * motor.k_t / motor.R;
  const double stall = motor.v_in * motor.k_t / motor.R;
  const double eps_tau_u = box.eps_tau_u;
  const double tau_u_bar = box.tau_u_bar;

  // Each bound rescaled to m_bar reads m_bar * (f / m + g / eta), with f free
  // of m and eta and g = s_tau tau_pm / r. The minimum takes the worst f over
  // the kinematics and tau_u, then the m and eta ends that make each term smallest.
  auto worst = [&](double f, double g) {
    const double fm = f / (f > 0.0 ? box.m.hi : box.m.lo);
    const double ge = g / (g > 0.0 ? box.eta.hi : box.eta.lo);
    return problem.m * (fm + ge);
  };

  std::vector<double> out;
  for (RowFamily family : active_families(motor)) {
    const FamilySigns sg = signs(family);
    for (std::size_t i = 0; i < traj.size(); ++i) {
      const double dq = traj.dq_l()[i];
      const double ddq = traj.ddq_l()[i];
      const double tau = traj.tau_pm()[i];
      double f = 0.0, g = 0.0;
      switch (family) {
        case RowFamily::ElongationPos:
        case RowFamily::ElongationNeg: f = problem.spring.delta_max; break;
        case RowFamily::SpeedPos: f = motor.dq_max - r * dq - r * box.eps_dq; break;
        case RowFamily::SpeedNeg: f = motor.dq_max + r * dq - r * box.eps_dq; break;
        default: {
          const double base = family == RowFamily::TorquePos || family == RowFamily::TorqueNeg ? motor.tau_max : stall;
          const double c_ddq = -sg.s_tau * motor.I_m * r;
          const double c_dq = -sg.s_tau * motor.b_m * r - sg.s_v * ct * r;
          f = base + c_ddq * ddq + c_dq * dq + sg.s_tau * tau_u_bar;
          f -= std::fabs(c_ddq) * box.eps_ddq + std::fabs(c_dq) * box.eps_dq + eps_tau_u;
          g = sg.s_tau * tau / r;
        }
      }
      out.push_back(worst(f, g));
    }
  }
  return out;
}

bool ViolationReport::feasible() const noexcept {
  return std::none_of(families.begin(), families.end(), [](const FamilyViolation& f) { return f.violated; });
}

ViolationReport verify_feasibility(double alpha, const DesignProblem& problem, const UncertaintyBox& box,
                                   std::size_t n_samples, std::uint64_t seed) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorKind::InvariantViolation, "compliance must be >= 0");
  const std::size_t n = problem.trajectory.size();
  const auto families = active_families(problem.motor);

  ViolationReport report{alpha, 0, {}};
  report.families.reserve(families.size());
  for (RowFamily f : families) report.families.push_back({f, -kInf, false, 0, 0, 0, 0, 0, 0, 0, false});

  std::vector<double> dq_off(n), ddq_off(n);
  auto evaluate = [&](const Perturbation& p, bool vertex) {
    const PointCheck check = simulate_constraints(problem, alpha, p);
    ++report.points_tested;
    for (auto& fv : report.families) {
      const auto idx = static_cast<std::size_t>(fv.family);
      if (check.excess[idx] > fv.max_violation) {
        const std::size_t i = check.sample[idx];
        fv = {fv.family, check.excess[idx], check.excess[idx] > kViolationTolerance, i, p.m, p.eta, p.tau_u,
              p.spring_factor, dq_off[i], ddq_off[i], vertex};
      }
    }
  };

  // Every per-row vertex is reached by a uniform sign pattern, since each row
  // reads only its own sample.
  for (unsigned scalar = 0; scalar < 16; ++scalar) {
    for (unsigned kin = 0; kin < 4; ++kin) {
      std::fill(dq_off.begin(), dq_off.end(), (kin & 1) ? box.eps_dq : -box.eps_dq);
      std::fill(ddq_off.begin(), ddq_off.end(), (kin & 2) ? box.eps_ddq : -box.eps_ddq);
      const Perturbation p{pick(box.m, scalar & 1), pick(box.eta, scalar & 2), pick(box.tau_u, scalar & 4),
                           pick(box.spring_factor, scalar & 8), dq_off, ddq_off};
      evaluate(p, true);
    }
  }

  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double m = draw(rng, box.m);
    const double eta = draw(rng, box.eta);
    const double tau_u = draw(rng, box.tau_u);
    const double fd = draw(rng, box.spring_factor);
    for (std::size_t i = 0; i < n; ++i) {
      dq_off[i] = box.eps_dq * (2.0 * uniform01(rng) - 1.0);
      ddq_off[i] = box.eps_ddq * (2.0 * uniform01(rng) - 1.0);
    }
    evaluate({m, eta, tau_u, fd, dq_off, ddq_off}, false);
  }
  return report;
}

}  // namespace sea
