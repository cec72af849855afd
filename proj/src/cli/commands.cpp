#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "seaforge/cli.hpp"
#include "seaforge/constraints.hpp"
#include "seaforge/energy_objective.hpp"
#include "seaforge/error.hpp"
#include "seaforge/gait_io.hpp"
#include "seaforge/oracle.hpp"
#include "seaforge/qp_solver.hpp"
#include "seaforge/robust.hpp"
#include "seaforge/sea_model.hpp"

namespace sea::cli {
namespace {

using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::size_t kBoundaryPointsPerEdge = 256;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::IoError, "SHA-256 digest failed");
  }
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return ss.str();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// JSON numbers carry 12 significant digits; non-finite values become null.
ojson num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(fmt(v).c_str(), nullptr);
}

std::string label_text(const RowLabel& l) {
  return std::string(to_string(l.family)) + "@" + std::to_string(l.sample);
}

ojson opt_label(const std::optional<RowLabel>& l) { return l ? ojson(label_text(*l)) : ojson(nullptr); }

struct Inputs {
  Config cfg;
  std::optional<PeriodicTrajectory> traj;
  std::string config_sha;
  std::string trajectory_sha;
};

Inputs load_inputs(const std::string& config_path, const std::string& trajectory_path) {
  Inputs in;
  const std::string config_text = read_file(config_path);
  try {
    in.cfg = parse_config(config_text);
  } catch (const Error& e) {
    throw Error(e.kind(), config_path + ": " + e.what());
  }
  const std::string traj_text = read_file(trajectory_path);
  try {
    in.traj.emplace(load_trajectory(traj_text, in.cfg.trajectory));
  } catch (const Error& e) {
    throw Error(e.kind(), trajectory_path + ": " + e.what());
  }
  in.config_sha = sha256_hex(config_text);
  in.trajectory_sha = sha256_hex(traj_text);
  return in;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for '" + path.string() + "'");
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create '" + dir + "': " + ec.message());
  return fs::path(dir);
}

ojson verify_json(const ViolationReport& rep) {
  ojson fams = ojson::array();
  for (const auto& f : rep.families) {
    fams.push_back({{"family", to_string(f.family)},
                    {"max_violation", num(f.max_violation)},
                    {"violated", f.violated},
                    {"sample", f.sample}});
  }
  return {{"points_tested", rep.points_tested}, {"feasible", rep.feasible()}, {"families", fams}};
}

ojson interval_json(const FeasibleInterval& iv) {
  return {{"lo", num(iv.lo)},
          {"hi", num(iv.hi)},
          {"k_lo", iv.hi > 0.0 ? num(1.0 / iv.hi) : ojson(nullptr)},
          {"k_hi", iv.lo > 0.0 ? num(1.0 / iv.lo) : ojson(nullptr)},
          {"binding_lo", opt_label(iv.binding_lo)},
          {"binding_hi", opt_label(iv.binding_hi)}};
}

ojson infeasible_json(const Infeasible& inf) {
  ojson w = ojson::array();
  for (const auto& l : inf.witnesses) w.push_back(label_text(l));
  return {{"status", "infeasible"}, {"reason", inf.reason}, {"witnesses", w}};
}

struct Design {
  DesignOutcome outcome;
  std::optional<ViolationReport> verify;
  double dissipated = 0.0;

  const DesignResult* result() const { return std::get_if<DesignResult>(&outcome); }
};

ojson design_json(const Design& d) {
  if (const auto* inf = std::get_if<Infeasible>(&d.outcome)) return infeasible_json(*inf);
  const DesignResult& r = *d.result();
  ojson active = ojson::array();
  for (const auto& l : r.active_rows) active.push_back(label_text(l));
  ojson j = {{"status", "optimal"},
             {"alpha_star", num(r.alpha_star)},
             {"k_star", r.k_star ? num(*r.k_star) : ojson(nullptr)},
             {"rigid_recommended", r.rigid_recommended},
             {"energy", num(r.energy)},
             {"dissipated", num(d.dissipated)},
             {"savings_fraction", num(r.savings_fraction)},
             {"savings_fraction_total", num(r.savings_fraction_total)},
             {"interval", interval_json(r.interval)},
             {"active_rows", active}};
  if (d.verify) j["verify_box"] = verify_json(*d.verify);
  return j;
}

void append_witnesses(std::string& csv, const std::string& design, const ViolationReport& rep) {
  for (const auto& f : rep.families) {
    csv += design + ",verify," + std::string(to_string(f.family)) + "," + std::to_string(f.sample) + "," +
           fmt(f.max_violation) + "," + (f.violated ? "1" : "0") + "," + fmt(f.m) + "," + fmt(f.eta) + "," +
           fmt(f.tau_u) + "," + fmt(f.spring_factor) + "," + fmt(f.dq_offset) + "," + fmt(f.ddq_offset) + "," +
           (f.vertex ? "vertex" : "sample") + "\n";
  }
}

void append_solver_witnesses(std::string& csv, const std::string& design, const Infeasible& inf) {
  for (const auto& l : inf.witnesses) {
    csv += design + ",solver," + std::string(to_string(l.family)) + "," + std::to_string(l.sample) + ",,1,,,,,,,\n";
  }
}

// Clipped diamond: |tau| <= tau_max and the four voltage lines
// |tau +- (k_t^2/R) dq| <= v_in k_t / R, traversed counter-clockwise.
std::vector<std::pair<double, double>> envelope_vertices(const MotorParams& motor) {
  const double ct = motor.k_t * motor.k_t / motor.R;
  const double stall = motor.v_in * motor.k_t / motor.R;
  const double no_load = motor.v_in / motor.k_t;
  if (motor.tau_max >= stall) return {{no_load, 0.0}, {0.0, stall}, {-no_load, 0.0}, {0.0, -stall}};
  const double knee = (stall - motor.tau_max) / ct;
  return {{no_load, 0.0},          {knee, motor.tau_max},  {-knee, motor.tau_max},
          {-no_load, 0.0},         {-knee, -motor.tau_max}, {knee, -motor.tau_max}};
}

std::string envelope_csv(const PeriodicTrajectory& traj, const MotorParams& motor, double m,
                         const std::vector<std::pair<std::string, double>>& loops) {
  std::string csv = "series,index,dq_m_rad_per_s,tau_m_Nm\n";
  for (const auto& [name, alpha] : loops) {
    const MotorState s = motor_trajectory(traj, motor, m, alpha);
    for (std::size_t i = 0; i < s.tau_m.size(); ++i) {
      csv += name + "," + std::to_string(i) + "," + fmt(s.dq_m[i]) + "," + fmt(s.tau_m[i]) + "\n";
    }
  }
  const auto v = envelope_vertices(motor);
  std::size_t idx = 0;
  for (std::size_t e = 0; e < v.size(); ++e) {
    const auto [x0, y0] = v[e];
    const auto [x1, y1] = v[(e + 1) % v.size()];
    for (std::size_t k = 0; k < kBoundaryPointsPerEdge; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(kBoundaryPointsPerEdge);
      csv += "boundary," + std::to_string(idx++) + "," + fmt(x0 + (x1 - x0) * t) + "," + fmt(y0 + (y1 - y0) * t) + "\n";
    }
  }
  return csv;
}

bool in_interval(const IntervalOutcome& io, double alpha) {
  const auto* iv = std::get_if<FeasibleInterval>(&io);
  return iv && alpha >= iv->lo && alpha <= iv->hi;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) {
    g[k] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  return g;
}

double default_sweep_hi(const QuadraticObjective& obj, const Config& cfg) {
  if (cfg.solver.sweep_hi > 0.0) return cfg.solver.sweep_hi;
  const auto opt = unconstrained_optimum(obj);
  if (opt.kind == OptimumKind::Interior) return 2.0 * opt.alpha;
  return 0.01;
}

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw Error(ErrorKind::ParseError, "grid must be lo:hi:n, got '" + text + "'");
  GridSpec g{};
  try {
    std::size_t used = 0;
    g.lo = std::stod(text.substr(0, c1), &used);
    if (used != c1) throw std::invalid_argument("lo");
    const std::string hi = text.substr(c1 + 1, c2 - c1 - 1);
    g.hi = std::stod(hi, &used);
    if (used != hi.size()) throw std::invalid_argument("hi");
    const std::string n = text.substr(c2 + 1);
    const long long count = std::stoll(n, &used);
    if (used != n.size() || count < 1) throw std::invalid_argument("n");
    g.n = static_cast<std::size_t>(count);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "grid must be lo:hi:n with n >= 1, got '" + text + "'");
  }
  if (!(g.lo >= 0.0) || !(g.hi >= g.lo) || (g.n > 1 && !(g.hi > g.lo)) || (g.n == 1 && g.hi != g.lo)) {
    throw Error(ErrorKind::InvariantViolation, "grid needs 0 <= lo < hi (or lo == hi with n = 1)");
  }
  return g;
}

std::uint64_t sampling_seed() {
  const char* env = std::getenv("SEA_FORGE_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0') throw Error(ErrorKind::ParseError, "SEA_FORGE_SEED must be an unsigned integer");
  return v;
}

int run_design(const std::string& config_path, const std::string& trajectory_path, const std::string& out_dir,
               std::ostream& log) {
  return guarded(log, [&] {
    const Inputs in = load_inputs(config_path, trajectory_path);
    const std::uint64_t seed = sampling_seed();
    const fs::path dir = ensure_dir(out_dir);
    const Config& cfg = in.cfg;
    const PeriodicTrajectory& traj = *in.traj;
    const double m = cfg.uncertainty.m_bar;
    const DesignProblem problem{traj, cfg.motor, cfg.spring, m};

    const QuadraticObjective obj = energy_coefficients(traj, cfg.motor, m);
    const auto opt = unconstrained_optimum(obj);
    const double w_load = load_work(traj, cfg.motor, m, 0.0);
    const double rigid_dissipated = dissipated_energy(traj, cfg.motor, m, 0.0);

    const UncertaintyBox box = build_box(cfg.uncertainty, traj, cfg.motor);
    const ConstraintSystem nominal_sys = build_nominal(problem, cfg.uncertainty.tau_u_bar);
    const RobustConstraintSystem robust_sys = tighten(problem, box);
    const IntervalOutcome nominal_iv = feasible_interval(nominal_sys);
    const IntervalOutcome robust_iv = feasible_interval(robust_sys);

    auto finish = [&](DesignOutcome outcome) {
      Design d{std::move(outcome), std::nullopt, 0.0};
      if (const DesignResult* r = d.result()) {
        d.verify = verify_feasibility(r->alpha_star, problem, box, cfg.solver.verify_samples, seed);
        d.dissipated = dissipated_energy(traj, cfg.motor, m, r->alpha_star);
      }
      return d;
    };
    const Design nominal = finish(solve(obj, nominal_sys, w_load));
    const Design robust = finish(solve(obj, robust_sys, w_load));

    const Perturbation at_nominal{m, cfg.motor.eta, cfg.uncertainty.tau_u_bar};
    const PointCheck rigid_check = simulate_constraints(problem, 0.0, at_nominal);
    const ViolationReport rigid_box = verify_feasibility(0.0, problem, box, cfg.solver.verify_samples, seed);
    ojson rigid_fams = ojson::object();
    bool rigid_feasible = true;
    for (RowFamily f : active_families(cfg.motor)) {
      const double ex = rigid_check.excess[static_cast<std::size_t>(f)];
      rigid_fams[std::string(to_string(f))] = num(ex);
      rigid_feasible = rigid_feasible && ex <= kViolationTolerance;
    }

    const auto& us = cfg.uncertainty;
    ojson report;
    report["tool"] = {{"name", "sea-forge"}, {"version", kToolVersion}};
    report["inputs"] = {
        {"config_sha256", in.config_sha},
        {"trajectory_sha256", in.trajectory_sha},
        {"samples", traj.size()},
        {"period_s", num(traj.period())},
        {"dt_s", num(traj.dt())},
        {"seed", seed},
        {"verify_samples", cfg.solver.verify_samples},
        {"motor",
         {{"k_t", num(cfg.motor.k_t)},
          {"R", num(cfg.motor.R)},
          {"I_m", num(cfg.motor.I_m)},
          {"b_m", num(cfg.motor.b_m)},
          {"r", num(cfg.motor.r)},
          {"eta", num(cfg.motor.eta)},
          {"tau_max", num(cfg.motor.tau_max)},
          {"v_in", num(cfg.motor.v_in)},
          {"dq_max", num(cfg.motor.dq_max)},
          {"k_m", num(cfg.motor.k_m())},
          {"speed_rows", needs_speed_rows(cfg.motor)}}},
        {"spring", {{"delta_max", num(cfg.spring.delta_max)}}},
        {"uncertainty",
         {{"m_bar", num(us.m_bar)},
          {"eps_m", num(us.eps_m)},
          {"eps_q", num(us.eps_q)},
          {"eps_dq", num(box.eps_dq)},
          {"eps_ddq", num(box.eps_ddq)},
          {"eps_eta", num(us.eps_eta)},
          {"eps_tau_u", num(us.eps_tau_u)},
          {"tau_u_bar", num(us.tau_u_bar)},
          {"eps_d", num(us.eps_d)}}}};
    report["units"] = {{"compliance", "rad/(N*m)"}, {"stiffness", "N*m/rad"}, {"energy", "J per period"},
                       {"torque", "N*m"},           {"speed", "rad/s"},       {"violation", "fraction of limit"}};
    const char* kind = opt.kind == OptimumKind::Interior         ? "interior"
                       : opt.kind == OptimumKind::RigidIsOptimal ? "rigid_is_optimal"
                                                                  : "unbounded_below";
    report["objective"] = {{"a", num(obj.a())},
                           {"b", num(obj.b())},
                           {"c", num(obj.c())},
                           {"benefit", benefit_condition(obj)},
                           {"unconstrained",
                            {{"kind", kind},
                             {"alpha", num(opt.alpha)},
                             {"k", opt.kind == OptimumKind::Interior ? num(1.0 / opt.alpha) : ojson(nullptr)}}}};
    report["rigid"] = {{"energy", num(obj.c())},
                       {"load_work", num(w_load)},
                       {"dissipated", num(rigid_dissipated)},
                       {"rms_torque", num(rms_torque_diagnostic(traj, cfg.motor, m, 0.0))},
                       {"feasible_nominal", rigid_feasible},
                       {"violation_nominal", rigid_fams},
                       {"verify_box", verify_json(rigid_box)}};
    report["nominal"] = design_json(nominal);
    report["robust"] = design_json(robust);
    write_text(dir / "report.json", report.dump(2) + "\n");

    // Energy against compliance.
    const double hi = default_sweep_hi(obj, cfg);
    const auto grid = linspace(cfg.solver.sweep_lo, std::max(hi, cfg.solver.sweep_lo), cfg.solver.sweep_points);
    std::string ecsv =
        "alpha_rad_per_Nm,k_Nm_per_rad,energy_model_J,energy_oracle_J,dissipated_J,feasible_nominal,feasible_robust\n";
    for (double a : grid) {
      const double eo = oracle_energy(traj, cfg.motor, m, a);
      ecsv += fmt(a) + "," + (a > 0.0 ? fmt(1.0 / a) : std::string()) + "," + fmt(obj.evaluate(a)) + "," + fmt(eo) +
              "," + fmt(eo - w_load) + "," + (in_interval(nominal_iv, a) ? "1" : "0") + "," +
              (in_interval(robust_iv, a) ? "1" : "0") + "\n";
    }
    write_text(dir / "energy_vs_compliance.csv", ecsv);

    std::vector<std::pair<std::string, double>> loops{{"rigid", 0.0}};
    if (const auto* r = nominal.result()) loops.emplace_back("nominal", r->alpha_star);
    if (const auto* r = robust.result()) loops.emplace_back("robust", r->alpha_star);
    write_text(dir / "torque_speed_envelope.csv", envelope_csv(traj, cfg.motor, m, loops));

    std::string wcsv =
        "design,source,family,sample,max_violation,violated,m_kg,eta,tau_u_Nm,spring_factor,dq_offset,ddq_offset,"
        "point\n";
    append_witnesses(wcsv, "rigid", rigid_box);
    for (const auto& [name, d] : {std::pair<const char*, const Design*>{"nominal", &nominal}, {"robust", &robust}}) {
      if (d->verify) append_witnesses(wcsv, name, *d->verify);
      if (const auto* inf = std::get_if<Infeasible>(&d->outcome)) append_solver_witnesses(wcsv, name, *inf);
    }
    write_text(dir / "feasibility_witnesses.csv", wcsv);

    auto summary = [&](const char* name, const Design& d) {
      log << name << ": ";
      if (const auto* r = d.result()) {
        log << "alpha* = " << fmt(r->alpha_star) << " rad/(N*m), k* = " << (r->k_star ? fmt(*r->k_star) : "rigid")
            << " N*m/rad, savings = " << fmt(100.0 * r->savings_fraction) << " %, box verify "
            << (d.verify && d.verify->feasible() ? "clean" : "violated") << "\n";
      } else {
        log << "infeasible (" << std::get<Infeasible>(d.outcome).reason << ")\n";
      }
    };
    log << "rigid: energy = " << fmt(obj.c()) << " J, dissipated = " << fmt(rigid_dissipated) << " J, "
        << (rigid_feasible ? "feasible" : "infeasible") << "\n";
    summary("nominal", nominal);
    summary("robust", robust);

    const bool ok = nominal.result() != nullptr && robust.result() != nullptr;
    return ok ? kOk : kInfeasible;
  });
}

int run_verify(const std::string& config_path, const std::string& trajectory_path, double alpha,
               std::optional<std::size_t> samples, const std::optional<std::string>& out_dir, std::ostream& out) {
  return guarded(out, [&] {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      throw Error(ErrorKind::InvariantViolation, "--alpha must be a positive compliance");
    }
    const Inputs in = load_inputs(config_path, trajectory_path);
    const Config& cfg = in.cfg;
    const DesignProblem problem{*in.traj, cfg.motor, cfg.spring, cfg.uncertainty.m_bar};
    const UncertaintyBox box = build_box(cfg.uncertainty, *in.traj, cfg.motor);
    const ViolationReport rep =
        verify_feasibility(alpha, problem, box, samples.value_or(cfg.solver.verify_samples), sampling_seed());

    std::string csv = "family,max_violation,violated,sample,m_kg,eta,tau_u_Nm,spring_factor,dq_offset,ddq_offset,point\n";
    out << "alpha = " << fmt(alpha) << " rad/(N*m), points tested = " << rep.points_tested << "\n";
    out << std::left << std::setw(16) << "family" << std::setw(18) << "max_violation" << std::setw(10) << "violated"
        << "sample\n";
    for (const auto& f : rep.families) {
      const double shown = f.violated ? f.max_violation : 0.0;
      out << std::left << std::setw(16) << to_string(f.family) << std::setw(18) << fmt(shown) << std::setw(10)
          << (f.violated ? "yes" : "no") << f.sample << "\n";
      csv += std::string(to_string(f.family)) + "," + fmt(f.max_violation) + "," + (f.violated ? "1" : "0") + "," +
             std::to_string(f.sample) + "," + fmt(f.m) + "," + fmt(f.eta) + "," + fmt(f.tau_u) + "," +
             fmt(f.spring_factor) + "," + fmt(f.dq_offset) + "," + fmt(f.ddq_offset) + "," +
             (f.vertex ? "vertex" : "sample") + "\n";
    }
    if (out_dir) write_text(ensure_dir(*out_dir) / "violations.csv", csv);
    return rep.feasible() ? kOk : kInfeasible;
  });
}

int run_sweep(const std::string& config_path, const std::string& trajectory_path, const std::string& out_dir,
              const std::optional<GridSpec>& grid, std::ostream& log) {
  return guarded(log, [&] {
    const Inputs in = load_inputs(config_path, trajectory_path);
    const Config& cfg = in.cfg;
    const PeriodicTrajectory& traj = *in.traj;
    const double m = cfg.uncertainty.m_bar;
    const DesignProblem problem{traj, cfg.motor, cfg.spring, m};
    const QuadraticObjective obj = energy_coefficients(traj, cfg.motor, m);
    const GridSpec g = grid ? *grid : GridSpec{cfg.solver.sweep_lo, default_sweep_hi(obj, cfg), cfg.solver.sweep_points};
    const auto alphas = linspace(g.lo, g.hi, g.n);
    const fs::path dir = ensure_dir(out_dir);

    const SweepResult res = sweep(problem, alphas, cfg.uncertainty.tau_u_bar);
    const IntervalOutcome nominal_iv = feasible_interval(build_nominal(problem, cfg.uncertainty.tau_u_bar));
    std::string csv = "alpha_rad_per_Nm,energy_model_J,energy_oracle_J,relative_gap,feasible_simulated,feasible_rows\n";
    double worst_gap = 0.0;
    for (std::size_t k = 0; k < res.alphas.size(); ++k) {
      const double model = obj.evaluate(res.alphas[k]);
      const double gap = std::fabs(model - res.energies[k]) / (std::fabs(res.energies[k]) + 1.0);
      worst_gap = std::max(worst_gap, gap);
      csv += fmt(res.alphas[k]) + "," + fmt(model) + "," + fmt(res.energies[k]) + "," + fmt(gap) + "," +
             (res.feasible[k] ? "1" : "0") + "," + (in_interval(nominal_iv, res.alphas[k]) ? "1" : "0") + "\n";
    }
    write_text(dir / "sweep.csv", csv);
    log << "sweep: " << res.alphas.size() << " points, oracle argmin alpha = " << fmt(res.argmin_alpha)
        << ", max model/oracle gap = " << fmt(worst_gap) << "\n";
    return kOk;
  });
}

}  // namespace sea::cli
