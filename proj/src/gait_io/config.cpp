#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "seaforge/error.hpp"
#include "seaforge/gait_io.hpp"

namespace sea {
namespace {

using nlohmann::json;

constexpr double kRpmToRadS = 2.0 * std::numbers::pi / 60.0;
constexpr double kDegToRad = std::numbers::pi / 180.0;

// Accepted keys per section. A key whose stem matches an accepted key but
// whose unit suffix differs is reported as a unit violation.
const std::set<std::string>& known_keys(const std::string& section) {
  static const std::map<std::string, std::set<std::string>> keys{
      {"motor",
       {"k_t_mNm_per_A", "R_mOhm", "I_m_gcm2", "b_m_uNms_per_rad", "r", "eta", "tau_max_mNm", "v_in_V",
        "dq_max_rpm"}},
      {"spring", {"delta_max_rad"}},
      {"uncertainty",
       {"m_bar_kg", "eps_m_kg", "eps_q_deg", "eps_q_rad", "eps_dq_rad_per_s", "eps_dq_rms_frac",
        "eps_ddq_rad_per_s2", "eps_ddq_rms_frac", "eps_eta", "eps_eta_frac", "eps_tau_u_mNm", "tau_u_bar_mNm",
        "eps_d"}},
      {"solver", {"verify_samples", "sweep_lo", "sweep_hi", "sweep_points"}},
      {"trajectory", {"period_s", "normalize_mass_kg", "periodic_tol_rad", "resample_n", "max_harmonic"}},
  };
  return keys.at(section);
}

std::string stem(const std::string& key) {
  for (const char* s : {"k_t", "R", "I_m", "b_m", "tau_max", "v_in", "dq_max", "delta_max", "m_bar", "eps_m",
                        "eps_q", "eps_dq", "eps_ddq", "eps_tau_u", "tau_u_bar", "period", "normalize_mass",
                        "periodic_tol"}) {
    const std::string p(s);
    if (key == p || key.rfind(p + "_", 0) == 0) return p;
  }
  return key;
}

void check_keys(const json& section, const std::string& name) {
  const auto& allowed = known_keys(name);
  for (const auto& [key, value] : section.items()) {
    if (allowed.count(key)) continue;
    const std::string s = stem(key);
    for (const auto& a : allowed) {
      if (stem(a) == s && s != a) {
        throw Error(ErrorKind::UnitViolation, name + "." + key + ": expected unit-suffixed key such as " + name + "." + a);
      }
    }
    throw Error(ErrorKind::ParseError, "unknown key " + name + "." + key);
  }
}

const json& section(const json& root, const std::string& name, bool required) {
  static const json empty = json::object();
  if (!root.contains(name)) {
    if (required) throw Error(ErrorKind::MissingField, "missing section '" + name + "'");
    return empty;
  }
  const json& s = root.at(name);
  if (!s.is_object()) throw Error(ErrorKind::ParseError, "section '" + name + "' must be an object");
  check_keys(s, name);
  return s;
}

std::optional<double> number(const json& s, const std::string& sec, const std::string& key) {
  if (!s.contains(key)) return std::nullopt;
  const json& v = s.at(key);
  if (!v.is_number()) throw Error(ErrorKind::ParseError, sec + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorKind::InvariantViolation, sec + "." + key + " must be finite");
  return x;
}

double required(const json& s, const std::string& sec, const std::string& key) {
  const auto v = number(s, sec, key);
  if (!v) throw Error(ErrorKind::MissingField, "missing field " + sec + "." + key);
  return *v;
}

int integer(const json& s, const std::string& sec, const std::string& key, int fallback) {
  if (!s.contains(key)) return fallback;
  const json& v = s.at(key);
  if (!v.is_number_integer()) throw Error(ErrorKind::ParseError, sec + "." + key + " must be an integer");
  return v.get<int>();
}

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0)) throw Error(ErrorKind::InvariantViolation, std::string(what) + " must be >= 0");
}

}  // namespace

double MotorParams::k_m() const { return k_t / std::sqrt(R); }

void MotorParams::validate() const {
  const std::pair<const char*, double> fields[] = {{"k_t", k_t},         {"R", R},         {"I_m", I_m},
                                                   {"b_m", b_m},         {"r", r},         {"eta", eta},
                                                   {"tau_max", tau_max}, {"v_in", v_in}, {"dq_max", dq_max}};
  for (const auto& [name, v] : fields) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::InvariantViolation, std::string("motor.") + name + " must be positive and finite");
    }
  }
  if (eta > 1.0) throw Error(ErrorKind::InvariantViolation, "motor.eta must be <= 1");
}

void SpringSpec::validate() const {
  if (!(delta_max > 0.0) || !std::isfinite(delta_max)) {
    throw Error(ErrorKind::InvariantViolation, "spring.delta_max must be positive");
  }
}

double KinematicBound::resolve(std::span<const double> nominal) const {
  if (!rms_relative) return value;
  double ss = 0.0;
  for (double v : nominal) ss += v * v;
  return nominal.empty() ? 0.0 : value * std::sqrt(ss / static_cast<double>(nominal.size()));
}

void UncertaintySpec::validate(const MotorParams& motor) const {
  require_nonneg(eps_m, "eps_m");
  require_nonneg(eps_q, "eps_q");
  require_nonneg(eps_dq.value, "eps_dq");
  require_nonneg(eps_ddq.value, "eps_ddq");
  require_nonneg(eps_eta, "eps_eta");
  require_nonneg(eps_tau_u, "eps_tau_u");
  require_nonneg(eps_d, "eps_d");
  if (!std::isfinite(tau_u_bar)) throw Error(ErrorKind::InvariantViolation, "tau_u_bar must be finite");
  if (!(m_bar - eps_m > 0.0)) {
    throw Error(ErrorKind::InvariantViolation, "m_bar - eps_m must be positive (m_bar = " + std::to_string(m_bar) +
                                                   ", eps_m = " + std::to_string(eps_m) + ")");
  }
  if (!(motor.eta - eps_eta > 0.0)) throw Error(ErrorKind::InvariantViolation, "eta - eps_eta must be positive");
  if (motor.eta + eps_eta > 1.0) throw Error(ErrorKind::InvariantViolation, "eta + eps_eta must not exceed 1");
  if (!(eps_d < 1.0)) throw Error(ErrorKind::InvariantViolation, "eps_d must be < 1");
}

UncertaintySpec UncertaintySpec::scaled(double factor) const {
  UncertaintySpec s = *this;
  s.eps_m *= factor;
  s.eps_q *= factor;
  s.eps_dq.value *= factor;
  s.eps_ddq.value *= factor;
  s.eps_eta *= factor;
  s.eps_tau_u *= factor;
  s.eps_d *= factor;
  return s;
}

Config parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorKind::ParseError, "config root must be an object");
  for (const auto& [key, value] : root.items()) {
    if (key != "motor" && key != "spring" && key != "uncertainty" && key != "solver" && key != "trajectory") {
      throw Error(ErrorKind::ParseError, "unknown section '" + key + "'");
    }
  }

  Config cfg{};
  const json& m = section(root, "motor", true);
  cfg.motor.k_t = required(m, "motor", "k_t_mNm_per_A") * 1e-3;
  cfg.motor.R = required(m, "motor", "R_mOhm") * 1e-3;
  cfg.motor.I_m = required(m, "motor", "I_m_gcm2") * 1e-7;
  cfg.motor.b_m = required(m, "motor", "b_m_uNms_per_rad") * 1e-6;
  cfg.motor.r = required(m, "motor", "r");
  cfg.motor.eta = required(m, "motor", "eta");
  cfg.motor.tau_max = required(m, "motor", "tau_max_mNm") * 1e-3;
  cfg.motor.v_in = required(m, "motor", "v_in_V");
  cfg.motor.dq_max = required(m, "motor", "dq_max_rpm") * kRpmToRadS;
  cfg.motor.validate();

  const json& s = section(root, "spring", true);
  cfg.spring.delta_max = required(s, "spring", "delta_max_rad");
  cfg.spring.validate();

  const json& u = section(root, "uncertainty", true);
  auto& us = cfg.uncertainty;
  us.m_bar = required(u, "uncertainty", "m_bar_kg");
  us.eps_m = number(u, "uncertainty", "eps_m_kg").value_or(0.0);
  const auto eq_deg = number(u, "uncertainty", "eps_q_deg");
  const auto eq_rad = number(u, "uncertainty", "eps_q_rad");
  if (eq_deg && eq_rad) throw Error(ErrorKind::UnitViolation, "give eps_q in either degrees or radians, not both");
  us.eps_q = eq_deg ? *eq_deg * kDegToRad : eq_rad.value_or(0.0);

  auto kinematic = [&](const char* abs_key, const char* frac_key) {
    const auto a = number(u, "uncertainty", abs_key);
    const auto f = number(u, "uncertainty", frac_key);
    if (a && f) {
      throw Error(ErrorKind::UnitViolation, std::string("give either ") + abs_key + " or " + frac_key + ", not both");
    }
    if (f) return KinematicBound{*f, true};
    return KinematicBound{a.value_or(0.0), false};
  };
  us.eps_dq = kinematic("eps_dq_rad_per_s", "eps_dq_rms_frac");
  us.eps_ddq = kinematic("eps_ddq_rad_per_s2", "eps_ddq_rms_frac");

  const auto ee = number(u, "uncertainty", "eps_eta");
  const auto ef = number(u, "uncertainty", "eps_eta_frac");
  if (ee && ef) throw Error(ErrorKind::UnitViolation, "give either eps_eta or eps_eta_frac, not both");
  us.eps_eta = ef ? *ef * cfg.motor.eta : ee.value_or(0.0);
  us.eps_tau_u = number(u, "uncertainty", "eps_tau_u_mNm").value_or(0.0) * 1e-3;
  us.tau_u_bar = number(u, "uncertainty", "tau_u_bar_mNm").value_or(0.0) * 1e-3;
  us.eps_d = number(u, "uncertainty", "eps_d").value_or(0.0);
  us.validate(cfg.motor);

  const json& sv = section(root, "solver", false);
  const int samples = integer(sv, "solver", "verify_samples", 10000);
  if (samples < 0) throw Error(ErrorKind::InvariantViolation, "solver.verify_samples must be >= 0");
  cfg.solver.verify_samples = static_cast<std::size_t>(samples);
  cfg.solver.sweep_lo = number(sv, "solver", "sweep_lo").value_or(0.0);
  cfg.solver.sweep_hi = number(sv, "solver", "sweep_hi").value_or(0.0);
  const int points = integer(sv, "solver", "sweep_points", 201);
  if (points < 1) throw Error(ErrorKind::InvariantViolation, "solver.sweep_points must be >= 1");
  cfg.solver.sweep_points = static_cast<std::size_t>(points);
  if (cfg.solver.sweep_lo < 0.0 || cfg.solver.sweep_hi < 0.0) {
    throw Error(ErrorKind::InvariantViolation, "sweep bounds must be >= 0");
  }

  const json& t = section(root, "trajectory", false);
  cfg.trajectory.period_s = number(t, "trajectory", "period_s");
  cfg.trajectory.normalize_mass_kg = number(t, "trajectory", "normalize_mass_kg");
  cfg.trajectory.periodic_tol_rad = number(t, "trajectory", "periodic_tol_rad").value_or(1e-3);
  cfg.trajectory.resample_n = integer(t, "trajectory", "resample_n", 512);
  cfg.trajectory.max_harmonic = integer(t, "trajectory", "max_harmonic", 0);
  if (cfg.trajectory.resample_n < static_cast<int>(PeriodicTrajectory::kMinSamples)) {
    throw Error(ErrorKind::InvariantViolation, "trajectory.resample_n must be >= 8");
  }
  if (cfg.trajectory.max_harmonic < 0) throw Error(ErrorKind::InvariantViolation, "trajectory.max_harmonic must be >= 0");
  if (cfg.trajectory.periodic_tol_rad < 0.0) {
    throw Error(ErrorKind::InvariantViolation, "trajectory.periodic_tol_rad must be >= 0");
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoError, "read failed for '" + path + "'");
  return ss.str();
}

}  // namespace sea
