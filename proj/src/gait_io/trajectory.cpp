#include <gsl/gsl_errno.h>
#include <gsl/gsl_spline.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include "seaforge/error.hpp"
#include "seaforge/gait_io.hpp"

namespace sea {
namespace {

void check_finite(std::span<const double> x, const char* name) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      throw Error(ErrorKind::InvariantViolation, std::string(name) + "[" + std::to_string(i) + "] is not finite");
    }
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(std::string_view field, std::size_t line_no, std::string_view column) {
  double v = 0.0;
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": column '" + std::string(column) +
                                           "': cannot parse '" + std::string(field) + "' as a number");
  }
  return v;
}

std::optional<std::size_t> find_column(const std::vector<std::string_view>& header, const std::string& name) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

struct GslSplineDeleter {
  void operator()(gsl_spline* s) const { gsl_spline_free(s); }
};
struct GslAccelDeleter {
  void operator()(gsl_interp_accel* a) const { gsl_interp_accel_free(a); }
};

std::vector<double> resample_periodic(const std::vector<double>& t, const std::vector<double>& y, double dt,
                                      std::size_t n) {
  gsl_set_error_handler_off();
  std::unique_ptr<gsl_spline, GslSplineDeleter> spline(gsl_spline_alloc(gsl_interp_cspline_periodic, t.size()));
  std::unique_ptr<gsl_interp_accel, GslAccelDeleter> acc(gsl_interp_accel_alloc());
  if (!spline || !acc) throw Error(ErrorKind::InvariantViolation, "spline allocation failed");
  if (gsl_spline_init(spline.get(), t.data(), y.data(), t.size()) != GSL_SUCCESS) {
    throw Error(ErrorKind::InvariantViolation, "periodic spline construction failed");
  }
  std::vector<double> out(n);
  const double t_end = t.back();
  for (std::size_t i = 0; i < n; ++i) {
    const double ti = std::min(t.front() + static_cast<double>(i) * dt, t_end);
    out[i] = gsl_spline_eval(spline.get(), ti, acc.get());
  }
  return out;
}

}  // namespace

PeriodicTrajectory PeriodicTrajectory::from_samples(std::vector<double> q_l, std::vector<double> tau_pm, double dt,
                                                    int max_harmonic) {
  if (q_l.size() != tau_pm.size()) {
    throw Error(ErrorKind::InvariantViolation, "position and torque sample counts differ");
  }
  if (q_l.size() < kMinSamples) {
    throw Error(ErrorKind::TooFewSamples, "need at least 8 samples, got " + std::to_string(q_l.size()));
  }
  if (max_harmonic < 0) throw Error(ErrorKind::InvariantViolation, "max_harmonic must be >= 0");
  if (max_harmonic > 0) {
    q_l = low_pass(q_l, max_harmonic);
    tau_pm = low_pass(tau_pm, max_harmonic);
  }
  auto dq = differentiate(q_l, dt, 1, max_harmonic);
  auto ddq = differentiate(q_l, dt, 2, max_harmonic);
  auto dtau = differentiate(tau_pm, dt, 1, max_harmonic);
  auto ddtau = differentiate(tau_pm, dt, 2, max_harmonic);
  return from_arrays(dt, std::move(q_l), std::move(dq), std::move(ddq), std::move(tau_pm), std::move(dtau),
                     std::move(ddtau));
}

PeriodicTrajectory PeriodicTrajectory::from_arrays(double dt, std::vector<double> q_l, std::vector<double> dq_l,
                                                   std::vector<double> ddq_l, std::vector<double> tau_pm,
                                                   std::vector<double> dtau_pm, std::vector<double> ddtau_pm) {
  const std::size_t n = q_l.size();
  if (n < kMinSamples) throw Error(ErrorKind::TooFewSamples, "need at least 8 samples, got " + std::to_string(n));
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvariantViolation, "dt must be positive and finite");
  for (const auto* v : {&dq_l, &ddq_l, &tau_pm, &dtau_pm, &ddtau_pm}) {
    if (v->size() != n) throw Error(ErrorKind::InvariantViolation, "trajectory arrays differ in length");
  }
  check_finite(q_l, "q_l");
  check_finite(dq_l, "dq_l");
  check_finite(ddq_l, "ddq_l");
  check_finite(tau_pm, "tau_pm");
  check_finite(dtau_pm, "dtau_pm");
  check_finite(ddtau_pm, "ddtau_pm");

  double mean = 0.0, peak = 0.0;
  for (double v : dq_l) {
    mean += v;
    peak = std::max(peak, std::fabs(v));
  }
  mean /= static_cast<double>(n);
  if (std::fabs(mean) > 1e-9 * peak) {
    throw Error(ErrorKind::NonPeriodic, "mean load velocity " + std::to_string(mean) + " rad/s is not zero");
  }

  PeriodicTrajectory t;
  t.dt_ = dt;
  t.q_l_ = std::move(q_l);
  t.dq_l_ = std::move(dq_l);
  t.ddq_l_ = std::move(ddq_l);
  t.tau_pm_ = std::move(tau_pm);
  t.dtau_pm_ = std::move(dtau_pm);
  t.ddtau_pm_ = std::move(ddtau_pm);
  return t;
}

PeriodicTrajectory load_trajectory(std::string_view csv, const TrajectoryOptions& options, const ColumnMap& columns) {
  if (options.resample_n < static_cast<int>(PeriodicTrajectory::kMinSamples)) {
    throw Error(ErrorKind::TooFewSamples, "resample_n must be at least 8");
  }
  if (csv.size() >= 3 && csv.substr(0, 3) == "\xEF\xBB\xBF") csv.remove_prefix(3);

  std::vector<std::string_view> header;
  std::size_t header_line = 0;
  std::vector<std::pair<std::size_t, std::string_view>> body;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t nl = csv.find('\n', pos);
    const std::string_view line = trim(csv.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    ++line_no;
    if (!line.empty() && line.front() != '#') {
      if (header.empty()) {
        header = split_row(line);
        header_line = line_no;
      } else {
        body.emplace_back(line_no, line);
      }
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  if (header.empty()) throw Error(ErrorKind::MissingColumn, "trajectory CSV has no header row");

  const auto time_col = find_column(header, columns.time_s);
  const auto pct_col = find_column(header, columns.percent_gait);
  const auto qr_col = find_column(header, columns.q_rad);
  const auto qd_col = find_column(header, columns.q_deg);
  const auto tk_col = find_column(header, columns.tau_per_kg);
  const auto ta_col = find_column(header, columns.tau_abs);
  const std::string where = "header (line " + std::to_string(header_line) + ")";
  if (!time_col && !pct_col) {
    throw Error(ErrorKind::MissingColumn, where + " lacks '" + columns.time_s + "' or '" + columns.percent_gait + "'");
  }
  if (!qr_col && !qd_col) {
    throw Error(ErrorKind::MissingColumn, where + " lacks '" + columns.q_rad + "' or '" + columns.q_deg + "'");
  }
  if (!tk_col && !ta_col) {
    throw Error(ErrorKind::MissingColumn,
                where + " lacks '" + columns.tau_per_kg + "' or '" + columns.tau_abs + "'");
  }
  const bool use_pct = !time_col;
  if (use_pct && !options.period_s) {
    throw Error(ErrorKind::MissingField, "percent-gait input requires trajectory.period_s");
  }
  if (use_pct && !(*options.period_s > 0.0)) throw Error(ErrorKind::InvariantViolation, "period_s must be positive");
  const bool tau_absolute = !tk_col;
  if (tau_absolute && !options.normalize_mass_kg) {
    throw Error(ErrorKind::MissingField, "absolute torque column requires trajectory.normalize_mass_kg");
  }
  if (tau_absolute && !(*options.normalize_mass_kg > 0.0)) {
    throw Error(ErrorKind::InvariantViolation, "normalize_mass_kg must be positive");
  }

  const std::size_t c_t = use_pct ? *pct_col : *time_col;
  const std::size_t c_q = qr_col ? *qr_col : *qd_col;
  const std::size_t c_tau = tk_col ? *tk_col : *ta_col;
  const std::size_t needed = std::max({c_t, c_q, c_tau}) + 1;
  const double q_scale = qr_col ? 1.0 : std::numbers::pi / 180.0;

  std::vector<double> t, q, tau;
  t.reserve(body.size());
  q.reserve(body.size());
  tau.reserve(body.size());
  for (const auto& [ln, line] : body) {
    const auto fields = split_row(line);
    if (fields.size() < needed) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(ln) + ": expected at least " +
                                             std::to_string(needed) + " fields, got " + std::to_string(fields.size()));
    }
    double tv = parse_number(fields[c_t], ln, header[c_t]);
    if (use_pct) tv = tv / 100.0 * *options.period_s;
    if (!t.empty() && !(tv > t.back())) {
      throw Error(ErrorKind::NonMonotoneTime, "line " + std::to_string(ln) + ": time " + std::string(fields[c_t]) +
                                                  " does not increase");
    }
    t.push_back(tv);
    const double qv = parse_number(fields[c_q], ln, header[c_q]);
    q.push_back(qr_col ? qv : qv * q_scale);
    const double tauv = parse_number(fields[c_tau], ln, header[c_tau]);
    tau.push_back(tau_absolute ? tauv / *options.normalize_mass_kg : tauv);
  }
  if (t.size() < 5) {
    throw Error(ErrorKind::TooFewSamples, "trajectory CSV needs at least 5 rows, got " + std::to_string(t.size()));
  }
  const double gap = std::fabs(q.front() - q.back());
  if (gap > options.periodic_tol_rad) {
    throw Error(ErrorKind::NonPeriodic, "first and last positions differ by " + std::to_string(gap) +
                                            " rad (line " + std::to_string(body.back().first) + "), tolerance " +
                                            std::to_string(options.periodic_tol_rad) + " rad");
  }
  // The closing row repeats the phase of the first; snap it so the spline closes exactly.
  q.back() = q.front();
  tau.back() = tau.front();

  const std::size_t n = static_cast<std::size_t>(options.resample_n);
  const double span = t.back() - t.front();
  const double dt = span / static_cast<double>(n);

  bool uniform = t.size() == n + 1;
  for (std::size_t i = 0; uniform && i < t.size(); ++i) {
    const double expect = t.front() + static_cast<double>(i) * dt;
    uniform = std::fabs(t[i] - expect) <= 1e-12 * span;
  }
  std::vector<double> qs, taus;
  if (uniform) {
    qs.assign(q.begin(), q.end() - 1);
    taus.assign(tau.begin(), tau.end() - 1);
  } else {
    qs = resample_periodic(t, q, dt, n);
    taus = resample_periodic(t, tau, dt, n);
  }
  return PeriodicTrajectory::from_samples(std::move(qs), std::move(taus), dt, options.max_harmonic);
}

std::string write_trajectory_csv(const PeriodicTrajectory& trajectory) {
  std::string out = "time_s,q_l_rad,tau_l_Nm_per_kg\n";
  char buf[128];
  const auto q = trajectory.q_l();
  const auto tau = trajectory.tau_pm();
  const std::size_t n = trajectory.size();
  for (std::size_t i = 0; i <= n; ++i) {
    const std::size_t k = i % n;
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", static_cast<double>(i) * trajectory.dt(), q[k], tau[k]);
    out += buf;
  }
  return out;
}

}  // namespace sea
