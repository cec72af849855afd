#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>
#include <string>

#include "fixtures.hpp"
#include "seaforge/error.hpp"
#include "seaforge/gait_io.hpp"

using sea::ErrorKind;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const sea::Error& e) {
    return e.kind();
  }
  FAIL("expected sea::Error");
  return ErrorKind::IoError;
}

std::string error_text(auto&& fn) {
  try {
    fn();
  } catch (const sea::Error& e) {
    return e.what();
  }
  return {};
}

std::vector<double> sine(std::size_t n, double dt, double amp, int order) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    switch (order) {
      case 0: v[i] = amp * std::sin(kTwoPi * t); break;
      case 1: v[i] = amp * kTwoPi * std::cos(kTwoPi * t); break;
      default: v[i] = -amp * kTwoPi * kTwoPi * std::sin(kTwoPi * t); break;
    }
  }
  return v;
}

const char* kConfigTemplate = R"({
  "motor": {"k_t_mNm_per_A": 13.6, "R_mOhm": 102, "I_m_gcm2": 33.3, "b_m_uNms_per_rad": 1.665,
            "r": 600, "eta": 0.8, "tau_max_mNm": 337.5, "v_in_V": 30, "dq_max_rpm": 21065},
  "spring": {"delta_max_rad": 0.8},
  "uncertainty": {"m_bar_kg": 69.1, "eps_m_kg": 8.8, "eps_q_deg": 5, "eps_dq_rms_frac": 0.3,
                  "eps_ddq_rms_frac": 0.3, "eps_eta_frac": 0.2, "eps_tau_u_mNm": 13.5, "eps_d": 0.2}
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

}  // namespace

TEST_CASE("spectral derivative of a sinusoid") {
  const std::size_t n = 512;
  const double dt = 1.0 / 512.0;
  const auto x = sine(n, dt, 1.0, 0);
  CHECK(max_abs_diff(sea::differentiate(x, dt, 1), sine(n, dt, 1.0, 1)) <= 1e-9);
  CHECK(max_abs_diff(sea::differentiate(x, dt, 2), sine(n, dt, 1.0, 2)) <= 1e-6);
}

TEST_CASE("derivative of a constant is zero") {
  const std::vector<double> c(64, 3.25);
  CHECK(max_abs(sea::differentiate(c, 0.01, 1)) <= 1e-12);
  CHECK(max_abs(sea::differentiate(c, 0.01, 2)) <= 1e-12);
}

TEST_CASE("differentiate rejects short and malformed input") {
  const std::vector<double> shortv(7, 0.0);
  CHECK(kind_of([&] { sea::differentiate(shortv, 0.1, 1); }) == ErrorKind::TooFewSamples);
  const std::vector<double> ok(8, 0.0);
  CHECK(kind_of([&] { sea::differentiate(ok, 0.1, 3); }) == ErrorKind::InvariantViolation);
  CHECK(kind_of([&] { sea::differentiate(ok, 0.0, 1); }) == ErrorKind::InvariantViolation);
}

TEST_CASE("fixture S1 derivatives match closed forms") {
  const std::size_t n = 512;
  const double dt = 1.0 / 512.0;
  const auto traj = sea::PeriodicTrajectory::from_samples(sine(n, dt, 0.1, 0), sine(n, dt, 0.8, 0), dt);
  CHECK(traj.size() == n);
  CHECK(traj.period() == doctest::Approx(1.0));
  CHECK(max_abs_diff(traj.dq_l(), sine(n, dt, 0.1, 1)) <= 1e-6);
  CHECK(max_abs_diff(traj.ddq_l(), sine(n, dt, 0.1, 2)) <= 1e-6);
  CHECK(max_abs_diff(traj.dtau_pm(), sine(n, dt, 0.8, 1)) <= 1e-6);
  CHECK(max_abs_diff(traj.ddtau_pm(), sine(n, dt, 0.8, 2)) <= 1e-6);
}

TEST_CASE("first derivative applied twice equals the second derivative") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 25; ++rep) {
    const auto g = fixtures::random_gait(rng, 128 + 64 * static_cast<std::size_t>(rep % 7));
    const double dt = g.period / static_cast<double>(g.n);
    const auto x = g.q.sample(g.n, dt);
    const auto twice = sea::differentiate(sea::differentiate(x, dt, 1), dt, 1);
    const auto direct = sea::differentiate(x, dt, 2);
    CHECK(max_abs_diff(twice, direct) <= 1e-8 * max_abs(direct));
    // The grid resolves every harmonic, so the result is the analytic one.
    CHECK(max_abs_diff(direct, g.q.sample(g.n, dt, 2)) <= 1e-8 * max_abs(direct));
  }
}

TEST_CASE("harmonic cutoff removes high-frequency content") {
  const std::size_t n = 256;
  const double dt = 1.0 / 256.0;
  std::vector<double> x(n), low(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    low[i] = std::sin(kTwoPi * t) + 0.5 * std::cos(2 * kTwoPi * t);
    x[i] = low[i] + 0.01 * std::sin(40 * kTwoPi * t);
  }
  CHECK(max_abs_diff(sea::low_pass(x, 5), low) <= 1e-12);
  const auto traj = sea::PeriodicTrajectory::from_samples(x, x, dt, 5);
  CHECK(max_abs_diff(traj.q_l(), low) <= 1e-12);
}

TEST_CASE("trajectory invariants are enforced") {
  std::vector<double> a(16, 0.0);
  CHECK(kind_of([&] { sea::PeriodicTrajectory::from_samples(std::vector<double>(7), std::vector<double>(7), 0.1); }) ==
        ErrorKind::TooFewSamples);
  CHECK(kind_of([&] { sea::PeriodicTrajectory::from_samples(a, std::vector<double>(15), 0.1); }) ==
        ErrorKind::InvariantViolation);
  // A velocity with nonzero mean cannot come from a periodic position.
  std::vector<double> dq(16, 1.0);
  CHECK(kind_of([&] { sea::PeriodicTrajectory::from_arrays(0.1, a, dq, a, a, a, a); }) == ErrorKind::NonPeriodic);
  CHECK(kind_of([&] { sea::PeriodicTrajectory::from_arrays(-0.1, a, a, a, a, a, a); }) ==
        ErrorKind::InvariantViolation);
}

TEST_CASE("percent-gait CSV in degrees is converted and resampled") {
  const sea::Config cfg = fixtures::case_config();
  const std::string csv = sea::read_file(fixtures::data_path("ankle_level_walking.csv"));
  const auto traj = sea::load_trajectory(csv, cfg.trajectory);
  CHECK(traj.size() == 512);
  CHECK(traj.period() == doctest::Approx(1.13).epsilon(1e-14));
  // Sample 0 sits on the first row, converted to radians.
  CHECK(traj.q_l()[0] == doctest::Approx(0.0).epsilon(1e-15));
  const double peak_deg = *std::min_element(traj.q_l().begin(), traj.q_l().end()) * 180.0 / std::numbers::pi;
  CHECK(peak_deg == doctest::Approx(-18.4).epsilon(0.02));

  double mean = 0.0;
  for (double v : traj.dq_l()) mean += v;
  CHECK(std::fabs(mean / 512.0) <= 1e-9 * max_abs(traj.dq_l()));

  sea::TrajectoryOptions no_period = cfg.trajectory;
  no_period.period_s.reset();
  CHECK(kind_of([&] { sea::load_trajectory(csv, no_period); }) == ErrorKind::MissingField);
}

TEST_CASE("CSV loader errors carry line numbers") {
  sea::TrajectoryOptions opt;
  opt.resample_n = 16;
  const std::string head = "time_s,q_l_rad,tau_l_Nm_per_kg\n";

  const std::string open_loop = head + "0,0.10,0\n0.25,0.2,0.1\n0.5,0.3,0.2\n0.75,0.32,0.1\n1.0,0.35,0\n";
  CHECK(kind_of([&] { sea::load_trajectory(open_loop, opt); }) == ErrorKind::NonPeriodic);

  const std::string backwards = head + "0,0,0\n0.25,0.2,0.1\n0.2,0.3,0.2\n0.75,0.1,0.1\n1.0,0,0\n";
  CHECK(kind_of([&] { sea::load_trajectory(backwards, opt); }) == ErrorKind::NonMonotoneTime);
  CHECK(error_text([&] { sea::load_trajectory(backwards, opt); }).find("line 4") != std::string::npos);

  const std::string bad_number = head + "0,0,0\n0.25,abc,0.1\n0.5,0.3,0.2\n0.75,0.1,0.1\n1.0,0,0\n";
  CHECK(kind_of([&] { sea::load_trajectory(bad_number, opt); }) == ErrorKind::ParseError);
  CHECK(error_text([&] { sea::load_trajectory(bad_number, opt); }).find("line 3") != std::string::npos);

  CHECK(kind_of([&] { sea::load_trajectory("time_s,q_l_rad\n0,0\n", opt); }) == ErrorKind::MissingColumn);
  CHECK(kind_of([&] { sea::load_trajectory("t,q_l_rad,tau_l_Nm\n0,0,0\n", opt); }) == ErrorKind::MissingColumn);

  const std::string absolute = "time_s,q_l_rad,tau_l_Nm\n0,0,0\n0.25,0.2,69.1\n0.5,0.3,138.2\n0.75,0.1,69.1\n1.0,0,0\n";
  CHECK(kind_of([&] { sea::load_trajectory(absolute, opt); }) == ErrorKind::MissingField);
  opt.normalize_mass_kg = 69.1;
  const auto t = sea::load_trajectory(absolute, opt);
  CHECK(max_abs(t.tau_pm()) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("writing and reloading a trajectory is bit-identical") {
  std::mt19937_64 rng(8);
  for (std::size_t n : {512u, 256u, 100u, 64u}) {
    CAPTURE(n);
    const auto g = fixtures::random_gait(rng, n);
    const auto traj = g.spectral();
    sea::TrajectoryOptions opt;
    opt.resample_n = static_cast<int>(n);
    opt.periodic_tol_rad = 0.0;
    const auto back = sea::load_trajectory(sea::write_trajectory_csv(traj), opt);
    REQUIRE(back.size() == n);
    CHECK(back.dt() == traj.dt());
    auto same = [](std::span<const double> a, std::span<const double> b) {
      return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
    };
    CHECK(same(back.q_l(), traj.q_l()));
    CHECK(same(back.dq_l(), traj.dq_l()));
    CHECK(same(back.ddq_l(), traj.ddq_l()));
    CHECK(same(back.tau_pm(), traj.tau_pm()));
    CHECK(same(back.dtau_pm(), traj.dtau_pm()));
    CHECK(same(back.ddtau_pm(), traj.ddtau_pm()));
  }
}

TEST_CASE("EC30 configuration converts to SI") {
  const sea::Config cfg = sea::parse_config(kConfigTemplate);
  CHECK(cfg.motor.k_t == doctest::Approx(0.0136).epsilon(1e-15));
  CHECK(cfg.motor.R == doctest::Approx(0.102).epsilon(1e-15));
  CHECK(cfg.motor.I_m == doctest::Approx(3.33e-6).epsilon(1e-15));
  CHECK(cfg.motor.b_m == doctest::Approx(1.665e-6).epsilon(1e-15));
  CHECK(cfg.motor.tau_max == doctest::Approx(0.3375).epsilon(1e-15));
  CHECK(cfg.motor.dq_max == doctest::Approx(21065.0 * kTwoPi / 60.0).epsilon(1e-15));
  CHECK(cfg.motor.k_m() == 0.0136 / std::sqrt(0.102));

  const auto& u = cfg.uncertainty;
  CHECK(u.m_bar == 69.1);
  CHECK(u.eps_m == 8.8);
  CHECK(u.eps_q == doctest::Approx(5.0 * std::numbers::pi / 180.0));
  CHECK(u.eps_eta == doctest::Approx(0.16));
  CHECK(u.eps_tau_u == doctest::Approx(0.0135));
  CHECK(u.eps_d == 0.2);
  CHECK(u.eps_dq.rms_relative);
  CHECK(u.eps_dq.value == 0.3);
  CHECK(cfg.trajectory.resample_n == 512);
  CHECK(cfg.solver.verify_samples == 10000);
}

TEST_CASE("configuration errors are classified") {
  const std::string base = kConfigTemplate;
  CHECK(kind_of([&] { sea::parse_config(replace(base, "\"m_bar_kg\": 69.1, \"eps_m_kg\": 8.8",
                                                "\"m_bar_kg\": 8, \"eps_m_kg\": 10")); }) ==
        ErrorKind::InvariantViolation);
  CHECK(kind_of([&] { sea::parse_config(replace(base, "\"R_mOhm\": 102, ", "")); }) == ErrorKind::MissingField);
  CHECK(kind_of([&] { sea::parse_config(replace(base, "k_t_mNm_per_A", "k_t")); }) == ErrorKind::UnitViolation);
  CHECK(kind_of([&] { sea::parse_config(replace(base, "dq_max_rpm", "dq_max_rad_per_s")); }) ==
        ErrorKind::UnitViolation);
  CHECK(kind_of([&] { sea::parse_config(replace(base, "\"eta\": 0.8", "\"eta\": 1.2")); }) ==
        ErrorKind::InvariantViolation);
  CHECK(kind_of([&] { sea::parse_config(replace(base, "\"eps_d\": 0.2", "\"eps_d\": -0.1")); }) ==
        ErrorKind::InvariantViolation);
  CHECK(kind_of([&] { sea::parse_config("{ not json"); }) == ErrorKind::ParseError);
  CHECK(kind_of([&] { sea::parse_config("{}"); }) == ErrorKind::MissingField);
  CHECK(kind_of([] { sea::read_file("/nonexistent/sea-forge.json"); }) == ErrorKind::IoError);
}
