#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "seaforge/constraints.hpp"
#include "seaforge/error.hpp"
#include "seaforge/oracle.hpp"
#include "seaforge/sea_model.hpp"

namespace {

double family_limit(sea::RowFamily f, const sea::MotorParams& motor, const sea::SpringSpec& spring) {
  switch (f) {
    case sea::RowFamily::ElongationPos:
    case sea::RowFamily::ElongationNeg: return spring.delta_max;
    case sea::RowFamily::TorquePos:
    case sea::RowFamily::TorqueNeg: return motor.tau_max;
    case sea::RowFamily::SpeedPos:
    case sea::RowFamily::SpeedNeg: return motor.dq_max;
    default: return motor.v_in * motor.k_t / motor.R;
  }
}

sea::MotorParams fast_supply() {
  auto m = fixtures::ec30();
  m.v_in = 48.0;  // no-load speed above dq_max
  return m;
}

}  // namespace

TEST_CASE("row residuals reproduce the simulated limits") {
  std::mt19937_64 rng(31);
  for (const auto& motor : {fixtures::ec30(), fast_supply()}) {
    for (int rep = 0; rep < 25; ++rep) {
      const auto traj = fixtures::random_gait(rng, 256).spectral();
      const sea::DesignProblem prob{traj, motor, fixtures::spring(), fixtures::uniform(rng, 50.0, 90.0)};
      const double tau_u = fixtures::uniform(rng, -0.01, 0.01);
      const auto sys = sea::build_nominal(prob, tau_u);
      for (double alpha : {0.0, 3e-4, 2e-3, 9e-3}) {
        std::array<double, sea::kFamilyCount> worst;
        worst.fill(-std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < sys.size(); ++k) {
          const auto f = sys.labels[k].family;
          const double lim = family_limit(f, motor, prob.spring);
          auto& w = worst[static_cast<std::size_t>(f)];
          w = std::max(w, (sys.d[k] * alpha - sys.e[k]) / lim);
        }
        const auto check = sea::simulate_constraints(prob, alpha, {prob.m, motor.eta, tau_u});
        for (auto f : sea::active_families(motor)) {
          const auto j = static_cast<std::size_t>(f);
          CHECK(std::fabs(worst[j] - check.excess[j]) <= 1e-10 * (1.0 + std::fabs(check.excess[j])));
        }
      }
    }
  }
}

TEST_CASE("every family and sample is labeled once, family-major") {
  std::mt19937_64 rng(8);
  const auto traj = fixtures::random_gait(rng, 128).spectral();
  const auto motor = fixtures::ec30();
  CHECK_FALSE(sea::needs_speed_rows(motor));
  const auto sys = sea::build_nominal({traj, motor, fixtures::spring(), 69.1});
  REQUIRE(sys.size() == 8 * traj.size());
  REQUIRE(sys.e.size() == sys.size());
  REQUIRE(sys.labels.size() == sys.size());
  std::set<std::pair<int, std::size_t>> seen;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    const auto& l = sys.labels[k];
    CHECK(static_cast<std::size_t>(l.family) == k / traj.size());
    CHECK(l.sample == k % traj.size());
    seen.insert({static_cast<int>(l.family), l.sample});
  }
  CHECK(seen.size() == sys.size());

  const auto fast = sea::build_nominal({traj, fast_supply(), fixtures::spring(), 69.1});
  CHECK(fast.size() == 10 * traj.size());
  CHECK(fast.labels.back().family == sea::RowFamily::SpeedNeg);
}

TEST_CASE("family builders match the stacked system") {
  std::mt19937_64 rng(12);
  const auto traj = fixtures::random_gait(rng, 64).spectral();
  const auto motor = fast_supply();
  const sea::DesignProblem prob{traj, motor, fixtures::spring(), 72.0};
  const auto all = sea::build_nominal(prob, 0.004);
  sea::ConstraintSystem parts = sea::elongation_rows(traj, prob.spring, prob.m);
  parts.append(sea::torque_rows(traj, motor, prob.m, 0.004));
  parts.append(sea::speed_torque_rows(traj, motor, prob.m, 0.004));
  parts.append(sea::speed_rows(traj, motor, prob.m));
  REQUIRE(parts.size() == all.size());
  for (std::size_t k = 0; k < all.size(); ++k) {
    CHECK(parts.d[k] == all.d[k]);
    CHECK(parts.labels[k] == all.labels[k]);
    // Speed rows do not depend on the unmodeled torque.
    CHECK(parts.e[k] == all.e[k]);
  }
}

TEST_CASE("elongation rows alone give the deflection interval") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const auto traj = fixtures::random_gait(rng, 256).spectral();
    const double m = 69.1;
    const auto sys = sea::elongation_rows(traj, fixtures::spring(), m);
    double peak = 0.0;
    for (double t : traj.tau_pm()) peak = std::max(peak, std::fabs(t));
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < sys.size(); ++k) {
      CHECK(sys.e[k] > 0.0);
      if (sys.d[k] > 0.0) hi = std::min(hi, sys.e[k] / sys.d[k]);
    }
    CHECK(hi == doctest::Approx(0.8 / (m * peak)).epsilon(1e-14));
  }
}

TEST_CASE("case study rigid drive breaks a speed-torque row") {
  const auto cfg = fixtures::case_config();
  const auto traj = fixtures::case_trajectory(cfg);
  const auto sys = sea::build_nominal({traj, cfg.motor, cfg.spring, cfg.uncertainty.m_bar});
  std::set<sea::RowFamily> broken;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    if (sys.e[k] < 0.0) broken.insert(sys.labels[k].family);
  }
  CHECK_FALSE(broken.empty());
  for (auto f : broken) {
    CHECK((f == sea::RowFamily::SpeedTorqueB || f == sea::RowFamily::SpeedTorqueC));
  }
}

TEST_CASE("rms torque diagnostic") {
  std::mt19937_64 rng(15);
  const auto traj = fixtures::random_gait(rng).spectral();
  const auto motor = fixtures::ec30();
  const auto g = sea::affine_torque(traj, motor, 69.1);
  double ss = 0.0;
  for (double v : g.gamma2) ss += v * v;
  CHECK(sea::rms_torque_diagnostic(traj, motor, 69.1, 0.0) ==
        doctest::Approx(std::sqrt(ss / static_cast<double>(traj.size()))).epsilon(1e-12));
}

TEST_CASE("non-positive load scale is rejected") {
  std::mt19937_64 rng(1);
  const auto traj = fixtures::random_gait(rng, 32).spectral();
  CHECK_THROWS_AS(sea::build_nominal({traj, fixtures::ec30(), fixtures::spring(), 0.0}), sea::Error);
  CHECK(std::string(sea::to_string(sea::RowFamily::SpeedTorqueC)) == "speed_torque_c");
}
