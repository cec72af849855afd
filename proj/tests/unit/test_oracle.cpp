#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "seaforge/energy_objective.hpp"
#include "seaforge/error.hpp"
#include "seaforge/oracle.hpp"
#include "seaforge/qp_solver.hpp"

TEST_CASE("zero trajectory consumes nothing") {
  std::vector<double> z(64, 0.0);
  const auto traj = sea::PeriodicTrajectory::from_arrays(0.02, z, z, z, z, z, z);
  CHECK(sea::oracle_energy(traj, fixtures::ec30(), 69.1, 0.003) == 0.0);
  CHECK(sea::load_work(traj, fixtures::ec30(), 69.1, 0.003) == 0.0);
}

TEST_CASE("rigid energy matches the constant coefficient") {
  std::mt19937_64 rng(10);
  const auto motor = fixtures::ec30();
  for (int rep = 0; rep < 30; ++rep) {
    const auto traj = fixtures::random_gait(rng).spectral();
    const auto obj = sea::energy_coefficients(traj, motor, 69.1);
    CHECK(sea::oracle_energy(traj, motor, 69.1, 0.0) == doctest::Approx(obj.c()).epsilon(1e-9));
  }
}

TEST_CASE("fused kernel and the two-term split agree") {
  std::mt19937_64 rng(11);
  const auto motor = fixtures::ec30();
  for (int rep = 0; rep < 10; ++rep) {
    const auto traj = fixtures::random_gait(rng).spectral();
    const double alpha = fixtures::uniform(rng, 0.0, 0.01);
    const auto terms = sea::oracle_energy_terms(traj, motor, 69.1, alpha, 0.003);
    CHECK(terms.total() == doctest::Approx(sea::oracle_energy(traj, motor, 69.1, alpha, 0.003)).epsilon(1e-10));
    CHECK(terms.joule > 0.0);
  }
}

TEST_CASE("rms torque follows from the winding loss") {
  std::mt19937_64 rng(13);
  const auto motor = fixtures::ec30();
  const auto traj = fixtures::random_gait(rng).spectral();
  const double alpha = 0.0046;
  const auto terms = sea::oracle_energy_terms(traj, motor, 69.1, alpha);
  const double expected = std::sqrt(terms.joule * motor.k_m() * motor.k_m() / traj.period());
  CHECK(sea::rms_torque_diagnostic(traj, motor, 69.1, alpha) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("load work does not depend on compliance") {
  std::mt19937_64 rng(14);
  const auto motor = fixtures::ec30();
  for (int rep = 0; rep < 20; ++rep) {
    const auto traj = fixtures::random_gait(rng).spectral();
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k < 5; ++k) {
      const double w = sea::load_work(traj, motor, 69.1, fixtures::uniform(rng, 0.0, 0.02));
      lo = std::min(lo, w);
      hi = std::max(hi, w);
    }
    CHECK(hi - lo <= 1e-10 * std::max(std::fabs(hi), std::fabs(lo)) + 1e-13);
  }
}

TEST_CASE("load work is the integral of load power") {
  std::mt19937_64 rng(16);
  const auto motor = fixtures::ec30();
  const auto traj = fixtures::random_gait(rng).spectral();
  double power = 0.0;
  for (std::size_t i = 0; i < traj.size(); ++i) power += 69.1 * traj.tau_pm()[i] * traj.dq_l()[i];
  CHECK(sea::load_work(traj, motor, 69.1, 0.004) == doctest::Approx(-power * traj.dt()).epsilon(1e-10));
}

TEST_CASE("a lossless drive dissipates nothing") {
  std::mt19937_64 rng(17);
  auto motor = fixtures::ec30();
  motor.b_m = 0.0;
  motor.eta = 1.0;
  motor.R = 1e-12;
  for (int rep = 0; rep < 10; ++rep) {
    const auto traj = fixtures::random_gait(rng).spectral();
    const double alpha = fixtures::uniform(rng, 0.0, 0.01);
    const double w = sea::load_work(traj, motor, 69.1, alpha);
    const double d = sea::dissipated_energy(traj, motor, 69.1, alpha);
    CHECK(std::fabs(d) <= 1e-6 * (std::fabs(w) + 1.0));
  }
}

TEST_CASE("sweep feasibility agrees with the feasible interval") {
  std::mt19937_64 rng(18);
  auto motor = fixtures::ec30();
  motor.tau_max = 0.6;  // keep most fixtures feasible somewhere
  int compared = 0;
  for (int rep = 0; rep < 15; ++rep) {
    const auto traj = fixtures::random_gait(rng, 256).spectral();
    const sea::DesignProblem prob{traj, motor, fixtures::spring(), 69.1};
    std::vector<double> grid(400);
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 5e-5 * static_cast<double>(k);
    const auto sw = sea::sweep(prob, grid);
    const auto io = sea::feasible_interval(sea::build_nominal(prob));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      bool inside = false;
      double margin = INFINITY;
      if (const auto* iv = std::get_if<sea::FeasibleInterval>(&io)) {
        inside = grid[k] >= iv->lo && grid[k] <= iv->hi;
        margin = std::min(std::fabs(grid[k] - iv->lo), std::fabs(grid[k] - iv->hi));
      }
      if (margin < 1e-9) continue;  // within the violation tolerance of an endpoint
      CHECK(sw.feasible[k] == inside);
      ++compared;
    }
  }
  CHECK(compared > 5000);
}

TEST_CASE("sweep argmin and edge cases") {
  std::mt19937_64 rng(19);
  const auto traj = fixtures::random_gait(rng).spectral();
  const sea::DesignProblem prob{traj, fixtures::ec30(), fixtures::spring(), 69.1};
  const auto obj = sea::energy_coefficients(traj, prob.motor, prob.m);
  const std::vector<double> zero{0.0};
  const auto single = sea::sweep(prob, zero);
  CHECK(single.energies.size() == 1);
  CHECK(single.argmin_alpha == 0.0);
  CHECK(single.energies[0] == doctest::Approx(obj.c()).epsilon(1e-9));

  if (obj.b() < 0.0) {
    const double opt = -obj.b() / (2.0 * obj.a());
    std::vector<double> grid(2001);
    for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 2.0 * opt * static_cast<double>(k) / 2000.0;
    const auto sw = sea::sweep(prob, grid);
    CHECK(std::fabs(sw.argmin_alpha - opt) <= grid[1]);
  }

  const std::vector<double> bad{0.1, 0.05};
  CHECK_THROWS_AS(sea::sweep(prob, bad), sea::Error);
  CHECK_THROWS_AS(sea::oracle_energy(traj, prob.motor, 69.1, -1.0), sea::Error);
}
