#pragma once

// Worst-case tightening of the constraint rows over a box of uncertain
// trajectories and parameters.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "seaforge/constraints.hpp"
#include "seaforge/gait_io.hpp"
#include "seaforge/oracle.hpp"

namespace sea {

struct Interval {
  double lo;
  double hi;
};

/// Cartesian product of per-sample kinematic intervals and scalar intervals.
/// Position intervals are carried for completeness; no row depends on q_l.
struct UncertaintyBox {
  std::vector<Interval> q_l, dq_l, ddq_l;
  Interval m, eta, tau_u, spring_factor;
  double m_bar;
  double tau_u_bar;
  double eps_tau_u;
  double eps_d;
  double eps_dq, eps_ddq;  // resolved absolute radii
};

/// Throws InvariantViolation when an interval is empty, m is not strictly
/// positive, or eta leaves (0, 1].
UncertaintyBox build_box(const UncertaintySpec& spec, const PeriodicTrajectory& traj, const MotorParams& motor);

/// Vertex of the five factors a single row depends on, one bit per factor
/// (set = upper end of the interval).
enum VertexBit : std::uint8_t {
  kVertexMassHi = 1,
  kVertexEtaHi = 2,
  kVertexTauUHi = 4,
  kVertexDqHi = 8,
  kVertexDdqHi = 16,
};
inline constexpr std::uint8_t kVertexCount = 32;

/// A point of the row sub-box: scalar factors plus the kinematics of the row's sample.
struct RowPoint {
  double m;
  double eta;
  double tau_u;
  double dq_l;
  double ddq_l;
};

RowPoint vertex_point(const UncertaintyBox& box, std::size_t sample, std::uint8_t vertex) noexcept;

/// Bound of row (family, sample) at `point`, rescaled to the materialization
/// mass problem.m: (problem.m / point.m) * e(point).
double row_bound_at(const DesignProblem& problem, RowFamily family, std::size_t sample, const RowPoint& point) noexcept;

struct RobustConstraintSystem {
  std::vector<double> d_bar;
  std::vector<double> e_under;
  std::vector<RowLabel> labels;
  std::vector<std::uint8_t> provenance;  // VertexBit mask of each row's minimizer

  std::size_t size() const noexcept { return d_bar.size(); }
  ConstraintSystem as_system() const;
};

/// d_bar = d + eps_d |d|; e_under = minimum of row_bound_at over the 32
/// vertices of each row's sub-box. problem.m must equal box.m_bar.
RobustConstraintSystem tighten(const DesignProblem& problem, const UncertaintyBox& box);

/// The sign-case closed form of the worst-case bound, kept as an independent
/// path for cross-checking tighten.
std::vector<double> tighten_closed_form(const DesignProblem& problem, const UncertaintyBox& box);

struct FamilyViolation {
  RowFamily family;
  double max_violation;  // relative to the family limit; <= 0 means satisfied
  bool violated;
  std::size_t sample;
  // Witness realization.
  double m, eta, tau_u, spring_factor, dq_offset, ddq_offset;
  bool vertex;  // witness came from the vertex pass rather than random sampling
};

struct ViolationReport {
  double alpha;
  std::size_t points_tested;
  std::vector<FamilyViolation> families;  // one entry per active family

  bool feasible() const noexcept;
};

/// Simulates compliance `alpha` at every uniform vertex of the box (scalar
/// vertices times sign patterns of the kinematic offsets) and at `n_samples`
/// uniformly drawn box points from a seeded std::mt19937_64.
ViolationReport verify_feasibility(double alpha, const DesignProblem& problem, const UncertaintyBox& box,
                                   std::size_t n_samples, std::uint64_t seed);

}  // namespace sea
