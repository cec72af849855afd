#pragma once

// Exact solution of min a alpha^2 + b alpha + c subject to d alpha <= e.

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "seaforge/constraints.hpp"
#include "seaforge/energy_objective.hpp"
#include "seaforge/robust.hpp"

namespace sea {

struct FeasibleInterval {
  double lo;  // >= 0; a value of 0 stands for the open end 0+
  double hi;  // may be +inf
  std::optional<RowLabel> binding_lo;
  std::optional<RowLabel> binding_hi;
};

struct Infeasible {
  std::vector<RowLabel> witnesses;  // a gate row, or the lower and upper rows that cross
  std::string reason;
};

using IntervalOutcome = std::variant<FeasibleInterval, Infeasible>;

IntervalOutcome feasible_interval(std::span<const double> d, std::span<const double> e,
                                  std::span<const RowLabel> labels);
IntervalOutcome feasible_interval(const ConstraintSystem& sys);
IntervalOutcome feasible_interval(const RobustConstraintSystem& sys);

struct DesignResult {
  double alpha_star;
  std::optional<double> k_star;  // empty when the rigid drive is recommended
  double energy;                 // J per period
  double energy_rigid;           // c
  double savings_fraction;       // (c - energy) / (c - load_work)
  double savings_fraction_total; // (c - energy) / c
  std::vector<RowLabel> active_rows;
  FeasibleInterval interval;
  bool rigid_recommended;
};

using DesignOutcome = std::variant<DesignResult, Infeasible>;

DesignOutcome solve(const QuadraticObjective& obj, const ConstraintSystem& sys, double load_work);
DesignOutcome solve(const QuadraticObjective& obj, const RobustConstraintSystem& sys, double load_work);

/// Minimizer of the objective over [interval.lo, interval.hi]; ties go to the
/// smaller compliance. Returns nullopt when the objective is unbounded below.
std::optional<double> clamp_minimizer(const QuadraticObjective& obj, const FeasibleInterval& interval) noexcept;

}  // namespace sea
