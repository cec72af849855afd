#include "seaforge/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seaforge/kernels.hpp"

namespace sea {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DesignOutcome solve_rows(const QuadraticObjective& obj, std::span<const double> d, std::span<const double> e,
                         std::span<const RowLabel> labels, double load_work) {
  IntervalOutcome io = feasible_interval(d, e, labels);
  if (auto* inf = std::get_if<Infeasible>(&io)) return *inf;
  const FeasibleInterval iv = std::get<FeasibleInterval>(io);
  const auto alpha = clamp_minimizer(obj, iv);
  if (!alpha) return Infeasible{{}, "objective is unbounded below on the feasible interval"};

  DesignResult r{};
  r.alpha_star = *alpha;
  r.rigid_recommended = r.alpha_star == 0.0;
  if (!r.rigid_recommended) r.k_star = 1.0 / r.alpha_star;
  r.energy = obj.evaluate(r.alpha_star);
  r.energy_rigid = obj.c();
  const double dissipated_rigid = obj.c() - load_work;
  r.savings_fraction = dissipated_rigid != 0.0 ? (obj.c() - r.energy) / dissipated_rigid : 0.0;
  r.savings_fraction_total = obj.c() != 0.0 ? (obj.c() - r.energy) / obj.c() : 0.0;
  r.interval = iv;
  if (r.alpha_star == iv.lo || r.alpha_star == iv.hi) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] != 0.0 && e[i] / d[i] == r.alpha_star) r.active_rows.push_back(labels[i]);
    }
  }
  return r;
}

}  // namespace

IntervalOutcome feasible_interval(std::span<const double> d, std::span<const double> e,
                                  std::span<const RowLabel> labels) {
  const kernels::RatioBounds rb = kernels::ratio_bounds(d, e);

  // Second pass for labels: first row achieving each bound.
  std::optional<RowLabel> lo_row, hi_row, gate_row;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] < 0.0) {
      if (!lo_row && e[i] / d[i] == rb.lo) lo_row = labels[i];
    } else if (d[i] > 0.0) {
      if (!hi_row && e[i] / d[i] == rb.hi) hi_row = labels[i];
    } else if (!gate_row && e[i] == rb.gate_min) {
      gate_row = labels[i];
    }
  }

  if (rb.gate_min < 0.0) return Infeasible{{*gate_row}, "row 0 * alpha <= e with e < 0"};
  FeasibleInterval iv{std::max(0.0, rb.lo), rb.hi, std::nullopt, std::nullopt};
  if (rb.lo >= 0.0 && lo_row) iv.binding_lo = lo_row;
  if (rb.hi < kInf) iv.binding_hi = hi_row;
  if (iv.hi < iv.lo) {
    Infeasible out{{}, "lower bound exceeds upper bound"};
    if (iv.binding_lo) out.witnesses.push_back(*iv.binding_lo);
    if (hi_row) out.witnesses.push_back(*hi_row);
    if (iv.hi < 0.0) out.reason = "upper bound is negative";
    return out;
  }
  return iv;
}

IntervalOutcome feasible_interval(const ConstraintSystem& sys) { return feasible_interval(sys.d, sys.e, sys.labels); }

IntervalOutcome feasible_interval(const RobustConstraintSystem& sys) {
  return feasible_interval(sys.d_bar, sys.e_under, sys.labels);
}

std::optional<double> clamp_minimizer(const QuadraticObjective& obj, const FeasibleInterval& iv) noexcept {
  if (obj.a() > 0.0) return std::clamp(-obj.b() / (2.0 * obj.a()), iv.lo, iv.hi);
  if (obj.b() < 0.0) {
    if (iv.hi == kInf) return std::nullopt;
    return iv.hi;
  }
  return iv.lo;
}

DesignOutcome solve(const QuadraticObjective& obj, const ConstraintSystem& sys, double load_work) {
  return solve_rows(obj, sys.d, sys.e, sys.labels, load_work);
}

DesignOutcome solve(const QuadraticObjective& obj, const RobustConstraintSystem& sys, double load_work) {
  return solve_rows(obj, sys.d_bar, sys.e_under, sys.labels, load_work);
}

}  // namespace sea
