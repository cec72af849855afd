#pragma once

// Data-parallel inner loops used by the design math.
//
// Every kernel has a portable scalar reference implementation and, on x86-64,
// an AVX2 variant. `active()` picks one at runtime from the CPU feature bits;
// setting SEA_FORGE_KERNELS=scalar in the environment forces the reference
// path. Element-wise kernels and min/max reductions are bit-identical across
// variants; summations differ only by association order.

#include <cstddef>
#include <span>

namespace sea::kernels {

/// Result of scanning affine rows d[i]*x <= e[i] for the admissible x range.
struct RatioBounds {
  double lo;        // max of e/d over rows with d < 0, -inf when there are none
  double hi;        // min of e/d over rows with d > 0, +inf when there are none
  double gate_min;  // min of e over rows with d == 0, +inf when there are none
};

/// Inputs of the fused motor-energy integrand. Arrays are per-unit-mass load
/// torque samples and load kinematics; the kernel rebuilds the motor state for
/// compliance `alpha` from the torque balance and accumulates
/// tau_m^2 * inv_km2 + tau_m * dq_m.
struct MotorEnergyArgs {
  const double* dq_l;
  const double* ddq_l;
  const double* tau_pm;
  const double* dtau_pm;
  const double* ddtau_pm;
  std::size_t n;
  double m;
  double alpha;
  double r;
  double inertia;
  double damping;
  double eta;
  double tau_u;
  double inv_km2;
};

struct Table {
  const char* name;
  double (*sum)(const double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*affine)(const double* slope, double x, const double* offset, double* out, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
  double (*max_excess)(const double* d, const double* e, double x, std::size_t n);
  RatioBounds (*ratio_bounds)(const double* d, const double* e, std::size_t n);
  double (*motor_energy_sum)(const MotorEnergyArgs& args);
};

const Table& scalar() noexcept;

/// AVX2 table, or nullptr when it was not compiled in or the CPU lacks AVX2.
const Table* avx2() noexcept;

const Table& active() noexcept;

inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline void affine(std::span<const double> slope, double x, std::span<const double> offset,
                   std::span<double> out) {
  active().affine(slope.data(), x, offset.data(), out.data(), out.size());
}
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }
inline double max_excess(std::span<const double> d, std::span<const double> e, double x) {
  return active().max_excess(d.data(), e.data(), x, d.size());
}
inline RatioBounds ratio_bounds(std::span<const double> d, std::span<const double> e) {
  return active().ratio_bounds(d.data(), e.data(), d.size());
}
inline double motor_energy_sum(const MotorEnergyArgs& args) { return active().motor_energy_sum(args); }

}  // namespace sea::kernels
