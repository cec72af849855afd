#pragma once

// Periodic load trajectories and actuator configuration.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sea {

/// One period of uniformly sampled load kinematics and per-unit-mass load
/// torque, with cyclic spectral derivatives. Sample i sits at t = i * dt and
/// the grid covers [0, n * dt). Immutable after construction.
class PeriodicTrajectory {
 public:
  static constexpr std::size_t kMinSamples = 8;

  /// Differentiates `q_l` and `tau_pm` spectrally. A nonzero `max_harmonic`
  /// low-pass filters both signals (and hence every derivative) first.
  static PeriodicTrajectory from_samples(std::vector<double> q_l, std::vector<double> tau_pm, double dt,
                                         int max_harmonic = 0);

  /// Takes every array as given after validating lengths, dt and the
  /// zero-mean velocity condition.
  static PeriodicTrajectory from_arrays(double dt, std::vector<double> q_l, std::vector<double> dq_l,
                                        std::vector<double> ddq_l, std::vector<double> tau_pm,
                                        std::vector<double> dtau_pm, std::vector<double> ddtau_pm);

  std::size_t size() const noexcept { return q_l_.size(); }
  double dt() const noexcept { return dt_; }
  double period() const noexcept { return dt_ * static_cast<double>(size()); }

  std::span<const double> q_l() const noexcept { return q_l_; }
  std::span<const double> dq_l() const noexcept { return dq_l_; }
  std::span<const double> ddq_l() const noexcept { return ddq_l_; }
  std::span<const double> tau_pm() const noexcept { return tau_pm_; }
  std::span<const double> dtau_pm() const noexcept { return dtau_pm_; }
  std::span<const double> ddtau_pm() const noexcept { return ddtau_pm_; }

 private:
  PeriodicTrajectory() = default;

  double dt_ = 0.0;
  std::vector<double> q_l_, dq_l_, ddq_l_;
  std::vector<double> tau_pm_, dtau_pm_, ddtau_pm_;
};

/// DC motor and transmission constants in SI units.
struct MotorParams {
  double k_t;      // N*m/A
  double R;        // ohm
  double I_m;      // kg*m^2
  double b_m;      // N*m*s/rad
  double r;        // transmission ratio
  double eta;      // transmission efficiency, (0, 1]
  double tau_max;  // N*m
  double v_in;     // V
  double dq_max;   // rad/s

  /// Motor constant k_t / sqrt(R), N*m/sqrt(W).
  double k_m() const;
  void validate() const;
};

struct SpringSpec {
  double delta_max;  // rad
  void validate() const;
};

/// A kinematic uncertainty radius, either absolute or a fraction of the RMS of
/// the nominal signal it perturbs.
struct KinematicBound {
  double value = 0.0;
  bool rms_relative = false;

  double resolve(std::span<const double> nominal) const;
};

struct UncertaintySpec {
  double m_bar = 1.0;        // kg
  double eps_m = 0.0;        // kg
  double eps_q = 0.0;        // rad
  KinematicBound eps_dq;     // rad/s
  KinematicBound eps_ddq;    // rad/s^2
  double eps_eta = 0.0;      // absolute
  double eps_tau_u = 0.0;    // N*m, motor side
  double tau_u_bar = 0.0;    // N*m
  double eps_d = 0.0;        // spring manufacturing factor, [0, 1)

  void validate(const MotorParams& motor) const;
  /// Copy with every radius multiplied by `factor`.
  UncertaintySpec scaled(double factor) const;
};

struct TrajectoryOptions {
  std::optional<double> period_s;
  std::optional<double> normalize_mass_kg;
  double periodic_tol_rad = 1e-3;
  int resample_n = 512;
  int max_harmonic = 0;
};

struct SolverOptions {
  std::size_t verify_samples = 10000;
  double sweep_lo = 0.0;
  double sweep_hi = 0.0;  // 0 selects twice the unconstrained optimum
  std::size_t sweep_points = 201;
};

struct Config {
  MotorParams motor;
  SpringSpec spring;
  UncertaintySpec uncertainty;
  SolverOptions solver;
  TrajectoryOptions trajectory;
};

/// Column names recognized in trajectory CSV headers. Exactly one of each
/// alternative pair must be present.
struct ColumnMap {
  std::string time_s = "time_s";
  std::string percent_gait = "percent_gait";
  std::string q_rad = "q_l_rad";
  std::string q_deg = "q_l_deg";
  std::string tau_per_kg = "tau_l_Nm_per_kg";
  std::string tau_abs = "tau_l_Nm";
};

/// Cyclic spectral derivative of order 1 or 2. With `max_harmonic` > 0 every
/// harmonic above it is discarded.
std::vector<double> differentiate(std::span<const double> samples, double dt, int order, int max_harmonic = 0);

/// Removes every harmonic above `max_harmonic` (no-op for 0).
std::vector<double> low_pass(std::span<const double> samples, int max_harmonic);

/// Parses a trajectory CSV covering one closed period (the final row repeats
/// the phase of the first) and resamples it onto `options.resample_n`
/// uniform points.
PeriodicTrajectory load_trajectory(std::string_view csv, const TrajectoryOptions& options,
                                   const ColumnMap& columns = {});

/// Writes time_s, q_l_rad, tau_l_Nm_per_kg with a closing row at t = n * dt.
/// Reloading with resample_n = n reproduces the trajectory bit for bit.
std::string write_trajectory_csv(const PeriodicTrajectory& trajectory);

Config parse_config(std::string_view json_text);

std::string read_file(const std::string& path);

}  // namespace sea
