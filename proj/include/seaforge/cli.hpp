#pragma once

// Command implementations behind the sea-forge executable.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace sea::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kInputError = 1, kInfeasible = 2 };

struct GridSpec {
  double lo;
  double hi;
  std::size_t n;
};

/// Parses "lo:hi:n". n = 1 requires lo == hi.
GridSpec parse_grid(const std::string& text);

/// Seed for box sampling: SEA_FORGE_SEED when set, otherwise 0.
std::uint64_t sampling_seed();

/// Writes report.json, energy_vs_compliance.csv, torque_speed_envelope.csv and
/// feasibility_witnesses.csv into `out_dir`. Returns 2 when the nominal or
/// robust design is infeasible.
int run_design(const std::string& config_path, const std::string& trajectory_path, const std::string& out_dir,
               std::ostream& log);

/// Prints the per-family violation table for compliance `alpha` and, when
/// `out_dir` is given, writes it to violations.csv. Returns 2 when any family
/// is violated.
int run_verify(const std::string& config_path, const std::string& trajectory_path, double alpha,
               std::optional<std::size_t> samples, const std::optional<std::string>& out_dir, std::ostream& out);

/// Writes sweep.csv with model and oracle energies per compliance.
int run_sweep(const std::string& config_path, const std::string& trajectory_path, const std::string& out_dir,
              const std::optional<GridSpec>& grid, std::ostream& log);

}  // namespace sea::cli
