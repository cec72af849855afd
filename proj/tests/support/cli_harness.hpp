#pragma once

// Runs the sea-forge executable against scratch directories.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <json.hpp>

#include "fixtures.hpp"

namespace fixtures {

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("sea_forge_" + std::to_string(::getpid()) + "_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

inline nlohmann::json case_config_json() { return nlohmann::json::parse(slurp(data_path("case_study.json"))); }

/// Writes `cfg` into `dir` and returns its path.
inline std::string write_config(const std::filesystem::path& dir, const nlohmann::json& cfg) {
  const auto p = dir / "config.json";
  spit(p, cfg.dump(2));
  return p.string();
}

inline std::string case_trajectory_path() { return data_path("ankle_level_walking.csv"); }

/// Runs `sea-forge <args>` with output captured to `dir/log.txt`; returns the exit status.
inline int run_tool(const std::string& args, const std::filesystem::path& dir) {
  const std::string cmd = std::string("\"") + SEA_FORGE_BIN + "\" " + args + " > \"" + (dir / "log.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

inline std::string io_args(const std::string& config, const std::string& trajectory) {
  return "--config \"" + config + "\" --trajectory \"" + trajectory + "\"";
}

}  // namespace fixtures
