#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seaforge/cli.hpp"
#include "seaforge/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Series elastic actuator spring design"};
  app.set_version_flag("--version", sea::cli::kToolVersion);
  app.require_subcommand(1);

  std::string config, trajectory, out;
  double alpha = 0.0;
  std::size_t samples = 0;
  std::string grid;

  auto common = [&](CLI::App* sub, bool out_required) {
    sub->add_option("--config", config, "JSON configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--trajectory", trajectory, "trajectory CSV")->required()->check(CLI::ExistingFile);
    auto* o = sub->add_option("--out", out, "output directory");
    if (out_required) o->required();
  };

  auto* design = app.add_subcommand("design", "nominal and robust stiffness design");
  common(design, true);

  auto* verify = app.add_subcommand("verify", "check a compliance against the uncertainty box");
  common(verify, false);
  verify->add_option("--alpha", alpha, "compliance, rad/(N*m)")->required();
  auto* samples_opt = verify->add_option("--samples", samples, "random box points");

  auto* sweep = app.add_subcommand("sweep", "energy over a compliance grid");
  common(sweep, true);
  auto* grid_opt = sweep->add_option("--grid", grid, "lo:hi:n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : sea::cli::kInputError;
  }

  if (*design) return sea::cli::run_design(config, trajectory, out, std::cout);
  if (*verify) {
    std::optional<std::size_t> n;
    if (*samples_opt) n = samples;
    std::optional<std::string> dir;
    if (!out.empty()) dir = out;
    return sea::cli::run_verify(config, trajectory, alpha, n, dir, std::cout);
  }
  std::optional<sea::cli::GridSpec> g;
  if (*grid_opt) {
    try {
      g = sea::cli::parse_grid(grid);
    } catch (const sea::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return sea::cli::kInputError;
    }
  }
  return sea::cli::run_sweep(config, trajectory, out, g, std::cout);
}
