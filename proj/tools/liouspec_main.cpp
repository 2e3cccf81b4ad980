// SPDX-License-Identifier: Apache-2.0
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "liouspec/errors.hpp"
#include "liouspec/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"liouspec: spectral analysis of a particle coupled to two thermal reservoirs"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int nodes = 0;
  int nmax = -1;
  app.add_option("--config", config_path, "JSON configuration file (defaults to the built-in benchmark)");
  app.add_option("--out", out_dir, "output directory for report.json and tables");
  auto* seed_opt = app.add_option("--seed", seed, "seed for sampled quantities");
  auto* nodes_opt = app.add_option("--nodes", nodes, "signed radial nodes per reservoir")->check(CLI::PositiveNumber);
  auto* nmax_opt = app.add_option("--nmax", nmax, "Fock occupation cutoff")->check(CLI::Range(0, 4));

  const char* names[] = {"levelshift", "spectrum", "resonance", "thresholds", "certify", "sweep"};
  const char* help[] = {"level-shift operators and golden-rule constants",
                        "spectrum of the deformed generator with wedge and Rayleigh checks",
                        "resonance near zero from the Feshbach fixed point",
                        "coupling thresholds of the instability theorem",
                        "instability certificate",
                        "parameter sweep with scaling fits"};
  for (int i = 0; i < 6; ++i) app.add_subcommand(names[i], help[i]);

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    liouspec::RunConfig cfg = config_path.empty() ? liouspec::default_config() : liouspec::load_config(config_path);
    if (*seed_opt) cfg.seed = seed;
    if (*nodes_opt) cfg.grid.n_u = nodes;
    if (*nmax_opt) {
      cfg.n_max = nmax;
      cfg.spectrum_n_max = nmax;
    }
    cfg.validate();
    const liouspec::CommandOutput out = liouspec::run_command(command, cfg);
    liouspec::write_outputs(out, out_dir);
    std::printf("%s: wrote %s/report.json%s%s\n", command.c_str(), out_dir.c_str(),
                out.csv_name.empty() ? "" : " and ", out.csv_name.c_str());
  } catch (const liouspec::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s failed: %s\n", command.c_str(), e.what());
    return 1;
  }
  return 0;
}
