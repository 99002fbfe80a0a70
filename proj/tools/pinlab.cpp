#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pinlab/harness/config.hpp"
#include "pinlab/harness/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

const char* describe(std::string_view e) {
  if (e == "convergence") return "d_H between discrete and continuum maximizers under the coupling, per N";
  if (e == "concentration") return "Gibbs probability of leaving the delta-neighbourhood of the maximizer, per N";
  if (e == "threshold-pinning") return "distribution of the continuum pinning threshold per (alpha, gamma, k)";
  if (e == "threshold-polymer") return "distribution of the polymer threshold per (alpha, k)";
  if (e == "renewal-asymptotics") return "subexponential diagnostics of the renewal law and u(n)/K(n)";
  return "growth_check percentiles for the edge process on two grid resolutions";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pinlab::harness;
  CLI::App app{"pinlab: disordered pinning and polymer experiments"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "run or resume an experiment");
  run->add_option("--config", config_path, "config file (key = value, or JSON)")->required();
  auto* list = app.add_subcommand("list-experiments", "list experiment names");
  auto* check = app.add_subcommand("validate", "check a config without running it");
  check->add_option("--config", config_path, "config file (key = value, or JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*list) {
      for (auto e : kExperiments) std::cout << e << "\t" << describe(e) << "\n";
      return 0;
    }
    const auto cfg = load_config(config_path);
    validate(cfg);
    if (*check) {
      std::cout << "ok: " << cfg.experiment << "\n";
      return 0;
    }
    const auto report = run_experiment(cfg);
    std::cout << cfg.experiment << ": " << report.rows.size() << " rows, " << report.cells_computed
              << " cells computed, " << report.cells_reused << " reused -> " << cfg.out_dir << "\n";
    std::cout << report.summary["results"].dump(2) << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
}
