// Command-line front end: polariton <experiment> --config cfg.json [options]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polariton/config.hpp"
#include "polariton/run.hpp"

namespace {

int report_validation(const std::string& message, const std::optional<std::string>& key,
                      const std::optional<std::filesystem::path>& out_dir) {
  nlohmann::ordered_json err;
  err["kind"] = "validation";
  if (key) err["key"] = *key;
  err["message"] = message;
  err["status"] = polariton::kExitValidation;
  std::cerr << err.dump() << '\n';
  if (out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    std::ofstream(*out_dir / "error.json") << err.dump(2) << '\n';
  }
  return polariton::kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pumped exciton-polariton double well: simulation and analysis"};
  app.set_version_flag("--version", std::string(polariton::kVersion));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;

  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "integrate one trajectory and write trajectory.dat"},
      {"ensemble", "run N noisy realizations; write mean series and ensemble g1"},
      {"steady", "closed-form fixed point and threshold"},
      {"spectrum", "eigenvalue bifurcation scan of the two-mode matrix"},
      {"correlate", "ensemble and time-averaged g1 with decay fits"},
      {"sweep", "grid of steady-state results over one model parameter"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--out-dir", out_dir, "output directory (overrides out_dir)");
    sub->add_option("--seed", seed, "random seed (overrides seed)");
    sub->add_option("--workers", workers, "ensemble worker threads (0 = all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : polariton::kExitValidation;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const std::optional<std::filesystem::path> dir =
      out_dir ? std::optional<std::filesystem::path>(*out_dir) : std::nullopt;

  polariton::RunConfig cfg;
  try {
    cfg = polariton::load_config(config_path);
    cfg.experiment = polariton::experiment_from_string(command);
  } catch (const polariton::ConfigError& e) {
    return report_validation(e.what(), e.key(), dir);
  }
  if (dir) cfg.out_dir = *dir;
  if (seed) cfg.seed = *seed;
  if (workers) cfg.ensemble.workers = *workers;

  try {
    const polariton::RunResult result = polariton::run_command(cfg, std::cerr);
    if (result.status == polariton::kExitOk) {
      std::cout << "wrote";
      for (const auto& f : result.outputs) std::cout << ' ' << (cfg.out_dir / f).string();
      std::cout << '\n';
    }
    return result.status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return polariton::kExitNumerical;
  }
}
