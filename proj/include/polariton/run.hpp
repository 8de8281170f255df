#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "polariton/config.hpp"

namespace polariton {

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitNumerical = 2;

struct RunResult {
  int status = kExitOk;
  std::vector<std::filesystem::path> outputs;  ///< data files, relative to out_dir
  std::string error;
};

/// Executes the configured experiment and writes its outputs under
/// cfg.out_dir, always together with config.json (effective configuration)
/// and manifest.json (seed, version, timings). Failures produce error.json
/// and a nonzero status instead of an exception.
RunResult run_command(const RunConfig& cfg, std::ostream& log);

}  // namespace polariton
