#pragma once

#include <filesystem>
#include <string>

#include "pjacobi/harness/config.hpp"
#include "pjacobi/harness/report.hpp"

namespace pjacobi::harness {

inline constexpr const char* kOutDirEnv = "PJACOBI_OUT_DIR";

struct RunOptions {
  std::filesystem::path out_dir;
  int threads = 1;
};

/// Executes the task and writes its CSV tables plus report.json into out_dir.
/// Module errors propagate as pjacobi::Error.
RunReport run(const ExperimentConfig& config, const RunOptions& options);

/// Maps any exception escaping parse/run to the exit-code contract.
int exit_code_for_current_exception();

}  // namespace pjacobi::harness
