#pragma once

// Orchestration of a fully configured run: mesh and space construction,
// restart handling, the time march, and all file outputs. Shared by the CLI
// and the python module.

#include "visco/config.hpp"

namespace visco {

struct RunSummary {
  long steps = 0;
  double t_end = 0.0;
  int total_iterations = 0;
  std::string csv_path;  // empty when no CSV was requested
};

/// Runs cfg to completion; relative output paths land in out_dir (created if
/// missing, current directory when empty).
RunSummary run_configured(const RunConfig& cfg, const std::string& out_dir = "");

}  // namespace visco
