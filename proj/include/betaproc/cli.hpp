#pragma once

#include <string>
#include <vector>

#include "betaproc/config.hpp"

namespace betaproc::cli {

struct CommandResult {
  /// 0 when every tolerance was met, 1 otherwise.
  int exit_code = 0;
  /// Files written, in write order.
  std::vector<std::string> files;
  /// One line per check, for the terminal.
  std::vector<std::string> lines;
};

/// Simulates `replicates` independent paths per n and writes one snapshot
/// file per (n, t) point: sample_<process>_n<N>_t<i>.{csv,json}. With
/// spectral = true also spectral_<process>_n<N>_t<i>.{csv,json}.
CommandResult cmd_sample(const ExperimentConfig& config);

/// Runs the configured check. Always writes <out>/report.json; curve
/// experiments also write <out>/curve.csv.
CommandResult cmd_verify(const ExperimentConfig& config);

/// One SVG per input (spectral table -> histogram with the limit density,
/// curve -> log-log plot), written as <out_dir>/<input stem>.svg. Throws
/// std::runtime_error on unreadable or foreign input, before writing anything.
CommandResult cmd_plot(const std::vector<std::string>& inputs, const std::string& out_dir);

}  // namespace betaproc::cli
