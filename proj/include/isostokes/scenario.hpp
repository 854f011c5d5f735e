#pragma once
// Scenario runner behind the command-line tool.
#include <string>
#include <vector>

#include "isostokes/io.hpp"

namespace iso {

struct RunOptions {
  int precision = 53;
  std::string mode = "auto";  // exact | float | auto
  std::string out_dir;        // empty: no files
};

enum ExitCode { ExitPass = 0, ExitCheckFailure = 1, ExitConfigError = 2, ExitNumericFailure = 3 };

struct ScenarioResult {
  json report;
  int exit_code = ExitPass;
  std::string summary;  // short human-readable text
  std::vector<std::string> files;
};

// Scenario kinds: rays, cells, formal, levelt, connect, flow, verify, painleve-a3.
// kind_override, when non-empty, must agree with the config's kind (or supplies it).
ScenarioResult run_scenario(const json& config, const RunOptions& opt = {}, const std::string& kind_override = "");

// Plot kinds: rays, cells-2d-slice, flow-trace, remainder-decay. Writes CSV.
// Throws KindMismatch when the report does not carry the data.
void emit_plot_data(const json& report, const std::string& kind, const std::string& path);

}  // namespace iso
