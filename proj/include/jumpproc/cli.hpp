#pragma once

#include <optional>
#include <string>

#include "jumpproc/report.hpp"
#include "jumpproc/spec_file.hpp"

namespace jumpproc {

/// Exit code when a command ran but at least one check failed.
inline constexpr int kChecksFailedExit = 11;

/// Command-line overrides of the spec file's run parameters plus output
/// control.
struct CliOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> n_paths;
  std::optional<double> step;
  std::optional<double> start_time;
  std::optional<State> start_state;
  std::string out_dir = ".";
  std::string format = "json";   // report format: json | csv
  std::string policy_path;       // evaluate-policy: import instead of solving
};

/// Dispatches one command (solve, solve-hjb, simulate, evaluate-policy,
/// verify, reduce), writes its output files under out_dir, and returns the
/// run report. Throws the module errors on invalid input; check failures are
/// reported, not thrown.
RunReport run_command(const std::string& command, const ProblemSpec& spec,
                      const CliOverrides& overrides);

}  // namespace jumpproc
