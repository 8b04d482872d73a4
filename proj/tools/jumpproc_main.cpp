#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "jumpproc/cli.hpp"

namespace {

constexpr const char* kExitCodeHelp = R"(Exit codes:
  0   all checks passed
  1   unexpected error
  2   spec or policy file failed to parse (ParseError)
  3   sections inconsistent or command prerequisites missing (ValidationError)
  4   negative rate entry (NegativeRate)
  5   nonzero diagonal rate entry (DiagonalRate)
  6   bad time grid or misaligned breakpoints (BadGrid)
  7   time or state out of range (OutOfRange)
  8   solver produced NaN/inf (NonFiniteValue)
  9   controlled kernel not absolutely continuous (NotAbsolutelyContinuous)
  10  output file error (IoError)
  11  command ran but at least one check failed
)";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "jumpproc: solve, simulate, and verify finite-state jump-process "
      "control problems.\n\nCommands write their tables (value.csv, "
      "policy.csv, paths.csv, r_tensor.csv) and a machine-readable report "
      "(report.json or report.csv) into --out."};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = ".";
  std::string format = "json";
  std::string start;
  std::string policy_path;
  std::uint64_t seed = 0;
  int n_paths = 0;
  double step = 0.0;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "problem-spec JSON file")->required();
    cmd->add_option("--seed", seed, "override run.seed");
    cmd->add_option("--paths", n_paths, "override run.n_paths");
    cmd->add_option("--step", step, "override run.step (grid width h)");
    cmd->add_option("--start", start, "override start point as T,X");
    cmd->add_option("--out", out_dir, "output directory (default .)");
    cmd->add_option("--format", format, "report format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
  };

  CLI::App* solve = app.add_subcommand(
      "solve", "solve the nonlinear Kolmogorov equation -> value.csv");
  CLI::App* solve_hjb = app.add_subcommand(
      "solve-hjb", "solve the HJB equation -> value.csv + policy.csv");
  CLI::App* simulate = app.add_subcommand(
      "simulate", "sample marked-point-process paths -> paths.csv");
  CLI::App* evaluate = app.add_subcommand(
      "evaluate-policy",
      "estimate a policy's cost by direct and reweighted Monte Carlo");
  CLI::App* verify = app.add_subcommand(
      "verify", "run the full verification report against the spec");
  CLI::App* reduce = app.add_subcommand(
      "reduce", "rebuild the control kernel r from controlled rates");
  for (CLI::App* cmd : {solve, solve_hjb, simulate, evaluate, verify, reduce})
    add_common(cmd);
  evaluate->add_option("--policy", policy_path,
                       "policy CSV to evaluate (default: solve HJB)");

  CLI11_PARSE(app, argc, argv);

  try {
    jumpproc::CliOverrides ov;
    ov.out_dir = out_dir;
    ov.format = format;
    ov.policy_path = policy_path;
    if (solve->count("--seed") || solve_hjb->count("--seed") ||
        simulate->count("--seed") || evaluate->count("--seed") ||
        verify->count("--seed") || reduce->count("--seed"))
      ov.seed = seed;
    if (n_paths > 0) ov.n_paths = n_paths;
    if (step > 0.0) ov.step = step;
    if (!start.empty()) {
      const auto comma = start.find(',');
      if (comma == std::string::npos)
        throw jumpproc::ValidationError("--start expects T,X");
      ov.start_time = std::stod(start.substr(0, comma));
      ov.start_state = std::stoi(start.substr(comma + 1));
    }

    const jumpproc::ProblemSpec spec = jumpproc::load_spec(spec_path);
    const std::string command = app.get_subcommands().front()->get_name();
    const jumpproc::RunReport report =
        jumpproc::run_command(command, spec, ov);

    std::cerr << command << ": " << report.checks.size() << " checks, "
              << (report.all_pass() ? "all passed" : "FAILURES") << " ("
              << report.timing_ms << " ms)\n";
    for (const auto& c : report.checks)
      std::cerr << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name
                << " gap=" << c.gap << " tol=" << c.tolerance << "\n";
    return report.all_pass() ? 0 : jumpproc::kChecksFailedExit;
  } catch (const jumpproc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
