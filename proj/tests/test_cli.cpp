#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jumpproc/cli.hpp"
#include "support/benchmarks.hpp"
#include "support/expm.hpp"

using namespace jumpproc;
namespace fs = std::filesystem;

namespace {

std::string fixture(const std::string& name) {
  return std::string(JUMPPROC_FIXTURE_DIR) + "/" + name;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("jumpproc_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(JUMPPROC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("the bundled two-state fixture loads and validates") {
  const ProblemSpec spec = load_spec(fixture("two_state.json"));
  CHECK(spec.model.n_states() == 2);
  CHECK(spec.model.lambda_bound() == doctest::Approx(3.0));
  CHECK(spec.driver_tag == "zero");
  CHECK(spec.run.n_paths == 100000);
  CHECK_FALSE(spec.spec_hash.empty());
}

TEST_CASE("the admission and reduction fixtures load and validate") {
  const ProblemSpec adm = load_spec(fixture("admission.json"));
  CHECK(adm.model.n_states() == 3);
  CHECK(adm.model.n_cells() == 4);
  CHECK(adm.driver_tag == "hamiltonian");
  REQUIRE(adm.has_control());
  CHECK(adm.control->n_actions() == 2);
  CHECK(adm.control->r_bound() == doctest::Approx(1.0));

  const ProblemSpec red = load_spec(fixture("reduction.json"));
  REQUIRE(red.reduction.has_value());
  CHECK(red.reduction->lambda_u.size() == 1);
}

TEST_CASE("verify covers the control checks on the admission fixture") {
  const ProblemSpec spec = load_spec(fixture("admission.json"));
  CliOverrides ov;
  ov.out_dir = temp_dir("verify_adm").string();
  ov.n_paths = 2000;
  const RunReport report = run_command("verify", spec, ov);
  CHECK(report.all_pass());
  bool saw_girsanov = false, saw_gap = false;
  for (const auto& c : report.checks) {
    if (c.name == "girsanov_mean_weight") saw_girsanov = true;
    if (c.name == "fundamental_gap_optimal") saw_gap = true;
  }
  CHECK(saw_girsanov);
  CHECK(saw_gap);
}

TEST_CASE("mismatched state counts name both sections") {
  const std::string text = R"({
    "model": {"states": 2, "horizon": 1.0, "time_cells": [0.0, 1.0],
              "nu": [[[0.0, 1.0], [1.0, 0.0]]]},
    "control": {"actions": 1,
                "r": [[[[1.0, 1.0, 1.0], [1.0, 1.0, 1.0], [1.0, 1.0, 1.0]]]],
                "l": [[[0.0], [0.0], [0.0]]],
                "g": [0.0, 0.0, 0.0]}
  })";
  try {
    parse_spec(text);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    CHECK(what.find("model") != std::string::npos);
    CHECK(what.find("control") != std::string::npos);
  }
}

TEST_CASE("an unknown driver tag is a parse error naming the tag") {
  const std::string text = R"({
    "model": {"states": 1, "horizon": 1.0, "time_cells": [0.0, 1.0],
              "nu": [[[0.0]]]},
    "driver": {"type": "quadratic", "g": [0.0]}
  })";
  try {
    parse_spec(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("quadratic") != std::string::npos);
  }
}

TEST_CASE("solve on the two-state fixture matches the exponential oracle") {
  const ProblemSpec spec = load_spec(fixture("two_state.json"));
  CliOverrides ov;
  ov.out_dir = temp_dir("solve").string();
  const RunReport report = run_command("solve", spec, ov);
  CHECK(report.all_pass());

  // First two data rows of value.csv hold v(0, 0) and v(0, 1).
  std::ifstream in(fs::path(ov.out_dir) / "value.csv");
  std::string header, line0, line1;
  std::getline(in, header);
  std::getline(in, line0);
  std::getline(in, line1);
  const double v00 = std::stod(line0.substr(line0.rfind(',') + 1));
  const double v01 = std::stod(line1.substr(line1.rfind(',') + 1));

  Eigen::MatrixXd gen(2, 2);
  gen << -2.0, 2.0, 3.0, -3.0;
  const Eigen::VectorXd oracle =
      testsupport::expm(gen * 1.0) * testsupport::vec2(1.0, 0.0);
  CHECK(std::abs(v00 - oracle(0)) <= 1e-8);
  CHECK(std::abs(v01 - oracle(1)) <= 1e-8);
}

TEST_CASE("verify reruns are byte-identical for a fixed seed") {
  const ProblemSpec spec = load_spec(fixture("two_state.json"));
  CliOverrides ov;
  ov.n_paths = 2000;
  const fs::path a = temp_dir("verify_a");
  const fs::path b = temp_dir("verify_b");
  ov.out_dir = a.string();
  const RunReport ra = run_command("verify", spec, ov);
  ov.out_dir = b.string();
  const RunReport rb = run_command("verify", spec, ov);
  CHECK(ra.all_pass());
  CHECK(rb.all_pass());
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
}

TEST_CASE("simulate dumps a deterministic path table") {
  const ProblemSpec spec = load_spec(fixture("two_state.json"));
  CliOverrides ov;
  ov.n_paths = 500;
  const fs::path a = temp_dir("sim_a");
  const fs::path b = temp_dir("sim_b");
  ov.out_dir = a.string();
  REQUIRE(run_command("simulate", spec, ov).all_pass());
  ov.out_dir = b.string();
  REQUIRE(run_command("simulate", spec, ov).all_pass());
  const std::string dump = slurp(a / "paths.csv");
  CHECK(dump == slurp(b / "paths.csv"));
  CHECK(dump.rfind("path_id,jump_index,time,from_state,to_state\n", 0) == 0);
}

TEST_CASE("evaluate-policy cross-validates the two estimators") {
  const ProblemSpec spec = load_spec(fixture("admission.json"));
  CliOverrides ov;
  ov.out_dir = temp_dir("eval").string();
  ov.n_paths = 5000;
  const RunReport report = run_command("evaluate-policy", spec, ov);
  REQUIRE(report.checks.size() == 1);
  CHECK(report.checks[0].name == "estimator_agreement");
  CHECK(report.checks[0].pass);
}

TEST_CASE("evaluate-policy accepts an imported policy file") {
  const ProblemSpec spec = load_spec(fixture("admission.json"));
  const fs::path dir = temp_dir("eval_import");
  const fs::path policy_file = dir / "all_admit.csv";
  {
    std::ofstream os(policy_file);
    os << "cell_index,state,action\n";
    for (int k = 0; k < 4; ++k)
      for (int x = 0; x < 3; ++x) os << k << ',' << x << ",0\n";
  }
  CliOverrides ov;
  ov.out_dir = dir.string();
  ov.n_paths = 5000;
  ov.policy_path = policy_file.string();
  const RunReport report = run_command("evaluate-policy", spec, ov);
  CHECK(report.all_pass());
  // The emitted policy echoes the import.
  CHECK(slurp(dir / "policy.csv") == slurp(policy_file));
}

TEST_CASE("reduce writes the kernel recovered from controlled rates") {
  const ProblemSpec spec = load_spec(fixture("reduction.json"));
  CliOverrides ov;
  ov.out_dir = temp_dir("reduce").string();
  const RunReport report = run_command("reduce", spec, ov);
  CHECK(report.all_pass());
  const std::string csv = slurp(fs::path(ov.out_dir) / "r_tensor.csv");
  CHECK(csv.find("cell,from_state,to_state,action,value") == 0);
  // Action 1 halves both rates: r = 0.5 on the charged transitions.
  CHECK(csv.find("0,0,1,1,0.5") != std::string::npos);
  CHECK(csv.find("0,1,0,1,0.5") != std::string::npos);
}

TEST_CASE("report serialization round-trips and degrades to headers") {
  RunReport empty;
  empty.command = "verify";
  empty.spec_hash = "abc";
  empty.seed = 9;
  std::ostringstream csv;
  emit_report(empty, "csv", csv);
  CHECK(csv.str() ==
        "command,spec_hash,seed,check_name,lhs,rhs,gap,se,n_paths,"
        "tolerance,pass\n");

  RunReport one = empty;
  one.checks.push_back({"demo", 1.5, 1.25, 0.25, 0.125, 100, 0.5, true});
  std::ostringstream csv1;
  emit_report(one, "csv", csv1);
  CHECK(csv1.str().find("verify,abc,9,demo,1.5,1.25,0.25,0.125,100,0.5,1") !=
        std::string::npos);

  std::ostringstream js;
  emit_report(one, "json", js);
  const RunReport parsed = parse_report_json(js.str());
  CHECK(parsed.command == one.command);
  CHECK(parsed.spec_hash == one.spec_hash);
  CHECK(parsed.seed == one.seed);
  REQUIRE(parsed.checks.size() == 1);
  CHECK(parsed.checks[0].name == "demo");
  CHECK(parsed.checks[0].lhs == 1.5);
  CHECK(parsed.checks[0].gap == 0.25);
  CHECK(parsed.checks[0].pass);
}

TEST_CASE("the binary maps errors to the documented exit codes") {
  const fs::path dir = temp_dir("exit_codes");

  CHECK(run_cli("solve --spec " + fixture("two_state.json") + " --out " +
                (dir / "ok").string()) == 0);
  CHECK(run_cli("solve --spec " + (dir / "missing.json").string()) == 2);

  const fs::path bad = dir / "diagonal.json";
  {
    std::ofstream os(bad);
    os << R"({"model": {"states": 2, "horizon": 1.0,
              "time_cells": [0.0, 1.0],
              "nu": [[[0.5, 1.0], [1.0, 0.0]]]}})";
  }
  CHECK(run_cli("solve --spec " + bad.string()) == 5);

  // Step that does not divide the horizon.
  CHECK(run_cli("solve --spec " + fixture("two_state.json") + " --step 0.3 " +
                "--out " + (dir / "grid").string()) == 6);

  // Missing control section for solve-hjb.
  CHECK(run_cli("solve-hjb --spec " + fixture("two_state.json") + " --out " +
                (dir / "hjb").string()) == 3);
}
