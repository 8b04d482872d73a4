#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "jumpproc/control_model.hpp"
#include "jumpproc/path.hpp"
#include "jumpproc/value_function.hpp"

namespace jumpproc {

/// One verification record: two estimated sides, their gap, the Monte Carlo
/// standard error (0 for deterministic checks), and the pass verdict at the
/// stated tolerance.
struct CheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double se = 0.0;
  long n_paths = 0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Machine-readable outcome of one CLI command. Wall-clock timing is
/// reported on stderr only, keeping emitted files byte-identical across
/// reruns with the same spec and seed.
struct RunReport {
  std::string command;
  std::string spec_hash;
  std::uint64_t seed = 0;
  double timing_ms = 0.0;
  std::vector<CheckRecord> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Serializes the report; format is "json" (single object, documented key
/// order) or "csv" (header row plus one row per check, 17 significant
/// digits). Throws IoError on bad streams, ValidationError on unknown format.
void emit_report(const RunReport& report, const std::string& format,
                 std::ostream& os);

/// Parses a JSON report back; inverse of emit_report("json").
RunReport parse_report_json(const std::string& text);

/// CSV writers for the fixed file formats (17 significant digits, '.'
/// decimal separator, header row).
void write_value_csv(const ValueFunction& v, std::ostream& os);
void write_policy_csv(const FeedbackPolicy& policy, std::ostream& os);
void write_paths_csv(const std::vector<MarkedPath>& paths, std::ostream& os);
void write_r_tensor_csv(const std::vector<std::vector<Matrix>>& r,
                        std::ostream& os);

/// Reads a policy CSV (columns cell_index,state,action) against the given
/// breakpoints. Throws ParseError on malformed rows.
FeedbackPolicy read_policy_csv(std::istream& is,
                               const std::vector<double>& breakpoints,
                               int n_states);

}  // namespace jumpproc
