#include "jumpproc/report.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "jumpproc/errors.hpp"

namespace jumpproc {

namespace {

// Full-precision numeric field: shortest text that round-trips a double.
std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void emit_report(const RunReport& report, const std::string& format,
                 std::ostream& os) {
  if (format == "json") {
    nlohmann::ordered_json j;
    j["command"] = report.command;
    j["spec_hash"] = report.spec_hash;
    j["seed"] = report.seed;
    j["all_pass"] = report.all_pass();
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
      nlohmann::ordered_json jc;
      jc["check_name"] = c.name;
      jc["lhs"] = c.lhs;
      jc["rhs"] = c.rhs;
      jc["gap"] = c.gap;
      jc["se"] = c.se;
      jc["n_paths"] = c.n_paths;
      jc["seed"] = report.seed;
      jc["tolerance"] = c.tolerance;
      jc["pass"] = c.pass;
      checks.push_back(std::move(jc));
    }
    os << j.dump(2) << '\n';
  } else if (format == "csv") {
    os << "command,spec_hash,seed,check_name,lhs,rhs,gap,se,n_paths,"
          "tolerance,pass\n";
    for (const auto& c : report.checks) {
      os << report.command << ',' << report.spec_hash << ',' << report.seed
         << ',' << c.name << ',' << num(c.lhs) << ',' << num(c.rhs) << ','
         << num(c.gap) << ',' << num(c.se) << ',' << c.n_paths << ','
         << num(c.tolerance) << ',' << (c.pass ? 1 : 0) << '\n';
    }
  } else {
    throw ValidationError("unknown report format: " + format);
  }
  if (!os) throw IoError("failed to write report");
}

RunReport parse_report_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
  RunReport r;
  r.command = j.at("command").get<std::string>();
  r.spec_hash = j.at("spec_hash").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& jc : j.at("checks")) {
    CheckRecord c;
    c.name = jc.at("check_name").get<std::string>();
    c.lhs = jc.at("lhs").get<double>();
    c.rhs = jc.at("rhs").get<double>();
    c.gap = jc.at("gap").get<double>();
    c.se = jc.at("se").get<double>();
    c.n_paths = jc.at("n_paths").get<long>();
    c.tolerance = jc.at("tolerance").get<double>();
    c.pass = jc.at("pass").get<bool>();
    r.checks.push_back(std::move(c));
  }
  return r;
}

void write_value_csv(const ValueFunction& v, std::ostream& os) {
  os << "t,state,value\n";
  for (int i = 0; i < v.n_nodes(); ++i)
    for (State x = 0; x < v.n_states(); ++x)
      os << num(v.time(i)) << ',' << x << ',' << num(v.at(i, x)) << '\n';
  if (!os) throw IoError("failed to write value table");
}

void write_policy_csv(const FeedbackPolicy& policy, std::ostream& os) {
  os << "cell_index,state,action\n";
  for (int k = 0; k < policy.n_cells(); ++k)
    for (State x = 0; x < policy.n_states(); ++x)
      os << k << ',' << x << ',' << policy.action(k, x) << '\n';
  if (!os) throw IoError("failed to write policy table");
}

void write_paths_csv(const std::vector<MarkedPath>& paths, std::ostream& os) {
  os << "path_id,jump_index,time,from_state,to_state\n";
  for (std::size_t p = 0; p < paths.size(); ++p) {
    const MarkedPath& path = paths[p];
    State from = path.start_state;
    for (int i = 0; i < path.n_jumps(); ++i) {
      os << p << ',' << i << ',' << num(path.jump_times[i]) << ',' << from
         << ',' << path.marks[i] << '\n';
      from = path.marks[i];
    }
  }
  if (!os) throw IoError("failed to write path dump");
}

void write_r_tensor_csv(const std::vector<std::vector<Matrix>>& r,
                        std::ostream& os) {
  os << "cell,from_state,to_state,action,value\n";
  for (std::size_t k = 0; k < r.size(); ++k)
    for (std::size_t u = 0; u < r[k].size(); ++u)
      for (Index x = 0; x < r[k][u].rows(); ++x)
        for (Index y = 0; y < r[k][u].cols(); ++y)
          os << k << ',' << x << ',' << y << ',' << u << ','
             << num(r[k][u](x, y)) << '\n';
  if (!os) throw IoError("failed to write r tensor");
}

FeedbackPolicy read_policy_csv(std::istream& is,
                               const std::vector<double>& breakpoints,
                               int n_states) {
  const int n_cells = static_cast<int>(breakpoints.size()) - 1;
  Matrix table = Matrix::Constant(n_cells, n_states, -1.0);
  std::string line;
  if (!std::getline(is, line))
    throw ParseError("policy csv: missing header row");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    int cell, state, action;
    if (std::sscanf(line.c_str(), "%d,%d,%d", &cell, &state, &action) != 3)
      throw ParseError("policy csv: malformed row '" + line + "'");
    if (cell < 0 || cell >= n_cells || state < 0 || state >= n_states)
      throw ParseError("policy csv: cell or state out of range");
    table(cell, state) = action;
  }
  if ((table.array() < 0.0).any())
    throw ParseError("policy csv: missing entries");
  return FeedbackPolicy(breakpoints, std::move(table));
}

}  // namespace jumpproc
