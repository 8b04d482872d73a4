#include "jumpproc/spec_file.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace jumpproc {

namespace {

using nlohmann::json;

Vector to_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + ": expected array");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ParseError(std::string(what) + ": expected numeric entries");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix to_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string(what) + ": expected matrix (array of rows)");
  const std::size_t rows = j.size();
  Matrix m;
  for (std::size_t i = 0; i < rows; ++i) {
    Vector row = to_vector(j[i], what);
    if (i == 0) m.resize(rows, row.size());
    if (row.size() != m.cols())
      throw ParseError(std::string(what) + ": ragged matrix rows");
    m.row(static_cast<Index>(i)) = row.transpose();
  }
  return m;
}

const json& require(const json& j, const char* key, const char* section) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(section) + ": missing field '" + key + "'");
  return *it;
}

Model parse_model(const json& j) {
  ModelData data;
  data.n_states = require(j, "states", "model").get<int>();
  if (auto it = j.find("labels"); it != j.end())
    data.labels = it->get<std::vector<std::string>>();
  data.horizon = require(j, "horizon", "model").get<double>();
  data.breakpoints =
      require(j, "time_cells", "model").get<std::vector<double>>();
  for (const auto& cell : require(j, "nu", "model"))
    data.nu.push_back(to_matrix(cell, "model.nu"));
  return validate_model(data);
}

std::shared_ptr<const ControlModel> parse_control(const json& j,
                                                  const Model& model) {
  ControlModelData data;
  data.n_actions = require(j, "actions", "control").get<int>();
  if (auto it = j.find("action_labels"); it != j.end())
    data.action_labels = it->get<std::vector<std::string>>();

  const json& r = require(j, "r", "control");
  for (const auto& cell : r) {
    std::vector<Matrix> per_action;
    for (const auto& mat : cell)
      per_action.push_back(to_matrix(mat, "control.r"));
    data.r.push_back(std::move(per_action));
  }
  for (const auto& cell : require(j, "l", "control"))
    data.l.push_back(to_matrix(cell, "control.l"));
  data.g = to_vector(require(j, "g", "control"), "control.g");

  for (const auto& cell : data.r)
    for (const auto& mat : cell)
      if (mat.rows() != model.n_states())
        throw ValidationError(
            "sections 'model' and 'control' disagree on the state count");
  return std::make_shared<const ControlModel>(
      validate_control_model(model, data));
}

ControlledKernelData parse_reduction(const json& j) {
  ControlledKernelData data;
  for (const auto& cell : require(j, "lambda_u", "reduction"))
    data.lambda_u.push_back(to_matrix(cell, "reduction.lambda_u"));
  for (const auto& cell : require(j, "pi_u", "reduction")) {
    std::vector<Matrix> per_action;
    for (const auto& mat : cell)
      per_action.push_back(to_matrix(mat, "reduction.pi_u"));
    data.pi_u.push_back(std::move(per_action));
  }
  return data;
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

ProblemSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }

  ProblemSpec spec;
  spec.spec_hash = fnv1a_hex(json_text);
  spec.model = parse_model(require(j, "model", "spec"));

  if (auto it = j.find("control"); it != j.end())
    spec.control = parse_control(*it, spec.model);

  if (auto it = j.find("driver"); it != j.end()) {
    const json& d = *it;
    spec.driver_tag = require(d, "type", "driver").get<std::string>();
    if (spec.driver_tag == "zero") {
      spec.driver = Driver::zero();
      spec.terminal = to_vector(require(d, "g", "driver"), "driver.g");
    } else if (spec.driver_tag == "affine") {
      std::vector<Vector> a, b;
      std::vector<Matrix> c;
      for (const auto& row : require(d, "a", "driver"))
        a.push_back(to_vector(row, "driver.a"));
      for (const auto& row : require(d, "b", "driver"))
        b.push_back(to_vector(row, "driver.b"));
      for (const auto& mat : require(d, "c", "driver"))
        c.push_back(to_matrix(mat, "driver.c"));
      spec.driver = Driver::affine(spec.model, std::move(a), std::move(b),
                                   std::move(c));
      spec.terminal = to_vector(require(d, "g", "driver"), "driver.g");
    } else if (spec.driver_tag == "hamiltonian") {
      if (!spec.control)
        throw ValidationError(
            "driver 'hamiltonian' references a missing control section");
      spec.driver = Driver::hamiltonian(spec.model, spec.control);
      spec.terminal = spec.control->terminal_cost();
    } else {
      throw ParseError("driver: unknown tag '" + spec.driver_tag + "'");
    }
    if (spec.terminal.size() != spec.model.n_states())
      throw ValidationError(
          "sections 'model' and 'driver' disagree on the state count");
  }

  if (auto it = j.find("reduction"); it != j.end())
    spec.reduction = parse_reduction(*it);

  if (auto it = j.find("run"); it != j.end()) {
    const json& r = *it;
    if (auto f = r.find("seed"); f != r.end())
      spec.run.seed = f->get<std::uint64_t>();
    if (auto f = r.find("n_paths"); f != r.end())
      spec.run.n_paths = f->get<int>();
    if (auto f = r.find("step"); f != r.end()) spec.run.step = f->get<double>();
    if (auto f = r.find("start_time"); f != r.end())
      spec.run.start_time = f->get<double>();
    if (auto f = r.find("start_state"); f != r.end())
      spec.run.start_state = f->get<State>();
  }
  if (!(spec.run.start_time >= 0.0 &&
        spec.run.start_time <= spec.model.horizon()) ||
      !spec.model.valid_state(spec.run.start_state))
    throw ValidationError("run: start point outside the model's range");
  return spec;
}

ProblemSpec load_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open spec file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

}  // namespace jumpproc
