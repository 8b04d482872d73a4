#pragma once

#include <memory>
#include <optional>
#include <string>

#include "jumpproc/control_model.hpp"
#include "jumpproc/driver.hpp"
#include "jumpproc/model.hpp"

namespace jumpproc {

/// Run parameters; flags override the file's values.
struct RunParams {
  std::uint64_t seed = 1;
  int n_paths = 10000;
  double step = 1e-3;
  double start_time = 0.0;
  State start_state = 0;
};

/// A fully validated problem-spec file: model section, optional driver and
/// control sections, optional reduction tables, and run parameters.
struct ProblemSpec {
  Model model;
  std::string driver_tag;  // "", "zero", "affine", "hamiltonian"
  std::optional<Driver> driver;
  Vector terminal;  // g for the pde commands (control.g when hamiltonian)
  std::shared_ptr<const ControlModel> control;
  std::optional<ControlledKernelData> reduction;
  RunParams run;
  std::string spec_hash;  // FNV-1a 64 of the file bytes, hex

  bool has_driver() const { return driver.has_value(); }
  bool has_control() const { return control != nullptr; }
};

/// Parses and validates a spec from JSON text; the hash covers exactly the
/// given bytes. Throws ParseError on malformed JSON or unknown tags,
/// ValidationError (or the module errors) on inconsistent sections.
ProblemSpec parse_spec(const std::string& json_text);

/// Loads a spec file from disk. Throws ParseError when the file cannot be
/// read, then as parse_spec.
ProblemSpec load_spec(const std::string& path);

/// FNV-1a 64-bit hash, hex-encoded; stable across platforms.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace jumpproc
