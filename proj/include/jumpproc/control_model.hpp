#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "jumpproc/model.hpp"
#include "jumpproc/path.hpp"
#include "jumpproc/types.hpp"

namespace jumpproc {

/// Raw control data: per time cell, the control kernel r and running cost l,
/// plus the terminal cost. Dimensions: r[cell][u] is n x n, l[cell] is n x m,
/// g has length n.
struct ControlModelData {
  int n_actions = 0;
  std::vector<std::string> action_labels;       // empty or size n_actions
  std::vector<std::vector<Matrix>> r;           // [cell][action](x, y)
  std::vector<Matrix> l;                        // [cell](x, action)
  Vector g;
};

/// Validated control layer bound to a Model's time cells: finite action set,
/// bounded nonnegative kernel r with its recorded bound C_r, finite running
/// and terminal costs. Immutable after validation.
class ControlModel {
 public:
  int n_actions() const { return m_; }
  const std::vector<std::string>& action_labels() const { return labels_; }
  double r_bound() const { return r_bound_; }
  const Matrix& r_cell(int cell, Action u) const { return r_[cell][u]; }
  const Matrix& l_cell(int cell) const { return l_[cell]; }
  double running_cost(int cell, State x, Action u) const {
    return l_[cell](x, u);
  }
  const Vector& terminal_cost() const { return g_; }

 private:
  friend ControlModel validate_control_model(const Model& model,
                                             const ControlModelData& data);
  ControlModel() = default;

  int m_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::vector<Matrix>> r_;
  std::vector<Matrix> l_;
  Vector g_;
  double r_bound_ = 0.0;  // C_r, computed from the data
};

/// Checks dimensions against the model's cells and states, nonnegativity and
/// finiteness of r, finiteness of l and g; records C_r = max entry of r.
/// Throws ValidationError, NegativeRateError.
ControlModel validate_control_model(const Model& model,
                                    const ControlModelData& data);

/// Feedback law u(s, x), piecewise constant on its own time cells (by
/// default the model's). Entries are action indices.
class FeedbackPolicy {
 public:
  FeedbackPolicy(std::vector<double> breakpoints, Matrix actions);

  /// Policy constant equal to `table` on the model's cells requires
  /// table.rows() == model cells. Convenience for a single-cell table:
  static FeedbackPolicy constant(const Model& model, const std::vector<Action>& per_state);

  int n_cells() const { return static_cast<int>(actions_.rows()); }
  int n_states() const { return static_cast<int>(actions_.cols()); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  Action action(int cell, State x) const {
    return static_cast<Action>(actions_(cell, x));
  }
  Action action_at(double s, State x) const;
  const Matrix& table() const { return actions_; }

 private:
  std::vector<double> breakpoints_;
  Matrix actions_;  // integer-valued
};

/// Admissible control seen as a per-path callback: the action in force at
/// time s given the jump history strictly before s (the path argument may be
/// inspected only through left_state / jumps before s). Implementations must
/// be piecewise constant between jumps and across the model's time cells.
using ControlProcess = std::function<Action(double s, const MarkedPath& path)>;

/// Wraps a feedback policy as a control process: u_s = policy(s, X_{s-}).
ControlProcess as_control_process(const FeedbackPolicy& policy);

/// Value and minimizer set of the hamiltonian
///   min_u { l(s,x,u) + sum_y z(y) (r(s,x,y,u) - 1) nu(s,x,{y}) }.
/// argmin_set lists every action within 1e-12 of the minimum, ascending;
/// chosen is its least element.
struct HamiltonianResult {
  double value = 0.0;
  std::vector<Action> argmin_set;
  Action chosen = 0;
};

/// Exhaustive minimization over the finite action set at a given time.
/// Throws OutOfRangeError for s outside [0,T), bad state, or bad z length.
HamiltonianResult hamiltonian(const Model& model, const ControlModel& control,
                              double s, State x, const Vector& z);

/// Same with the time cell pinned by the caller (used inside solvers where
/// stage times may sit exactly on a breakpoint).
HamiltonianResult hamiltonian_in_cell(const Model& model,
                                      const ControlModel& control, int cell,
                                      State x, const Vector& z);

/// Lipschitz constants of the hamiltonian as a driver:
/// L = (C_r + 1) sqrt(Lambda), L' = 0.
std::pair<double, double> lipschitz_bounds(const Model& model,
                                           const ControlModel& control);

/// The controlled jump model: cell matrices r(s,x,y,u(s,x)) * nu(s,x,{y}) on
/// the common refinement of the model's and the policy's time cells.
Model controlled_model(const Model& model, const ControlModel& control,
                       const FeedbackPolicy& policy);

/// Controlled-kernel tables for one action layer, used by reduce_model.
struct ControlledKernelData {
  std::vector<Matrix> lambda_u;            // [cell](x, action): total rates
  std::vector<std::vector<Matrix>> pi_u;   // [cell][action](x, y): jump laws
};

/// Radon-Nikodym reduction r = (d pi^u / d pi) * (lambda^u / lambda) with the
/// 0/0 = 1 convention in both ratios; also returns the implied C_r.
/// Throws NotAbsolutelyContinuousError when pi charges nothing where pi^u
/// does, or lambda = 0 < lambda^u.
std::pair<std::vector<std::vector<Matrix>>, double> reduce_model(
    const ControlledKernelData& data, const Model& reference);

}  // namespace jumpproc
