#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "jumpproc/control_model.hpp"
#include "jumpproc/pde.hpp"
#include "jumpproc/rng.hpp"
#include "jumpproc/stats.hpp"

namespace jumpproc {

/// Solves the HJB equation (Kolmogorov with the hamiltonian driver) and
/// extracts the feedback policy: at each model cell the chosen minimizer at
/// the cell's left endpoint, using the solved value table.
std::pair<ValueFunction, FeedbackPolicy> solve_hjb(const Model& model,
                                                   const ControlModel& control,
                                                   double h);

/// The Girsanov density L_s along one path sampled at the path's jump times,
/// the model/policy breakpoints, and the endpoints. A jump with r = 0 sets
/// the weight to zero from that time on (no error).
struct WeightPath {
  std::vector<double> times;
  std::vector<double> values;
  double terminal = 1.0;  // L_T
};

WeightPath girsanov_weight(const Model& model, const ControlModel& control,
                           const FeedbackPolicy& policy,
                           const MarkedPath& path);

/// Same for a general admissible control given as a per-path callback.
WeightPath girsanov_weight(const Model& model, const ControlModel& control,
                           const ControlProcess& control_process,
                           const MarkedPath& path);

/// Cost estimate J(t, x, policy) by simulating under the controlled model
/// and integrating the running cost cell-exactly between jumps.
MeanSE cost_direct(const Model& model, const ControlModel& control,
                   const FeedbackPolicy& policy, double t, State x,
                   int n_paths, const RngStream& rng);

/// Cost estimate under the uncontrolled law, reweighted by the Girsanov
/// density: J = E[L_T (int l ds + g(X_T))]. Works for any admissible
/// control process (history-dependent controls included).
MeanSE cost_reweighted(const Model& model, const ControlModel& control,
                       const ControlProcess& control_process, double t,
                       State x, int n_paths, const RngStream& rng);

MeanSE cost_reweighted(const Model& model, const ControlModel& control,
                       const FeedbackPolicy& policy, double t, State x,
                       int n_paths, const RngStream& rng);

/// Monte Carlo estimate, under the controlled law, of the fundamental-
/// relation correction
///   E_u int_t^T { f(s, X_s, v(s,.) - v(s,X_s)) - l(s, X_s, u_s)
///                 - sum_y (v(s,y) - v(s,X_s)) (r - 1) nu(s,X_s,{y}) } ds,
/// so that v(t,x) = J(t,x,u) + gap with a pointwise nonpositive integrand.
struct FundamentalGap {
  double gap = 0.0;
  double se = 0.0;
  /// Largest integrand value seen at any quadrature point (<= 0 up to
  /// rounding for every policy).
  double max_integrand = -std::numeric_limits<double>::infinity();
  /// Per-path mean and SE of cost + gap; estimates v(t,x) directly.
  double value_check = 0.0;
  double value_check_se = 0.0;
  int n_paths = 0;
};

FundamentalGap fundamental_gap(const Model& model, const ControlModel& control,
                               const FeedbackPolicy& policy,
                               const ValueFunction& v, double t, State x,
                               int n_paths, const RngStream& rng);

}  // namespace jumpproc
