#pragma once

#include <functional>
#include <string>
#include <vector>

#include "jumpproc/errors.hpp"
#include "jumpproc/types.hpp"

namespace jumpproc {

/// Raw, unvalidated model data as read from a file or assembled in code.
struct ModelData {
  int n_states = 0;
  std::vector<std::string> labels;  // empty or size n_states
  double horizon = 0.0;
  std::vector<double> breakpoints;  // 0 = s_0 < s_1 < ... < s_M = horizon
  std::vector<Matrix> nu;           // one n x n matrix per cell [s_k, s_{k+1})
};

/// Total jump rate and post-jump distribution at a fixed (t, x).
/// pi is a point mass at x when lambda == 0 and puts no mass on x otherwise.
struct JumpDecomposition {
  double lambda = 0.0;
  Vector pi;
};

/// Immutable finite-state jump-process model: a piecewise-constant-in-time
/// rate measure nu(t,x,{y}) on cells [s_k, s_{k+1}), with the per-cell row
/// sums lambda(t,x) and the global bound Lambda = sup_{t,x} lambda(t,x)
/// precomputed. Construct through validate_model(); safe for unrestricted
/// concurrent reads afterwards.
class Model {
 public:
  Model() = default;  // empty; fill through validate_model

  int n_states() const { return n_; }
  double horizon() const { return horizon_; }
  int n_cells() const { return static_cast<int>(nu_.size()); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// sup_{t,x} nu(t,x,K): the uniform rate bound.
  double lambda_bound() const { return lambda_bound_; }

  const Matrix& nu_cell(int cell) const { return nu_[cell]; }
  const Vector& lambda_cell(int cell) const { return lambda_[cell]; }

  /// Cell index k with t in [s_k, s_{k+1}); requires t in [0, horizon).
  int cell_index(double t) const;

  /// Cell containing the open interval (a, b); requires the interval not to
  /// straddle a breakpoint.
  int cell_of_interval(double a, double b) const;

  bool valid_state(State x) const { return x >= 0 && x < n_; }

 private:
  friend Model validate_model(const ModelData& data);

  int n_ = 0;
  double horizon_ = 0.0;
  std::vector<std::string> labels_;
  std::vector<double> breakpoints_;
  std::vector<Matrix> nu_;
  std::vector<Vector> lambda_;  // per-cell row sums
  double lambda_bound_ = 0.0;
};

/// Checks the rate data (nonnegative entries, zero diagonal, strictly
/// increasing breakpoints spanning [0, horizon]) and returns the immutable
/// Model with the rate bound computed.
/// Throws NegativeRateError, DiagonalRateError, BadGridError, ValidationError.
Model validate_model(const ModelData& data);

/// Splits nu(t,x,.) into the total rate lambda(t,x) and the post-jump
/// distribution pi(t,x,.); pi is the point mass at x when the row is zero.
/// Throws OutOfRangeError for t outside [0,T) or an invalid state.
JumpDecomposition jump_decomposition(const Model& model, double t, State x);

/// Applies the generator: (L_t v)(x) = sum_y (v(y) - v(x)) nu(t,x,{y}).
/// Throws OutOfRangeError.
Vector generator_apply(const Model& model, double t, const Vector& v);

/// Generator restricted to one time cell (no time lookup); used by solvers
/// that pin the cell for a whole integration step.
Vector generator_apply_cell(const Model& model, int cell, const Vector& v);

/// Rate measure given as a callback with a declared uniform bound; accepted
/// by the thinning sampler only (the file format stays piecewise-constant).
/// nu_row(t, x) returns the vector y -> nu(t,x,{y}); entries must be
/// nonnegative with zero diagonal and row sum <= lambda_bound.
struct CallbackRateModel {
  int n_states = 0;
  double horizon = 0.0;
  double lambda_bound = 0.0;
  std::function<Vector(double t, State x)> nu_row;
};

}  // namespace jumpproc
