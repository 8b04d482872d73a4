#pragma once

#include <cmath>
#include <functional>

#include "jumpproc/errors.hpp"
#include "jumpproc/types.hpp"

namespace jumpproc {

/// Time-grid x state table v(t_i, x) on the uniform grid 0 = t_0 < ... <
/// t_N = T, linearly interpolated in t between nodes. Rows index time,
/// columns index states. Immutable by convention once a solver returns it.
class ValueFunction {
 public:
  ValueFunction(double horizon, double step, int n_states)
      : horizon_(horizon), step_(step) {
    if (!(horizon > 0.0) || !(step > 0.0))
      throw BadGridError("value grid: horizon and step must be positive");
    const double ratio = horizon / step;
    const auto n = static_cast<Index>(std::llround(ratio));
    if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9)
      throw BadGridError("value grid: step must divide the horizon");
    values_ = Matrix::Zero(n + 1, n_states);
  }

  static ValueFunction from_function(
      double horizon, double step, int n_states,
      const std::function<double(double t, State x)>& fn) {
    ValueFunction v(horizon, step, n_states);
    for (Index i = 0; i < v.values_.rows(); ++i)
      for (Index x = 0; x < v.values_.cols(); ++x)
        v.values_(i, x) = fn(v.time(static_cast<int>(i)),
                             static_cast<State>(x));
    return v;
  }

  int n_nodes() const { return static_cast<int>(values_.rows()); }
  int n_states() const { return static_cast<int>(values_.cols()); }
  double step() const { return step_; }
  double horizon() const { return horizon_; }

  /// t_i; the last node is exactly the horizon.
  double time(int i) const {
    return i == n_nodes() - 1 ? horizon_ : static_cast<double>(i) * step_;
  }

  double& at(int i, State x) { return values_(i, x); }
  double at(int i, State x) const { return values_(i, x); }

  Vector node_row(int i) const { return values_.row(i).transpose(); }
  void set_node_row(int i, const Vector& v) { values_.row(i) = v.transpose(); }

  const Matrix& table() const { return values_; }
  Matrix& table() { return values_; }

  /// Index of the grid interval containing s (clamped to [0, N-1]).
  int interval_index(double s) const {
    auto i = static_cast<int>(std::floor(s / step_));
    return std::min(std::max(i, 0), n_nodes() - 2);
  }

  /// v(s, x) by linear interpolation; s clamped to [0, T].
  double value(double s, State x) const {
    const int i = interval_index(s);
    const double a = time(i), b = time(i + 1);
    const double theta = std::min(1.0, std::max(0.0, (s - a) / (b - a)));
    return (1.0 - theta) * values_(i, x) + theta * values_(i + 1, x);
  }

  /// The whole row v(s, .) by linear interpolation.
  Vector row(double s) const {
    const int i = interval_index(s);
    const double a = time(i), b = time(i + 1);
    const double theta = std::min(1.0, std::max(0.0, (s - a) / (b - a)));
    return ((1.0 - theta) * values_.row(i) + theta * values_.row(i + 1))
        .transpose();
  }

  bool same_grid(const ValueFunction& other) const {
    return n_nodes() == other.n_nodes() && n_states() == other.n_states() &&
           horizon_ == other.horizon_ && step_ == other.step_;
  }

 private:
  double horizon_;
  double step_;
  Matrix values_;
};

/// Sup-norm distance between two tables on the same grid.
inline double sup_distance(const ValueFunction& a, const ValueFunction& b) {
  if (!a.same_grid(b)) throw BadGridError("sup_distance: grids differ");
  return (a.table() - b.table()).cwiseAbs().maxCoeff();
}

}  // namespace jumpproc
