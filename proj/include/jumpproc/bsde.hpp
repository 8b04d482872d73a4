#pragma once

#include <functional>

#include "jumpproc/driver.hpp"
#include "jumpproc/path.hpp"
#include "jumpproc/rng.hpp"
#include "jumpproc/value_function.hpp"

namespace jumpproc {

/// The (Y, Z) pair carried by a value function along one path:
///   Y_s = v(s, X_s),   Z_s(y) = v(s, y) - v(s, X_{s-}).
/// A lightweight view; the value function and path must outlive it.
class PathYZ {
 public:
  PathYZ(const ValueFunction& v, const MarkedPath& path)
      : v_(&v), path_(&path) {}

  double y_at(double s) const { return v_->value(s, path_->state_at(s)); }
  double y_left(double s) const { return v_->value(s, path_->left_state(s)); }
  double z_at(double s, State y) const {
    return v_->value(s, y) - y_left(s);
  }

  /// The whole field y -> Z_s(y); vanishes at y = X_{s-}.
  Vector z_field(double s) const {
    Vector row = v_->row(s);
    return row.array() - row(path_->left_state(s));
  }

  const ValueFunction& value_function() const { return *v_; }
  const MarkedPath& path() const { return *path_; }

 private:
  const ValueFunction* v_;
  const MarkedPath* path_;
};

/// Materializes the identification Y_s = v(s, X_s), Z_s(y) = v(s,y) -
/// v(s, X_{s-}) for one path.
inline PathYZ yz_from_value(const ValueFunction& v, const MarkedPath& path) {
  return PathYZ(v, path);
}

/// Max absolute defect, over the grid nodes in [start_time, T], of
///   Y_s + int_s^T int Z dq - g(X_T) - int_s^T f(r, X_r, Y_r, Z_r(.)) dr
/// where g is the value function's terminal row. Zero up to discretization
/// error when v solves the matching Kolmogorov problem.
double bsde_residual(const Model& model, const Driver& driver,
                     const ValueFunction& v, const MarkedPath& path);

/// Max absolute defect, over grid nodes, of the pathwise Ito formula
///   v(s,X_s) = v(t,x) + int_t^s (d_r v + L_r v)(X_r) dr
///            + int_t^s int (v(r,y) - v(r,X_{r-})) q(dr dy),
/// with d_r v the finite-difference slope of the piecewise-linear table.
double verify_ito(const Model& model, const ValueFunction& v,
                  const MarkedPath& path);

/// Markovian source term f_r = source(r, X_r) of a linear BSDE.
using SourceTerm = std::function<double(double s, State x)>;

/// Monte Carlo estimate of both sides of the energy identity at s = t:
///   E e^{bt}|Y_t|^2 + b E int e^{br}|Y_r|^2 dr + E int int e^{br}|Z_r|^2 nu dr
///     = E e^{bT}|xi|^2 + 2 E int e^{br} Y_r f_r dr,
/// for the linear problem solved by v (driver independent of Y and Z).
struct EnergyGap {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // mean of per-path lhs - rhs
  double se = 0.0;   // standard error of the gap
  int n_paths = 0;
};

EnergyGap energy_identity_gap(const Model& model, const ValueFunction& v,
                              const SourceTerm& source, double t, State x,
                              double beta, int n_paths, const RngStream& rng);

}  // namespace jumpproc
