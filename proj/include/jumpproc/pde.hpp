#pragma once

#include <utility>
#include <vector>

#include "jumpproc/driver.hpp"
#include "jumpproc/model.hpp"
#include "jumpproc/value_function.hpp"

namespace jumpproc {

/// Solves the nonlinear Kolmogorov equation
///   d/dt v(t,x) = -(L_t v)(x) - f(t, x, v(t,x), v(t,.) - v(t,x))
/// backward from v(T,.) = g with classical 4-stage Runge-Kutta at fixed step
/// h. The step must divide the horizon and every rate breakpoint must be a
/// grid node, so no step straddles a rate discontinuity. Warns on stderr when
/// Lambda * h > 0.1.
/// Throws BadGridError, NonFiniteValueError.
ValueFunction solve_kolmogorov(const Model& model, const Driver& driver,
                               const Vector& g, double h);

struct PicardResult {
  ValueFunction v;
  std::vector<double> diff_norms;  // sup-norm gaps between successive iterates
  int iterations = 0;
  bool converged = false;
};

/// Fixed-point iteration of the integral map
///   Gamma(u)(t,x) = g(x) + int_t^T [L_s u(s,x) + f(s,x,u(s,x),u(s,.)-u(s,x))] ds
/// with trapezoidal quadrature on v0's grid; stops when the sup-norm change
/// drops below tol or after k_max iterations.
/// Throws NonFiniteValueError.
PicardResult picard_iterate(const Model& model, const Driver& driver,
                            const Vector& g, const ValueFunction& v0,
                            int k_max, double tol);

/// Clamps the driver and terminal data at +-level; the truncated driver keeps
/// the original Lipschitz constants.
std::pair<Driver, Vector> truncate(const Driver& driver, const Vector& g,
                                   double level);

/// Max absolute defect of the integral equation
///   v(t,x) = g(x) + int_t^T [L_s v + f] ds
/// over all grid nodes, with trapezoidal quadrature; an a posteriori
/// certificate for a candidate solution.
double residual_norm(const Model& model, const Driver& driver, const Vector& g,
                     const ValueFunction& v);

}  // namespace jumpproc
