#include "jumpproc/pde.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace jumpproc {

namespace {

// W(s, x) = (L_s w)(x) + f(s, x, w(x), w - w(x)); the equation reads
// dw/dt = -W. The cell is pinned by the caller.
Vector equation_term(const Model& model, const Driver& driver, int cell,
                     double s, const Vector& w) {
  const int n = model.n_states();
  Vector out = generator_apply_cell(model, cell, w);
  Vector z(n);
  for (State x = 0; x < n; ++x) {
    z = w.array() - w(x);
    out(x) += driver.eval(model, cell, s, x, w(x), z);
  }
  return out;
}

void require_grid_aligned(const Model& model, double h) {
  for (double s : model.breakpoints()) {
    const double k = std::round(s / h);
    if (std::abs(k * h - s) > 1e-9)
      throw BadGridError("rate breakpoints must be nodes of the time grid");
  }
}

}  // namespace

ValueFunction solve_kolmogorov(const Model& model, const Driver& driver,
                               const Vector& g, double h) {
  if (g.size() != model.n_states())
    throw ValidationError("terminal vector length does not match n");
  if (!g.allFinite())
    throw NonFiniteValueError("terminal vector must be finite");
  require_grid_aligned(model, h);
  if (model.lambda_bound() * h > 0.1)
    std::cerr << "warning: Lambda*h = " << model.lambda_bound() * h
              << " > 0.1; consider a smaller step\n";

  ValueFunction v(model.horizon(), h, model.n_states());
  const int N = v.n_nodes() - 1;
  v.set_node_row(N, g);

  Vector w = g;
  for (int i = N - 1; i >= 0; --i) {
    const double a = v.time(i), b = v.time(i + 1);
    const double dt = b - a;
    const int cell = model.cell_of_interval(a, b);

    const Vector k1 = equation_term(model, driver, cell, b, w);
    const Vector k2 = equation_term(model, driver, cell, b - 0.5 * dt,
                                    w + 0.5 * dt * k1);
    const Vector k3 = equation_term(model, driver, cell, b - 0.5 * dt,
                                    w + 0.5 * dt * k2);
    const Vector k4 = equation_term(model, driver, cell, a, w + dt * k3);
    w += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    if (!w.allFinite())
      throw NonFiniteValueError("kolmogorov solve diverged; reduce the step");
    v.set_node_row(i, w);
  }
  return v;
}

namespace {

// One application of the integral map Gamma on the grid: trapezoid per
// interval with the interval's cell, accumulated from the terminal node.
ValueFunction apply_gamma(const Model& model, const Driver& driver,
                          const Vector& g, const ValueFunction& u) {
  ValueFunction v(u.horizon(), u.step(), u.n_states());
  const int N = u.n_nodes() - 1;
  v.set_node_row(N, g);
  Vector acc = g;
  for (int i = N - 1; i >= 0; --i) {
    const double a = u.time(i), b = u.time(i + 1);
    const int cell = model.cell_of_interval(a, b);
    const Vector wa = equation_term(model, driver, cell, a, u.node_row(i));
    const Vector wb = equation_term(model, driver, cell, b, u.node_row(i + 1));
    acc += 0.5 * (b - a) * (wa + wb);
    v.set_node_row(i, acc);
  }
  return v;
}

}  // namespace

PicardResult picard_iterate(const Model& model, const Driver& driver,
                            const Vector& g, const ValueFunction& v0,
                            int k_max, double tol) {
  if (k_max < 1) throw OutOfRangeError("picard_iterate needs k_max >= 1");
  if (g.size() != model.n_states() || v0.n_states() != model.n_states())
    throw ValidationError("terminal vector length does not match n");
  require_grid_aligned(model, v0.step());

  PicardResult res{v0, {}, 0, false};
  for (int k = 0; k < k_max; ++k) {
    ValueFunction next = apply_gamma(model, driver, g, res.v);
    if (!next.table().allFinite())
      throw NonFiniteValueError("picard iteration diverged");
    const double diff = sup_distance(next, res.v);
    res.diff_norms.push_back(diff);
    res.v = std::move(next);
    res.iterations = k + 1;
    if (diff <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

std::pair<Driver, Vector> truncate(const Driver& driver, const Vector& g,
                                   double level) {
  if (!(level > 0.0)) throw OutOfRangeError("truncation level must be > 0");
  Vector gn = g.cwiseMax(-level).cwiseMin(level);
  // The clamp keeps the original Lipschitz constants.
  Driver tn = Driver::custom_cell_aware(
      [inner = driver, level](const Model& m, int cell, double s, State x,
                              double y, const Vector& z) {
        return std::clamp(inner.eval(m, cell, s, x, y, z), -level, level);
      },
      driver.lipschitz_z(), driver.lipschitz_y());
  return {tn, gn};
}

double residual_norm(const Model& model, const Driver& driver, const Vector& g,
                     const ValueFunction& v) {
  require_grid_aligned(model, v.step());
  const int N = v.n_nodes() - 1;
  double worst = (v.node_row(N) - g).cwiseAbs().maxCoeff();
  Vector acc = g;
  for (int i = N - 1; i >= 0; --i) {
    const double a = v.time(i), b = v.time(i + 1);
    const int cell = model.cell_of_interval(a, b);
    const Vector wa = equation_term(model, driver, cell, a, v.node_row(i));
    const Vector wb = equation_term(model, driver, cell, b, v.node_row(i + 1));
    acc += 0.5 * (b - a) * (wa + wb);
    worst = std::max(worst, (v.node_row(i) - acc).cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace jumpproc
