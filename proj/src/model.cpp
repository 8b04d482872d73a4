#include "jumpproc/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace jumpproc {

Model validate_model(const ModelData& data) {
  const int n = data.n_states;
  if (n < 1) throw ValidationError("model: states must be >= 1");
  if (!(data.horizon > 0.0) || !std::isfinite(data.horizon))
    throw BadGridError("model: horizon must be positive and finite");
  if (!data.labels.empty() && static_cast<int>(data.labels.size()) != n)
    throw ValidationError("model: label count does not match state count");

  const auto& bp = data.breakpoints;
  if (bp.size() < 2) throw BadGridError("model: need at least one time cell");
  if (bp.front() != 0.0)
    throw BadGridError("model: first breakpoint must be 0");
  if (bp.back() != data.horizon)
    throw BadGridError("model: last breakpoint must equal the horizon");
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    if (!(bp[k] < bp[k + 1]))
      throw BadGridError("model: breakpoints must be strictly increasing");
  }
  if (data.nu.size() != bp.size() - 1)
    throw ValidationError("model: need one rate matrix per time cell");

  Model m;
  m.n_ = n;
  m.horizon_ = data.horizon;
  m.labels_ = data.labels;
  m.breakpoints_ = bp;
  m.nu_ = data.nu;
  m.lambda_.reserve(m.nu_.size());
  m.lambda_bound_ = 0.0;

  for (std::size_t k = 0; k < m.nu_.size(); ++k) {
    const Matrix& nu = m.nu_[k];
    if (nu.rows() != n || nu.cols() != n)
      throw ValidationError("model: rate matrix dimensions do not match n");
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        const double v = nu(x, y);
        if (!std::isfinite(v) || v < 0.0) {
          std::ostringstream os;
          os << "model: nu[" << k << "][" << x << "][" << y
             << "] = " << v << " is negative or non-finite";
          throw NegativeRateError(os.str());
        }
      }
      if (nu(x, x) != 0.0) {
        std::ostringstream os;
        os << "model: nu[" << k << "][" << x << "][" << x
           << "] must be 0, got " << nu(x, x);
        throw DiagonalRateError(os.str());
      }
    }
    Vector rows = nu.rowwise().sum();
    m.lambda_bound_ = std::max(m.lambda_bound_, rows.maxCoeff());
    m.lambda_.push_back(std::move(rows));
  }
  return m;
}

int Model::cell_index(double t) const {
  if (!(t >= 0.0 && t < horizon_))
    throw OutOfRangeError("time outside [0, horizon)");
  // Cells are half-open [s_k, s_{k+1}); upper_bound lands one past the cell.
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return static_cast<int>(it - breakpoints_.begin()) - 1;
}

int Model::cell_of_interval(double a, double b) const {
  const double mid = 0.5 * (a + b);
  if (!(mid >= 0.0 && mid < horizon_))
    throw OutOfRangeError("interval outside [0, horizon)");
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), mid);
  int cell = static_cast<int>(it - breakpoints_.begin()) - 1;
  if (a < breakpoints_[cell] - 1e-12 || b > breakpoints_[cell + 1] + 1e-12)
    throw BadGridError("interval straddles a rate breakpoint");
  return cell;
}

JumpDecomposition jump_decomposition(const Model& model, double t, State x) {
  if (!model.valid_state(x)) throw OutOfRangeError("invalid state index");
  const int cell = model.cell_index(t);
  JumpDecomposition d;
  d.lambda = model.lambda_cell(cell)(x);
  if (d.lambda > 0.0) {
    d.pi = model.nu_cell(cell).row(x).transpose() / d.lambda;
  } else {
    d.pi = Vector::Zero(model.n_states());
    d.pi(x) = 1.0;
  }
  return d;
}

Vector generator_apply_cell(const Model& model, int cell, const Vector& v) {
  if (v.size() != model.n_states())
    throw OutOfRangeError("vector length does not match state count");
  return model.nu_cell(cell) * v - model.lambda_cell(cell).cwiseProduct(v);
}

Vector generator_apply(const Model& model, double t, const Vector& v) {
  return generator_apply_cell(model, model.cell_index(t), v);
}

}  // namespace jumpproc
