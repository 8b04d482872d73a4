#include "jumpproc/control_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace jumpproc {

ControlModel validate_control_model(const Model& model,
                                    const ControlModelData& data) {
  const int n = model.n_states();
  const auto cells = static_cast<std::size_t>(model.n_cells());
  const int m = data.n_actions;
  if (m < 1) throw ValidationError("control: actions must be >= 1");
  if (!data.action_labels.empty() &&
      static_cast<int>(data.action_labels.size()) != m)
    throw ValidationError("control: action label count does not match m");
  if (data.r.size() != cells || data.l.size() != cells)
    throw ValidationError("control: need r and l tables per model time cell");
  if (data.g.size() != n)
    throw ValidationError("control: terminal cost length does not match n");
  if (!data.g.allFinite())
    throw ValidationError("control: terminal cost must be finite");

  ControlModel cm;
  cm.m_ = m;
  cm.labels_ = data.action_labels;
  cm.r_ = data.r;
  cm.l_ = data.l;
  cm.g_ = data.g;
  cm.r_bound_ = 0.0;

  for (std::size_t k = 0; k < cells; ++k) {
    if (static_cast<int>(cm.r_[k].size()) != m)
      throw ValidationError("control: need one r matrix per action");
    for (int u = 0; u < m; ++u) {
      const Matrix& r = cm.r_[k][u];
      if (r.rows() != n || r.cols() != n)
        throw ValidationError("control: r matrix dimensions do not match n");
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          const double w = r(x, y);
          if (!std::isfinite(w) || w < 0.0) {
            std::ostringstream os;
            os << "control: r[" << k << "][" << u << "][" << x << "][" << y
               << "] = " << w << " is negative or non-finite";
            throw NegativeRateError(os.str());
          }
          cm.r_bound_ = std::max(cm.r_bound_, w);
        }
    }
    if (cm.l_[k].rows() != n || cm.l_[k].cols() != m)
      throw ValidationError("control: l table dimensions do not match (n,m)");
    if (!cm.l_[k].allFinite())
      throw ValidationError("control: running costs must be finite");
  }
  return cm;
}

FeedbackPolicy::FeedbackPolicy(std::vector<double> breakpoints, Matrix actions)
    : breakpoints_(std::move(breakpoints)), actions_(std::move(actions)) {
  if (breakpoints_.size() < 2 ||
      static_cast<Index>(breakpoints_.size()) != actions_.rows() + 1)
    throw ValidationError("policy: need one breakpoint more than cells");
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k)
    if (!(breakpoints_[k] < breakpoints_[k + 1]))
      throw BadGridError("policy: breakpoints must be strictly increasing");
}

FeedbackPolicy FeedbackPolicy::constant(const Model& model,
                                        const std::vector<Action>& per_state) {
  if (static_cast<int>(per_state.size()) != model.n_states())
    throw ValidationError("policy: one action per state required");
  Matrix table(model.n_cells(), model.n_states());
  for (int k = 0; k < model.n_cells(); ++k)
    for (int x = 0; x < model.n_states(); ++x)
      table(k, x) = per_state[x];
  return FeedbackPolicy(model.breakpoints(), std::move(table));
}

Action FeedbackPolicy::action_at(double s, State x) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  int cell = static_cast<int>(it - breakpoints_.begin()) - 1;
  cell = std::min(std::max(cell, 0), n_cells() - 1);
  return action(cell, x);
}

ControlProcess as_control_process(const FeedbackPolicy& policy) {
  return [policy](double s, const MarkedPath& path) {
    return policy.action_at(s, path.left_state(s));
  };
}

HamiltonianResult hamiltonian_in_cell(const Model& model,
                                      const ControlModel& control, int cell,
                                      State x, const Vector& z) {
  if (z.size() != model.n_states())
    throw OutOfRangeError("hamiltonian: z length does not match n");
  const Matrix& nu = model.nu_cell(cell);
  HamiltonianResult res;
  std::vector<double> candidates(control.n_actions());
  for (Action u = 0; u < control.n_actions(); ++u) {
    double val = control.running_cost(cell, x, u);
    const Matrix& r = control.r_cell(cell, u);
    for (Index y = 0; y < nu.cols(); ++y) {
      const double w = nu(x, y);
      if (w != 0.0) val += z(y) * (r(x, y) - 1.0) * w;
    }
    candidates[u] = val;
  }
  res.value = *std::min_element(candidates.begin(), candidates.end());
  for (Action u = 0; u < control.n_actions(); ++u)
    if (candidates[u] - res.value <= 1e-12) res.argmin_set.push_back(u);
  res.chosen = res.argmin_set.front();
  return res;
}

HamiltonianResult hamiltonian(const Model& model, const ControlModel& control,
                              double s, State x, const Vector& z) {
  if (!model.valid_state(x)) throw OutOfRangeError("invalid state index");
  return hamiltonian_in_cell(model, control, model.cell_index(s), x, z);
}

std::pair<double, double> lipschitz_bounds(const Model& model,
                                           const ControlModel& control) {
  return {(control.r_bound() + 1.0) * std::sqrt(model.lambda_bound()), 0.0};
}

Model controlled_model(const Model& model, const ControlModel& control,
                       const FeedbackPolicy& policy) {
  // Common refinement of the model's and the policy's breakpoints.
  std::set<double> cuts(model.breakpoints().begin(),
                        model.breakpoints().end());
  for (double s : policy.breakpoints())
    if (s > 0.0 && s < model.horizon()) cuts.insert(s);

  ModelData data;
  data.n_states = model.n_states();
  data.labels = model.labels();
  data.horizon = model.horizon();
  data.breakpoints.assign(cuts.begin(), cuts.end());

  const int n = model.n_states();
  for (std::size_t k = 0; k + 1 < data.breakpoints.size(); ++k) {
    const double mid = 0.5 * (data.breakpoints[k] + data.breakpoints[k + 1]);
    const int cell = model.cell_index(mid);
    const Matrix& nu = model.nu_cell(cell);
    Matrix out = Matrix::Zero(n, n);
    for (State x = 0; x < n; ++x) {
      const Action u = policy.action_at(mid, x);
      if (u < 0 || u >= control.n_actions())
        throw ValidationError("policy action index out of range");
      out.row(x) = control.r_cell(cell, u).row(x).cwiseProduct(nu.row(x));
    }
    data.nu.push_back(std::move(out));
  }
  return validate_model(data);
}

std::pair<std::vector<std::vector<Matrix>>, double> reduce_model(
    const ControlledKernelData& data, const Model& reference) {
  const int n = reference.n_states();
  const auto cells = static_cast<std::size_t>(reference.n_cells());
  if (data.lambda_u.size() != cells || data.pi_u.size() != cells)
    throw ValidationError("reduce: tables must cover the reference cells");

  std::vector<std::vector<Matrix>> r(cells);
  double r_bound = 0.0;
  for (std::size_t k = 0; k < cells; ++k) {
    const Matrix& lam_u = data.lambda_u[k];
    const int m = static_cast<int>(lam_u.cols());
    if (lam_u.rows() != n || static_cast<int>(data.pi_u[k].size()) != m)
      throw ValidationError("reduce: table dimensions do not match");

    const Vector& lam = reference.lambda_cell(static_cast<int>(k));
    const Matrix& nu = reference.nu_cell(static_cast<int>(k));
    r[k].assign(m, Matrix::Ones(n, n));

    for (int u = 0; u < m; ++u) {
      const Matrix& pi_u = data.pi_u[k][u];
      if (pi_u.rows() != n || pi_u.cols() != n)
        throw ValidationError("reduce: pi^u matrix dimensions do not match");
      for (State x = 0; x < n; ++x) {
        // lambda(x) = 0 forces lambda^u(x) = 0; the 0/0 convention then
        // contributes a factor 1.
        double lam_ratio;
        if (lam(x) > 0.0) {
          lam_ratio = lam_u(x, u) / lam(x);
        } else if (lam_u(x, u) == 0.0) {
          lam_ratio = 1.0;
        } else {
          std::ostringstream os;
          os << "reduce: lambda(x=" << x << ") = 0 but lambda^u > 0 in cell "
             << k;
          throw NotAbsolutelyContinuousError(os.str());
        }
        for (State y = 0; y < n; ++y) {
          const double pi_ref = lam(x) > 0.0 ? nu(x, y) / lam(x)
                                             : (x == y ? 1.0 : 0.0);
          double pi_ratio;
          if (pi_ref > 0.0) {
            pi_ratio = pi_u(x, y) / pi_ref;
          } else if (pi_u(x, y) == 0.0) {
            pi_ratio = 1.0;
          } else {
            std::ostringstream os;
            os << "reduce: pi(x=" << x << ",y=" << y
               << ") = 0 but pi^u > 0 in cell " << k;
            throw NotAbsolutelyContinuousError(os.str());
          }
          r[k][u](x, y) = pi_ratio * lam_ratio;
          r_bound = std::max(r_bound, r[k][u](x, y));
        }
      }
    }
  }
  return {std::move(r), r_bound};
}

}  // namespace jumpproc
