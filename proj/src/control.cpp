#include "jumpproc/control.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <set>

#include "jumpproc/simulate.hpp"

namespace jumpproc {

std::pair<ValueFunction, FeedbackPolicy> solve_hjb(const Model& model,
                                                   const ControlModel& control,
                                                   double h) {
  auto shared = std::make_shared<const ControlModel>(control);
  const Driver driver = Driver::hamiltonian(model, shared);
  ValueFunction v = solve_kolmogorov(model, driver, control.terminal_cost(), h);

  // Minimizer at each cell's left endpoint, read off the solved table.
  const int n = model.n_states();
  Matrix table(model.n_cells(), n);
  for (int k = 0; k < model.n_cells(); ++k) {
    const double s = model.breakpoints()[k];
    const auto node = static_cast<int>(std::llround(s / h));
    const Vector row = v.node_row(node);
    for (State x = 0; x < n; ++x) {
      const Vector z = row.array() - row(x);
      table(k, x) = hamiltonian_in_cell(model, control, k, x, z).chosen;
    }
  }
  return {std::move(v),
          FeedbackPolicy(model.breakpoints(), std::move(table))};
}

namespace {

// Calls piece(a, b, x) for every maximal interval of [lo, hi] on which the
// path state, the model cell, and every listed breakpoint grid are constant.
template <typename F>
void walk_pieces(const MarkedPath& path, double lo, double hi,
                 const std::vector<double>& cuts, F&& piece) {
  for (const auto& seg : path.segments(lo, hi)) {
    double a = seg.a;
    auto it = std::upper_bound(cuts.begin(), cuts.end(), a);
    while (a < seg.b) {
      double b = seg.b;
      if (it != cuts.end() && *it < b) {
        b = *it;
        ++it;
      }
      piece(a, b, seg.x);
      a = b;
    }
  }
}

std::vector<double> merge_cuts(const Model& model,
                               const std::vector<double>& extra) {
  std::set<double> s(model.breakpoints().begin(), model.breakpoints().end());
  s.insert(extra.begin(), extra.end());
  return {s.begin(), s.end()};
}

WeightPath weight_impl(const Model& model, const ControlModel& control,
                       const ControlProcess& process, const MarkedPath& path,
                       const std::vector<double>& extra_cuts) {
  const std::vector<double> cuts = merge_cuts(model, extra_cuts);
  WeightPath out;
  out.times.push_back(path.start_time);
  out.values.push_back(1.0);

  double exponent = 0.0;
  double product = 1.0;
  std::size_t next_jump = 0;

  walk_pieces(path, path.start_time, path.horizon, cuts,
              [&](double a, double b, State x) {
                const double mid = 0.5 * (a + b);
                const int cell = model.cell_index(mid);
                const Action u = process(mid, path);
                const Matrix& nu = model.nu_cell(cell);
                const Matrix& r = control.r_cell(cell, u);
                double rate = 0.0;
                for (Index y = 0; y < nu.cols(); ++y) {
                  const double w = nu(x, y);
                  if (w != 0.0) rate += (1.0 - r(x, y)) * w;
                }
                exponent += rate * (b - a);

                // Jump factor when this piece closes at a jump time.
                if (next_jump < path.jump_times.size() &&
                    path.jump_times[next_jump] == b) {
                  const double tj = b;
                  const int jcell = tj < model.horizon()
                                        ? model.cell_index(tj)
                                        : model.n_cells() - 1;
                  const Action ju = process(tj, path);
                  product *= control.r_cell(jcell, ju)(x,
                                                       path.marks[next_jump]);
                  ++next_jump;
                }
                out.times.push_back(b);
                out.values.push_back(std::exp(exponent) * product);
              });

  if (out.times.back() != path.horizon) {
    out.times.push_back(path.horizon);
    out.values.push_back(std::exp(exponent) * product);
  }
  out.terminal = out.values.back();
  return out;
}

// int_t^T l(s, X_s, u_s) ds, exact per constant piece.
double running_cost_along(const Model& model, const ControlModel& control,
                          const ControlProcess& process, const MarkedPath& path,
                          const std::vector<double>& extra_cuts) {
  const std::vector<double> cuts = merge_cuts(model, extra_cuts);
  double acc = 0.0;
  walk_pieces(path, path.start_time, path.horizon, cuts,
              [&](double a, double b, State x) {
                const double mid = 0.5 * (a + b);
                const int cell = model.cell_index(mid);
                const Action u = process(mid, path);
                acc += control.running_cost(cell, x, u) * (b - a);
              });
  return acc;
}

}  // namespace

WeightPath girsanov_weight(const Model& model, const ControlModel& control,
                           const FeedbackPolicy& policy,
                           const MarkedPath& path) {
  return weight_impl(model, control, as_control_process(policy), path,
                     policy.breakpoints());
}

WeightPath girsanov_weight(const Model& model, const ControlModel& control,
                           const ControlProcess& process,
                           const MarkedPath& path) {
  return weight_impl(model, control, process, path, {});
}

MeanSE cost_direct(const Model& model, const ControlModel& control,
                   const FeedbackPolicy& policy, double t, State x,
                   int n_paths, const RngStream& rng) {
  if (n_paths < 2) throw OutOfRangeError("cost_direct needs n_paths >= 2");
  const Model controlled = controlled_model(model, control, policy);
  const ControlProcess process = as_control_process(policy);
  RunningStat stat;
  for (int i = 0; i < n_paths; ++i) {
    RngStream stream = rng.child(static_cast<std::uint64_t>(i));
    const MarkedPath path = simulate_path(controlled, t, x, stream);
    const double run =
        running_cost_along(model, control, process, path, policy.breakpoints());
    stat.add(run + control.terminal_cost()(path.terminal_state()));
  }
  return {stat.mean(), stat.se()};
}

MeanSE cost_reweighted(const Model& model, const ControlModel& control,
                       const ControlProcess& process, double t, State x,
                       int n_paths, const RngStream& rng) {
  if (n_paths < 2) throw OutOfRangeError("cost_reweighted needs n_paths >= 2");
  RunningStat stat;
  for (int i = 0; i < n_paths; ++i) {
    RngStream stream = rng.child(static_cast<std::uint64_t>(i));
    const MarkedPath path = simulate_path(model, t, x, stream);
    const double weight = weight_impl(model, control, process, path, {}).terminal;
    const double run = running_cost_along(model, control, process, path, {});
    stat.add(weight * (run + control.terminal_cost()(path.terminal_state())));
  }
  return {stat.mean(), stat.se()};
}

MeanSE cost_reweighted(const Model& model, const ControlModel& control,
                       const FeedbackPolicy& policy, double t, State x,
                       int n_paths, const RngStream& rng) {
  if (n_paths < 2) throw OutOfRangeError("cost_reweighted needs n_paths >= 2");
  const ControlProcess process = as_control_process(policy);
  RunningStat stat;
  for (int i = 0; i < n_paths; ++i) {
    RngStream stream = rng.child(static_cast<std::uint64_t>(i));
    const MarkedPath path = simulate_path(model, t, x, stream);
    const double weight =
        weight_impl(model, control, process, path, policy.breakpoints())
            .terminal;
    const double run =
        running_cost_along(model, control, process, path, policy.breakpoints());
    stat.add(weight * (run + control.terminal_cost()(path.terminal_state())));
  }
  return {stat.mean(), stat.se()};
}

FundamentalGap fundamental_gap(const Model& model, const ControlModel& control,
                               const FeedbackPolicy& policy,
                               const ValueFunction& v, double t, State x,
                               int n_paths, const RngStream& rng) {
  if (n_paths < 2) throw OutOfRangeError("fundamental_gap needs n_paths >= 2");
  const Model controlled = controlled_model(model, control, policy);
  const double T = model.horizon();

  // Hamiltonian defect at one time point; <= 0 for every action by the
  // definition of the infimum.
  const auto integrand = [&](double s, State xs, int cell, Action u) {
    Vector z = v.row(s);
    z.array() -= z(xs);
    const double ham = hamiltonian_in_cell(model, control, cell, xs, z).value;
    const Matrix& nu = model.nu_cell(cell);
    const Matrix& r = control.r_cell(cell, u);
    double along = control.running_cost(cell, xs, u);
    for (Index y = 0; y < nu.cols(); ++y) {
      const double w = nu(xs, y);
      if (w != 0.0) along += z(y) * (r(xs, y) - 1.0) * w;
    }
    return ham - along;
  };

  // Subgrid cuts so the trapezoid tracks the value grid between jumps.
  std::vector<double> extra;
  for (int i = 0; i < v.n_nodes(); ++i) extra.push_back(v.time(i));
  for (double s : policy.breakpoints()) extra.push_back(s);
  const std::vector<double> cuts = merge_cuts(model, extra);

  FundamentalGap out;
  RunningStat gap_stat, value_stat;
  for (int i = 0; i < n_paths; ++i) {
    RngStream stream = rng.child(static_cast<std::uint64_t>(i));
    const MarkedPath path = simulate_path(controlled, t, x, stream);
    double gap = 0.0;
    double run = 0.0;
    walk_pieces(path, t, T, cuts,
                [&](double a, double b, State xs) {
                  const double mid = 0.5 * (a + b);
                  const int cell = model.cell_index(mid);
                  const Action u = policy.action_at(mid, xs);
                  const double wa = integrand(a, xs, cell, u);
                  const double wb = integrand(b, xs, cell, u);
                  out.max_integrand = std::max({out.max_integrand, wa, wb});
                  gap += 0.5 * (wa + wb) * (b - a);
                  run += control.running_cost(cell, xs, u) * (b - a);
                });
    const double cost = run + control.terminal_cost()(path.terminal_state());
    gap_stat.add(gap);
    value_stat.add(cost + gap);
  }
  out.gap = gap_stat.mean();
  out.se = gap_stat.se();
  out.value_check = value_stat.mean();
  out.value_check_se = value_stat.se();
  out.n_paths = n_paths;
  return out;
}

}  // namespace jumpproc
