#include "jumpproc/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace jumpproc {

namespace {

// Draws a mark from one rate row; total must be the row sum (> 0). The
// diagonal entry is zero, so the returned state always differs from x.
State draw_mark(const Eigen::Ref<const Eigen::RowVectorXd>& row, double total,
                RngStream& rng) {
  const double target = rng.uniform() * total;
  double cum = 0.0;
  State last_positive = -1;
  for (Index y = 0; y < row.size(); ++y) {
    const double w = row(y);
    if (w <= 0.0) continue;
    cum += w;
    last_positive = static_cast<State>(y);
    if (cum >= target) return last_positive;
  }
  return last_positive;  // rounding pushed cum below target
}

}  // namespace

std::optional<FirstJump> sample_first_jump(const Model& model, double t,
                                           State x, RngStream& rng) {
  if (!model.valid_state(x)) throw OutOfRangeError("invalid state index");
  if (!(t >= 0.0 && t < model.horizon()))
    throw OutOfRangeError("start time outside [0, horizon)");

  // Invert the integrated hazard: find s with int_t^s lambda(r,x) dr = E.
  double budget = rng.exponential();
  double a = t;
  const auto& bp = model.breakpoints();
  for (int cell = model.cell_index(t); cell < model.n_cells(); ++cell) {
    const double b = bp[cell + 1];
    const double lam = model.lambda_cell(cell)(x);
    if (lam > 0.0) {
      const double dt = budget / lam;
      if (a + dt <= b) {
        const double s = a + dt;
        const State y =
            draw_mark(model.nu_cell(cell).row(x), lam, rng);
        return FirstJump{s, y};
      }
      budget -= lam * (b - a);
    }
    a = b;
  }
  return std::nullopt;
}

std::optional<FirstJump> sample_first_jump_thinning(
    const CallbackRateModel& model, double t, State x, RngStream& rng) {
  if (x < 0 || x >= model.n_states)
    throw OutOfRangeError("invalid state index");
  if (!(t >= 0.0 && t < model.horizon))
    throw OutOfRangeError("start time outside [0, horizon)");
  if (!(model.lambda_bound > 0.0))
    return std::nullopt;

  double s = t;
  for (;;) {
    s += rng.exponential() / model.lambda_bound;
    if (s > model.horizon) return std::nullopt;
    const Vector row = model.nu_row(s, x);
    const double lam = row.sum();
    if (lam < 0.0 || lam > model.lambda_bound * (1.0 + 1e-12))
      throw ValidationError("callback rate exceeds the declared bound");
    if (lam > 0.0 && rng.uniform() < lam / model.lambda_bound) {
      return FirstJump{s, draw_mark(row.transpose(), lam, rng)};
    }
  }
}

namespace {

template <typename FirstJumpFn>
MarkedPath run_chain(double t, State x, double horizon, FirstJumpFn&& next) {
  MarkedPath path;
  path.start_time = t;
  path.start_state = x;
  path.horizon = horizon;
  double s = t;
  State cur = x;
  while (s < horizon) {
    auto jump = next(s, cur);
    if (!jump) break;
    double js = jump->time;
    // Guard against a degenerate rounding case: keep times strictly increasing.
    if (js <= s) js = std::nextafter(s, horizon + 1.0);
    if (js > horizon) break;
    path.jump_times.push_back(js);
    path.marks.push_back(jump->state);
    s = js;
    cur = jump->state;
  }
  return path;
}

}  // namespace

MarkedPath simulate_path(const Model& model, double t, State x,
                         RngStream& rng) {
  if (!model.valid_state(x)) throw OutOfRangeError("invalid state index");
  if (!(t >= 0.0 && t <= model.horizon()))
    throw OutOfRangeError("start time outside [0, horizon]");
  return run_chain(t, x, model.horizon(),
                   [&](double s, State cur) -> std::optional<FirstJump> {
                     if (s >= model.horizon()) return std::nullopt;
                     return sample_first_jump(model, s, cur, rng);
                   });
}

MarkedPath simulate_path_thinning(const CallbackRateModel& model, double t,
                                  State x, RngStream& rng) {
  if (x < 0 || x >= model.n_states)
    throw OutOfRangeError("invalid state index");
  if (!(t >= 0.0 && t <= model.horizon))
    throw OutOfRangeError("start time outside [0, horizon]");
  return run_chain(t, x, model.horizon,
                   [&](double s, State cur) -> std::optional<FirstJump> {
                     if (s >= model.horizon) return std::nullopt;
                     return sample_first_jump_thinning(model, s, cur, rng);
                   });
}

namespace {

// sum_y H(s,y,x) nu(x,{y}) for one rate row.
double row_integrand(const PredictableIntegrand& H, double s, const Matrix& nu,
                     State x) {
  double acc = 0.0;
  for (Index y = 0; y < nu.cols(); ++y) {
    const double w = nu(x, y);
    if (w != 0.0) acc += H(s, static_cast<State>(y), x) * w;
  }
  return acc;
}

}  // namespace

IntegralPair stochastic_integral(const Model& model, const MarkedPath& path,
                                 const PredictableIntegrand& H, double s_lo,
                                 double s_hi, const Quadrature& quad) {
  if (!(s_lo >= path.start_time && s_hi <= path.horizon && s_lo <= s_hi))
    throw OutOfRangeError("integration window outside the path's span");

  IntegralPair out;
  State pre = path.start_state;
  for (int i = 0; i < path.n_jumps(); ++i) {
    const double tj = path.jump_times[i];
    if (tj > s_lo && tj <= s_hi) out.p_part += H(tj, path.marks[i], pre);
    pre = path.marks[i];
  }

  const auto& bp = model.breakpoints();
  for (const auto& seg : path.segments(s_lo, s_hi)) {
    // Split the constant piece at rate breakpoints.
    double a = seg.a;
    while (a < seg.b) {
      const int cell = (a < model.horizon()) ? model.cell_index(a)
                                             : model.n_cells() - 1;
      const double b = std::min(seg.b, bp[cell + 1]);
      const Matrix& nu = model.nu_cell(cell);
      if (quad.piecewise_constant) {
        out.nu_part += row_integrand(H, a, nu, seg.x) * (b - a);
      } else {
        if (!(quad.h_quad > 0.0))
          throw ValidationError("quadrature step must be positive");
        // Trapezoid on the global subgrid {k h} refined by [a, b].
        double p = a;
        double wp = row_integrand(H, p, nu, seg.x);
        long k = static_cast<long>(std::floor(a / quad.h_quad)) + 1;
        while (p < b) {
          const double q = std::min(b, static_cast<double>(k) * quad.h_quad);
          ++k;
          if (q <= p) continue;
          const double wq = row_integrand(H, q, nu, seg.x);
          out.nu_part += 0.5 * (wp + wq) * (q - p);
          p = q;
          wp = wq;
        }
      }
      a = b;
    }
  }
  return out;
}

IntegralPair stochastic_integral(const Model& model, const MarkedPath& path,
                                 const Integrand& H, double s_lo, double s_hi,
                                 const Quadrature& quad) {
  return stochastic_integral(
      model, path,
      [&H](double s, State y, State) { return H(s, y); }, s_lo, s_hi, quad);
}

MeanSE martingale_mean(const Model& model, const PredictableIntegrand& H,
                       double t, State x, int n_paths, const RngStream& rng,
                       const Quadrature& quad) {
  if (n_paths < 2) throw OutOfRangeError("martingale_mean needs n_paths >= 2");
  RunningStat stat;
  for (int i = 0; i < n_paths; ++i) {
    RngStream stream = rng.child(static_cast<std::uint64_t>(i));
    const MarkedPath path = simulate_path(model, t, x, stream);
    stat.add(stochastic_integral(model, path, H, t, model.horizon(), quad)
                 .q_part());
  }
  return {stat.mean(), stat.se()};
}

MeanSE martingale_mean(const Model& model, const Integrand& H, double t,
                       State x, int n_paths, const RngStream& rng,
                       const Quadrature& quad) {
  return martingale_mean(
      model, [&H](double s, State y, State) { return H(s, y); }, t, x, n_paths,
      rng, quad);
}

double path_time_integral(const Model& model, const MarkedPath& path,
                          double lo, double hi, double h_sub,
                          const SegmentIntegrand& fn) {
  if (!(lo >= path.start_time && hi <= path.horizon && lo <= hi))
    throw OutOfRangeError("integration window outside the path's span");
  if (!(h_sub > 0.0)) throw ValidationError("subgrid step must be positive");

  double total = 0.0;
  const auto& bp = model.breakpoints();
  for (const auto& seg : path.segments(lo, hi)) {
    double a = seg.a;
    while (a < seg.b) {
      const int cell = (a < model.horizon()) ? model.cell_index(a)
                                             : model.n_cells() - 1;
      const double b = std::min(seg.b, bp[cell + 1]);
      double p = a;
      double wp = fn(p, seg.x, cell);
      long k = static_cast<long>(std::floor(a / h_sub)) + 1;
      while (p < b) {
        const double q = std::min(b, static_cast<double>(k) * h_sub);
        ++k;
        if (q <= p) continue;
        const double wq = fn(q, seg.x, cell);
        total += 0.5 * (wp + wq) * (q - p);
        p = q;
        wp = wq;
      }
      a = b;
    }
  }
  return total;
}

}  // namespace jumpproc
