#include "jumpproc/bsde.hpp"

#include <algorithm>
#include <cmath>

#include "jumpproc/simulate.hpp"
#include "jumpproc/stats.hpp"

namespace jumpproc {

namespace {

// Integrals of the identified field Z_s(y) = v(s,y) - v(s,X_{s-}) against p
// and its compensator over (lo, hi]. The compensator part equals
// int (L_s v)(X_s) ds and the quadrature subgrid tracks the value grid, so
// it is exact for the piecewise-linear table.
IntegralPair z_integral(const Model& model, const ValueFunction& v,
                        const MarkedPath& path, double lo, double hi) {
  return stochastic_integral(
      model, path,
      [&v](double s, State y, State pre) {
        return v.value(s, y) - v.value(s, pre);
      },
      lo, hi, Quadrature::subgrid(v.step()));
}

int first_node_at_or_after(const ValueFunction& v, double t) {
  const int N = v.n_nodes() - 1;
  int i = static_cast<int>(std::ceil(t / v.step() - 1e-12));
  return std::min(std::max(i, 0), N);
}

}  // namespace

double bsde_residual(const Model& model, const Driver& driver,
                     const ValueFunction& v, const MarkedPath& path) {
  if (v.n_states() != model.n_states())
    throw ValidationError("value table width does not match n");
  const int N = v.n_nodes() - 1;
  const double terminal = v.at(N, path.terminal_state());

  const auto f_term = [&](double s, State x, int cell) {
    Vector z = v.row(s);
    const double y = z(x);
    z.array() -= y;
    return driver.eval(model, cell, s, x, y, z);
  };

  // Suffix accumulation of the q-integral and the f-integral from T down.
  double q_int = 0.0;
  double f_int = 0.0;
  double worst = 0.0;
  const int i0 = first_node_at_or_after(v, path.start_time);
  for (int i = N; i >= i0; --i) {
    const double s = std::max(v.time(i), path.start_time);
    if (i < N) {
      const double b = std::max(v.time(i + 1), path.start_time);
      q_int += z_integral(model, v, path, s, b).q_part();
      f_int += path_time_integral(model, path, s, b, v.step(), f_term);
    }
    const double defect =
        v.value(s, path.state_at(s)) + q_int - terminal - f_int;
    worst = std::max(worst, std::abs(defect));
  }
  if (path.start_time < v.time(i0) - 1e-12) {
    const double s = path.start_time;
    q_int += z_integral(model, v, path, s, v.time(i0)).q_part();
    f_int += path_time_integral(model, path, s, v.time(i0), v.step(), f_term);
    const double defect =
        v.value(s, path.state_at(s)) + q_int - terminal - f_int;
    worst = std::max(worst, std::abs(defect));
  }
  return worst;
}

double verify_ito(const Model& model, const ValueFunction& v,
                  const MarkedPath& path) {
  if (v.n_states() != model.n_states())
    throw ValidationError("value table width does not match n");
  const int N = v.n_nodes() - 1;
  const double t0 = path.start_time;
  const double y0 = v.value(t0, path.start_state);

  double drift = 0.0;   // int (d_r v + L_r v)(X_r) dr
  double q_int = 0.0;   // int int (v(r,y) - v(r,X_{r-})) q(dr dy)
  double worst = std::abs(v.value(t0, path.state_at(t0)) - y0);

  const int i0 = first_node_at_or_after(v, t0);
  double prev = t0;
  for (int i = i0; i <= N; ++i) {
    const double s = v.time(i);
    if (s > prev) {
      // d_r v is the finite-difference slope of the interval holding the
      // piece; pieces here never straddle a grid node.
      double dv = 0.0;
      for (const auto& seg : path.segments(prev, s)) {
        const int j = v.interval_index(0.5 * (seg.a + seg.b));
        const double slope =
            (v.at(j + 1, seg.x) - v.at(j, seg.x)) / (v.time(j + 1) - v.time(j));
        dv += slope * (seg.b - seg.a);
      }
      const IntegralPair zi = z_integral(model, v, path, prev, s);
      drift += dv + zi.nu_part;
      q_int += zi.q_part();
    }
    const double defect =
        v.value(s, path.state_at(s)) - y0 - drift - q_int;
    worst = std::max(worst, std::abs(defect));
    prev = s;
  }
  return worst;
}

EnergyGap energy_identity_gap(const Model& model, const ValueFunction& v,
                              const SourceTerm& source, double t, State x,
                              double beta, int n_paths, const RngStream& rng) {
  if (n_paths < 100)
    throw OutOfRangeError("energy_identity_gap needs n_paths >= 100");
  const int N = v.n_nodes() - 1;
  const double T = v.horizon();
  const double y_start = v.value(t, x);

  RunningStat lhs_stat, rhs_stat, gap_stat;
  for (int i = 0; i < n_paths; ++i) {
    RngStream stream = rng.child(static_cast<std::uint64_t>(i));
    const MarkedPath path = simulate_path(model, t, x, stream);
    const double xi = v.at(N, path.terminal_state());

    const double y_sq = path_time_integral(
        model, path, t, T, v.step(), [&](double s, State xs, int) {
          const double ys = v.value(s, xs);
          return std::exp(beta * s) * ys * ys;
        });
    const double z_sq = path_time_integral(
        model, path, t, T, v.step(), [&](double s, State xs, int cell) {
          const Matrix& nu = model.nu_cell(cell);
          const double vx = v.value(s, xs);
          double acc = 0.0;
          for (Index y = 0; y < nu.cols(); ++y) {
            const double w = nu(xs, y);
            if (w != 0.0) {
              const double dz = v.value(s, static_cast<State>(y)) - vx;
              acc += dz * dz * w;
            }
          }
          return std::exp(beta * s) * acc;
        });
    const double y_source = path_time_integral(
        model, path, t, T, v.step(), [&](double s, State xs, int) {
          return std::exp(beta * s) * v.value(s, xs) * source(s, xs);
        });

    const double lhs =
        std::exp(beta * t) * y_start * y_start + beta * y_sq + z_sq;
    const double rhs = std::exp(beta * T) * xi * xi + 2.0 * y_source;
    lhs_stat.add(lhs);
    rhs_stat.add(rhs);
    gap_stat.add(lhs - rhs);
  }
  return {lhs_stat.mean(), rhs_stat.mean(), gap_stat.mean(), gap_stat.se(),
          n_paths};
}

}  // namespace jumpproc
