#pragma once

#include <functional>
#include <optional>

#include "jumpproc/model.hpp"
#include "jumpproc/path.hpp"
#include "jumpproc/rng.hpp"
#include "jumpproc/stats.hpp"

namespace jumpproc {

/// Jump time and post-jump state of a single transition.
struct FirstJump {
  double time;
  State state;
};

/// Integrand H(s, y) over time and mark.
using Integrand = std::function<double(double s, State y)>;

/// Predictable integrand H(s, y, x) that also sees the pre-jump state
/// X_{s-}; this is how path-dependent fields such as Z_s(y) = v(s,y) -
/// v(s, X_{s-}) enter the stochastic integral.
using PredictableIntegrand = std::function<double(double s, State y, State x)>;

/// Integrals of one integrand along one path: against the jump measure p,
/// against the compensator nu(s, X_s, dy) ds, and their difference (the
/// integral against the martingale measure q).
struct IntegralPair {
  double p_part = 0.0;
  double nu_part = 0.0;
  double q_part() const { return p_part - nu_part; }
};

/// Time-quadrature rule for compensator integrals. Cell-exact sampling is
/// exact for integrands piecewise constant on the model's cells; integrands
/// with continuous time dependence are integrated by the trapezoid rule on
/// the global subgrid {k * h_quad} refined by segment endpoints.
struct Quadrature {
  bool piecewise_constant = false;
  double h_quad = 1e-3;

  static Quadrature cell_exact() { return {true, 0.0}; }
  static Quadrature subgrid(double h = 1e-3) { return {false, h}; }
};

/// Draws the first jump after t from state x by exact inversion of the
/// piecewise-linear integrated hazard; returns nullopt when no jump occurs
/// before the horizon. On a jump the post-jump state differs from x.
/// Throws OutOfRangeError for t outside [0, T) or an invalid state.
std::optional<FirstJump> sample_first_jump(const Model& model, double t,
                                           State x, RngStream& rng);

/// Thinning sampler for callback rate measures with a declared bound:
/// candidate jumps arrive at rate lambda_bound and are accepted with
/// probability lambda(s,x)/lambda_bound. Distributionally identical to
/// sample_first_jump when the callback wraps a piecewise-constant model.
std::optional<FirstJump> sample_first_jump_thinning(
    const CallbackRateModel& model, double t, State x, RngStream& rng);

/// Simulates the marked point process from (t, x) until the horizon.
MarkedPath simulate_path(const Model& model, double t, State x,
                         RngStream& rng);

/// Thinning-based path simulation for callback rate measures.
MarkedPath simulate_path_thinning(const CallbackRateModel& model, double t,
                                  State x, RngStream& rng);

/// Integrates H over (s_lo, s_hi] against p(ds dy) (sum over jumps) and
/// against the compensator nu(s, X_s, dy) ds (segment-by-segment quadrature,
/// exact per constant piece under the cell-exact rule).
/// Requires [s_lo, s_hi] within [path.start_time, path.horizon].
IntegralPair stochastic_integral(const Model& model, const MarkedPath& path,
                                 const Integrand& H, double s_lo, double s_hi,
                                 const Quadrature& quad = Quadrature::subgrid());

/// Predictable-integrand form: the jump sum evaluates H at the pre-jump
/// state, and the compensator part uses the state of the surrounding
/// constant piece (the left limit almost everywhere).
IntegralPair stochastic_integral(const Model& model, const MarkedPath& path,
                                 const PredictableIntegrand& H, double s_lo,
                                 double s_hi,
                                 const Quadrature& quad = Quadrature::subgrid());

/// Monte Carlo mean and standard error of the q-integral of H over [t, T]
/// across n_paths independent paths (stream-indexed from rng).
MeanSE martingale_mean(const Model& model, const Integrand& H, double t,
                       State x, int n_paths, const RngStream& rng,
                       const Quadrature& quad = Quadrature::subgrid());

MeanSE martingale_mean(const Model& model, const PredictableIntegrand& H,
                       double t, State x, int n_paths, const RngStream& rng,
                       const Quadrature& quad = Quadrature::subgrid());

/// Integrand along a trajectory; receives the current state and the pinned
/// rate cell of the surrounding piece, so tabulated data can be looked up
/// without boundary ambiguity.
using SegmentIntegrand = std::function<double(double s, State x, int cell)>;

/// Trapezoid integral of fn over [lo, hi] along the path, with pieces split
/// at jump times, rate breakpoints, and the global subgrid {k * h_sub};
/// exact whenever fn is piecewise linear between the split points.
double path_time_integral(const Model& model, const MarkedPath& path,
                          double lo, double hi, double h_sub,
                          const SegmentIntegrand& fn);

}  // namespace jumpproc
