#pragma once

#include <vector>

#include "jumpproc/errors.hpp"
#include "jumpproc/types.hpp"

namespace jumpproc {

/// One realization of the marked point process on [start_time, horizon]:
/// strictly increasing jump times in (start_time, horizon] with the state
/// entered at each jump. The trajectory is the right-continuous step function
/// X_s; left limits at jump times give the pre-jump state.
struct MarkedPath {
  double start_time = 0.0;
  State start_state = 0;
  double horizon = 0.0;
  std::vector<double> jump_times;
  std::vector<State> marks;

  int n_jumps() const { return static_cast<int>(jump_times.size()); }

  /// X_s (right-continuous); s in [start_time, horizon].
  State state_at(double s) const {
    State x = start_state;
    for (std::size_t i = 0; i < jump_times.size() && jump_times[i] <= s; ++i)
      x = marks[i];
    return x;
  }

  /// X_{s-}: the state strictly before s (start_state at s == start_time).
  State left_state(double s) const {
    State x = start_state;
    for (std::size_t i = 0; i < jump_times.size() && jump_times[i] < s; ++i)
      x = marks[i];
    return x;
  }

  /// Terminal state X_T.
  State terminal_state() const {
    return marks.empty() ? start_state : marks.back();
  }

  /// Maximal constant piece [a, b) of the trajectory with its state; the
  /// final piece closes at the horizon.
  struct Segment {
    double a;
    double b;
    State x;
  };

  /// Constant pieces of X restricted to [lo, hi], in order. Empty when
  /// lo >= hi.
  std::vector<Segment> segments(double lo, double hi) const {
    std::vector<Segment> out;
    if (!(lo < hi)) return out;
    double a = lo;
    State x = state_at(lo);
    for (std::size_t i = 0; i < jump_times.size(); ++i) {
      const double tj = jump_times[i];
      if (tj <= lo) continue;
      if (tj >= hi) break;
      out.push_back({a, tj, x});
      a = tj;
      x = marks[i];
    }
    out.push_back({a, hi, x});
    return out;
  }
};

}  // namespace jumpproc
