#pragma once

#include <cmath>
#include <cstdint>

namespace jumpproc {

/// Welford running mean/variance; numerically stable for long Monte Carlo
/// reductions.
class RunningStat {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }

  std::uint64_t count() const { return n_; }
  double mean() const { return mean_; }

  /// Unbiased sample variance (0 for fewer than two samples).
  double variance() const {
    return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
  }

  /// Standard error of the mean.
  double se() const {
    return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  }

 private:
  std::uint64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

/// Sample mean with its standard error.
struct MeanSE {
  double mean = 0.0;
  double se = 0.0;
};

}  // namespace jumpproc
