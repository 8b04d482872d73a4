#pragma once

#include <cstdint>
#include <cmath>
#include <random>

namespace jumpproc {

namespace detail {

// splitmix64 (Vigna, public domain); used to decorrelate (seed, stream) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Counter-addressed random stream: identical (seed, stream) reproduces the
/// identical draw sequence bit-for-bit on every platform. Uniform and
/// exponential variates are generated from the raw engine output directly, so
/// no implementation-defined std:: distribution enters the sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream),
        engine_(detail::splitmix64(detail::splitmix64(seed) ^
                                   detail::splitmix64(~stream))) {}

  /// Independent child stream; child(i) != child(j) for i != j.
  RngStream child(std::uint64_t i) const {
    return RngStream(seed_, detail::splitmix64(stream_) + i + 1);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard exponential (rate 1), strictly positive.
  double exponential() { return -std::log(uniform()); }

  std::uint64_t raw() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace jumpproc
