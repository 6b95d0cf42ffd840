#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "holocycle/circle_diffeo.hpp"

namespace holocycle::testutil {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Small deterministic generator for property-style tests; splitmix64 keeps
/// the sequences independent of library RNG implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed * 0x9E3779B97F4A7C15ULL + 1) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int index(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_;
};

/// Random smooth lift t + c0 + sum of a few low Fourier modes, with the mode
/// amplitudes kept small enough that the slope stays above 1/2.
inline std::function<double(double)> random_lift(Rng& rng, int modes = 3,
                                                 double scale = 0.02) {
  std::vector<double> as(static_cast<std::size_t>(modes)),
      bs(static_cast<std::size_t>(modes));
  double c0 = rng.uniform();
  for (int m = 0; m < modes; ++m) {
    as[static_cast<std::size_t>(m)] = rng.uniform(-scale, scale) / (m + 1);
    bs[static_cast<std::size_t>(m)] = rng.uniform(-scale, scale) / (m + 1);
  }
  return [c0, as, bs](double t) {
    double v = t + c0;
    for (std::size_t m = 0; m < as.size(); ++m) {
      double w = kTwoPi * static_cast<double>(m + 1);
      v += as[m] * std::sin(w * t) + bs[m] * std::cos(w * t);
    }
    return v;
  };
}

inline CircleDiffeo random_diffeo(Rng& rng, int grid = 128, int order = 3) {
  return CircleDiffeo::from_lift(random_lift(rng), grid, order);
}

}  // namespace holocycle::testutil
