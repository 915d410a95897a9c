#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "circleprev/lifting.hpp"

namespace circleprev::testing {

inline constexpr double kPi = std::numbers::pi;
// 1 / (2.1 pi), the harmonic amplitude of the reference map.
inline const double kAmp = 1.0 / (2.1 * kPi);

// F(x) = x + 0.1 + sin(2 pi x) / (2.1 pi).
inline Lifting reference_map() { return Lifting(0.1, {{1, kAmp, 0.0}}); }

// Seeded generator of small trigonometric lifts.
class Gen {
 public:
  explicit Gen(unsigned long long seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Up to three harmonics; with diffeo set, sum 2 pi k (|s| + |c|) < 0.9 so F' > 0.1.
  Lifting lifting(bool diffeo = true, int regularity = kDefaultRegularity) {
    const int count = integer(0, 3);
    std::vector<Harmonic> hs;
    double budget = 0.9;
    for (int k = 1; k <= count; ++k) {
      const double scale = diffeo ? budget / (2.0 * kPi * k) / 2.0 : 0.5;
      const double s = uniform(-scale, scale);
      const double c = uniform(-scale, scale);
      if (diffeo) budget -= 2.0 * kPi * k * (std::abs(s) + std::abs(c));
      hs.push_back({k, s, c});
    }
    return Lifting(uniform(-1.0, 1.0), std::move(hs), regularity);
  }

  // Parameter away from 1 and from 0.
  double lambda() {
    double l;
    do {
      l = uniform(-3.0, 3.0);
    } while (std::abs(l - 1.0) < 0.05 || std::abs(l) < 0.05);
    return l;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace circleprev::testing
