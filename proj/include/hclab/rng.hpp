#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hclab/types.hpp"

namespace hclab {

/// Seeded generator with hand-rolled uniform and normal draws.
///
/// std::mt19937_64 is pinned by the standard, but the distribution adaptors
/// are not; drawing from raw engine output keeps streams byte-identical
/// across standard libraries, which the reporting contract relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; one spare value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Complex standard normal (independent N(0,1/2) parts, unit variance).
  Complex cnormal() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) * M_SQRT1_2;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hclab
