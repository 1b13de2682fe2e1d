#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace varsig {

// All stochastic operations take an Rng by reference (or a seed and build
// their own), so identical seeds replay identical streams.
using Rng = std::mt19937_64;

// Uniform in [0, 1), 53-bit resolution.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal draw via Box-Muller. std::normal_distribution is
// implementation-defined, which would break the byte-identical output
// contract across standard libraries; this consumes exactly two engine
// words per draw.
inline double standard_normal(Rng& rng) {
  const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace varsig
