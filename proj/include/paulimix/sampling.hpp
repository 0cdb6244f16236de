#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "paulimix/channel.hpp"

namespace paulimix {

/// Uniform double in (0, 1), built from the top 53 bits of one mt19937_64
/// draw.  Bypasses std::uniform_real_distribution, whose output is not
/// pinned down by the standard, so streams are reproducible across
/// platforms for a fixed seed.
inline double uniform_unit(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform point on the 2-simplex via normalized exponentials.
inline MixWeights sample_simplex(std::mt19937_64& rng) {
  const double ex = -std::log(uniform_unit(rng));
  const double ey = -std::log(uniform_unit(rng));
  const double ez = -std::log(uniform_unit(rng));
  const double sum = ex + ey + ez;
  return MixWeights(ex / sum, ey / sum, ez / sum);
}

/// Uniform point in the closed unit Bloch ball, by rejection from the
/// enclosing cube (acceptance ~0.52).
inline BlochState sample_bloch_ball(std::mt19937_64& rng) {
  for (;;) {
    const double bx = 2.0 * uniform_unit(rng) - 1.0;
    const double by = 2.0 * uniform_unit(rng) - 1.0;
    const double bz = 2.0 * uniform_unit(rng) - 1.0;
    if (bx * bx + by * by + bz * bz <= 1.0) return BlochState(bx, by, bz);
  }
}

/// Uniform point on the Bloch sphere surface (pure states).
inline BlochState sample_bloch_sphere(std::mt19937_64& rng) {
  const double u = 2.0 * uniform_unit(rng) - 1.0;  // cos(theta)
  const double phi = 2.0 * std::numbers::pi * uniform_unit(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
  return BlochState(s * std::cos(phi), s * std::sin(phi), u);
}

}  // namespace paulimix
