#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "paulimix/channel.hpp"
#include "paulimix/errors.hpp"

namespace paulimix {

/// Denominators 1 - 2(1-alpha)q below this are treated as the singular
/// point q -> 1/n where the time-local generator blows up.
inline constexpr double singularity_threshold = 1e-14;

/// Time-local decay rates (gx, gy, gz) of the canonical generator
///   d rho/dt = sum_i g_i (sigma_i rho sigma_i - rho).
struct RateVector {
  double gx;
  double gy;
  double gz;

  double operator[](int axis) const {
    switch (axis) {
      case 0: return gx;
      case 1: return gy;
      case 2: return gz;
      default: throw std::out_of_range("RateVector: axis not in {0,1,2}");
    }
  }

  double min() const { return std::min(gx, std::min(gy, gz)); }
};

/// Rate of a single Pauli channel under the exponential profile:
///   gamma(t) = r / ((n-2) e^{rt} + 2).
/// Constant r/2 at n = 2, decaying to 0 for n > 2.
inline double gamma_single(const DecoherenceProfile& profile, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("gamma_single: need t >= 0");
  return profile.r / ((profile.n - 2.0) * std::exp(profile.r * t) + 2.0);
}

/// Building block f(alpha) = (dq/2)(1-alpha) / (1 - 2(1-alpha)q) of the
/// mixture rates.  Nonnegative whenever dq >= 0.  Throws SingularityError
/// when the denominator is within singularity_threshold of zero.
inline double f_term(double alpha, double q, double dq) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("f_term: need alpha in [0, 1]");
  if (!(q >= 0.0 && q <= 0.5))
    throw std::invalid_argument("f_term: need q in [0, 1/2]");
  const double denom = 1.0 - 2.0 * (1.0 - alpha) * q;
  if (denom <= singularity_threshold)
    throw SingularityError("f_term: generator singular, 1 - 2(1-alpha)q = " +
                               std::to_string(denom),
                           denom);
  return 0.5 * dq * (1.0 - alpha) / denom;
}

/// Canonical rates of the mixture at channel parameter q with speed dq:
///   gx = -f(x) + f(y) + f(z)   (and cyclic).
/// Pairwise sums equal 2 f(.) >= 0, so at most one rate is negative.
inline RateVector decay_rates(const MixWeights& w, double q, double dq) {
  const double fx = f_term(w.x, q, dq);
  const double fy = f_term(w.y, q, dq);
  const double fz = f_term(w.z, q, dq);
  return {-fx + fy + fz, fx - fy + fz, fx + fy - fz};
}

/// Rates along a trajectory t |-> (q(t), dq(t)) of the given profile.
/// The grid must be non-decreasing and nonnegative.
inline std::vector<RateVector> rate_trajectory(const MixWeights& w,
                                               const DecoherenceProfile& profile,
                                               std::span<const double> t_grid) {
  std::vector<RateVector> rates;
  rates.reserve(t_grid.size());
  double prev = 0.0;
  for (double t : t_grid) {
    if (!(t >= prev))
      throw std::invalid_argument("rate_trajectory: grid must be sorted and >= 0");
    prev = t;
    rates.push_back(decay_rates(w, q_of_t(profile, t), dq_dt(profile, t)));
  }
  return rates;
}

}  // namespace paulimix
