#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>

#include "paulimix/channel.hpp"
#include "paulimix/errors.hpp"
#include "paulimix/quadrature.hpp"
#include "paulimix/rates.hpp"

namespace paulimix {

/// Choi eigenvalues above -choi_tolerance count as nonnegative; genuine CP
/// violations grow linearly past the region boundary, roundoff does not.
inline constexpr double choi_tolerance = 1e-12;

/// Pairwise rate sums above -rate_sum_tolerance count as nonnegative.
inline constexpr double rate_sum_tolerance = 1e-12;

/// Largest trace-distance increase still considered monotone.
inline constexpr double blp_tolerance = 1e-9;

/// Scan grids stop at q = (1 - scan_endpoint_shrink)/n, short of the
/// asymptote where the generator is singular.
inline constexpr double scan_endpoint_shrink = 1e-9;

inline constexpr int default_scan_grid = 4000;

struct DivisibilityReport {
  bool cp_divisible = true;
  bool p_divisible = true;
  std::optional<double> first_violation_q;  // set iff cp_divisible is false
  double min_choi_eigenvalue = 0.0;
};

namespace detail {

/// Intermediate-map eigenvalues between two points of the same trajectory:
/// component-wise ratio lambda_i(q2)/lambda_i(q1).  Exact for the
/// Pauli-diagonal family; no matrix inversion involved.
inline ChannelEigenvalues eigenvalue_ratios(const MixWeights& w, double q1,
                                            double q2) {
  const ChannelEigenvalues l1 = mixture_eigenvalues(w, q1);
  const ChannelEigenvalues l2 = mixture_eigenvalues(w, q2);
  double ratio[3];
  for (int i = 0; i < 3; ++i) {
    const double denom = l1[i];
    if (std::abs(denom) <= singularity_threshold)
      throw SingularityError(
          "intermediate_eigenvalues: lambda vanishes at the earlier instant",
          denom);
    ratio[i] = l2[i] / denom;
  }
  return ChannelEigenvalues(ratio[0], ratio[1], ratio[2]);
}

}  // namespace detail

inline ChannelEigenvalues intermediate_eigenvalues(
    const MixWeights& w, const DecoherenceProfile& profile, double t1,
    double t2) {
  if (!(t1 >= 0.0 && t2 >= t1))
    throw std::invalid_argument("intermediate_eigenvalues: need 0 <= t1 <= t2");
  return detail::eigenvalue_ratios(w, q_of_t(profile, t1), q_of_t(profile, t2));
}

/// CP-divisibility oracle: walks a uniform q-grid on [0, (1-eps)/n] and
/// tests the Choi spectrum of every consecutive intermediate map.  This is
/// the check the rate-sign classification is equivalent to, kept separate
/// so the two can cross-validate each other.
inline DivisibilityReport cp_divisibility_scan(const MixWeights& w,
                                               const DecoherenceProfile& profile,
                                               int grid_size = default_scan_grid) {
  if (grid_size < 100)
    throw std::invalid_argument("cp_divisibility_scan: need grid_size >= 100");
  const double q_max = (1.0 - scan_endpoint_shrink) / profile.n;
  DivisibilityReport report;
  report.min_choi_eigenvalue = std::numeric_limits<double>::infinity();
  double max_abs_ratio = 0.0;
  double q_prev = 0.0;
  for (int j = 1; j < grid_size; ++j) {
    const double q_next = q_max * j / (grid_size - 1);
    const ChannelEigenvalues mu = detail::eigenvalue_ratios(w, q_prev, q_next);
    const std::array<double, 4> spectrum = choi_spectrum(mu);
    for (double e : spectrum)
      report.min_choi_eigenvalue = std::min(report.min_choi_eigenvalue, e);
    for (int i = 0; i < 3; ++i)
      max_abs_ratio = std::max(max_abs_ratio, std::abs(mu[i]));
    if (report.cp_divisible &&
        *std::min_element(spectrum.begin(), spectrum.end()) < -choi_tolerance) {
      report.cp_divisible = false;
      report.first_violation_q = q_next;
    }
    q_prev = q_next;
  }
  report.p_divisible = max_abs_ratio <= 1.0 + choi_tolerance;
  return report;
}

/// P-divisibility via the rate criterion: all pairwise sums of decay rates
/// nonnegative across the grid.  For this family the sums equal 2 f(.) >= 0
/// identically, so the check must come back true on every valid input.
inline bool p_divisibility_check(const MixWeights& w,
                                 const DecoherenceProfile& profile,
                                 int grid_size = default_scan_grid) {
  if (grid_size < 100)
    throw std::invalid_argument("p_divisibility_check: need grid_size >= 100");
  const double q_max = (1.0 - scan_endpoint_shrink) / profile.n;
  for (int j = 0; j < grid_size; ++j) {
    const double q = q_max * j / (grid_size - 1);
    const RateVector g = decay_rates(w, q, 1.0);
    if (g.gx + g.gy < -rate_sum_tolerance || g.gy + g.gz < -rate_sum_tolerance ||
        g.gx + g.gz < -rate_sum_tolerance)
      return false;
  }
  return true;
}

struct BlpResult {
  bool monotone;
  double max_increase;
};

/// Trace-distance scan between two evolving states.  For this family the
/// distance is non-increasing for every state pair and every mixture (the
/// pairwise rate sums are nonnegative, so each Bloch contraction factor
/// decays monotonically): CP-indivisible mixtures are invisible to this
/// witness.
inline BlpResult blp_scan(const MixWeights& w, const DecoherenceProfile& profile,
                          const BlochState& state_a, const BlochState& state_b,
                          std::span<const double> t_grid) {
  double max_increase = 0.0;
  double prev = 0.0;
  bool have_prev = false;
  double last_t = 0.0;
  for (double t : t_grid) {
    if (!(t >= last_t))
      throw std::invalid_argument("blp_scan: t_grid must be sorted and >= 0");
    last_t = t;
    const ChannelEigenvalues l = mixture_eigenvalues(w, q_of_t(profile, t));
    const double d =
        trace_distance(apply_channel(l, state_a), apply_channel(l, state_b));
    if (have_prev) max_increase = std::max(max_increase, d - prev);
    prev = d;
    have_prev = true;
  }
  return {max_increase <= blp_tolerance, max_increase};
}

enum class ZetaMethod { ClosedForm, Quadrature };

struct ZetaResult {
  double n;
  double zeta;
  double reference_rate;  // the semigroup comparator r/2
};

inline constexpr double zeta_quadrature_tolerance = 1e-12;

/// Time-averaged deviation of the generator from the semigroup comparator
/// r/2 over t in [0, 1]:
///   zeta = integral_0^1 |r/2 - gamma(t)| dt,
/// nonnegative because gamma(t) <= r/2 pointwise.  The closed form follows
/// from the antiderivative of 1/((n-2)e^{rt} + 2):
///   zeta = (1/2) ln(((n-2)e^r + 2)/n),
/// exactly 0 at n = 2 and increasing towards r/2 as n grows.
inline ZetaResult zeta_measure(double n, double r, ZetaMethod method) {
  const DecoherenceProfile profile(n, r);  // validates n, r
  double zeta = 0.0;
  switch (method) {
    case ZetaMethod::ClosedForm:
      zeta = 0.5 * std::log(((n - 2.0) * std::exp(r) + 2.0) / n);
      break;
    case ZetaMethod::Quadrature:
      zeta = integrate_or_throw(
          [&](double t) { return std::abs(0.5 * r - gamma_single(profile, t)); },
          0.0, 1.0, zeta_quadrature_tolerance);
      break;
  }
  return {n, zeta, 0.5 * r};
}

}  // namespace paulimix
