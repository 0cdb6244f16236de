#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "paulimix/channel.hpp"
#include "paulimix/errors.hpp"
#include "paulimix/quadrature.hpp"
#include "paulimix/rates.hpp"
#include "paulimix/sampling.hpp"

namespace paulimix {

enum class RegionLabel { Markovian, NmX, NmY, NmZ };

inline const char* to_string(RegionLabel label) {
  switch (label) {
    case RegionLabel::Markovian: return "MARKOVIAN";
    case RegionLabel::NmX: return "NM_X";
    case RegionLabel::NmY: return "NM_Y";
    case RegionLabel::NmZ: return "NM_Z";
  }
  return "?";
}

namespace detail {

inline void require_n(double n, const char* where) {
  if (!(n >= 2.0) || !std::isfinite(n))
    throw std::invalid_argument(std::string(where) + ": need finite n >= 2");
}

}  // namespace detail

/// Positive root beta+ = sqrt(n^2 + 1) - n bounding the real domain of the
/// boundary curves.  Computed as 1/(sqrt(n^2 + 1) + n): the direct form
/// cancels catastrophically at large n.
inline double beta_plus(double n) {
  detail::require_n(n, "beta_plus");
  return 1.0 / (std::sqrt(n * n + 1.0) + n);
}

/// g(n, y) = sqrt[(-n+y+1)(n+y-1)(beta+ - y)(beta- - y)], real and
/// nonnegative exactly for y in [0, beta+].  Using beta+ beta- = -1 the
/// radicand rearranges to ((n-1)^2 - y^2)(beta+ - y)(y + 1/beta+), which is
/// the form evaluated here (every factor individually nonnegative on the
/// domain, so roundoff cannot flip the sign of the product).
inline double g_of(double n, double y) {
  detail::require_n(n, "g_of");
  const double bp = beta_plus(n);
  if (!(y >= 0.0 && y <= bp * (1.0 + 1e-12)))
    throw std::domain_error("g_of: y outside [0, beta_plus]");
  const double inv_bp = std::sqrt(n * n + 1.0) + n;  // = 1/beta+ = -beta-
  const double radicand =
      ((n - 1.0) * (n - 1.0) - y * y) * std::max(0.0, bp - y) * (y + inv_bp);
  return std::sqrt(radicand);
}

struct XBounds {
  double x_minus;
  double x_plus;
};

/// Boundary curves x_pm(y) = (1/2)(pm g(n,y)/(y+n-1) - y + 1) of the region
/// where the y-rate turns negative.  Clamped into [0, 1] against roundoff
/// dust at y = 0 where the exact values are 0 and 1.
inline XBounds x_bounds(double n, double y) {
  const double h = g_of(n, y) / (y + n - 1.0);
  const double lo = 0.5 * (-h - y + 1.0);
  const double hi = 0.5 * (h - y + 1.0);
  return {std::clamp(lo, 0.0, 1.0), std::clamp(hi, 0.0, 1.0)};
}

/// Does the rate component `axis` turn negative somewhere along the
/// evolution?  The curves above describe the y-component region; the x and
/// z conditions follow by permuting coordinates (the rate expressions are
/// symmetric under simultaneous permutation of weights and rates).
inline bool nm_condition(const MixWeights& w, double n, int axis) {
  const double d = w[axis];  // distinguished coordinate of the family
  if (d > beta_plus(n)) return false;
  const double companion = (axis == 1) ? w.x : (axis == 0) ? w.y : w.x;
  const XBounds b = x_bounds(n, d);
  return companion > b.x_minus && companion < b.x_plus;
}

/// Classification per the analytic boundary-curve condition.  Deliberately
/// not implemented via rate evaluation at q = 1/n: rates are singular in
/// that limit on simplex edges at n = 2, while the curve formula is the
/// already-taken limit.  The three NM conditions are mutually exclusive, so
/// the probe order does not matter.
inline RegionLabel classify(const MixWeights& w, double n) {
  if (nm_condition(w, n, 0)) return RegionLabel::NmX;
  if (nm_condition(w, n, 1)) return RegionLabel::NmY;
  if (nm_condition(w, n, 2)) return RegionLabel::NmZ;
  return RegionLabel::Markovian;
}

struct BoundarySample {
  double y;  // distinguished coordinate of the curve family
  double x_minus;
  double x_plus;
};

struct RegionBoundary {
  double n;
  std::vector<BoundarySample> samples;
};

struct LabeledBoundary {
  RegionLabel region;
  RegionBoundary curve;
};

/// Uniform-grid table of the bounding curves over the distinguished
/// coordinate's domain [0, beta+], emitted once per region family.  The
/// numeric table is identical for the three families; only the embedding
/// into simplex coordinates differs (see boundary_point_xy).
inline std::array<LabeledBoundary, 3> boundary_polyline(double n,
                                                        int samples_per_curve) {
  detail::require_n(n, "boundary_polyline");
  if (samples_per_curve < 2)
    throw std::invalid_argument("boundary_polyline: need samples_per_curve >= 2");
  const double bp = beta_plus(n);
  RegionBoundary table{n, {}};
  table.samples.reserve(samples_per_curve);
  for (int j = 0; j < samples_per_curve; ++j) {
    const double y = bp * j / (samples_per_curve - 1);
    const XBounds b = x_bounds(n, y);
    table.samples.push_back({y, b.x_minus, b.x_plus});
  }
  return {LabeledBoundary{RegionLabel::NmX, table},
          LabeledBoundary{RegionLabel::NmY, table},
          LabeledBoundary{RegionLabel::NmZ, table}};
}

/// Embeds a boundary sample of the given family into simplex (x, y)
/// coordinates.  d is the distinguished coordinate, b one of the two
/// bounds at d.
inline std::array<double, 2> boundary_point_xy(RegionLabel region, double d,
                                               double b) {
  switch (region) {
    case RegionLabel::NmY: return {b, d};
    case RegionLabel::NmX: return {d, b};
    case RegionLabel::NmZ: return {b, 1.0 - d - b};
    default:
      throw std::invalid_argument("boundary_point_xy: need an NM region label");
  }
}

struct MeasureResult {
  double value;
  double error_estimate;
  bool converged;
};

/// Non-Markovian fraction of the simplex, |M| = 3 |R_y| with
/// |R_y| = 2 * integral_0^{beta+} (x_plus - x_minus) dy.  The integrand has
/// a sqrt endpoint at y = beta+, removed by substituting y = beta+ sin^2(t):
/// the sqrt(beta+ - y) factor becomes beta+^(1/2) cos(t) and the transformed
/// integrand is smooth, so plain adaptive Simpson converges fast.
inline MeasureResult region_measure_detail(double n, double tolerance) {
  detail::require_n(n, "region_measure");
  if (!(tolerance > 0.0))
    throw std::invalid_argument("region_measure: need tolerance > 0");
  const double bp = beta_plus(n);
  const double inv_bp = std::sqrt(n * n + 1.0) + n;
  auto integrand = [=](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    const double y = bp * s * s;
    const double root = std::sqrt(
        std::max(0.0, bp * (y + inv_bp) * ((n - 1.0) * (n - 1.0) - y * y)));
    return 2.0 * bp * s * c * c * root / (y + n - 1.0);
  };
  const QuadratureResult q = integrate_adaptive(
      integrand, 0.0, 0.5 * std::numbers::pi, tolerance / 6.0);
  return {6.0 * q.value, 6.0 * q.error_estimate, q.converged};
}

inline double region_measure(double n, double tolerance = 1e-9) {
  const MeasureResult m = region_measure_detail(n, tolerance);
  if (!m.converged)
    throw QuadratureError("region_measure: quadrature did not converge",
                          m.error_estimate);
  return m.value;
}

struct MonteCarloEstimate {
  double estimate;
  double std_error;
};

/// Monte Carlo oracle for region_measure: uniform simplex draws classified
/// one by one.  The simplex carries measure 1 here, so the non-Markovian
/// fraction estimates the same quantity as the quadrature.
inline MonteCarloEstimate monte_carlo_measure(double n, std::int64_t sample_count,
                                              std::uint64_t seed) {
  detail::require_n(n, "monte_carlo_measure");
  if (sample_count < 1000)
    throw std::invalid_argument("monte_carlo_measure: need sample_count >= 1000");
  std::mt19937_64 rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < sample_count; ++i)
    if (classify(sample_simplex(rng), n) != RegionLabel::Markovian) ++hits;
  const double p = static_cast<double>(hits) / static_cast<double>(sample_count);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(sample_count))};
}

/// Linear map (x, y) -> (u, v) = (m11 x + m12 y, m22 y) sending the right
/// triangle {(0,0), (1,0), (0,1)} onto an equilateral one.  Two mutually
/// inconsistent conventions are in circulation, so both are provided:
///   unit_side       k = 1/2              vertices (0,0), (1,0), (1/2, sqrt3/2)
///   area_preserving k = (2 sqrt3)^(-1/2) det = 1, image area = 1/2
struct SimplexTransform {
  double m11;
  double m12;
  double m21;
  double m22;
  double k;

  static SimplexTransform with_scale(double k) {
    return {2.0 * k, k, 0.0, std::sqrt(3.0) * k, k};
  }
  static SimplexTransform unit_side() { return with_scale(0.5); }
  static SimplexTransform area_preserving() {
    return with_scale(1.0 / std::sqrt(2.0 * std::sqrt(3.0)));
  }
};

inline std::array<double, 2> to_equilateral(const SimplexTransform& m, double x,
                                            double y) {
  return {m.m11 * x + m.m12 * y, m.m22 * y};
}

/// Piecewise-linear stand-in for the six boundary branches (three families,
/// lower/upper each) in simplex (x, y) coordinates, for Euclidean distance
/// queries.  Parameters are clustered as sin^2 towards the curve tips where
/// the curvature concentrates; at the default resolution the chord error is
/// below 1e-6, far inside the 1e-4 margins the distance is queried against.
/// Coordinate-aligned proxies are NOT a substitute: near a tip the curve
/// runs horizontally and the horizontal gap wildly overestimates the true
/// distance.
class BoundaryGeometry {
 public:
  explicit BoundaryGeometry(double n, int samples_per_branch = 1024) : n_(n) {
    detail::require_n(n, "BoundaryGeometry");
    if (samples_per_branch < 2)
      throw std::invalid_argument("BoundaryGeometry: need samples_per_branch >= 2");
    const double bp = beta_plus(n);
    lines_.reserve(6);
    for (RegionLabel region :
         {RegionLabel::NmX, RegionLabel::NmY, RegionLabel::NmZ}) {
      for (int upper = 0; upper < 2; ++upper) {
        std::vector<std::array<double, 2>> pts;
        pts.reserve(samples_per_branch);
        for (int j = 0; j < samples_per_branch; ++j) {
          const double th =
              0.5 * std::numbers::pi * j / (samples_per_branch - 1);
          const double s = std::sin(th);
          const double d = bp * s * s;
          const XBounds b = x_bounds(n, d);
          pts.push_back(
              boundary_point_xy(region, d, upper ? b.x_plus : b.x_minus));
        }
        lines_.push_back(std::move(pts));
      }
    }
  }

  /// Euclidean distance from (x, y) to the nearest sampled boundary branch.
  double distance(double x, double y) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& line : lines_) {
      for (std::size_t i = 0; i + 1 < line.size(); ++i)
        best = std::min(best, segment_distance2(x, y, line[i], line[i + 1]));
    }
    return std::sqrt(best);
  }

  double n() const noexcept { return n_; }

 private:
  static double segment_distance2(double px, double py,
                                  const std::array<double, 2>& a,
                                  const std::array<double, 2>& b) {
    const double dx = b[0] - a[0];
    const double dy = b[1] - a[1];
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0)
      t = std::clamp(((px - a[0]) * dx + (py - a[1]) * dy) / len2, 0.0, 1.0);
    const double ex = a[0] + t * dx - px;
    const double ey = a[1] + t * dy - py;
    return ex * ex + ey * ey;
  }

  double n_;
  std::vector<std::vector<std::array<double, 2>>> lines_;
};

inline double boundary_margin(const MixWeights& w, const BoundaryGeometry& geom) {
  return geom.distance(w.x, w.y);
}

}  // namespace paulimix
