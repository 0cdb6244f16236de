#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace paulimix {

/// Accepted drift of x + y + z away from 1 before MixWeights rejects the
/// input (the sum is renormalized to exactly 1 on construction).
inline constexpr double weight_sum_slack = 1e-9;

/// Floating-point slack on |eigenvalue| <= 1 and |bloch vector| <= 1.
inline constexpr double contraction_slack = 1e-12;

/// Convex mixing fractions (x, y, z) of the three single-axis Pauli
/// channels.  Always normalized: components are clamped of negative dust
/// below weight_sum_slack and rescaled so the sum is exactly 1.
struct MixWeights {
  double x;
  double y;
  double z;

  MixWeights(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {
    clamp_dust(x);
    clamp_dust(y);
    clamp_dust(z);
    if (x < 0.0 || y < 0.0 || z < 0.0)
      throw std::invalid_argument("MixWeights: negative component");
    const double sum = x + y + z;
    if (std::abs(sum - 1.0) > weight_sum_slack)
      throw std::invalid_argument("MixWeights: components must sum to 1, got " +
                                  std::to_string(sum));
    x /= sum;
    y /= sum;
    z /= sum;
  }

  /// Completes (x, y) with z = 1 - x - y.
  static MixWeights from_xy(double x_, double y_) {
    return MixWeights(x_, y_, 1.0 - x_ - y_);
  }

  /// Vertex of the simplex along the given axis (0 = x, 1 = y, 2 = z).
  static MixWeights vertex(int axis) {
    switch (axis) {
      case 0: return MixWeights(1.0, 0.0, 0.0);
      case 1: return MixWeights(0.0, 1.0, 0.0);
      case 2: return MixWeights(0.0, 0.0, 1.0);
      default: throw std::out_of_range("MixWeights::vertex: axis not in {0,1,2}");
    }
  }

  double operator[](int axis) const {
    switch (axis) {
      case 0: return x;
      case 1: return y;
      case 2: return z;
      default: throw std::out_of_range("MixWeights: axis not in {0,1,2}");
    }
  }

 private:
  static void clamp_dust(double& v) {
    if (v < 0.0 && v > -weight_sum_slack) v = 0.0;
  }
};

/// Exponential approach q(t) = (1 - e^{-rt}) / n of the channel parameter
/// towards its asymptote 1/n.  n = 2 reproduces the dynamical-semigroup
/// (constant-rate) case; larger n slows the approach below the semigroup
/// asymptote 1/2.
struct DecoherenceProfile {
  double n;
  double r;

  DecoherenceProfile(double n_, double r_) : n(n_), r(r_) {
    if (!(n >= 2.0))
      throw std::invalid_argument("DecoherenceProfile: need n >= 2");
    if (!(r > 0.0))
      throw std::invalid_argument("DecoherenceProfile: need r > 0");
  }
};

/// q(t) = (1 - e^{-rt}) / n, computed via expm1 so small rt keeps full
/// precision.  Strictly increasing from 0 towards 1/n.
inline double q_of_t(const DecoherenceProfile& profile, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("q_of_t: need t >= 0");
  return -std::expm1(-profile.r * t) / profile.n;
}

/// dq/dt = (r/n) e^{-rt}.
inline double dq_dt(const DecoherenceProfile& profile, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("dq_dt: need t >= 0");
  return profile.r / profile.n * std::exp(-profile.r * t);
}

/// Bloch vector of a qubit state, |b| <= 1.
struct BlochState {
  double bx;
  double by;
  double bz;

  BlochState(double bx_, double by_, double bz_) : bx(bx_), by(by_), bz(bz_) {
    const double norm2 = bx * bx + by * by + bz * bz;
    if (norm2 > 1.0 + contraction_slack)
      throw std::invalid_argument("BlochState: |b| > 1");
  }

  double norm() const { return std::hypot(bx, by, bz); }
};

/// Diagonal Bloch-map eigenvalues (lx, ly, lz) of a Pauli-diagonal channel:
/// the channel scales Bloch component i by l_i.
struct ChannelEigenvalues {
  double lx;
  double ly;
  double lz;

  ChannelEigenvalues(double lx_, double ly_, double lz_)
      : lx(lx_), ly(ly_), lz(lz_) {
    for (double l : {lx, ly, lz})
      if (std::abs(l) > 1.0 + contraction_slack)
        throw std::invalid_argument("ChannelEigenvalues: |eigenvalue| > 1");
  }

  double operator[](int axis) const {
    switch (axis) {
      case 0: return lx;
      case 1: return ly;
      case 2: return lz;
      default: throw std::out_of_range("ChannelEigenvalues: axis not in {0,1,2}");
    }
  }
};

/// Eigenvalues of the mixture Phi = x Phi_x + y Phi_y + z Phi_z at channel
/// parameter q: conjugation by sigma_i flips the other two Bloch axes, so
/// l_i = 1 - 2q(1 - w_i).
inline ChannelEigenvalues mixture_eigenvalues(const MixWeights& w, double q) {
  if (!(q >= 0.0 && q <= 0.5))
    throw std::invalid_argument("mixture_eigenvalues: need q in [0, 1/2]");
  return ChannelEigenvalues(1.0 - 2.0 * q * (1.0 - w.x),
                            1.0 - 2.0 * q * (1.0 - w.y),
                            1.0 - 2.0 * q * (1.0 - w.z));
}

/// Applies the diagonal map: component-wise scaling of the Bloch vector.
inline BlochState apply_channel(const ChannelEigenvalues& l, const BlochState& b) {
  return BlochState(l.lx * b.bx, l.ly * b.by, l.lz * b.bz);
}

inline BlochState apply_channel(const MixWeights& w, double q,
                                const BlochState& b) {
  return apply_channel(mixture_eigenvalues(w, q), b);
}

/// Trace distance between two qubit states, (1/2)|b1 - b2| in Bloch form.
inline double trace_distance(const BlochState& a, const BlochState& b) {
  return 0.5 * std::hypot(a.bx - b.bx, a.by - b.by, a.bz - b.bz);
}

/// Spectrum of the Choi matrix of a Pauli-diagonal map with Bloch
/// eigenvalues (lx, ly, lz).  All four nonnegative iff the map is
/// completely positive.
inline std::array<double, 4> choi_spectrum(const ChannelEigenvalues& l) {
  return {0.25 * (1.0 + l.lx + l.ly + l.lz),
          0.25 * (1.0 + l.lx - l.ly - l.lz),
          0.25 * (1.0 - l.lx + l.ly - l.lz),
          0.25 * (1.0 - l.lx - l.ly + l.lz)};
}

}  // namespace paulimix
