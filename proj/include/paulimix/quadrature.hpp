#pragma once

#include <cmath>
#include <cstdint>

#include "paulimix/errors.hpp"

namespace paulimix {

struct QuadratureResult {
  double value;
  double error_estimate;  // accumulated Richardson estimate, absolute
  bool converged;
  std::int64_t evaluations;
};

namespace detail {

inline double simpson(double a, double fa, double fm, double b, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
void adapt(F& f, double a, double fa, double m, double fm, double b, double fb,
           double whole, double tol, int depth, QuadratureResult& out) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  out.evaluations += 2;
  const double left = simpson(a, fa, flm, m, fm);
  const double right = simpson(m, fm, frm, b, fb);
  const double delta = left + right - whole;  // 15x the Simpson error
  if (std::abs(delta) <= 15.0 * tol || depth <= 0) {
    out.value += left + right + delta / 15.0;
    out.error_estimate += std::abs(delta) / 15.0;
    if (depth <= 0 && std::abs(delta) > 15.0 * tol) out.converged = false;
    return;
  }
  adapt(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1, out);
  adapt(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

/// Adaptive Simpson integration of f over [a, b] to absolute tolerance
/// abs_tol, with Richardson extrapolation of accepted panels.  Result
/// carries converged = false when the recursion depth cap was hit before
/// the local tolerance was met.
template <typename F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                    int max_depth = 48) {
  if (!(abs_tol > 0.0))
    throw std::invalid_argument("integrate_adaptive: need abs_tol > 0");
  QuadratureResult out{0.0, 0.0, true, 0};
  if (a == b) return out;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  out.evaluations = 3;
  const double whole = detail::simpson(a, fa, fm, b, fb);
  detail::adapt(f, a, fa, m, fm, b, fb, whole, abs_tol, max_depth, out);
  return out;
}

/// Convenience wrapper that insists on convergence.
template <typename F>
double integrate_or_throw(F&& f, double a, double b, double abs_tol) {
  const QuadratureResult res = integrate_adaptive(f, a, b, abs_tol);
  if (!res.converged)
    throw QuadratureError("quadrature failed to reach tolerance, estimate " +
                              std::to_string(res.error_estimate),
                          res.error_estimate);
  return res.value;
}

}  // namespace paulimix
