#pragma once

#include <stdexcept>
#include <string>

namespace paulimix {

/// Thrown when a rate denominator 1 - 2(1-alpha)q falls below the
/// representable-safety threshold, i.e. the map is at (or numerically
/// indistinguishable from) the singular point q = 1/n.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double denominator)
      : std::runtime_error(what), denominator_(denominator) {}

  double denominator() const noexcept { return denominator_; }

 private:
  double denominator_;
};

/// Thrown when adaptive quadrature cannot reach the requested absolute
/// tolerance.  Carries the best error estimate achieved so callers can
/// report how far off the result is.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_estimate)
      : std::runtime_error(what), achieved_(achieved_estimate) {}

  double achieved_estimate() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace paulimix
