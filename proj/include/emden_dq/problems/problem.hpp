#pragma once

#include "emden_dq/numerics/errors.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace emden_dq {

template <class Real>
using ScalarFunction = std::function<Real(const Real&)>;

template <class Real>
using BivariateFunction = std::function<Real(const Real&, const Real&)>;

/// How the unknown is represented on the nodes.
enum class Transform {
  identity,
  /// Solve for z with y = exp(z).
  log_substitution,
};

enum class InitialGuess { constant, linear_decay, supplied };

/// y'' + (alpha/x) y' + f(x, y) = h(x),  y(0) = y0,  y'(0) = dy0.
template <class Real>
struct Problem {
  std::string name;
  std::string description;
  Real alpha;
  BivariateFunction<Real> nonlinearity;
  /// df/dy; when empty the solver falls back to a finite-difference Jacobian.
  BivariateFunction<Real> nonlinearity_dy;
  /// h(x); empty means zero.
  ScalarFunction<Real> forcing;
  Real y0;
  Real dy0;
  Real default_length;
  int default_points = 30;
  Transform transform = Transform::identity;
  InitialGuess default_guess = InitialGuess::constant;
  /// Closed-form solution, when one is known.
  ScalarFunction<Real> reference;
  /// Truncated series solution valid near the origin.
  ScalarFunction<Real> series;
  /// Decimal x values at which benchmark tables report the solution.
  std::vector<std::string> probe_points;

  Real f(const Real& x, const Real& y) const { return nonlinearity(x, y); }
  Real h(const Real& x) const { return forcing ? forcing(x) : Real(0); }
  bool has_closed_form() const { return static_cast<bool>(reference); }

  void validate() const {
    if (!nonlinearity) throw InvalidProblem(name + ": missing nonlinearity");
    if (!(default_length > 0)) throw InvalidProblem(name + ": default_length must be positive");
    if (default_points < 4) throw InvalidProblem(name + ": default_points must be at least 4");
    if (transform == Transform::log_substitution && !(y0 > 0)) {
      throw InvalidProblem(name + ": log substitution needs y(0) > 0");
    }
  }
};

/// sign(y) |y|^m, with y^0 taken as 1.
template <class Real>
Real spow(const Real& y, const Real& m) {
  using std::abs;
  using std::pow;
  if (m == 0) return Real(1);
  if (y == 0) return Real(0);
  const Real magnitude = pow(abs(y), m);
  return y < 0 ? Real(-magnitude) : magnitude;
}

/// d/dy spow(y, m) = m |y|^(m-1).
template <class Real>
Real spow_derivative(const Real& y, const Real& m) {
  using std::abs;
  using std::pow;
  if (m == 0) return Real(0);
  if (m == 1) return Real(1);
  if (y == 0) return m > 1 ? Real(0) : Real(m * pow(abs(y), m - 1));
  return m * pow(abs(y), m - 1);
}

}  // namespace emden_dq
