#pragma once

#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/oracles/exact.hpp"
#include "emden_dq/oracles/runge_kutta.hpp"
#include "emden_dq/problems/problem.hpp"

#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emden_dq {

/// First zeros of the standard equation as tabulated by Horedt, plus the exact ones.
struct TabulatedZero {
  double m;
  const char* zero;
  int points;
};

inline constexpr TabulatedZero kTabulatedZeros[] = {
    {1.5, "3.65375374", 30}, {2.0, "4.35287460", 40}, {2.5, "5.35527546", 30},
    {3.0, "6.89684862", 30}, {4.0, "14.9715463", 60},
};

/// Catalog length = this factor times the first zero.
inline constexpr const char* kZeroPadding = "1.005";

inline std::optional<TabulatedZero> tabulated_zero(double m) {
  for (const auto& z : kTabulatedZeros)
    if (z.m == m) return z;
  return std::nullopt;
}

inline std::string format_m(double m) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, m);
  return std::string(buf, res.ptr);
}

/// First zero of the standard equation: exact for m = 0, 1, tabulated where
/// available, otherwise from the Runge-Kutta oracle.
template <class Real>
Real standard_first_zero(double m) {
  using std::acos;
  using std::sqrt;
  if (m == 0) return sqrt(Real(6));
  if (m == 1) return acos(Real(-1));
  if (auto z = tabulated_zero(m)) return from_string<Real>(z->zero);
  if (m < 0 || m >= 5) throw UnsupportedM("standard equation has no finite first zero for m = " + format_m(m));
  const Real floor = pow10<Real>(6 - static_cast<int>(active_digits<Real>()));
  const Real tol = pow10<Real>(-12);
  return first_zero_reference(Real(m), tol > floor ? tol : floor);
}

template <class Real>
Problem<Real> standard_problem(double m) {
  if (m < 0) throw UnsupportedM("standard equation needs m >= 0");
  Problem<Real> p = standard_equation(Real(m));
  p.name = "standard:m=" + format_m(m);
  p.description = "y'' + (2/x) y' + y^m = 0, y(0) = 1, y'(0) = 0";
  if (m < 5) {
    p.default_length = from_string<Real>(kZeroPadding) * standard_first_zero<Real>(m);
  } else {
    p.default_length = Real(10);
  }
  if (auto z = tabulated_zero(m)) p.default_points = z->points;
  if (m >= 3) p.default_guess = InitialGuess::linear_decay;
  if (has_exact_standard(m)) {
    const int mi = static_cast<int>(m);
    p.reference = [mi](const Real& x) { return exact_standard<Real>(mi, x); };
  }

  if (m == 1.5) {
    p.probe_points = {"0", "0.1", "0.5", "1", "3", "3.6", "3.65"};
  } else if (m == 2) {
    p.probe_points = {"0", "0.1", "0.5", "3", "4.3", "4.35"};
  } else if (m == 2.5) {
    p.probe_points = {"0", "0.1", "0.5", "1", "4", "5", "5.3", "5.355"};
  } else if (m == 3) {
    p.probe_points = {"0", "0.1", "0.5", "1", "5", "6", "6.8", "6.896"};
  } else if (m == 4) {
    p.probe_points = {"0", "0.1", "0.2", "0.5", "1", "5", "10", "14", "14.9"};
  } else if (m == 0) {
    p.probe_points = {"0", "0.1", "0.5", "1", "1.5", "2", "2.4"};
  } else if (m == 1) {
    p.probe_points = {"0", "0.1", "0.5", "1", "2", "3", "3.1"};
  } else {
    p.probe_points = {"0", "0.1", "0.5", "1"};
    const double length = static_cast<double>(p.default_length);
    for (int x = 2; x < length; ++x) p.probe_points.push_back(std::to_string(x));
  }
  return p;
}

template <class Real>
Problem<Real> isothermal_problem() {
  using std::exp;
  Problem<Real> p;
  p.name = "isothermal";
  p.description = "y'' + (2/x) y' + e^y = 0, y(0) = 0, y'(0) = 0";
  p.alpha = Real(2);
  p.nonlinearity = [](const Real&, const Real& y) { return Real(exp(y)); };
  p.nonlinearity_dy = [](const Real&, const Real& y) { return Real(exp(y)); };
  p.y0 = Real(0);
  p.dy0 = Real(0);
  p.default_length = Real(5) / 2;
  p.series = [](const Real& x) { return adm_series(SeriesExample::isothermal, x); };
  p.probe_points = {"0", "0.1", "0.2", "0.5", "1", "1.5", "2", "2.5"};
  return p;
}

template <class Real>
Problem<Real> sinh_problem() {
  using std::cosh;
  using std::sinh;
  Problem<Real> p;
  p.name = "sinh";
  p.description = "y'' + (2/x) y' + sinh(y) = 0, y(0) = 1, y'(0) = 0";
  p.alpha = Real(2);
  p.nonlinearity = [](const Real&, const Real& y) { return Real(sinh(y)); };
  p.nonlinearity_dy = [](const Real&, const Real& y) { return Real(cosh(y)); };
  p.y0 = Real(1);
  p.dy0 = Real(0);
  p.default_length = Real(2);
  p.series = [](const Real& x) { return adm_series(SeriesExample::sinh, x); };
  p.probe_points = {"0", "0.1", "0.2", "0.5", "1", "1.5", "2"};
  return p;
}

template <class Real>
Problem<Real> sin_problem() {
  using std::cos;
  using std::sin;
  Problem<Real> p;
  p.name = "sin";
  p.description = "y'' + (2/x) y' + sin(y) = 0, y(0) = 1, y'(0) = 0";
  p.alpha = Real(2);
  p.nonlinearity = [](const Real&, const Real& y) { return Real(sin(y)); };
  p.nonlinearity_dy = [](const Real&, const Real& y) { return Real(cos(y)); };
  p.y0 = Real(1);
  p.dy0 = Real(0);
  p.default_length = Real(2);
  p.series = [](const Real& x) { return adm_series(SeriesExample::sin, x); };
  p.probe_points = {"0", "0.1", "0.2", "0.5", "1", "1.5", "2"};
  return p;
}

inline std::vector<std::string> wide_probe_points() {
  return {"0", "0.01", "0.1", "0.5", "1", "2", "3", "4", "5", "6", "7", "8", "9", "10"};
}

inline std::vector<std::string> unit_probe_points() {
  return {"0", "0.01", "0.02", "0.05", "0.1", "0.2", "0.5", "0.7", "0.8", "0.9", "1"};
}

template <class Real>
Problem<Real> ex5_problem() {
  using std::exp;
  using std::log;
  Problem<Real> p;
  p.name = "ex5";
  p.description = "y'' + (2/x) y' + 4(2e^y + e^(y/2)) = 0, y(0) = 0, y'(0) = 0";
  p.alpha = Real(2);
  p.nonlinearity = [](const Real&, const Real& y) { return Real(4 * (2 * exp(y) + exp(y / 2))); };
  p.nonlinearity_dy = [](const Real&, const Real& y) { return Real(8 * exp(y) + 2 * exp(y / 2)); };
  p.y0 = Real(0);
  p.dy0 = Real(0);
  p.default_length = Real(10);
  p.default_points = 40;
  p.reference = [](const Real& x) { return Real(-2 * log(1 + x * x)); };
  p.probe_points = wide_probe_points();
  return p;
}

template <class Real>
Problem<Real> ex6_problem() {
  using std::exp;
  using std::log;
  Problem<Real> p;
  p.name = "ex6";
  p.description = "y'' + (2/x) y' - 6y - 4y ln y = 0, y(0) = 1, y'(0) = 0, solved for z = ln y";
  p.alpha = Real(2);
  p.nonlinearity = [](const Real&, const Real& y) { return Real(-6 * y - 4 * y * log(y)); };
  p.nonlinearity_dy = [](const Real&, const Real& y) { return Real(-10 - 4 * log(y)); };
  p.y0 = Real(1);
  p.dy0 = Real(0);
  p.default_length = Real(1);
  p.default_points = 35;
  p.transform = Transform::log_substitution;
  p.reference = [](const Real& x) { return Real(exp(x * x)); };
  p.probe_points = unit_probe_points();
  return p;
}

template <class Real>
Problem<Real> ex7_problem() {
  using std::exp;
  Problem<Real> p;
  p.name = "ex7";
  p.description = "y'' + (2/x) y' - 2(2x^2 + 3) y = 0, y(0) = 1, y'(0) = 0";
  p.alpha = Real(2);
  p.nonlinearity = [](const Real& x, const Real& y) { return Real(-2 * (2 * x * x + 3) * y); };
  p.nonlinearity_dy = [](const Real& x, const Real&) { return Real(-2 * (2 * x * x + 3)); };
  p.y0 = Real(1);
  p.dy0 = Real(0);
  p.default_length = Real(1);
  p.default_points = 35;
  p.reference = [](const Real& x) { return Real(exp(x * x)); };
  p.probe_points = unit_probe_points();
  return p;
}

template <class Real>
Problem<Real> ex8_problem() {
  Problem<Real> p;
  p.name = "ex8";
  p.description = "y'' + (8/x) y' + x y = x^5 - x^4 + 44x^2 - 30x, y(0) = 0, y'(0) = 0";
  p.alpha = Real(8);
  p.nonlinearity = [](const Real& x, const Real& y) { return Real(x * y); };
  p.nonlinearity_dy = [](const Real& x, const Real&) { return x; };
  p.forcing = [](const Real& x) { return Real(x * (x * (x * (x * (x - 1)) + 44) - 30)); };
  p.y0 = Real(0);
  p.dy0 = Real(0);
  p.default_length = Real(10);
  p.default_points = 45;
  p.reference = [](const Real& x) { return Real(x * x * x * (x - 1)); };
  p.probe_points = wide_probe_points();
  return p;
}

template <class Real>
Problem<Real> ex9_problem() {
  Problem<Real> p;
  p.name = "ex9";
  p.description = "y'' + (2/x) y' + y = 6 + 12x + x^2 + x^3, y(0) = 0, y'(0) = 0";
  p.alpha = Real(2);
  p.nonlinearity = [](const Real&, const Real& y) { return y; };
  p.nonlinearity_dy = [](const Real&, const Real&) { return Real(1); };
  p.forcing = [](const Real& x) { return Real(6 + x * (12 + x * (1 + x))); };
  p.y0 = Real(0);
  p.dy0 = Real(0);
  p.default_length = Real(10);
  p.default_points = 45;
  p.reference = [](const Real& x) { return Real(x * x * (1 + x)); };
  p.probe_points = wide_probe_points();
  return p;
}

/// Parses "standard:m=<value>"; returns nullopt for other names.
inline std::optional<double> parse_standard_m(std::string_view name) {
  constexpr std::string_view prefix = "standard:m=";
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  const auto text = name.substr(prefix.size());
  double m = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), m);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UnknownProblem("bad polytropic index in problem name: " + std::string(name));
  }
  return m;
}

template <class Real>
Problem<Real> make_problem(std::string_view name) {
  if (auto m = parse_standard_m(name)) {
    if (*m < 0 || *m > 5) throw UnknownProblem("standard equation index must lie in [0, 5]: " + std::string(name));
    return standard_problem<Real>(*m);
  }
  if (name == "isothermal") return isothermal_problem<Real>();
  if (name == "sinh") return sinh_problem<Real>();
  if (name == "sin") return sin_problem<Real>();
  if (name == "ex5") return ex5_problem<Real>();
  if (name == "ex6") return ex6_problem<Real>();
  if (name == "ex7") return ex7_problem<Real>();
  if (name == "ex8") return ex8_problem<Real>();
  if (name == "ex9") return ex9_problem<Real>();
  throw UnknownProblem("unknown problem: " + std::string(name));
}

/// The nine benchmark problems; the standard equation appears once, at m = 1.5.
template <class Real>
std::vector<Problem<Real>> catalog() {
  std::vector<Problem<Real>> all;
  all.push_back(standard_problem<Real>(1.5));
  all.push_back(isothermal_problem<Real>());
  all.push_back(sinh_problem<Real>());
  all.push_back(sin_problem<Real>());
  all.push_back(ex5_problem<Real>());
  all.push_back(ex6_problem<Real>());
  all.push_back(ex7_problem<Real>());
  all.push_back(ex8_problem<Real>());
  all.push_back(ex9_problem<Real>());
  return all;
}

inline std::vector<std::string> catalog_names() {
  return {"standard:m=<m>", "isothermal", "sinh", "sin", "ex5", "ex6", "ex7", "ex8", "ex9"};
}

}  // namespace emden_dq
