#pragma once

#include "emden_dq/numerics/errors.hpp"

#include <array>
#include <cmath>
#include <string>
#include <string_view>

namespace emden_dq {

/// Closed-form solutions of y'' + (2/x) y' + y^m = 0, y(0) = 1, y'(0) = 0.
template <class Real>
Real exact_standard(int m, const Real& x) {
  using std::sin;
  using std::sqrt;
  switch (m) {
    case 0: return 1 - x * x / 6;
    case 1: return x == 0 ? Real(1) : Real(sin(x) / x);
    case 5: return 1 / sqrt(1 + x * x / 3);
    default: throw UnsupportedM("exact_standard: no closed form for m = " + std::to_string(m));
  }
}

/// Same as above for a real-valued m that must be 0, 1 or 5.
template <class Real>
Real exact_standard(const Real& m, const Real& x) {
  if (m == 0) return exact_standard<Real>(0, x);
  if (m == 1) return exact_standard<Real>(1, x);
  if (m == 5) return exact_standard<Real>(5, x);
  throw UnsupportedM("exact_standard: no closed form for this m");
}

inline bool has_exact_standard(double m) { return m == 0.0 || m == 1.0 || m == 5.0; }

enum class SeriesExample { isothermal, sinh, sin };

inline SeriesExample parse_series_example(std::string_view name) {
  if (name == "isothermal") return SeriesExample::isothermal;
  if (name == "sinh") return SeriesExample::sinh;
  if (name == "sin") return SeriesExample::sin;
  throw UnknownProblem("no series solution for " + std::string(name));
}

namespace detail {

/// sum_k c_k t^k by Horner's rule.
template <class Real, std::size_t N>
Real horner(const std::array<Real, N>& c, const Real& t) {
  Real acc(0);
  for (std::size_t k = N; k-- > 0;) acc = acc * t + c[k];
  return acc;
}

template <class Real>
Real factorial(int n) {
  Real r(1);
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace detail

/// Truncated decomposition-method series for the three examples without a closed form,
/// evaluated exactly as printed (even powers of x, Horner in x^2).
template <class Real>
Real adm_series(SeriesExample example, const Real& x) {
  using std::cos;
  using std::exp;
  using std::sin;
  using detail::factorial;
  const Real t = x * x;
  switch (example) {
    case SeriesExample::isothermal: {
      const std::array<Real, 6> c{Real(0),
                                  Real(-1) / 6,
                                  1 / (5 * factorial<Real>(4)),
                                  -8 / (21 * factorial<Real>(6)),
                                  122 / (81 * factorial<Real>(8)),
                                  Real(-61 * 67) / (495 * factorial<Real>(10))};
      return detail::horner(c, t);
    }
    case SeriesExample::sinh: {
      const Real e = exp(Real(1));
      const Real e2 = e * e;
      const Real e3 = e2 * e;
      const Real e4 = e2 * e2;
      const Real e6 = e4 * e2;
      const Real e8 = e4 * e4;
      const std::array<Real, 5> c{Real(1),
                                  -(e2 - 1) / (12 * e),
                                  (e4 - 1) / (480 * e2),
                                  -(2 * e6 + 3 * e2 - 3 * e4 - 2) / (30240 * e3),
                                  (61 * e8 - 10 * e6 + 10 * e2 - 61) / (26127360 * e4)};
      return detail::horner(c, t);
    }
    case SeriesExample::sin: {
      const Real k = sin(Real(1));
      const Real l = cos(Real(1));
      const Real k2 = k * k;
      const Real l2 = l * l;
      const std::array<Real, 6> c{
          Real(1),
          -k / 6,
          k * l / 120,
          k * (k2 / 3024 - l2 / 5040),
          k * l * (-113 * k2 / 3265920 + l2 / 362880),
          k * (1781 * k2 * l2 / 898128000 - l2 * l2 / 399168000 - 19 * k2 * k2 / 2395080)};
      return detail::horner(c, t);
    }
  }
  return Real(0);
}

}  // namespace emden_dq
