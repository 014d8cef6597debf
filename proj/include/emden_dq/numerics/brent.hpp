#pragma once

#include "emden_dq/numerics/errors.hpp"

#include <cmath>
#include <functional>
#include <utility>

namespace emden_dq {

/// Brent's bracketed root finder (inverse quadratic / secant / bisection).
///
/// Returns a point inside [a, b] where |g| <= tol or the bracket has shrunk
/// below tol. Requires g(a) and g(b) of opposite sign.
template <class Real>
Real brent_root(const std::function<Real(const Real&)>& g, Real a, Real b, const Real& tol,
                int max_iter = 200) {
  using std::abs;
  if (!(a < b)) throw NoSignChange("brent_root: bracket must satisfy a < b");
  const Real lo = a;
  const Real hi = b;
  Real fa = g(a);
  Real fb = g(b);
  if (fa == 0) return a;
  if (fb == 0) return b;
  if ((fa > 0) == (fb > 0)) throw NoSignChange("brent_root: g(a) and g(b) have the same sign");

  Real c = a;
  Real fc = fa;
  Real d = b - a;
  Real e = d;
  for (int iter = 0; iter < max_iter; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (abs(fc) < abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const Real half_tol = tol / 2;
    const Real mid = (c - b) / 2;
    if (abs(mid) <= half_tol || abs(fb) <= tol) break;

    if (abs(e) >= half_tol && abs(fa) > abs(fb)) {
      Real p;
      Real q;
      const Real s = fb / fa;
      if (a == c) {
        p = 2 * mid * s;
        q = 1 - s;
      } else {
        const Real qa = fa / fc;
        const Real r = fb / fc;
        p = s * (2 * mid * qa * (qa - r) - (b - a) * (r - 1));
        q = (qa - 1) * (r - 1) * (s - 1);
      }
      if (p > 0) q = -q;
      p = abs(p);
      const Real bound1 = 3 * mid * q - abs(half_tol * q);
      const Real bound2 = abs(e * q);
      if (2 * p < (bound1 < bound2 ? bound1 : bound2)) {
        e = d;
        d = p / q;
      } else {
        d = mid;
        e = d;
      }
    } else {
      d = mid;
      e = d;
    }
    a = b;
    fa = fb;
    if (abs(d) > half_tol) {
      b += d;
    } else {
      b += mid > 0 ? half_tol : Real(-half_tol);
    }
    fb = g(b);
  }
  if (b < lo) return lo;
  if (b > hi) return hi;
  return b;
}

}  // namespace emden_dq
