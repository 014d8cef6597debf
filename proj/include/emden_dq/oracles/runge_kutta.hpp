#pragma once

#include "emden_dq/numerics/brent.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/problems/problem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace emden_dq {

enum class ReferenceMethod { closed_form, adm_series, rk_adaptive };

inline std::string_view to_string(ReferenceMethod m) {
  switch (m) {
    case ReferenceMethod::closed_form: return "closed-form";
    case ReferenceMethod::adm_series: return "adm-series";
    case ReferenceMethod::rk_adaptive: return "rk-adaptive";
  }
  return "?";
}

template <class Real>
struct ReferencePoint {
  Real x;
  Real y;
};

template <class Real>
struct ReferenceCurve {
  std::vector<ReferencePoint<Real>> points;
  ReferenceMethod method = ReferenceMethod::rk_adaptive;
  /// Estimated absolute error bound over all points.
  Real accuracy_claim;
};

namespace detail {

template <class Real>
struct OdeState {
  Real x;
  Real y;
  Real dy;
};

/// Dormand-Prince 5(4) integration of y'' = h - f - (alpha/x) y' away from the origin.
template <class Real>
class LaneEmdenIntegrator {
 public:
  LaneEmdenIntegrator(const Problem<Real>& p, Real rel_tol) : p_(p), rel_tol_(std::move(rel_tol)) {
    using std::pow;
    const int digits = static_cast<int>(active_digits<Real>());
    epsilon_ = pow(Real(10), Real(-digits) / 3);
    min_relative_step_ = pow10<Real>(5 - digits);
    curvature_ = (p_.h(Real(0)) - p_.f(Real(0), p_.y0)) / (2 * (1 + p_.alpha));
    tableau_ = make_tableau();
  }

  const Real& epsilon() const noexcept { return epsilon_; }

  /// Two-term series near the origin, valid for x <= epsilon.
  OdeState<Real> taylor(const Real& x) const {
    return OdeState<Real>{x, p_.y0 + p_.dy0 * x + curvature_ * x * x, p_.dy0 + 2 * curvature_ * x};
  }

  OdeState<Real> start() const { return taylor(epsilon_); }

  /// One Dormand-Prince step of size h; second member is the scaled error norm.
  std::pair<OdeState<Real>, Real> attempt(const OdeState<Real>& s, const Real& h) const {
    using std::abs;
    const Tableau& t = tableau_;
    std::array<Real, 7> ky;
    std::array<Real, 7> kd;
    for (int stage = 0; stage < 7; ++stage) {
      Real y = s.y;
      Real dy = s.dy;
      for (int j = 0; j < stage; ++j) {
        y += h * t.a[stage][j] * ky[j];
        dy += h * t.a[stage][j] * kd[j];
      }
      const Real x = s.x + t.c[stage] * h;
      ky[stage] = dy;
      kd[stage] = acceleration(x, y, dy);
    }
    Real y5 = s.y;
    Real d5 = s.dy;
    Real ey(0);
    Real ed(0);
    for (int j = 0; j < 7; ++j) {
      y5 += h * t.b[j] * ky[j];
      d5 += h * t.b[j] * kd[j];
      ey += h * t.e[j] * ky[j];
      ed += h * t.e[j] * kd[j];
    }
    const Real scale_y = rel_tol_ * (1 + std::max(abs(s.y), abs(y5)));
    const Real scale_d = rel_tol_ * (1 + std::max(abs(s.dy), abs(d5)));
    Real err = std::max(abs(ey) / scale_y, abs(ed) / scale_d);
    if (!is_finite(y5) || !is_finite(d5)) err = Real(1e6);
    return {OdeState<Real>{s.x + h, y5, d5}, err};
  }

  /// Adaptive steps from s to exactly x_target. `on_step` sees every accepted state.
  OdeState<Real> advance(OdeState<Real> s, const Real& x_target, Real& h,
                         const std::function<bool(const OdeState<Real>&, const OdeState<Real>&)>& on_step = {}) const {
    using std::abs;
    using std::pow;
    while (s.x < x_target) {
      bool last = false;
      Real step = h;
      if (s.x + step >= x_target) {
        step = x_target - s.x;
        last = true;
      }
      if (step < s.x * min_relative_step_) {
        if (last) {
          s.x = x_target;
          break;
        }
        throw StiffnessFailure("rk_reference: step size underflow at x = " + to_string(s.x, 12));
      }
      if (++steps_ > kMaxSteps) throw StiffnessFailure("rk_reference: step budget exhausted");
      auto [next, err] = attempt(s, step);
      const Real factor =
          err == 0 ? Real(5) : std::clamp(Real(Real(0.9) * pow(err, Real(-1) / 5)), Real(0.2), Real(5));
      if (err <= 1) {
        if (last) next.x = x_target;
        const bool stop = on_step && on_step(s, next);
        s = std::move(next);
        if (!last || factor < 1) h = step * factor;
        if (stop) break;
      } else {
        h = step * factor;
      }
    }
    return s;
  }

  Real acceleration(const Real& x, const Real& y, const Real& dy) const {
    return p_.h(x) - p_.f(x, y) - p_.alpha * dy / x;
  }

 private:
  static constexpr long kMaxSteps = 2'000'000;

  struct Tableau {
    std::array<Real, 7> c;
    std::array<std::array<Real, 7>, 7> a;
    std::array<Real, 7> b;
    /// Fifth- minus fourth-order weights.
    std::array<Real, 7> e;
  };

  static Tableau make_tableau() {
    Tableau t;
    auto q = [](long n, long d) { return Real(n) / Real(d); };
    t.c = {Real(0), q(1, 5), q(3, 10), q(4, 5), q(8, 9), Real(1), Real(1)};
    for (auto& row : t.a) row.fill(Real(0));
    t.a[1][0] = q(1, 5);
    t.a[2][0] = q(3, 40);
    t.a[2][1] = q(9, 40);
    t.a[3][0] = q(44, 45);
    t.a[3][1] = q(-56, 15);
    t.a[3][2] = q(32, 9);
    t.a[4][0] = q(19372, 6561);
    t.a[4][1] = q(-25360, 2187);
    t.a[4][2] = q(64448, 6561);
    t.a[4][3] = q(-212, 729);
    t.a[5][0] = q(9017, 3168);
    t.a[5][1] = q(-355, 33);
    t.a[5][2] = q(46732, 5247);
    t.a[5][3] = q(49, 176);
    t.a[5][4] = q(-5103, 18656);
    t.a[6][0] = q(35, 384);
    t.a[6][2] = q(500, 1113);
    t.a[6][3] = q(125, 192);
    t.a[6][4] = q(-2187, 6784);
    t.a[6][5] = q(11, 84);
    t.b = t.a[6];
    const std::array<Real, 7> b4 = {q(5179, 57600), Real(0),          q(7571, 16695), q(393, 640),
                                    q(-92097, 339200), q(187, 2100), q(1, 40)};
    for (int j = 0; j < 7; ++j) t.e[j] = t.b[j] - b4[j];
    return t;
  }

  const Problem<Real>& p_;
  Real rel_tol_;
  Real epsilon_;
  Real min_relative_step_;
  Real curvature_;
  Tableau tableau_;
  mutable long steps_ = 0;
};

template <class Real>
std::vector<Real> integrate_to_points(const Problem<Real>& p, const Real& rel_tol, const std::vector<Real>& xs) {
  LaneEmdenIntegrator<Real> rk(p, rel_tol);
  std::vector<Real> ys;
  ys.reserve(xs.size());
  auto state = rk.start();
  Real h = rk.epsilon() / 10;
  for (const auto& x : xs) {
    if (x <= rk.epsilon()) {
      ys.push_back(rk.taylor(x).y);
      continue;
    }
    state = rk.advance(std::move(state), x, h);
    ys.push_back(state.y);
  }
  return ys;
}

template <class Real>
void check_reference_tolerance(const Real& rel_tol) {
  if (!(rel_tol >= pow10<Real>(5 - static_cast<int>(active_digits<Real>())))) {
    throw std::invalid_argument("rk_reference: rel_tol is below 10^(5 - digits)");
  }
}

}  // namespace detail

/// 101 uniform points on [0, x_end].
template <class Real>
std::vector<Real> uniform_points(const Real& x_end, int intervals = 100) {
  std::vector<Real> xs;
  xs.reserve(static_cast<std::size_t>(intervals) + 1);
  for (int i = 0; i <= intervals; ++i) xs.push_back(x_end * i / intervals);
  return xs;
}

/// Adaptive Runge-Kutta reference solution.
///
/// Starts from the series y(eps) = A + B eps + y''(0) eps^2 / 2 with
/// eps = 10^(-digits/3) and lands exactly on every requested point. The
/// accuracy claim is the largest change seen when the run is repeated at
/// rel_tol / 32, floored at 10^(5 - digits).
template <class Real>
ReferenceCurve<Real> rk_reference(const Problem<Real>& p, const Real& x_end, const Real& rel_tol,
                                  std::optional<std::vector<Real>> output_points = std::nullopt) {
  using std::abs;
  detail::check_reference_tolerance(rel_tol);
  if (!(x_end > 0)) throw std::invalid_argument("rk_reference: x_end must be positive");
  std::vector<Real> xs = output_points ? std::move(*output_points) : uniform_points(x_end);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (!xs.empty() && (xs.front() < 0 || xs.back() > x_end)) {
    throw std::invalid_argument("rk_reference: output points must lie in [0, x_end]");
  }

  const auto coarse = detail::integrate_to_points(p, rel_tol, xs);
  const auto fine = detail::integrate_to_points(p, Real(rel_tol / 32), xs);
  Real claim = pow10<Real>(5 - static_cast<int>(active_digits<Real>()));
  ReferenceCurve<Real> curve;
  curve.method = ReferenceMethod::rk_adaptive;
  curve.points.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const Real diff = abs(coarse[i] - fine[i]);
    if (diff > claim) claim = diff;
    curve.points.push_back(ReferencePoint<Real>{xs[i], fine[i]});
  }
  curve.accuracy_claim = claim;
  return curve;
}

/// Single RK value at x, from the fine run.
template <class Real>
Real rk_value(const Problem<Real>& p, const Real& x, const Real& rel_tol) {
  detail::check_reference_tolerance(rel_tol);
  return detail::integrate_to_points(p, rel_tol, std::vector<Real>{x}).front();
}

/// First sign change of y, located by Brent on a single re-step from the last
/// accepted point before the crossing.
template <class Real>
Real first_zero_reference(const Problem<Real>& p, const Real& rel_tol, const Real& x_max = Real(10000)) {
  detail::check_reference_tolerance(rel_tol);
  detail::LaneEmdenIntegrator<Real> rk(p, rel_tol);
  auto state = rk.start();
  Real h = rk.epsilon() / 10;
  std::optional<detail::OdeState<Real>> before;
  Real after_x;
  rk.advance(state, x_max, h, [&](const detail::OdeState<Real>& from, const detail::OdeState<Real>& to) {
    if ((from.y > 0 && to.y <= 0) || (from.y < 0 && to.y >= 0)) {
      before = from;
      after_x = to.x;
      return true;
    }
    return false;
  });
  if (!before) throw NoZeroInDomain(p.name + ": no sign change before x = " + to_string(x_max, 6));
  const detail::OdeState<Real> anchor = *before;
  if (anchor.y == 0) return anchor.x;
  // Re-stepping with the full accepted step reproduces its end point, so the bracket holds.
  std::function<Real(const Real&)> g = [&](const Real& x) {
    if (x == anchor.x) return anchor.y;
    return rk.attempt(anchor, Real(x - anchor.x)).first.y;
  };
  return brent_root(g, anchor.x, after_x, pow10<Real>(10 - static_cast<int>(active_digits<Real>())));
}

/// Minimal standard equation y'' + (2/x) y' + spow(y, m) = 0, y(0) = 1, y'(0) = 0.
template <class Real>
Problem<Real> standard_equation(const Real& m) {
  Problem<Real> p;
  p.name = "standard";
  p.alpha = Real(2);
  p.nonlinearity = [m](const Real&, const Real& y) { return spow(y, m); };
  p.nonlinearity_dy = [m](const Real&, const Real& y) { return spow_derivative(y, m); };
  p.y0 = Real(1);
  p.dy0 = Real(0);
  p.default_length = Real(10);
  return p;
}

template <class Real>
Real first_zero_reference(const Real& m, const Real& rel_tol) {
  if (m < 0 || m >= 5) throw UnsupportedM("first_zero_reference: m must lie in [0, 5)");
  return first_zero_reference(standard_equation(m), rel_tol);
}

/// CSV with columns x, y, accuracy_claim.
template <class Real>
void write_reference_csv(std::ostream& os, const ReferenceCurve<Real>& curve) {
  os << "x,y,accuracy_claim\n";
  const std::string claim = to_string(curve.accuracy_claim);
  for (const auto& pt : curve.points) os << to_string(pt.x) << ',' << to_string(pt.y) << ',' << claim << '\n';
}

}  // namespace emden_dq
