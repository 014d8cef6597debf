#pragma once

#include "emden_dq/numerics/dense_matrix.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/lu.hpp"
#include "emden_dq/numerics/precision.hpp"

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace emden_dq {

enum class Damping { none, backtracking };

template <class Real>
using VectorFunction = std::function<std::vector<Real>(std::span<const Real>)>;

template <class Real>
using JacobianFunction = std::function<DenseMatrix<Real>(std::span<const Real>)>;

template <class Real>
struct NewtonOptions {
  Real tol;
  int max_iter = 100;
  Damping damping = Damping::backtracking;
  int max_halvings = 20;

  /// tol = 10^(10 - digits) at the active precision.
  static NewtonOptions defaults() {
    NewtonOptions o;
    o.tol = pow10<Real>(10 - static_cast<int>(active_digits<Real>()));
    return o;
  }
};

template <class Real>
struct NewtonResult {
  std::vector<Real> x;
  int iterations = 0;
  Real residual_norm;
};

/// Forward differences with step 10^(-digits/2) * max(1, |x_j|).
template <class Real>
DenseMatrix<Real> finite_difference_jacobian(const VectorFunction<Real>& residual, std::span<const Real> x,
                                             const std::vector<Real>& r0) {
  using std::abs;
  const auto n = x.size();
  const Real base_step = pow10<Real>(-static_cast<int>(active_digits<Real>()) / 2);
  DenseMatrix<Real> jac(r0.size(), n);
  std::vector<Real> probe(x.begin(), x.end());
  for (std::size_t j = 0; j < n; ++j) {
    const Real scale = abs(x[j]) > 1 ? Real(abs(x[j])) : Real(1);
    const Real h = base_step * scale;
    probe[j] = x[j] + h;
    const Real actual_h = probe[j] - x[j];
    auto r1 = residual(std::span<const Real>(probe));
    for (std::size_t i = 0; i < r0.size(); ++i) jac(i, j) = (r1[i] - r0[i]) / actual_h;
    probe[j] = x[j];
  }
  return jac;
}

namespace detail {

template <class Real>
bool all_finite(const std::vector<Real>& v) {
  for (const auto& x : v) {
    if (!is_finite(x)) return false;
  }
  return true;
}

}  // namespace detail

/// Newton's method for R(x) = 0 with optional backtracking on ||R||_inf.
///
/// An empty `jacobian` selects finite differences. `iterations` counts applied
/// updates, so a linear system converges with iterations == 1.
template <class Real>
NewtonResult<Real> newton_solve(const VectorFunction<Real>& residual, std::vector<Real> x0,
                                const NewtonOptions<Real>& options, const JacobianFunction<Real>& jacobian = {}) {
  std::vector<Real> x = std::move(x0);
  for (const auto& v : x) {
    if (!is_finite(v)) throw Error("newton_solve: non-finite initial guess");
  }
  std::vector<Real> r = residual(std::span<const Real>(x));
  if (!detail::all_finite(r)) throw NonFiniteResidual("newton_solve: residual is not finite at the initial guess");
  Real r_norm = norm_inf(r);

  std::vector<Real> best_x = x;
  Real best_norm = r_norm;

  int iter = 0;
  while (r_norm > options.tol) {
    if (iter >= options.max_iter) {
      throw MaxIterationsExceeded<Real>("newton_solve: no convergence after " + std::to_string(iter) + " iterations",
                                        iter, best_norm, best_x);
    }
    DenseMatrix<Real> jac = jacobian ? jacobian(std::span<const Real>(x))
                                     : finite_difference_jacobian(residual, std::span<const Real>(x), r);
    LuFactorization<Real> lu;
    try {
      lu = lu_factor(jac);
    } catch (const SingularMatrix& e) {
      throw SingularJacobian(std::string("newton_solve: ") + e.what());
    }
    std::vector<Real> step = lu_solve(lu, r);

    Real t(1);
    std::vector<Real> trial(x.size());
    std::vector<Real> trial_r;
    Real trial_norm{};
    bool accepted = false;
    std::vector<Real> fallback_x;
    std::vector<Real> fallback_r;
    Real fallback_norm{};
    const int attempts = options.damping == Damping::backtracking ? options.max_halvings + 1 : 1;
    for (int k = 0; k < attempts; ++k) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - t * step[i];
      trial_r = residual(std::span<const Real>(trial));
      if (detail::all_finite(trial_r)) {
        trial_norm = norm_inf(trial_r);
        if (options.damping == Damping::none || trial_norm < r_norm) {
          accepted = true;
          break;
        }
        if (fallback_x.empty() || trial_norm < fallback_norm) {
          fallback_x = trial;
          fallback_r = trial_r;
          fallback_norm = trial_norm;
        }
      }
      t /= 2;
    }
    if (!accepted) {
      if (fallback_x.empty()) {
        throw NonFiniteResidual("newton_solve: every damped step produced a non-finite residual");
      }
      trial = std::move(fallback_x);
      trial_r = std::move(fallback_r);
      trial_norm = fallback_norm;
    }
    x = std::move(trial);
    r = std::move(trial_r);
    r_norm = trial_norm;
    ++iter;
    if (r_norm < best_norm) {
      best_norm = r_norm;
      best_x = x;
    }
  }
  return NewtonResult<Real>{std::move(x), iter, r_norm};
}

}  // namespace emden_dq
