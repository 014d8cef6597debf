#pragma once

#include "emden_dq/numerics/dense_matrix.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/newton.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/problems/problem.hpp"
#include "emden_dq/quadrature/weights.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace emden_dq {

/// Collocation residual at every node, with the equation multiplied through by x:
///
///   identity: Res_i = x_i (W2 f)_i + alpha (W1 f)_i + x_i (f(x_i, f_i) - h(x_i))
///   log:      Res_i = x_i (W2 z)_i + x_i (W1 z)_i^2 + alpha (W1 z)_i
///                     + x_i e^{-z_i} (f(x_i, e^{z_i}) - h(x_i))
///
/// Res_1 reduces to alpha (W1 f)_1 because x_1 = 0.
template <class Real>
std::vector<Real> assemble_residual(const Problem<Real>& p, const WeightMatrices<Real>& w,
                                    std::span<const Real> values) {
  using std::exp;
  const auto n = w.size();
  if (values.size() != n) throw DimensionMismatch("assemble_residual: expected " + std::to_string(n) + " values");
  const auto d1 = w.w1.multiply(values);
  const auto d2 = w.w2.multiply(values);
  std::vector<Real> res(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Real& x = w.nodes[i];
    if (p.transform == Transform::identity) {
      res[i] = x * d2[i] + p.alpha * d1[i] + x * (p.f(x, values[i]) - p.h(x));
    } else {
      const Real y = exp(values[i]);
      res[i] = x * d2[i] + x * d1[i] * d1[i] + p.alpha * d1[i] + x * (p.f(x, y) - p.h(x)) / y;
    }
    if (!is_finite(res[i])) {
      throw NonFiniteResidual("assemble_residual: non-finite residual at node " + std::to_string(i) + " for " +
                              p.name);
    }
  }
  return res;
}

template <class Real>
std::vector<Real> assemble_residual(const Problem<Real>& p, const WeightMatrices<Real>& w,
                                    const std::vector<Real>& values) {
  return assemble_residual(p, w, std::span<const Real>(values));
}

/// d Res_i / d f_j, analytic when the problem supplies df/dy.
template <class Real>
DenseMatrix<Real> residual_jacobian(const Problem<Real>& p, const WeightMatrices<Real>& w,
                                    std::span<const Real> values) {
  using std::exp;
  const auto n = w.size();
  if (!p.nonlinearity_dy) {
    VectorFunction<Real> r = [&](std::span<const Real> v) { return assemble_residual(p, w, v); };
    return finite_difference_jacobian(r, values, assemble_residual(p, w, values));
  }
  DenseMatrix<Real> jac(n, n);
  std::vector<Real> d1;
  if (p.transform == Transform::log_substitution) d1 = w.w1.multiply(values);
  for (std::size_t i = 0; i < n; ++i) {
    const Real& x = w.nodes[i];
    for (std::size_t j = 0; j < n; ++j) jac(i, j) = x * w.w2(i, j) + p.alpha * w.w1(i, j);
    if (p.transform == Transform::identity) {
      jac(i, i) += x * p.nonlinearity_dy(x, values[i]);
    } else {
      const Real twice_slope = 2 * x * d1[i];
      for (std::size_t j = 0; j < n; ++j) jac(i, j) += twice_slope * w.w1(i, j);
      const Real y = exp(values[i]);
      jac(i, i) += x * (p.nonlinearity_dy(x, y) - (p.f(x, y) - p.h(x)) / y);
    }
  }
  return jac;
}

/// Residual of the x-multiplied equation at an arbitrary point, given y, y', y''.
template <class Real>
Real pointwise_residual(const Problem<Real>& p, const Real& x, const Real& y, const Real& dy, const Real& d2y) {
  return x * d2y + p.alpha * dy + x * (p.f(x, y) - p.h(x));
}

}  // namespace emden_dq
