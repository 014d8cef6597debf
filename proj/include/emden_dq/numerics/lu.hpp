#pragma once

#include "emden_dq/numerics/dense_matrix.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/precision.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace emden_dq {

/// PA = LU with unit lower L stored below the diagonal of `factors`.
template <class Real>
struct LuFactorization {
  DenseMatrix<Real> factors;
  /// Row i of PA is row pivot_permutation[i] of A.
  std::vector<std::size_t> pivot_permutation;
  Real norm_one{0};
  /// 1-norm condition number estimate, always >= 1.
  Real condition_estimate{1};
  /// Precision (decimal digits) the factorization was computed at.
  unsigned digits = 0;

  std::size_t order() const noexcept { return factors.rows(); }
};

namespace detail {

template <class Real>
void forward_back_substitute(const LuFactorization<Real>& f, std::vector<Real>& x) {
  const auto n = f.order();
  const auto& lu = f.factors;
  for (std::size_t i = 1; i < n; ++i) {
    Real acc = x[i];
    for (std::size_t j = 0; j < i; ++j) acc -= lu(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Real acc = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(ii, j) * x[j];
    x[ii] = acc / lu(ii, ii);
  }
}

}  // namespace detail

template <class Real>
std::vector<Real> lu_solve(const LuFactorization<Real>& f, std::span<const Real> b) {
  const auto n = f.order();
  if (b.size() != n) throw DimensionMismatch("lu_solve: right-hand side length differs from matrix order");
  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.pivot_permutation[i]];
  detail::forward_back_substitute(f, x);
  return x;
}

template <class Real>
std::vector<Real> lu_solve(const LuFactorization<Real>& f, const std::vector<Real>& b) {
  return lu_solve(f, std::span<const Real>(b));
}

/// Solves A^T x = b with the factorization of A.
template <class Real>
std::vector<Real> lu_solve_transposed(const LuFactorization<Real>& f, std::span<const Real> b) {
  const auto n = f.order();
  if (b.size() != n) throw DimensionMismatch("lu_solve_transposed: length mismatch");
  const auto& lu = f.factors;
  // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, x = P^T w.
  std::vector<Real> z(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    Real acc = z[i];
    for (std::size_t j = 0; j < i; ++j) acc -= lu(j, i) * z[j];
    z[i] = acc / lu(i, i);
  }
  for (std::size_t ii = n; ii-- > 0;) {
    Real acc = z[ii];
    for (std::size_t j = ii + 1; j < n; ++j) acc -= lu(j, ii) * z[j];
    z[ii] = acc;
  }
  std::vector<Real> x(n);
  for (std::size_t i = 0; i < n; ++i) x[f.pivot_permutation[i]] = z[i];
  return x;
}

/// Hager-Higham lower bound on ||A^{-1}||_1 using only solves with the factors.
template <class Real>
Real estimate_inverse_norm_one(const LuFactorization<Real>& f) {
  using std::abs;
  const auto n = f.order();
  if (n == 0) return Real(0);
  std::vector<Real> x(n, Real(1) / Real(static_cast<long>(n)));
  Real estimate(0);
  for (int iter = 0; iter < 5; ++iter) {
    auto y = lu_solve(f, x);
    const Real y_norm = norm_one(std::span<const Real>(y));
    if (iter > 0 && y_norm <= estimate) break;
    estimate = y_norm;
    std::vector<Real> sign(n);
    for (std::size_t i = 0; i < n; ++i) sign[i] = y[i] < 0 ? Real(-1) : Real(1);
    auto z = lu_solve_transposed(f, std::span<const Real>(sign));
    std::size_t jmax = 0;
    for (std::size_t j = 1; j < n; ++j) {
      if (abs(z[j]) > abs(z[jmax])) jmax = j;
    }
    Real ztx(0);
    for (std::size_t i = 0; i < n; ++i) ztx += z[i] * x[i];
    if (iter > 0 && abs(z[jmax]) <= ztx) break;
    std::fill(x.begin(), x.end(), Real(0));
    x[jmax] = Real(1);
  }
  // Higham's alternating test vector guards against the rare underestimate.
  std::vector<Real> alt(n);
  for (std::size_t i = 0; i < n; ++i) {
    Real mag = n > 1 ? Real(1) + Real(static_cast<long>(i)) / Real(static_cast<long>(n - 1)) : Real(1);
    alt[i] = (i % 2 == 0) ? mag : Real(-mag);
  }
  auto w = lu_solve(f, alt);
  Real alt_estimate = Real(2) * norm_one(std::span<const Real>(w)) / Real(3 * static_cast<long>(n));
  return alt_estimate > estimate ? alt_estimate : estimate;
}

/// Partial-pivoting LU. Throws SingularMatrix when a pivot is below
/// max|A| * 10^-digits at the active precision.
template <class Real>
LuFactorization<Real> lu_factor(const DenseMatrix<Real>& a) {
  using std::abs;
  if (!a.is_square()) throw DimensionMismatch("lu_factor: matrix is not square");
  const auto n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!is_finite(a(i, j))) throw Error("lu_factor: non-finite matrix entry");

  LuFactorization<Real> f;
  f.digits = active_digits<Real>();
  f.factors = a;
  f.pivot_permutation.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.pivot_permutation[i] = i;
  f.norm_one = a.norm_one();

  const Real threshold = a.max_abs() * pow10<Real>(-static_cast<int>(f.digits));
  auto& lu = f.factors;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (abs(lu(i, k)) > abs(lu(p, k))) p = i;
    }
    if (abs(lu(p, k)) <= threshold) {
      throw SingularMatrix("lu_factor: pivot " + std::to_string(k) + " vanishes at " +
                           std::to_string(f.digits) + " digits");
    }
    if (p != k) {
      lu.swap_rows(p, k);
      std::swap(f.pivot_permutation[p], f.pivot_permutation[k]);
    }
    const Real pivot = lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real m = lu(i, k) / pivot;
      lu(i, k) = m;
      if (m == 0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
    }
  }

  const Real cond = f.norm_one * estimate_inverse_norm_one(f);
  f.condition_estimate = cond < 1 ? Real(1) : cond;
  return f;
}

}  // namespace emden_dq
