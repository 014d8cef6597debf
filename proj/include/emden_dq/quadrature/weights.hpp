#pragma once

#include "emden_dq/kernels.hpp"
#include "emden_dq/numerics/dense_matrix.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/lu.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/quadrature/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace emden_dq {

/// A[k][j] = phi_k(x_j) = phi(|x_j - x_k|). Symmetric by construction.
template <class Real>
DenseMatrix<Real> interpolation_matrix(const Kernel<Real>& kernel, const NodeSet<Real>& nodes) {
  const auto n = nodes.size();
  DenseMatrix<Real> a(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = k; j < n; ++j) {
      a(k, j) = kernel.eval(nodes[j], nodes[k]);
      if (j != k) a(j, k) = a(k, j);
    }
  }
  return a;
}

/// First- and second-derivative differential quadrature weights on a node set.
///
/// w1 and w2 are held at the working precision. The interpolation matrix
/// factorization is held at `internal_digits`, which exceeds the working
/// precision when the guard had to add digits for an ill-conditioned matrix.
template <class Real>
struct WeightMatrices {
  DenseMatrix<Real> w1;
  DenseMatrix<Real> w2;
  LuFactorization<Real> interp_factorization;
  Real condition_estimate;
  unsigned working_digits = 0;
  unsigned internal_digits = 0;
  Kernel<Real> kernel;
  NodeSet<Real> nodes;

  std::size_t size() const noexcept { return nodes.size(); }

  double log10_condition() const { return log10_magnitude(condition_estimate); }

  /// Decimal digits left after the condition number eats into the internal precision.
  double precision_margin() const { return static_cast<double>(internal_digits) - log10_condition(); }
};

struct WeightOptions {
  GuardPolicy guard = GuardPolicy::automatic;
  unsigned max_guard_digits = 400;
  /// Digits kept beyond log10(cond) when the guard picks the internal precision.
  unsigned guard_margin = 10;
};

namespace detail {

template <class Real>
struct FactoredSystem {
  Kernel<Real> kernel;
  NodeSet<Real> nodes;
  LuFactorization<Real> lu;
};

template <class Real>
FactoredSystem<Real> factor_interpolation_at(const Kernel<Real>& kernel, const NodeSet<Real>& nodes, unsigned digits) {
  ScopedPrecision scope(digits);
  Kernel<Real> k = kernel.with_digits(digits);
  NodeSet<Real> x = nodes.with_digits(digits);
  auto lu = lu_factor(interpolation_matrix(k, x));
  return FactoredSystem<Real>{std::move(k), std::move(x), std::move(lu)};
}

}  // namespace detail

/// Solves A w_i = d^n phi(x_i) / dx^n for every node i and n in {1, 2}, reusing
/// one factorization of A for all 2N right-hand sides.
///
/// Under GuardPolicy::automatic (multiprecision only) the factorization is
/// repeated at working + ceil(log10 cond) + guard_margin digits until the
/// condition estimate fits; PrecisionInsufficient is raised when that would
/// exceed working + max_guard_digits.
template <class Real>
WeightMatrices<Real> build_weights(const Kernel<Real>& kernel, const NodeSet<Real>& nodes,
                                   const WeightOptions& options = {}) {
  const unsigned working = active_digits<Real>();
  std::optional<detail::FactoredSystem<Real>> system;
  unsigned internal = working;

  if (!scalar_traits<Real>::is_multiprecision || options.guard == GuardPolicy::off) {
    system = detail::factor_interpolation_at(kernel, nodes, working);
  } else {
    const unsigned cap = working + options.max_guard_digits;
    internal = working + options.guard_margin;
    for (int attempt = 0; attempt < 16; ++attempt) {
      try {
        system = detail::factor_interpolation_at(kernel, nodes, internal);
      } catch (const SingularMatrix&) {
        if (internal >= cap) {
          throw PrecisionInsufficient("interpolation matrix singular at the guard precision cap of " +
                                          std::to_string(cap) + " digits",
                                      static_cast<double>(cap));
        }
        internal = std::min(cap, 2 * internal);
        continue;
      }
      const double log_cond = log10_magnitude(system->lu.condition_estimate);
      const auto needed = working + static_cast<unsigned>(std::ceil(std::max(0.0, log_cond))) + options.guard_margin;
      if (needed <= internal) break;
      if (needed > cap) {
        throw PrecisionInsufficient("interpolation matrix needs " + std::to_string(needed) +
                                        " digits, above the guard cap of " + std::to_string(cap),
                                    log_cond);
      }
      internal = needed;
      system.reset();
    }
    if (!system) throw PrecisionInsufficient("guard precision search did not settle", 0.0);
  }

  const auto n = nodes.size();
  DenseMatrix<Real> w1(n, n);
  DenseMatrix<Real> w2(n, n);
  {
    ScopedPrecision scope(internal);
    const auto& k = system->kernel;
    const auto& x = system->nodes;
    std::vector<Real> rhs1(n);
    std::vector<Real> rhs2(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < n; ++c) {
        rhs1[c] = k.d1(x[i], x[c]);
        rhs2[c] = k.d2(x[i], x[c]);
      }
      const auto sol1 = lu_solve(system->lu, rhs1);
      const auto sol2 = lu_solve(system->lu, rhs2);
      for (std::size_t j = 0; j < n; ++j) {
        w1(i, j) = scalar_traits<Real>::with_digits(sol1[j], working);
        w2(i, j) = scalar_traits<Real>::with_digits(sol2[j], working);
      }
    }
  }

  Real cond = scalar_traits<Real>::with_digits(system->lu.condition_estimate, working);
  return WeightMatrices<Real>{std::move(w1),  std::move(w2), std::move(system->lu), std::move(cond),
                              working,        internal,      kernel,                nodes};
}

}  // namespace emden_dq
