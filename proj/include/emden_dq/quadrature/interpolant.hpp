#pragma once

#include "emden_dq/kernels.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/lu.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/quadrature/nodes.hpp"
#include "emden_dq/quadrature/weights.hpp"

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace emden_dq {

/// f(x) = sum_k lambda_k phi(|x - x_k|).
///
/// Coefficients, kernel and nodes are stored at the internal precision of the
/// weight build (the coefficients of an ill-conditioned fit cancel heavily);
/// evaluations are rounded back to the working precision.
template <class Real>
class Interpolant {
 public:
  struct Evaluation {
    Real value;
    /// x lies outside [0, L].
    bool extrapolated = false;
  };

  Interpolant(Kernel<Real> kernel, NodeSet<Real> nodes, std::vector<Real> coefficients, unsigned working_digits,
              unsigned internal_digits)
      : kernel_(std::move(kernel)),
        nodes_(std::move(nodes)),
        coefficients_(std::move(coefficients)),
        working_digits_(working_digits),
        internal_digits_(internal_digits) {}

  std::span<const Real> coefficients() const noexcept { return coefficients_; }
  const Kernel<Real>& kernel() const noexcept { return kernel_; }
  const NodeSet<Real>& nodes() const noexcept { return nodes_; }

  /// Value (order 0) or first/second derivative at x.
  Evaluation evaluate(const Real& x, int order = 0) const {
    if (order < 0 || order > 2) throw std::invalid_argument("interpolant derivative order must be 0, 1 or 2");
    Real acc;
    {
      ScopedPrecision scope(internal_digits_);
      const Real xi = scalar_traits<Real>::with_digits(x, internal_digits_);
      acc = Real(0);
      for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        const Real& center = nodes_[k];
        switch (order) {
          case 0: acc += coefficients_[k] * kernel_.eval(xi, center); break;
          case 1: acc += coefficients_[k] * kernel_.d1(xi, center); break;
          default: acc += coefficients_[k] * kernel_.d2(xi, center); break;
        }
      }
    }
    const bool outside = x < 0 || x > nodes_.domain_length();
    return Evaluation{scalar_traits<Real>::with_digits(acc, working_digits_), outside};
  }

  Real operator()(const Real& x) const { return evaluate(x).value; }
  Real derivative(const Real& x, int order) const { return evaluate(x, order).value; }

 private:
  Kernel<Real> kernel_;
  NodeSet<Real> nodes_;
  std::vector<Real> coefficients_;
  unsigned working_digits_;
  unsigned internal_digits_;
};

/// Solves A lambda = f with the stored interpolation factorization.
template <class Real>
Interpolant<Real> fit_interpolant(const WeightMatrices<Real>& weights, std::span<const Real> nodal_values) {
  if (nodal_values.size() != weights.size()) {
    throw DimensionMismatch("fit_interpolant: expected " + std::to_string(weights.size()) + " nodal values");
  }
  const unsigned internal = weights.internal_digits;
  ScopedPrecision scope(internal);
  std::vector<Real> rhs;
  rhs.reserve(nodal_values.size());
  for (const auto& v : nodal_values) rhs.push_back(scalar_traits<Real>::with_digits(v, internal));
  auto lambda = lu_solve(weights.interp_factorization, rhs);
  return Interpolant<Real>(weights.kernel.with_digits(internal), weights.nodes.with_digits(internal),
                           std::move(lambda), weights.working_digits, internal);
}

template <class Real>
Interpolant<Real> fit_interpolant(const WeightMatrices<Real>& weights, const std::vector<Real>& nodal_values) {
  return fit_interpolant(weights, std::span<const Real>(nodal_values));
}

}  // namespace emden_dq
