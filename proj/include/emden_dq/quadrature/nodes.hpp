#pragma once

#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/precision.hpp"

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace emden_dq {

template <class Real>
class NodeSet {
 public:
  NodeSet(Real domain_length, std::vector<Real> points)
      : domain_length_(std::move(domain_length)), points_(std::move(points)) {}

  std::size_t size() const noexcept { return points_.size(); }
  const Real& domain_length() const noexcept { return domain_length_; }
  std::span<const Real> points() const noexcept { return points_; }
  const Real& operator[](std::size_t i) const { return points_[i]; }

  NodeSet with_digits(unsigned digits) const {
    std::vector<Real> pts;
    pts.reserve(points_.size());
    for (const auto& p : points_) pts.push_back(scalar_traits<Real>::with_digits(p, digits));
    return NodeSet(scalar_traits<Real>::with_digits(domain_length_, digits), std::move(pts));
  }

 private:
  Real domain_length_;
  std::vector<Real> points_;
};

/// x_i = (L/2)(1 - cos(pi (i-1)/(N-1))), i = 1..N, for any N >= 2.
///
/// Evaluated as L sin^2(theta/2) on the lower half and mirrored, so the set
/// is exactly symmetric about L/2 with exact endpoints.
template <class Real>
std::vector<Real> cosine_points(int n, const Real& length) {
  using std::acos;
  using std::sin;
  if (n < 2) throw InvalidGrid("cosine_points: need at least two points");
  const Real pi = acos(Real(-1));
  std::vector<Real> x(static_cast<std::size_t>(n));
  const int last = n - 1;
  for (int i = 0; 2 * i < last; ++i) {
    const Real s = sin(pi * i / (2 * last));
    x[i] = length * s * s;
    x[last - i] = length - x[i];
  }
  if (last % 2 == 0) x[last / 2] = length / 2;
  x[0] = Real(0);
  x[last] = length;
  return x;
}

template <class Real>
NodeSet<Real> make_nodes(int n, const Real& length) {
  if (n < 4) throw InvalidGrid("make_nodes: N must be at least 4, got " + std::to_string(n));
  if (!(length > 0)) throw InvalidGrid("make_nodes: domain length must be positive");
  return NodeSet<Real>(length, cosine_points(n, length));
}

}  // namespace emden_dq
