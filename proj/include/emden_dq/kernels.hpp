#pragma once

#include "emden_dq/numerics/precision.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace emden_dq {

enum class KernelFamily { gaussian, multiquadric, inverse_multiquadric, inverse_quadric };

inline std::string_view to_string(KernelFamily f) {
  switch (f) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::multiquadric: return "mq";
    case KernelFamily::inverse_multiquadric: return "imq";
    case KernelFamily::inverse_quadric: return "iq";
  }
  return "?";
}

inline KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian" || name == "ga" || name == "gs") return KernelFamily::gaussian;
  if (name == "mq" || name == "multiquadric") return KernelFamily::multiquadric;
  if (name == "imq" || name == "inverse-multiquadric") return KernelFamily::inverse_multiquadric;
  if (name == "iq" || name == "inverse-quadric") return KernelFamily::inverse_quadric;
  throw std::invalid_argument("unknown kernel family: " + std::string(name));
}

/// One-dimensional radial kernel phi(|x - center|) with shape parameter c.
///
/// Derivatives are taken with respect to the evaluation point x; the center is
/// held fixed. With d = x - center and s = d^2 + c^2:
///
///   gaussian  exp(-c^2 d^2)   d1 = -2c^2 d phi          d2 = (4c^4 d^2 - 2c^2) phi
///   mq        s^(1/2)         d1 = d s^(-1/2)           d2 = c^2 s^(-3/2)
///   imq       s^(-1/2)        d1 = -d s^(-3/2)          d2 = (2d^2 - c^2) s^(-5/2)
///   iq        1/s             d1 = -2d s^(-2)           d2 = (6d^2 - 2c^2) s^(-3)
template <class Real>
class Kernel {
 public:
  Kernel(KernelFamily family, Real shape) : family_(family), shape_(std::move(shape)) {
    if (!(shape_ > 0)) throw std::invalid_argument("kernel shape parameter must be positive");
  }

  static Kernel gaussian(Real shape = Real(1)) { return Kernel(KernelFamily::gaussian, std::move(shape)); }

  KernelFamily family() const noexcept { return family_; }
  const Real& shape() const noexcept { return shape_; }

  /// Same kernel with the shape parameter carried at `digits` precision.
  Kernel with_digits(unsigned digits) const {
    return Kernel(family_, scalar_traits<Real>::with_digits(shape_, digits));
  }

  Real eval(const Real& x, const Real& center) const {
    using std::exp;
    using std::sqrt;
    const Real d = x - center;
    const Real c2 = shape_ * shape_;
    switch (family_) {
      case KernelFamily::gaussian: return exp(-c2 * d * d);
      case KernelFamily::multiquadric: return sqrt(d * d + c2);
      case KernelFamily::inverse_multiquadric: return 1 / sqrt(d * d + c2);
      case KernelFamily::inverse_quadric: return 1 / (d * d + c2);
    }
    return Real(0);
  }

  Real d1(const Real& x, const Real& center) const {
    using std::exp;
    using std::sqrt;
    const Real d = x - center;
    const Real c2 = shape_ * shape_;
    switch (family_) {
      case KernelFamily::gaussian: return -2 * c2 * d * exp(-c2 * d * d);
      case KernelFamily::multiquadric: return d / sqrt(d * d + c2);
      case KernelFamily::inverse_multiquadric: {
        const Real s = d * d + c2;
        return -d / (s * sqrt(s));
      }
      case KernelFamily::inverse_quadric: {
        const Real s = d * d + c2;
        return -2 * d / (s * s);
      }
    }
    return Real(0);
  }

  Real d2(const Real& x, const Real& center) const {
    using std::exp;
    using std::sqrt;
    const Real d = x - center;
    const Real c2 = shape_ * shape_;
    const Real d_sq = d * d;
    switch (family_) {
      case KernelFamily::gaussian: return (4 * c2 * c2 * d_sq - 2 * c2) * exp(-c2 * d_sq);
      case KernelFamily::multiquadric: {
        const Real s = d_sq + c2;
        return c2 / (s * sqrt(s));
      }
      case KernelFamily::inverse_multiquadric: {
        const Real s = d_sq + c2;
        return (2 * d_sq - c2) / (s * s * sqrt(s));
      }
      case KernelFamily::inverse_quadric: {
        const Real s = d_sq + c2;
        return (6 * d_sq - 2 * c2) / (s * s * s);
      }
    }
    return Real(0);
  }

 private:
  KernelFamily family_;
  Real shape_;
};

}  // namespace emden_dq
