#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace emden_dq {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A pivot vanished at the working precision.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class InvalidProblem : public Error {
 public:
  using Error::Error;
};

class NonFiniteResidual : public Error {
 public:
  using Error::Error;
};

/// The interpolation matrix is too ill-conditioned for the available digits.
class PrecisionInsufficient : public Error {
 public:
  PrecisionInsufficient(const std::string& what, double log10_condition)
      : Error(what), log10_condition_(log10_condition) {}
  double log10_condition() const noexcept { return log10_condition_; }

 private:
  double log10_condition_;
};

class NoZeroInDomain : public Error {
 public:
  using Error::Error;
};

class UnsupportedM : public Error {
 public:
  using Error::Error;
};

class StiffnessFailure : public Error {
 public:
  using Error::Error;
};

class UnknownProblem : public Error {
 public:
  using Error::Error;
};

/// Common base for iterative solvers that stopped without meeting tolerance.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, int iterations, double residual_norm)
      : Error(what), iterations_(iterations), residual_norm_(residual_norm) {}
  int iterations() const noexcept { return iterations_; }
  /// Best residual norm reached, rounded to double for reporting.
  double residual_norm() const noexcept { return residual_norm_; }

 private:
  int iterations_;
  double residual_norm_;
};

/// Newton ran out of iterations. Carries the best iterate seen.
template <class Real>
class MaxIterationsExceeded : public ConvergenceFailure {
 public:
  MaxIterationsExceeded(const std::string& what, int iterations, Real residual_norm,
                        std::vector<Real> best_iterate)
      : ConvergenceFailure(what, iterations, static_cast<double>(residual_norm)),
        best_residual_norm_(std::move(residual_norm)),
        best_iterate_(std::move(best_iterate)) {}

  const std::vector<Real>& best_iterate() const noexcept { return best_iterate_; }
  const Real& best_residual_norm() const noexcept { return best_residual_norm_; }

 private:
  Real best_residual_norm_;
  std::vector<Real> best_iterate_;
};

/// Raised by the Lane-Emden solve when the nonlinear collocation system does not converge.
class NewtonDiverged : public ConvergenceFailure {
 public:
  using ConvergenceFailure::ConvergenceFailure;
};

}  // namespace emden_dq
