#pragma once

#include "emden_dq/kernels.hpp"
#include "emden_dq/numerics/brent.hpp"
#include "emden_dq/numerics/dense_matrix.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/lu.hpp"
#include "emden_dq/numerics/newton.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/problems/problem.hpp"
#include "emden_dq/problems/residual.hpp"
#include "emden_dq/quadrature/interpolant.hpp"
#include "emden_dq/quadrature/nodes.hpp"
#include "emden_dq/quadrature/weights.hpp"

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace emden_dq {

/// Which N equations close the nonlinear system.
enum class Closure {
  /// y(0) = A, discrete y'(0) = B, Res(x_i) = 0 for i = 2..N-1.
  collocation,
  /// Both initial conditions exactly, Res(x_2..x_N) in the least-squares sense.
  least_squares,
};

inline std::string_view to_string(Closure c) {
  return c == Closure::collocation ? "collocation" : "least-squares";
}

inline Closure parse_closure(std::string_view s) {
  if (s == "collocation" || s == "square") return Closure::collocation;
  if (s == "least-squares" || s == "lsq" || s == "ls") return Closure::least_squares;
  throw std::invalid_argument("unknown closure: " + std::string(s));
}

inline std::string_view to_string(InitialGuess g) {
  switch (g) {
    case InitialGuess::constant: return "constant";
    case InitialGuess::linear_decay: return "linear-decay";
    case InitialGuess::supplied: return "supplied";
  }
  return "?";
}

inline InitialGuess parse_initial_guess(std::string_view s) {
  if (s == "constant") return InitialGuess::constant;
  if (s == "linear-decay" || s == "linear") return InitialGuess::linear_decay;
  if (s == "supplied") return InitialGuess::supplied;
  throw std::invalid_argument("unknown initial guess strategy: " + std::string(s));
}

template <class Real>
struct SolveSettings {
  int n_points;
  Real domain_length;
  Kernel<Real> kernel;
  Closure closure = Closure::collocation;
  InitialGuess guess = InitialGuess::constant;
  /// Nodal starting values when guess == supplied (in transformed variables).
  std::vector<Real> supplied_guess;
  std::optional<NewtonOptions<Real>> newton;

  /// Catalog defaults: N and L from the problem, Gaussian kernel with c = 1.
  static SolveSettings defaults_for(const Problem<Real>& p) {
    return SolveSettings{p.default_points, p.default_length, Kernel<Real>::gaussian(Real(1)), Closure::collocation,
                         p.default_guess, {}, std::nullopt};
  }
};

template <class Real>
struct Solution {
  Problem<Real> problem;
  WeightMatrices<Real> weights;
  /// Nodal unknowns; z = ln y under the log substitution.
  std::vector<Real> nodal_values;
  /// Interpolant of the y samples.
  Interpolant<Real> interpolant;
  int newton_iterations = 0;
  Real final_residual_norm;
  Real condition_estimate;
  Real tolerance;
  Closure closure = Closure::collocation;
  /// Condition estimate leaves fewer than 10 spare digits.
  bool precision_warning = false;

  const NodeSet<Real>& nodes() const noexcept { return weights.nodes; }

  std::vector<Real> y_values() const {
    using std::exp;
    if (problem.transform == Transform::identity) return nodal_values;
    std::vector<Real> y;
    y.reserve(nodal_values.size());
    for (const auto& z : nodal_values) y.push_back(exp(z));
    return y;
  }

  Real value_at(const Real& x) const { return interpolant(x); }

  /// x y'' + alpha y' + x (f - h) from the interpolant, for off-node reporting.
  Real residual_at(const Real& x) const {
    return pointwise_residual(problem, x, interpolant(x), interpolant.derivative(x, 1),
                              interpolant.derivative(x, 2));
  }

  /// Residuals Res(x_1..x_N) of the discrete system at the solution.
  std::vector<Real> nodal_residuals() const { return assemble_residual(problem, weights, nodal_values); }
};

namespace detail {

template <class Real>
std::vector<Real> initial_guess(const Problem<Real>& p, const SolveSettings<Real>& s, const NodeSet<Real>& nodes) {
  using std::log;
  const auto n = nodes.size();
  std::vector<Real> guess(n);
  switch (s.guess) {
    case InitialGuess::supplied:
      if (s.supplied_guess.size() != n) {
        throw DimensionMismatch("solve: supplied initial guess has " + std::to_string(s.supplied_guess.size()) +
                                " values, expected " + std::to_string(n));
      }
      return s.supplied_guess;
    case InitialGuess::constant:
      for (auto& g : guess) g = p.y0;
      break;
    case InitialGuess::linear_decay: {
      const Real floor = Real(5) / 100;
      for (std::size_t i = 0; i < n; ++i) {
        const Real v = p.y0 * (1 - nodes[i] / nodes.domain_length());
        guess[i] = v > floor ? v : floor;
      }
      guess[0] = p.y0;
      break;
    }
  }
  if (p.transform == Transform::log_substitution) {
    for (auto& g : guess) g = log(g);
  }
  return guess;
}

template <class Real>
Real initial_value(const Problem<Real>& p) {
  using std::log;
  return p.transform == Transform::log_substitution ? Real(log(p.y0)) : p.y0;
}

template <class Real>
Real initial_slope(const Problem<Real>& p) {
  return p.transform == Transform::log_substitution ? Real(p.dy0 / p.y0) : p.dy0;
}

/// Square system: [f_1 - A, (W1 f)_1 - B, Res(x_2) .. Res(x_{N-1})].
template <class Real>
NewtonResult<Real> solve_collocation(const Problem<Real>& p, const WeightMatrices<Real>& w, std::vector<Real> guess,
                                     const NewtonOptions<Real>& options) {
  const auto n = w.size();
  const Real a = initial_value(p);
  const Real b = initial_slope(p);
  VectorFunction<Real> system = [&](std::span<const Real> f) {
    auto res = assemble_residual(p, w, f);
    std::vector<Real> out(n);
    out[0] = f[0] - a;
    Real slope(0);
    for (std::size_t j = 0; j < n; ++j) slope += w.w1(0, j) * f[j];
    out[1] = slope - b;
    for (std::size_t i = 1; i + 1 < n; ++i) out[i + 1] = res[i];
    return out;
  };
  JacobianFunction<Real> jacobian = [&](std::span<const Real> f) {
    auto jr = residual_jacobian(p, w, f);
    DenseMatrix<Real> jac(n, n);
    jac(0, 0) = Real(1);
    for (std::size_t j = 0; j < n; ++j) jac(1, j) = w.w1(0, j);
    for (std::size_t i = 1; i + 1 < n; ++i)
      for (std::size_t j = 0; j < n; ++j) jac(i + 1, j) = jr(i, j);
    return jac;
  };
  return newton_solve(system, std::move(guess), options, jacobian);
}

/// Gauss-Newton on Res(x_2..x_N) with both initial conditions as equality
/// constraints, each step solving the KKT system
///   [J^T J  C^T] [d]   [-J^T r]
///   [C      0  ] [mu] = [-c    ].
template <class Real>
NewtonResult<Real> solve_least_squares(const Problem<Real>& p, const WeightMatrices<Real>& w, std::vector<Real> f,
                                       const NewtonOptions<Real>& options) {
  using std::abs;
  const auto n = w.size();
  const auto m = n - 1;
  const Real a = initial_value(p);
  const Real b = initial_slope(p);
  Real last_norm(0);
  for (int iter = 0; iter <= options.max_iter; ++iter) {
    const auto res = assemble_residual(p, w, f);
    const auto jr = residual_jacobian(p, w, std::span<const Real>(f));
    Real slope(0);
    for (std::size_t j = 0; j < n; ++j) slope += w.w1(0, j) * f[j];
    const Real c0 = f[0] - a;
    const Real c1 = slope - b;
    last_norm = Real(0);
    for (std::size_t i = 1; i < n; ++i)
      if (abs(res[i]) > last_norm) last_norm = abs(res[i]);

    DenseMatrix<Real> kkt(n + 2, n + 2);
    std::vector<Real> rhs(n + 2, Real(0));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        Real acc(0);
        for (std::size_t i = 1; i <= m; ++i) acc += jr(i, r) * jr(i, c);
        kkt(r, c) = acc;
      }
      Real g(0);
      for (std::size_t i = 1; i <= m; ++i) g += jr(i, r) * res[i];
      rhs[r] = -g;
    }
    kkt(0, n) = Real(1);
    kkt(n, 0) = Real(1);
    for (std::size_t j = 0; j < n; ++j) {
      kkt(j, n + 1) = w.w1(0, j);
      kkt(n + 1, j) = w.w1(0, j);
    }
    rhs[n] = -c0;
    rhs[n + 1] = -c1;
    LuFactorization<Real> lu;
    try {
      lu = lu_factor(kkt);
    } catch (const SingularMatrix& e) {
      throw SingularJacobian(std::string("least-squares closure: ") + e.what());
    }
    const auto step = lu_solve(lu, rhs);
    Real step_norm(0);
    Real f_norm(1);
    for (std::size_t j = 0; j < n; ++j) {
      f[j] += step[j];
      if (abs(step[j]) > step_norm) step_norm = abs(step[j]);
      if (abs(f[j]) > f_norm) f_norm = abs(f[j]);
    }
    if (step_norm <= options.tol * f_norm) {
      f[0] = a;
      const auto final_res = assemble_residual(p, w, f);
      last_norm = Real(0);
      for (std::size_t i = 1; i < n; ++i)
        if (abs(final_res[i]) > last_norm) last_norm = abs(final_res[i]);
      return NewtonResult<Real>{std::move(f), iter + 1, last_norm};
    }
  }
  throw MaxIterationsExceeded<Real>("least-squares closure did not settle", options.max_iter, last_norm, f);
}

}  // namespace detail

/// RBF-DQ solve of a Lane-Emden problem on [0, L].
///
/// Runs at ctx.decimal_digits. Raises PrecisionInsufficient when the
/// interpolation matrix leaves fewer than two spare digits and NewtonDiverged
/// when the nonlinear system does not converge.
template <class Real>
Solution<Real> solve(const Problem<Real>& problem, const SolveSettings<Real>& settings, const PrecisionContext& ctx) {
  ctx.require_scalar<Real>();
  auto scope = ctx.activate();
  problem.validate();
  const unsigned digits = ctx.decimal_digits;
  const Real length = scalar_traits<Real>::with_digits(settings.domain_length, digits);
  auto nodes = make_nodes(settings.n_points, length);
  const Kernel<Real> kernel = settings.kernel.with_digits(digits);

  WeightOptions wopts;
  wopts.guard = ctx.guard;
  wopts.max_guard_digits = ctx.max_guard_digits;
  auto weights = build_weights(kernel, nodes, wopts);
  const double margin = weights.precision_margin();
  if (margin < 2.0) {
    throw PrecisionInsufficient("condition estimate 1e" + std::to_string(static_cast<int>(weights.log10_condition())) +
                                    " exceeds what " + std::to_string(weights.internal_digits) + " digits can resolve",
                                weights.log10_condition());
  }

  NewtonOptions<Real> options = settings.newton.value_or(NewtonOptions<Real>::defaults());
  auto guess = detail::initial_guess(problem, settings, nodes);

  NewtonResult<Real> result;
  try {
    result = settings.closure == Closure::collocation
                 ? detail::solve_collocation(problem, weights, std::move(guess), options)
                 : detail::solve_least_squares(problem, weights, std::move(guess), options);
  } catch (const MaxIterationsExceeded<Real>& e) {
    throw NewtonDiverged(problem.name + ": " + e.what(), e.iterations(), e.residual_norm());
  } catch (const SingularJacobian& e) {
    throw NewtonDiverged(problem.name + ": " + e.what(), 0, 0.0);
  } catch (const NonFiniteResidual& e) {
    throw NewtonDiverged(problem.name + ": " + e.what(), 0, 0.0);
  }

  // Row one is linear, so Newton meets it to rounding; store the imposed value itself.
  result.x[0] = detail::initial_value(problem);
  std::vector<Real> y = result.x;
  if (problem.transform == Transform::log_substitution) {
    using std::exp;
    for (auto& v : y) v = exp(v);
  }
  auto interpolant = fit_interpolant(weights, y);
  Real cond = weights.condition_estimate;
  return Solution<Real>{problem,
                        std::move(weights),
                        std::move(result.x),
                        std::move(interpolant),
                        result.iterations,
                        std::move(result.residual_norm),
                        std::move(cond),
                        options.tol,
                        settings.closure,
                        margin < 10.0};
}

/// Smallest root of the solution interpolant.
///
/// Brackets on the first nodal sign change; failing that, scans the
/// interpolant on [x_N - 0.05L, 1.05L] to catch a zero just past the last node.
template <class Real>
Real first_zero(const Solution<Real>& s) {
  const auto y = s.y_values();
  const auto& nodes = s.nodes();
  const auto n = nodes.size();
  const Real tol = pow10<Real>(10 - static_cast<int>(active_digits<Real>()));
  std::function<Real(const Real&)> g = [&](const Real& x) { return s.interpolant(x); };

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (y[i + 1] == 0) return nodes[i + 1];
    if ((y[i] > 0 && y[i + 1] < 0) || (y[i] < 0 && y[i + 1] > 0)) {
      return brent_root(g, nodes[i], nodes[i + 1], tol);
    }
  }
  const Real length = nodes.domain_length();
  const Real delta = length / 20;
  const Real lo = nodes[n - 1] - delta;
  const Real hi = length + delta;
  constexpr int pieces = 64;
  Real a = lo;
  Real ga = g(a);
  for (int k = 1; k <= pieces; ++k) {
    const Real b = lo + (hi - lo) * k / pieces;
    const Real gb = g(b);
    if (gb == 0) return b;
    if ((ga > 0 && gb < 0) || (ga < 0 && gb > 0)) return brent_root(g, a, b, tol);
    a = b;
    ga = gb;
  }
  throw NoZeroInDomain(s.problem.name + ": solution has no sign change on [0, " + to_string(length, 8) +
                       "]; increase the domain length");
}

}  // namespace emden_dq
