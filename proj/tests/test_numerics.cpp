#include "emden_dq/numerics/brent.hpp"
#include "emden_dq/numerics/dense_matrix.hpp"
#include "emden_dq/numerics/lu.hpp"
#include "emden_dq/numerics/newton.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/problems/catalog.hpp"
#include "emden_dq/problems/solve.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace emden_dq;

namespace {

DenseMatrix<mp_real> random_matrix(std::size_t n, unsigned seed, double diagonal_boost) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix<mp_real> a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = mp_real(u(rng));
    a(i, i) += diagonal_boost;
  }
  return a;
}

mp_real inverse_norm_one_explicit(const DenseMatrix<mp_real>& a) {
  const auto n = a.rows();
  auto lu = lu_factor(a);
  mp_real best(0);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<mp_real> e(n, mp_real(0));
    e[j] = 1;
    auto col = lu_solve(lu, e);
    mp_real s(0);
    for (const auto& v : col) s += abs(v);
    if (s > best) best = s;
  }
  return best;
}

mp_real matrix_norm_one(const DenseMatrix<mp_real>& a) {
  mp_real best(0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    mp_real s(0);
    for (std::size_t i = 0; i < a.rows(); ++i) s += abs(a(i, j));
    if (s > best) best = s;
  }
  return best;
}

}  // namespace

TEST(Precision, MultiprecisionRejectsFewerThanFifteenDigits) {
  EXPECT_THROW(PrecisionContext::multiprecision(14), std::invalid_argument);
  EXPECT_EQ(PrecisionContext::multiprecision(15).decimal_digits, 15u);
}

TEST(Precision, NativeDoubleReportsFifteenDigits) {
  const auto ctx = PrecisionContext::native_double();
  EXPECT_EQ(ctx.decimal_digits, 15u);
  EXPECT_EQ(ctx.mode, PrecisionMode::native_double);
}

TEST(Precision, EnvironmentOverridesDefaultDigits) {
  ::setenv("EMDEN_DQ_DIGITS", "72", 1);
  EXPECT_EQ(PrecisionContext::from_environment().decimal_digits, 72u);
  ::setenv("EMDEN_DQ_DIGITS", "abc", 1);
  EXPECT_THROW(PrecisionContext::from_environment(), std::invalid_argument);
  ::unsetenv("EMDEN_DQ_DIGITS");
  EXPECT_EQ(PrecisionContext::from_environment().decimal_digits, kDefaultDigits);
}

TEST(Precision, ScopedPrecisionRestoresPrevious) {
  const unsigned before = mp_real::default_precision();
  {
    ScopedPrecision scope(123);
    EXPECT_EQ(mp_real::default_precision(), 123u);
  }
  EXPECT_EQ(mp_real::default_precision(), before);
}

TEST(Precision, ScalarTypeMustMatchMode) {
  EXPECT_THROW(PrecisionContext::native_double().require_scalar<mp_real>(), std::invalid_argument);
  EXPECT_THROW(PrecisionContext::multiprecision(30).require_scalar<double>(), std::invalid_argument);
  EXPECT_NO_THROW(PrecisionContext::multiprecision(30).require_scalar<mp_real>());
}

TEST(Lu, IdentityHasUnitCondition) {
  ScopedPrecision scope(50);
  auto lu = lu_factor(DenseMatrix<mp_real>::identity(4));
  EXPECT_EQ(lu.condition_estimate, 1);
  std::vector<mp_real> b{1, 2, 3, 4};
  auto x = lu_solve(lu, b);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(x[i], b[i]);
}

TEST(Lu, DiagonalSolveAndCondition) {
  ScopedPrecision scope(50);
  DenseMatrix<mp_real> a(2, 2);
  a(0, 0) = 2;
  a(1, 1) = 4;
  auto lu = lu_factor(a);
  EXPECT_EQ(lu.condition_estimate, 2);
  auto x = lu_solve(lu, std::vector<mp_real>{2, 4});
  EXPECT_EQ(x[0], 1);
  EXPECT_EQ(x[1], 1);
}

TEST(Lu, GaussianConditionEstimateWithinFactorTenOfExplicitInverse) {
  ScopedPrecision scope(50);
  const auto nodes = cosine_points<mp_real>(10, mp_real(1));
  DenseMatrix<mp_real> a(10, 10);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) a(i, j) = exp(-(nodes[i] - nodes[j]) * (nodes[i] - nodes[j]));
  auto lu = lu_factor(a);
  const mp_real exact = matrix_norm_one(a) * inverse_norm_one_explicit(a);
  EXPECT_GE(lu.condition_estimate, exact / 10);
  EXPECT_LE(lu.condition_estimate, exact * 10);
}

TEST(Lu, RandomSystemSolvedToWorkingPrecision) {
  ScopedPrecision scope(50);
  auto a = random_matrix(8, 7, 4.0);
  std::vector<mp_real> x_true(8);
  for (std::size_t i = 0; i < 8; ++i) x_true[i] = mp_real(static_cast<int>(i) - 3) / 7;
  auto b = a.multiply(x_true);
  auto x = lu_solve(lu_factor(a), b);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_LT(abs(x[i] - x_true[i]), mp_real("1e-45"));
}

TEST(Lu, ResidualBoundedByConditionTimesEpsilon) {
  ScopedPrecision scope(40);
  for (unsigned seed = 1; seed <= 20; ++seed) {
    auto a = random_matrix(6, seed, 3.0);
    std::vector<mp_real> b(6);
    for (std::size_t i = 0; i < 6; ++i) b[i] = mp_real(static_cast<int>(seed + i)) / 5;
    auto lu = lu_factor(a);
    auto x = lu_solve(lu, b);
    auto ax = a.multiply(x);
    mp_real r(0);
    for (std::size_t i = 0; i < 6; ++i) r = std::max(r, mp_real(abs(ax[i] - b[i])));
    EXPECT_LE(r, 100 * lu.condition_estimate * pow10<mp_real>(-40) * norm_inf(b)) << "seed " << seed;
  }
}

TEST(Lu, SingularMatrixRejected) {
  ScopedPrecision scope(30);
  DenseMatrix<mp_real> a(2, 2);
  a(0, 0) = 1;
  a(0, 1) = 2;
  a(1, 0) = 2;
  a(1, 1) = 4;
  EXPECT_THROW(lu_factor(a), SingularMatrix);
}

TEST(Lu, LengthMismatchRejected) {
  ScopedPrecision scope(30);
  auto lu = lu_factor(DenseMatrix<mp_real>::identity(3));
  EXPECT_THROW(lu_solve(lu, std::vector<mp_real>{1, 2}), DimensionMismatch);
  EXPECT_THROW(lu_factor(DenseMatrix<mp_real>(2, 3)), DimensionMismatch);
}

TEST(Lu, DoubleInstantiation) {
  DenseMatrix<double> a(2, 2);
  a(0, 0) = 3;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 2;
  auto x = lu_solve(lu_factor(a), std::vector<double>{5, 5});
  EXPECT_NEAR(x[0], 1.0, 1e-15);
  EXPECT_NEAR(x[1], 2.0, 1e-15);
}

TEST(Brent, LinearRootIsExact) {
  ScopedPrecision scope(50);
  std::function<mp_real(const mp_real&)> g = [](const mp_real& x) { return x - 1; };
  const mp_real root = brent_root(g, mp_real(0), mp_real(2), pow10<mp_real>(-40));
  EXPECT_LT(abs(root - 1), mp_real("1e-40"));
}

TEST(Brent, SineRootIsPi) {
  ScopedPrecision scope(50);
  std::function<mp_real(const mp_real&)> g = [](const mp_real& x) { return sin(x); };
  const mp_real root = brent_root(g, mp_real(3), mp_real("3.3"), pow10<mp_real>(-45));
  EXPECT_LT(abs(root - boost::math::constants::pi<mp_real>()), mp_real("1e-44"));
}

TEST(Brent, SameSignRejected) {
  std::function<double(const double&)> g = [](const double& x) { return x * x + 1; };
  EXPECT_THROW(brent_root(g, -1.0, 1.0, 1e-12), NoSignChange);
}

TEST(Brent, IterateStaysInsideBracket) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = u(rng);
    const double s = 0.5 + std::abs(u(rng));
    const double a = r - s * 0.3;
    const double b = r + s;
    std::function<double(const double&)> g = [&](const double& x) { return std::tanh(x - r) + 0.1 * (x - r); };
    const double root = brent_root(g, a, b, 1e-13);
    EXPECT_GE(root, a);
    EXPECT_LE(root, b);
    EXPECT_NEAR(root, r, 1e-12);
  }
}

TEST(Newton, LinearSystemConvergesInOneIteration) {
  ScopedPrecision scope(50);
  for (unsigned seed = 1; seed <= 10; ++seed) {
    auto a = random_matrix(5, seed, 3.0);
    std::vector<mp_real> b(5);
    for (std::size_t i = 0; i < 5; ++i) b[i] = mp_real(static_cast<int>(i + seed));
    VectorFunction<mp_real> r = [&](std::span<const mp_real> x) {
      auto ax = a.multiply(x);
      for (std::size_t i = 0; i < 5; ++i) ax[i] -= b[i];
      return ax;
    };
    JacobianFunction<mp_real> j = [&](std::span<const mp_real>) { return a; };
    auto res = newton_solve(r, std::vector<mp_real>(5, mp_real(0)), NewtonOptions<mp_real>::defaults(), j);
    EXPECT_EQ(res.iterations, 1) << "seed " << seed;
  }
}

TEST(Newton, ScalarQuadraticConverges) {
  ScopedPrecision scope(50);
  VectorFunction<mp_real> r = [](std::span<const mp_real> x) { return std::vector<mp_real>{x[0] * x[0] - 2}; };
  auto res = newton_solve(r, std::vector<mp_real>{mp_real(1)}, NewtonOptions<mp_real>::defaults());
  EXPECT_LT(abs(res.x[0] - sqrt(mp_real(2))), mp_real("1e-38"));
}

TEST(Newton, AnalyticAndFiniteDifferenceJacobiansAgree) {
  ScopedPrecision scope(50);
  VectorFunction<mp_real> r = [](std::span<const mp_real> x) {
    return std::vector<mp_real>{x[0] * x[0] + x[1] - 3, sin(x[0]) * x[1]};
  };
  std::vector<mp_real> x{mp_real("0.7"), mp_real("1.3")};
  auto fd = finite_difference_jacobian(r, std::span<const mp_real>(x), r(x));
  EXPECT_LT(abs(fd(0, 0) - 2 * x[0]), mp_real("1e-20"));
  EXPECT_LT(abs(fd(0, 1) - 1), mp_real("1e-20"));
  EXPECT_LT(abs(fd(1, 0) - cos(x[0]) * x[1]), mp_real("1e-20"));
  EXPECT_LT(abs(fd(1, 1) - sin(x[0])), mp_real("1e-20"));
}

TEST(Newton, MaxIterationsCarriesBestIterate) {
  ScopedPrecision scope(30);
  VectorFunction<mp_real> r = [](std::span<const mp_real> x) { return std::vector<mp_real>{x[0] * x[0] + 1}; };
  auto opts = NewtonOptions<mp_real>::defaults();
  opts.max_iter = 5;
  opts.damping = Damping::none;
  try {
    newton_solve(r, std::vector<mp_real>{mp_real(3)}, opts);
    FAIL() << "expected MaxIterationsExceeded";
  } catch (const MaxIterationsExceeded<mp_real>& e) {
    ASSERT_EQ(e.best_iterate().size(), 1u);
    EXPECT_GE(e.best_residual_norm(), 1);
  } catch (const SingularJacobian&) {
    // x can land on 0 where the derivative vanishes; also a valid failure.
  }
}

TEST(Newton, ZeroJacobianIsSingular) {
  ScopedPrecision scope(30);
  VectorFunction<mp_real> r = [](std::span<const mp_real> x) { return std::vector<mp_real>{x[0] * x[0] + 1}; };
  JacobianFunction<mp_real> j = [](std::span<const mp_real> x) {
    DenseMatrix<mp_real> m(1, 1);
    m(0, 0) = 2 * x[0];
    return m;
  };
  EXPECT_THROW(newton_solve(r, std::vector<mp_real>{mp_real(0)}, NewtonOptions<mp_real>::defaults(), j),
               SingularJacobian);
}

TEST(Newton, FullCollocationSystemReachesExactSolution) {
  auto p = ex7_problem<mp_real>();
  auto settings = SolveSettings<mp_real>::defaults_for(p);
  settings.n_points = 20;
  auto sol = solve(p, settings, PrecisionContext::multiprecision(50));
  ScopedPrecision scope(50);
  const auto y = sol.y_values();
  for (std::size_t i = 0; i < y.size(); ++i) {
    const mp_real& x = sol.nodes()[i];
    EXPECT_LT(abs(y[i] - exp(x * x)), mp_real("1e-12")) << "node " << i;
  }
}

TEST(Newton, RaisingPrecisionChangesSolutionBelowLowerPrecision) {
  auto p = ex7_problem<mp_real>();
  auto settings = SolveSettings<mp_real>::defaults_for(p);
  settings.n_points = 10;
  auto lo = solve(p, settings, PrecisionContext::multiprecision(30));
  auto hi = solve(p, settings, PrecisionContext::multiprecision(60));
  ScopedPrecision scope(60);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_LT(abs(lo.nodal_values[i] - hi.nodal_values[i]), mp_real("1e-25")) << "node " << i;
  }
}

TEST(Determinism, RepeatedSolveIsBitIdentical) {
  auto p = ex7_problem<mp_real>();
  auto settings = SolveSettings<mp_real>::defaults_for(p);
  settings.n_points = 15;
  auto a = solve(p, settings, PrecisionContext::multiprecision(40));
  auto b = solve(p, settings, PrecisionContext::multiprecision(40));
  for (std::size_t i = 0; i < 15; ++i) EXPECT_EQ(to_string(a.nodal_values[i]), to_string(b.nodal_values[i]));
}
