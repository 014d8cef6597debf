#include "emden_dq/oracles/exact.hpp"
#include "emden_dq/problems/catalog.hpp"
#include "emden_dq/problems/residual.hpp"
#include "emden_dq/problems/solve.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace emden_dq;

namespace {

using R = mp_real;

Solution<R> run(const Problem<R>& p, unsigned digits, std::optional<int> n = std::nullopt,
                std::optional<R> length = std::nullopt) {
  auto settings = SolveSettings<R>::defaults_for(p);
  if (n) settings.n_points = *n;
  if (length) settings.domain_length = *length;
  return solve(p, settings, PrecisionContext::multiprecision(digits));
}

WeightMatrices<R> weights_for(int n, const R& length) {
  return build_weights(Kernel<R>::gaussian(R(1)), make_nodes(n, length));
}

/// Residual of the discrete system at closed-form nodal samples.
R exact_sample_residual(const Problem<R>& p, const WeightMatrices<R>& w) {
  std::vector<R> f;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const R y = p.reference(w.nodes[i]);
    f.push_back(p.transform == Transform::log_substitution ? R(log(y)) : y);
  }
  return norm_inf(assemble_residual(p, w, f));
}

R max_nodal_error(const Solution<R>& s) {
  const auto y = s.y_values();
  R worst(0);
  for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, R(abs(y[i] - s.problem.reference(s.nodes()[i]))));
  return worst;
}

}  // namespace

TEST(Spow, Examples) {
  ScopedPrecision scope(50);
  EXPECT_EQ(spow(R(4), R("1.5")), 8);
  EXPECT_EQ(spow(R(-4), R("1.5")), -8);
  EXPECT_EQ(spow(R(0), R("2.5")), 0);
  EXPECT_EQ(spow(R(0), R(0)), 1);
  EXPECT_EQ(spow(R(-3), R(0)), 1);
}

TEST(Spow, OddExtensionAndDerivative) {
  ScopedPrecision scope(50);
  for (const char* m : {"0.5", "1", "1.5", "2", "3", "4.25"}) {
    for (const char* y : {"0.3", "1.7", "5"}) {
      EXPECT_EQ(spow(R(y), R(m)), -spow(R(-R(y)), R(m)));
      const R h("1e-15");
      const R exact = spow_derivative(R(y), R(m));
      const R fd = (spow(R(R(y) + h), R(m)) - spow(R(R(y) - h), R(m))) / (2 * h);
      EXPECT_LT(abs(fd - exact), R("1e-25") * (1 + abs(exact))) << "m=" << m << " y=" << y;
    }
  }
}

TEST(Residual, LinearStandardExactSamples) {
  ScopedPrecision scope(50);
  const auto p = standard_problem<R>(1.0);
  EXPECT_LE(exact_sample_residual(p, weights_for(30, R("3.2"))), R("1e-8"));
}

TEST(Residual, ConstantIndexExactSamples) {
  ScopedPrecision scope(50);
  const auto p = standard_problem<R>(0.0);
  const auto w = weights_for(30, p.default_length);
  EXPECT_LE(exact_sample_residual(p, w), R("1e-12"));
}

TEST(Residual, ForcedExampleExactSamplesOnUnitDomain) {
  ScopedPrecision scope(50);
  EXPECT_LE(exact_sample_residual(ex8_problem<R>(), weights_for(20, R(1))), R("1e-8"));
}

TEST(Residual, FirstRowReducesToAlphaTimesSlope) {
  ScopedPrecision scope(40);
  const auto p = ex9_problem<R>();
  const auto w = weights_for(12, R(2));
  std::vector<R> f;
  for (std::size_t i = 0; i < 12; ++i) f.push_back(sin(w.nodes[i]) + 1);
  const auto res = assemble_residual(p, w, f);
  const auto d1 = w.w1.multiply(f);
  EXPECT_LT(abs(res[0] - 2 * d1[0]), R("1e-35"));
}

TEST(Residual, AnalyticJacobianMatchesFiniteDifferences) {
  ScopedPrecision scope(50);
  for (const char* name : {"ex5", "ex6", "ex8", "standard:m=1.5"}) {
    auto p = make_problem<R>(name);
    const auto w = weights_for(10, R(1));
    std::vector<R> f;
    for (std::size_t i = 0; i < 10; ++i) f.push_back(R("0.9") - w.nodes[i] / 5);
    const auto analytic = residual_jacobian(p, w, std::span<const R>(f));
    VectorFunction<R> r = [&](std::span<const R> v) { return assemble_residual(p, w, v); };
    const auto fd = finite_difference_jacobian(r, std::span<const R>(f), r(std::span<const R>(f)));
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j)
        EXPECT_LT(abs(analytic(i, j) - fd(i, j)), R("1e-18") * (1 + abs(analytic(i, j)))) << name << " " << i << "," << j;
  }
}

TEST(Solve, ExampleSevenAtOne) {
  const auto s = run(ex7_problem<R>(), 60, 35, R(1));
  ScopedPrecision scope(60);
  EXPECT_LT(abs(s.value_at(R(1)) - R("2.7182818285")), R("1e-9"));
}

TEST(Solve, ExampleFiveAtOne) {
  const auto s = run(ex5_problem<R>(), 60, 40, R(10));
  ScopedPrecision scope(60);
  EXPECT_LT(abs(s.value_at(R(1)) - R("-1.3862943611")), R("5e-6"));
}

TEST(Solve, QuadraticIndexAtThree) {
  const auto s = run(standard_problem<R>(2.0), 60, 40, R("4.36"));
  ScopedPrecision scope(60);
  EXPECT_LT(abs(s.value_at(R(3)) - R("0.24182408")), R("1e-6"));
}

TEST(Solve, InitialConditionsHold) {
  for (const auto& p : catalog<R>()) {
    const auto s = run(p, 50);
    ScopedPrecision scope(50);
    const R a = p.transform == Transform::log_substitution ? R(log(p.y0)) : p.y0;
    EXPECT_EQ(s.nodal_values.front(), a) << p.name;
    const auto slope = s.weights.w1.multiply(s.nodal_values).front();
    EXPECT_LE(abs(slope - p.dy0), 10 * s.tolerance) << p.name;
    EXPECT_GT(s.newton_iterations, 0) << p.name;
    EXPECT_LE(s.final_residual_norm, s.tolerance) << p.name;
  }
}

TEST(Solve, InterpolantReproducesNodalValues) {
  const auto s = run(ex6_problem<R>(), 50);
  ScopedPrecision scope(50);
  const auto y = s.y_values();
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_LT(abs(s.value_at(s.nodes()[i]) - y[i]), R("1e-40"));
}

TEST(Solve, LogSubstitutionExposesY) {
  const auto s = run(ex6_problem<R>(), 50);
  ScopedPrecision scope(50);
  const auto y = s.y_values();
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(y[i], exp(s.nodal_values[i]));
  EXPECT_LT(abs(s.value_at(R("0.5")) - exp(R("0.25"))), R("1e-9"));
}

TEST(Solve, TransformConsistentWithDirectSolve) {
  const auto z = run(ex6_problem<R>(), 60, 20, R(1));
  const auto d = run(ex7_problem<R>(), 60, 20, R(1));
  ScopedPrecision scope(60);
  const R bound = 10 * std::max(max_nodal_error(z), max_nodal_error(d));
  const auto yz = z.y_values();
  const auto yd = d.y_values();
  for (std::size_t i = 0; i < yz.size(); ++i) EXPECT_LE(abs(yz[i] - yd[i]), bound) << "node " << i;
}

TEST(Solve, ErrorDecreasesWithN) {
  R previous(1);
  for (int n : {10, 20, 30}) {
    const auto s = run(ex7_problem<R>(), 60, n, R(1));
    ScopedPrecision scope(60);
    const R e = max_nodal_error(s);
    EXPECT_LT(e, previous) << "N=" << n;
    previous = e;
  }
}

TEST(Solve, RepeatedSolvesAreBitIdentical) {
  const auto a = run(standard_problem<R>(1.5), 40);
  const auto b = run(standard_problem<R>(1.5), 40);
  for (std::size_t i = 0; i < a.nodal_values.size(); ++i) EXPECT_EQ(a.nodal_values[i], b.nodal_values[i]);
}

TEST(Solve, LeastSquaresClosureAlsoConverges) {
  auto p = ex7_problem<R>();
  auto settings = SolveSettings<R>::defaults_for(p);
  settings.n_points = 20;
  settings.closure = Closure::least_squares;
  const auto s = solve(p, settings, PrecisionContext::multiprecision(50));
  ScopedPrecision scope(50);
  EXPECT_EQ(s.closure, Closure::least_squares);
  EXPECT_LT(max_nodal_error(s), R("1e-8"));
}

TEST(Solve, NativeDoubleSmallSystem) {
  auto p = ex7_problem<double>();
  auto settings = SolveSettings<double>::defaults_for(p);
  settings.n_points = 8;
  const auto s = solve(p, settings, PrecisionContext::native_double());
  EXPECT_NEAR(s.value_at(1.0), std::exp(1.0), 1e-2);
}

TEST(Solve, GuardOffRaisesPrecisionInsufficient) {
  auto p = ex7_problem<R>();
  auto settings = SolveSettings<R>::defaults_for(p);
  settings.n_points = 30;
  EXPECT_THROW(solve(p, settings, PrecisionContext::multiprecision(20, GuardPolicy::off)), PrecisionInsufficient);
}

TEST(Solve, ScalarTypeMustMatchContext) {
  auto p = ex7_problem<R>();
  EXPECT_THROW(solve(p, SolveSettings<R>::defaults_for(p), PrecisionContext::native_double()), std::invalid_argument);
}

TEST(Solve, InvalidGridRejected) {
  auto p = ex7_problem<R>();
  auto settings = SolveSettings<R>::defaults_for(p);
  settings.n_points = 2;
  EXPECT_THROW(solve(p, settings, PrecisionContext::multiprecision(30)), InvalidGrid);
}

TEST(FirstZero, LinearIndexIsPi) {
  const auto s = run(standard_problem<R>(1.0), 50, 30, R("3.2"));
  ScopedPrecision scope(50);
  EXPECT_LT(abs(first_zero(s) - boost::math::constants::pi<R>()), R("1e-6"));
}

TEST(FirstZero, TabulatedIndices) {
  for (auto [m, zero] : {std::pair{1.5, "3.65375374"}, std::pair{3.0, "6.89684862"}}) {
    const auto s = run(standard_problem<R>(m), 50, 30);
    ScopedPrecision scope(50);
    EXPECT_LT(abs(first_zero(s) - R(zero)), R("1e-5")) << "m=" << m;
  }
}

TEST(FirstZero, DomainShortOfZeroRaises) {
  const auto s = run(standard_problem<R>(1.0), 40, 20, R(2));
  EXPECT_THROW(first_zero(s), NoZeroInDomain);
}

TEST(Catalog, NineNamedEntries) {
  const auto all = catalog<R>();
  ASSERT_EQ(all.size(), 9u);
  std::set<std::string> names;
  for (const auto& p : all) {
    names.insert(p.name);
    EXPECT_NO_THROW(p.validate()) << p.name;
    EXPECT_FALSE(p.probe_points.empty()) << p.name;
  }
  EXPECT_EQ(names.size(), 9u);
  EXPECT_EQ(catalog_names().size(), 9u);
}

TEST(Catalog, DefaultLengthsAndPoints) {
  ScopedPrecision scope(50);
  EXPECT_EQ(make_problem<R>("isothermal").default_length, R("2.5"));
  EXPECT_EQ(make_problem<R>("sinh").default_length, 2);
  EXPECT_EQ(make_problem<R>("sin").default_length, 2);
  EXPECT_EQ(make_problem<R>("ex5").default_length, 10);
  EXPECT_EQ(make_problem<R>("ex6").default_length, 1);
  EXPECT_EQ(make_problem<R>("ex7").default_length, 1);
  EXPECT_EQ(make_problem<R>("ex8").default_length, 10);
  EXPECT_EQ(make_problem<R>("ex9").default_length, 10);
  EXPECT_EQ(make_problem<R>("standard:m=2").default_points, 40);
  EXPECT_EQ(make_problem<R>("standard:m=4").default_points, 60);
  EXPECT_EQ(make_problem<R>("standard:m=3").default_points, 30);
  EXPECT_EQ(make_problem<R>("standard:m=3").default_guess, InitialGuess::linear_decay);
  const R l = make_problem<R>("standard:m=1.5").default_length;
  EXPECT_LT(abs(l - R("1.005") * R("3.65375374")), R("1e-40"));
}

TEST(Catalog, ClosedFormReferences) {
  ScopedPrecision scope(50);
  EXPECT_LT(abs(make_problem<R>("standard:m=0").reference(R(1)) - R(5) / 6), R("1e-48"));
  EXPECT_LT(abs(make_problem<R>("standard:m=5").reference(R(2)) - R("0.654653671")), R("1e-9"));
  EXPECT_EQ(make_problem<R>("ex8").reference(R(10)), 9000);
  EXPECT_EQ(make_problem<R>("ex9").reference(R(10)), 1100);
  EXPECT_EQ(make_problem<R>("ex9").reference(R(1)), 2);
  EXPECT_FALSE(make_problem<R>("isothermal").has_closed_form());
}

TEST(Catalog, ClosedFormsSatisfyTheirEquations) {
  ScopedPrecision scope(60);
  const R h("1e-15");
  for (const char* name : {"ex5", "ex6", "ex7", "ex8", "ex9", "standard:m=0", "standard:m=1", "standard:m=5"}) {
    const auto p = make_problem<R>(name);
    for (const char* xs : {"0.3", "0.9", "2.5"}) {
      const R x(xs);
      const R y = p.reference(x);
      const R dy = (p.reference(R(x + h)) - p.reference(R(x - h))) / (2 * h);
      const R d2y = (p.reference(R(x + h)) - 2 * y + p.reference(R(x - h))) / (h * h);
      EXPECT_LT(abs(pointwise_residual(p, x, y, dy, d2y)), R("1e-20") * (1 + abs(d2y))) << name << " x=" << xs;
    }
  }
}

TEST(Catalog, UnknownNamesRejected) {
  EXPECT_THROW(make_problem<R>("bogus"), UnknownProblem);
  EXPECT_THROW(make_problem<R>("standard:m=abc"), UnknownProblem);
  EXPECT_THROW(make_problem<R>("standard:m=7"), UnknownProblem);
  EXPECT_EQ(parse_standard_m("standard:m=2.5"), 2.5);
  EXPECT_FALSE(parse_standard_m("ex7").has_value());
}

TEST(Catalog, ClosureAndGuessNames) {
  EXPECT_EQ(parse_closure(to_string(Closure::least_squares)), Closure::least_squares);
  EXPECT_EQ(parse_initial_guess(to_string(InitialGuess::linear_decay)), InitialGuess::linear_decay);
  EXPECT_THROW(parse_closure("magic"), std::invalid_argument);
}
