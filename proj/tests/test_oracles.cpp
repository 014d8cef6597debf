#include "emden_dq/oracles/exact.hpp"
#include "emden_dq/oracles/runge_kutta.hpp"
#include "emden_dq/problems/catalog.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace emden_dq;

namespace {

using R = mp_real;

const R kRelTol("1e-14");

R max_error_against(const ReferenceCurve<R>& c, const ScalarFunction<R>& exact) {
  R worst(0);
  for (const auto& pt : c.points) worst = std::max(worst, R(abs(pt.y - exact(pt.x))));
  return worst;
}

}  // namespace

TEST(Exact, StandardClosedFormRoots) {
  ScopedPrecision scope(50);
  EXPECT_LT(abs(exact_standard<R>(0, sqrt(R(6)))), R("1e-48"));
  EXPECT_LT(abs(exact_standard<R>(1, boost::math::constants::pi<R>())), R("1e-48"));
  EXPECT_EQ(exact_standard<R>(5, R(0)), 1);
  EXPECT_EQ(exact_standard<R>(1, R(0)), 1);
}

TEST(Exact, UnsupportedIndexRejected) {
  ScopedPrecision scope(30);
  EXPECT_THROW(exact_standard<R>(2, R(1)), UnsupportedM);
  EXPECT_THROW(exact_standard<R>(R("1.5"), R(1)), UnsupportedM);
  EXPECT_TRUE(has_exact_standard(5.0));
  EXPECT_FALSE(has_exact_standard(3.0));
}

TEST(Exact, LinearIndexNearOriginIsSmooth) {
  ScopedPrecision scope(50);
  const R x("1e-30");
  EXPECT_LT(abs(exact_standard<R>(1, x) - 1), R("1e-45"));
}

TEST(Series, Examples) {
  ScopedPrecision scope(50);
  EXPECT_EQ(adm_series(SeriesExample::isothermal, R(0)), 0);
  EXPECT_LT(abs(adm_series(SeriesExample::isothermal, R("0.1")) - R("-0.0016658")), R("5e-8"));
  EXPECT_LT(abs(adm_series(SeriesExample::sin, R("0.1")) - R("0.9985979")), R("5e-8"));
  EXPECT_EQ(adm_series(SeriesExample::sinh, R(0)), 1);
  EXPECT_EQ(adm_series(SeriesExample::sin, R(0)), 1);
}

TEST(Series, LeadingTermsMatchTaylorStart) {
  ScopedPrecision scope(50);
  const R x("1e-6");
  // y = A - f(A) x^2 / 6 + O(x^4) for alpha = 2.
  EXPECT_LT(abs(adm_series(SeriesExample::isothermal, x) + x * x / 6), R("1e-24"));
  EXPECT_LT(abs(adm_series(SeriesExample::sinh, x) - (1 - sinh(R(1)) * x * x / 6)), R("1e-24"));
  EXPECT_LT(abs(adm_series(SeriesExample::sin, x) - (1 - sin(R(1)) * x * x / 6)), R("1e-24"));
}

TEST(Series, UnknownNameRejected) {
  EXPECT_EQ(parse_series_example("sinh"), SeriesExample::sinh);
  EXPECT_THROW(parse_series_example("ex5"), UnknownProblem);
}

TEST(RungeKutta, QuinticIndexAgainstClosedForm) {
  ScopedPrecision scope(50);
  const auto c = rk_reference(standard_equation(R(5)), R(5), R("1e-12"));
  EXPECT_LE(max_error_against(c, [](const R& x) { return exact_standard<R>(5, x); }), R("1e-10"));
}

TEST(RungeKutta, LinearIndexAgainstClosedForm) {
  ScopedPrecision scope(50);
  const auto c = rk_reference(standard_equation(R(1)), R("3.2"), R("1e-12"));
  EXPECT_LE(max_error_against(c, [](const R& x) { return exact_standard<R>(1, x); }), R("1e-10"));
}

TEST(RungeKutta, ExampleSevenAgainstClosedForm) {
  ScopedPrecision scope(50);
  const auto p = ex7_problem<R>();
  const auto c = rk_reference(p, R(1), R("1e-12"));
  EXPECT_LE(max_error_against(c, p.reference), R("1e-10"));
}

TEST(RungeKutta, AgreesWithEveryClosedFormWithinTenTimesClaim) {
  ScopedPrecision scope(50);
  for (const char* name : {"standard:m=0", "standard:m=1", "standard:m=5", "ex5", "ex6", "ex7", "ex8", "ex9"}) {
    const auto p = make_problem<R>(name);
    const auto c = rk_reference(p, p.default_length, kRelTol);
    EXPECT_GT(c.accuracy_claim, 0) << name;
    EXPECT_LE(max_error_against(c, p.reference), 10 * c.accuracy_claim) << name;
  }
}

TEST(RungeKutta, CurveIsStrictlyIncreasingInX) {
  ScopedPrecision scope(40);
  const auto c = rk_reference(make_problem<R>("sinh"), R(2), R("1e-12"));
  EXPECT_EQ(c.method, ReferenceMethod::rk_adaptive);
  ASSERT_EQ(c.points.size(), 101u);
  EXPECT_EQ(c.points.front().x, 0);
  EXPECT_EQ(c.points.front().y, 1);
  for (std::size_t i = 1; i < c.points.size(); ++i) EXPECT_LT(c.points[i - 1].x, c.points[i].x);
}

TEST(RungeKutta, LandsOnRequestedPoints) {
  ScopedPrecision scope(40);
  std::vector<R> xs{R("0.5"), R("0.1"), R("1.5"), R("0.5")};
  const auto c = rk_reference(make_problem<R>("ex7"), R("1.5"), R("1e-12"), std::optional<std::vector<R>>(xs));
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_EQ(c.points[0].x, R("0.1"));
  EXPECT_EQ(c.points[2].x, R("1.5"));
}

TEST(RungeKutta, TooTightToleranceRejected) {
  ScopedPrecision scope(30);
  EXPECT_THROW(rk_reference(make_problem<R>("ex7"), R(1), R("1e-40")), std::invalid_argument);
}

TEST(RungeKutta, SeriesAgreesNearOrigin) {
  ScopedPrecision scope(40);
  const auto p = make_problem<R>("isothermal");
  const auto c = rk_reference(p, R(1), R("1e-12"));
  for (const auto& pt : c.points) EXPECT_LE(abs(pt.y - p.series(pt.x)), R("1e-5")) << "x=" << pt.x;
}

TEST(RungeKutta, NativeDoubleInstantiation) {
  const auto p = ex7_problem<double>();
  EXPECT_NEAR(rk_value(p, 1.0, 1e-10), std::exp(1.0), 1e-8);
}

TEST(FirstZeroReference, ConstantIndexIsRootSix) {
  ScopedPrecision scope(50);
  EXPECT_LT(abs(first_zero_reference(R(0), kRelTol) - sqrt(R(6))), R("1e-10"));
}

TEST(FirstZeroReference, TabulatedValues) {
  ScopedPrecision scope(50);
  EXPECT_LT(abs(first_zero_reference(R(2), kRelTol) - R("4.35287460")), R("1e-7"));
  EXPECT_LT(abs(first_zero_reference(R("2.5"), kRelTol) - R("5.35527546")), R("1e-7"));
  EXPECT_LT(abs(first_zero_reference(R(1), kRelTol) - boost::math::constants::pi<R>()), R("1e-10"));
}

TEST(FirstZeroReference, MonotoneInIndex) {
  ScopedPrecision scope(40);
  R previous(0);
  for (const char* m : {"0", "0.5", "1", "1.5", "2", "2.5", "3"}) {
    const R z = first_zero_reference(R(m), R("1e-12"));
    EXPECT_GT(z, previous) << "m=" << m;
    previous = z;
  }
}

TEST(FirstZeroReference, IndexOutsideRangeRejected) {
  ScopedPrecision scope(30);
  EXPECT_THROW(first_zero_reference(R(5), R("1e-12")), UnsupportedM);
  EXPECT_THROW(first_zero_reference(R(-1), R("1e-12")), UnsupportedM);
}

TEST(FirstZeroReference, NoZeroWithinRangeRaises) {
  ScopedPrecision scope(30);
  EXPECT_THROW(first_zero_reference(make_problem<R>("ex7"), R("1e-10"), R(3)), NoZeroInDomain);
}

TEST(ReferenceCsv, HeaderAndRows) {
  ScopedPrecision scope(30);
  const auto c = rk_reference(make_problem<R>("ex7"), R(1), R("1e-10"),
                              std::optional<std::vector<R>>(std::vector<R>{R(0), R("0.5"), R(1)}));
  std::ostringstream os;
  write_reference_csv(os, c);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,y,accuracy_claim");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 2);
  }
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(to_string(ReferenceMethod::rk_adaptive), "rk-adaptive");
}
