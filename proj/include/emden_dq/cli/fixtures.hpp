#pragma once

#include "emden_dq/emden_dq.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace emden_dq::cli {

/// One measured quantity against its pinned limit.
struct Check {
  std::string label;
  std::string measured;
  std::string limit;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }
};

namespace fixtures {

using R = mp_real;

inline Check at_most(std::string label, const R& measured, const R& limit) {
  return Check{std::move(label), to_string(measured, 3), to_string(limit, 3), measured <= limit};
}

inline Check at_most_seconds(std::string label, double seconds, double limit) {
  return Check{std::move(label), to_string(seconds, 3), to_string(limit, 3), seconds <= limit};
}

inline R abs_diff(const R& a, const R& b) {
  using std::abs;
  return abs(a - b);
}

/// Solve at the given precision with catalog defaults, optionally overriding N and L.
inline Solution<R> solve_named(const std::string& name, unsigned digits, int n = 0, const char* length = nullptr) {
  const auto ctx = PrecisionContext::multiprecision(digits);
  auto scope = ctx.activate();
  const auto p = make_problem<R>(name);
  auto settings = SolveSettings<R>::defaults_for(p);
  if (n > 0) settings.n_points = n;
  if (length) settings.domain_length = R(length);
  return solve(p, settings, ctx);
}

inline R max_nodal_error(const Solution<R>& s) {
  const auto y = s.y_values();
  R worst(0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const R e = abs_diff(y[i], s.problem.reference(s.nodes()[i]));
    if (e > worst) worst = e;
  }
  return worst;
}

inline R max_probe_error(const Solution<R>& s, double x_limit = 1e300) {
  R worst(0);
  for (const auto& text : s.problem.probe_points) {
    const R x(text);
    if (x > x_limit) continue;
    const R e = abs_diff(s.value_at(x), s.problem.reference(x));
    if (e > worst) worst = e;
  }
  return worst;
}

inline R reference_tol() { return R("1e-13"); }

inline CriterionResult criterion1() {
  CriterionResult r{1, "exact-solution closed loop, standard m=1", {}, 0.0};
  const unsigned digits = 50;
  auto scope = ScopedPrecision(digits);
  const auto s = solve_named("standard:m=1", digits, 30, "3.2");
  r.checks.push_back(at_most("max nodal error vs sin(x)/x, N=30, L=3.2", max_nodal_error(s), R("1e-8")));
  const R pi = acos(R(-1));
  r.checks.push_back(at_most("|first zero - pi|", abs_diff(first_zero(s), pi), R("1e-6")));
  return r;
}

inline CriterionResult criterion2() {
  CriterionResult r{2, "first zeros of the standard equation", {}, 0.0};
  const unsigned digits = 60;
  auto scope = ScopedPrecision(digits);
  const auto t0 = std::chrono::steady_clock::now();
  struct Row {
    const char* m;
    const char* horedt;
    const char* tol;
  };
  const Row rows[] = {{"1.5", "3.65375374", "1e-5"},
                      {"2", "4.35287460", "1e-5"},
                      {"2.5", "5.35527546", "1e-5"},
                      {"3", "6.89684862", "1e-5"},
                      {"4", "14.9715463", "1e-3"}};
  for (const auto& row : rows) {
    const auto s = solve_named(std::string("standard:m=") + row.m, digits);
    const std::string label = std::string("m=") + row.m + ", N=" + std::to_string(s.nodes().size()) +
                              ", L=" + to_string(s.nodes().domain_length(), 6) + ": |zero - " + row.horedt + "|";
    r.checks.push_back(at_most(label, abs_diff(first_zero(s), R(row.horedt)), R(row.tol)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.checks.push_back(at_most_seconds("runtime (s)", secs, 300.0));
  return r;
}

/// RBF-DQ vs RK at one point, plus RK vs the printed tabulated value.
inline void pointwise(CriterionResult& r, const Solution<R>& s, const char* x_text, const char* printed,
                      const char* tol, const char* label) {
  const R x(x_text);
  const R rk = rk_value(s.problem, x, reference_tol());
  const R y = s.value_at(x);
  r.checks.push_back(at_most(std::string(label) + " y(" + x_text + ") = " + to_string(y, 10) + ", |rbf-dq - rk|",
                             abs_diff(y, rk), R(tol)));
  r.checks.push_back(at_most(std::string(label) + " y(" + x_text + "), |rk - printed " + printed + "|",
                             abs_diff(rk, R(printed)), R(tol)));
}

inline CriterionResult criterion3() {
  CriterionResult r{3, "pointwise values of the standard equation", {}, 0.0};
  const unsigned digits = 60;
  auto scope = ScopedPrecision(digits);
  pointwise(r, solve_named("standard:m=1.5", digits), "1.0", "0.8451698", "1e-6", "m=1.5");
  pointwise(r, solve_named("standard:m=2", digits), "3.0", "0.2418241", "1e-6", "m=2");
  pointwise(r, solve_named("standard:m=2.5", digits), "5.0", "2.901919e-2", "1e-6", "m=2.5");
  pointwise(r, solve_named("standard:m=3", digits), "6.0", "4.373798e-2", "1e-6", "m=3");
  return r;
}

inline CriterionResult criterion4() {
  CriterionResult r{4, "isothermal gas sphere", {}, 0.0};
  const unsigned digits = 60;
  auto scope = ScopedPrecision(digits);
  const auto s = solve_named("isothermal", digits, 30, "2.5");
  pointwise(r, s, "1.0", "-0.15882767", "1e-6", "isothermal");
  pointwise(r, s, "2.5", "-0.80634087", "5e-6", "isothermal");
  return r;
}

inline CriterionResult criterion5() {
  CriterionResult r{5, "examples with closed forms", {}, 0.0};
  {
    auto scope = ScopedPrecision(60);
    r.checks.push_back(at_most("ex5 max probe error, N=40, digits=60",
                               max_probe_error(solve_named("ex5", 60, 40)), R("1e-4")));
    r.checks.push_back(at_most("ex7 max probe error, N=35, digits=60",
                               max_probe_error(solve_named("ex7", 60, 35)), R("1e-9")));
    r.checks.push_back(at_most("ex6 max probe error, N=35, digits=60",
                               max_probe_error(solve_named("ex6", 60, 35)), R("1e-9")));
    r.checks.push_back(at_most("ex8 max probe error x<=10, N=45, digits=60",
                               max_probe_error(solve_named("ex8", 60, 45), 10.0), R("1e-2")));
    r.checks.push_back(at_most("ex9 max probe error x<=10, N=45, digits=60",
                               max_probe_error(solve_named("ex9", 60, 45), 10.0), R("1e-2")));
  }
  {
    auto scope = ScopedPrecision(100);
    r.checks.push_back(at_most("ex7 max probe error, N=35, digits=100",
                               max_probe_error(solve_named("ex7", 100, 35)), R("1e-18")));
  }
  return r;
}

/// Largest violation ratio of the defining identity sum_j W[i][j] phi_k(x_j) = phi_k^(n)(x_i).
inline R weight_identity_ratio(int n, unsigned digits) {
  auto scope = ScopedPrecision(digits);
  const auto kernel = Kernel<R>::gaussian(R(1));
  const auto nodes = make_nodes(n, R(1));
  const auto w = build_weights(kernel, nodes);
  const R bound_scale = w.condition_estimate * pow10<R>(2 - static_cast<int>(digits));
  R worst(0);
  for (int order = 1; order <= 2; ++order) {
    const auto& m = order == 1 ? w.w1 : w.w2;
    for (int k = 0; k < n; ++k) {
      R scale(0);
      for (int j = 0; j < n; ++j) {
        const R d = order == 1 ? kernel.d1(nodes[j], nodes[k]) : kernel.d2(nodes[j], nodes[k]);
        if (abs(d) > scale) scale = abs(d);
      }
      for (int i = 0; i < n; ++i) {
        R acc(0);
        for (int j = 0; j < n; ++j) acc += m(i, j) * kernel.eval(nodes[j], nodes[k]);
        const R target = order == 1 ? kernel.d1(nodes[i], nodes[k]) : kernel.d2(nodes[i], nodes[k]);
        const R ratio = abs(acc - target) / (bound_scale * scale);
        if (ratio > worst) worst = ratio;
      }
    }
  }
  return worst;
}

inline CriterionResult criterion6() {
  CriterionResult r{6, "property suite", {}, 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  const unsigned digits = 50;
  auto scope = ScopedPrecision(digits);

  for (int n : {10, 20, 30}) {
    r.checks.push_back(at_most("weight identity, N=" + std::to_string(n) + ", violation / bound",
                               weight_identity_ratio(n, digits), R(1)));
  }

  {
    const auto nodes = make_nodes(20, R(1));
    const auto w = build_weights(Kernel<R>::gaussian(R(1)), nodes);
    std::vector<R> f;
    for (const auto& x : nodes.points()) f.push_back(exp(x * x));
    const auto interp = fit_interpolant(w, f);
    R worst(0);
    R fmax(0);
    for (std::size_t j = 0; j < f.size(); ++j) {
      worst = std::max(worst, abs_diff(interp(nodes[j]), f[j]));
      fmax = std::max(fmax, R(abs(f[j])));
    }
    r.checks.push_back(at_most("interpolation reproduces nodal data, N=20",
                               worst, R(w.condition_estimate * pow10<R>(2 - static_cast<int>(digits)) * fmax)));
  }

  for (const char* name : {"standard:m=1.5", "isothermal", "sinh", "ex6", "ex7", "ex9"}) {
    const auto s = solve_named(name, digits);
    const auto& p = s.problem;
    const R a = p.transform == Transform::log_substitution ? R(log(p.y0)) : p.y0;
    const R b = p.transform == Transform::log_substitution ? R(p.dy0 / p.y0) : p.dy0;
    R slope(0);
    for (std::size_t j = 0; j < s.nodes().size(); ++j) slope += s.weights.w1(0, j) * s.nodal_values[j];
    r.checks.push_back(Check{std::string(name) + " f_1 == A", to_string(s.nodal_values[0], 3), "exact",
                             s.nodal_values[0] == a});
    r.checks.push_back(at_most(std::string(name) + " |discrete y'(0) - B|", abs_diff(slope, b), s.tolerance));
  }

  for (const char* name : {"ex5", "ex6", "ex7", "ex8", "ex9"}) {
    const auto p = make_problem<R>(name);
    const auto nodes = make_nodes(p.default_points, p.default_length);
    const auto w = build_weights(Kernel<R>::gaussian(R(1)), nodes);
    std::vector<R> f;
    for (const auto& x : nodes.points()) {
      const R y = p.reference(x);
      f.push_back(p.transform == Transform::log_substitution ? R(log(y)) : y);
    }
    const auto res = assemble_residual(p, w, f);
    R worst(0);
    for (std::size_t i = 1; i + 1 < res.size(); ++i) worst = std::max(worst, R(abs(res[i])));
    const R tol = NewtonOptions<R>::defaults().tol;
    r.checks.push_back(at_most(std::string(name) + " residual of exact samples (N=" +
                                   std::to_string(p.default_points) + "), limit 100x solve tolerance",
                               worst, R(100 * tol)));
  }

  for (int m : {0, 1, 5}) {
    const auto p = standard_equation(R(m));
    const R x_end = m == 0 ? R(sqrt(R(6))) : m == 1 ? R(acos(R(-1))) : R(5);
    const auto curve = rk_reference(p, x_end, R("1e-12"));
    R worst(0);
    for (const auto& pt : curve.points) worst = std::max(worst, abs_diff(pt.y, exact_standard<R>(m, pt.x)));
    r.checks.push_back(at_most("rk oracle vs closed form, m=" + std::to_string(m), worst, R("1e-10")));
  }

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.checks.push_back(at_most_seconds("runtime (s)", secs, 120.0));
  return r;
}

inline CriterionResult criterion7() {
  CriterionResult r{7, "convergence in N for ex7", {}, 0.0};
  const unsigned digits = 60;
  auto scope = ScopedPrecision(digits);
  std::vector<R> errors;
  for (int n : {10, 20, 30}) errors.push_back(max_nodal_error(solve_named("ex7", digits, n)));
  r.checks.push_back(Check{"max nodal error N=10 > N=20", to_string(errors[0], 3) + " > " + to_string(errors[1], 3),
                           "strict", errors[0] > errors[1]});
  r.checks.push_back(Check{"max nodal error N=20 > N=30", to_string(errors[1], 3) + " > " + to_string(errors[2], 3),
                           "strict", errors[1] > errors[2]});
  return r;
}

}  // namespace fixtures

inline constexpr int kCriterionCount = 7;

inline CriterionResult run_criterion(int id) {
  using Fn = CriterionResult (*)();
  static constexpr Fn table[] = {fixtures::criterion1, fixtures::criterion2, fixtures::criterion3,
                                 fixtures::criterion4, fixtures::criterion5, fixtures::criterion6,
                                 fixtures::criterion7};
  if (id < 1 || id > kCriterionCount) throw std::invalid_argument("criterion must be 1.." + std::to_string(kCriterionCount));
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[id - 1]();
  } catch (const std::exception& e) {
    r.id = id;
    r.title = "criterion raised an error";
    r.checks.push_back(Check{"exception", e.what(), "none", false});
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline void print_result(std::ostream& os, const CriterionResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
  os << (r.passed() ? "PASS" : "FAIL") << " criterion " << r.id << ": " << r.title << " (" << secs << " s)\n";
  for (const auto& c : r.checks) {
    os << "    " << (c.pass ? "ok  " : "MISS") << ' ' << c.label << ": " << c.measured << " (limit " << c.limit
       << ")\n";
  }
}

/// Runs the given criteria (all when empty) and reports; returns true when every one passed.
inline bool run_fixtures(const std::vector<int>& ids, std::ostream& os) {
  std::vector<int> selected = ids;
  if (selected.empty())
    for (int i = 1; i <= kCriterionCount; ++i) selected.push_back(i);
  bool all = true;
  for (int id : selected) {
    const auto r = run_criterion(id);
    print_result(os, r);
    all = all && r.passed();
  }
  return all;
}

}  // namespace emden_dq::cli
