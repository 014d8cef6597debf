#pragma once

#include "emden_dq/cli/config.hpp"
#include "emden_dq/cli/table.hpp"
#include "emden_dq/kernels.hpp"
#include "emden_dq/numerics/errors.hpp"
#include "emden_dq/numerics/precision.hpp"
#include "emden_dq/oracles/runge_kutta.hpp"
#include "emden_dq/problems/catalog.hpp"
#include "emden_dq/problems/solve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace emden_dq::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitDiverged = 2,
  kExitPrecision = 3,
  kExitUnknownProblem = 4,
  kExitIo = 5,
};

/// Digits at or below 16 select native doubles.
inline bool uses_native_double(unsigned digits) { return digits <= 16; }

inline PrecisionContext context_for(unsigned digits) {
  return uses_native_double(digits) ? PrecisionContext::native_double() : PrecisionContext::multiprecision(digits);
}

template <class Real>
Cell value_cell(const Real& v) {
  return Cell{to_string(v), to_string(v, 10)};
}

template <class Real>
Cell error_cell(const Real& v) {
  return Cell{to_string(v), to_string(v, 3)};
}

template <class Real>
SolveSettings<Real> settings_from(const RunConfig& cfg, const Problem<Real>& p) {
  auto s = SolveSettings<Real>::defaults_for(p);
  if (cfg.n) s.n_points = *cfg.n;
  if (cfg.domain) s.domain_length = from_string<Real>(*cfg.domain);
  const KernelFamily family = parse_kernel_family(cfg.kernel.value_or("gaussian"));
  s.kernel = Kernel<Real>(family, from_string<Real>(cfg.c.value_or("1")));
  if (cfg.closure) s.closure = parse_closure(*cfg.closure);
  if (cfg.x0) {
    s.guess = parse_initial_guess(*cfg.x0);
    if (s.guess == InitialGuess::supplied) {
      throw std::invalid_argument("--x0 supplied is only available through the library API");
    }
  }
  return s;
}

/// Tolerance handed to the Runge-Kutta oracle for reference columns.
template <class Real>
Real reference_tolerance() {
  const Real floor = pow10<Real>(6 - static_cast<int>(active_digits<Real>()));
  const Real tol = pow10<Real>(-13);
  return tol > floor ? tol : floor;
}

template <class Real>
struct ReferenceValues {
  std::vector<Real> y;
  ReferenceMethod method;
};

/// Closed form when the problem has one, otherwise the RK oracle. `xs` must be sorted.
template <class Real>
ReferenceValues<Real> reference_values(const Problem<Real>& p, const std::vector<Real>& xs) {
  ReferenceValues<Real> out{{}, ReferenceMethod::closed_form};
  if (p.reference) {
    for (const auto& x : xs) out.y.push_back(p.reference(x));
    return out;
  }
  out.method = ReferenceMethod::rk_adaptive;
  if (xs.empty()) return out;
  const Real x_end = xs.back() > 0 ? xs.back() : Real(1);
  auto curve = rk_reference(p, x_end, reference_tolerance<Real>(), std::optional<std::vector<Real>>(xs));
  std::size_t k = 0;
  for (const auto& x : xs) {
    while (curve.points[k].x != x) ++k;
    out.y.push_back(curve.points[k].y);
  }
  return out;
}

template <class Real>
void add_run_meta(Table& t, const Solution<Real>& s, const SolveSettings<Real>& settings, const PrecisionContext& ctx) {
  t.add_meta("problem", s.problem.name);
  t.add_meta("N", std::to_string(s.nodes().size()));
  t.add_meta("L", to_string(s.nodes().domain_length(), 20));
  t.add_meta("kernel", std::string(to_string(settings.kernel.family())));
  t.add_meta("c", to_string(settings.kernel.shape(), 20));
  t.add_meta("digits", std::to_string(ctx.decimal_digits));
  t.add_meta("closure", std::string(to_string(s.closure)));
  t.add_meta("x0", std::string(to_string(settings.guess)));
  t.add_meta("condition_estimate", to_string(s.condition_estimate, 6));
  t.add_meta("internal_digits", std::to_string(s.weights.internal_digits));
  t.add_meta("newton_iters", std::to_string(s.newton_iterations));
  t.add_meta("final_residual_norm", to_string(Real(s.final_residual_norm), 6));
  if (s.precision_warning) t.add_meta("warning", "condition estimate leaves fewer than 10 spare digits");
}

inline void emit(const RunConfig& cfg, const Table& t, std::ostream& os) {
  const OutputFormat format = cfg.effective_format();
  if (!cfg.out) {
    t.write(os, format);
    return;
  }
  std::ofstream file(*cfg.out, std::ios::binary);
  if (!file) throw IoError("cannot open output file: " + *cfg.out);
  t.write(file, format);
  if (!file) throw IoError("write failed: " + *cfg.out);
}

namespace detail {

template <class Real>
int solve_impl(const RunConfig& cfg, std::ostream& os) {
  const auto ctx = context_for(cfg.effective_digits());
  auto scope = ctx.activate();
  const auto problem = make_problem<Real>(cfg.problem.value_or("standard:m=1"));
  const auto settings = settings_from(cfg, problem);
  const auto sol = solve(problem, settings, ctx);
  const Real length = sol.nodes().domain_length();

  std::vector<std::string> labels;
  std::vector<Real> xs;
  int skipped = 0;
  for (const auto& s : problem.probe_points) {
    Real x = from_string<Real>(s);
    if (x > length) {
      ++skipped;
      continue;
    }
    labels.push_back(s);
    xs.push_back(std::move(x));
  }
  const auto ref = reference_values(problem, xs);

  Table t({"x", "y_rbfdq", "y_reference", "abs_error", "residual"});
  add_run_meta(t, sol, settings, ctx);
  t.add_meta("reference", std::string(to_string(ref.method)));
  if (skipped) t.add_meta("skipped_probe_points", std::to_string(skipped) + " beyond L");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    using std::abs;
    const Real y = sol.value_at(xs[i]);
    const Real err = abs(y - ref.y[i]);
    t.add_row({text_cell(labels[i]), value_cell(y), value_cell(ref.y[i]), error_cell(err),
               error_cell(sol.residual_at(xs[i]))});
  }
  emit(cfg, t, os);
  return kExitOk;
}

template <class Real>
int zeros_impl(const RunConfig& cfg, std::ostream& os) {
  using std::abs;
  const auto ctx = context_for(cfg.effective_digits());
  auto scope = ctx.activate();
  Table t({"m", "N", "L", "zero_rbfdq", "zero_reference", "abs_diff"});
  t.add_meta("digits", std::to_string(ctx.decimal_digits));
  t.add_meta("kernel", cfg.kernel.value_or("gaussian"));
  t.add_meta("c", cfg.c.value_or("1"));
  t.add_meta("reference", "rk-adaptive");
  bool any_failed = false;
  for (const auto& m_text : split_list(cfg.m_list.value_or("1.5,2,2.5,3,4"))) {
    const double m = parse_double(m_text);
    std::vector<Cell> row{text_cell(m_text)};
    try {
      if (m < 0 || m >= 5) throw UnsupportedM("m must lie in [0, 5) for a finite first zero");
      const auto problem = standard_problem<Real>(m);
      const auto settings = settings_from(cfg, problem);
      row.push_back(text_cell(std::to_string(settings.n_points)));
      row.push_back(value_cell(Real(settings.domain_length)));
      const auto sol = solve(problem, settings, ctx);
      const Real zero = first_zero(sol);
      const Real reference = first_zero_reference(Real(m), reference_tolerance<Real>());
      row.push_back(value_cell(zero));
      row.push_back(value_cell(reference));
      row.push_back(error_cell(Real(abs(zero - reference))));
    } catch (const Error& e) {
      any_failed = true;
      row.resize(1);
      row.push_back(text_cell("-"));
      row.push_back(text_cell("-"));
      std::string message = std::string("error: ") + e.what();
      std::replace(message.begin(), message.end(), ',', ';');
      row.push_back(text_cell(std::move(message)));
      row.push_back(text_cell("-"));
      row.push_back(text_cell("-"));
    }
    t.add_row(std::move(row));
  }
  emit(cfg, t, os);
  return any_failed ? kExitDiverged : kExitOk;
}

template <class Real>
int converge_impl(const RunConfig& cfg, std::ostream& os) {
  using std::abs;
  const auto ctx = context_for(cfg.effective_digits());
  auto scope = ctx.activate();
  const auto problem = make_problem<Real>(cfg.problem.value_or("ex7"));
  Table t({"N", "max_abs_error", "condition_estimate", "internal_digits", "newton_iters"});
  t.add_meta("problem", problem.name);
  t.add_meta("digits", std::to_string(ctx.decimal_digits));
  bool meta_done = false;
  for (const auto& n_text : split_list(cfg.n_list.value_or("10,20,30"))) {
    RunConfig run = cfg;
    run.n = parse_int<int>(n_text, "N");
    const auto settings = settings_from(run, problem);
    const auto sol = solve(problem, settings, ctx);
    const auto& pts = sol.nodes().points();
    const std::vector<Real> xs(pts.begin(), pts.end());
    const auto ref = reference_values(problem, xs);
    if (!meta_done) {
      t.add_meta("L", to_string(sol.nodes().domain_length(), 20));
      t.add_meta("reference", std::string(to_string(ref.method)));
      t.add_meta("kernel", std::string(to_string(settings.kernel.family())));
      t.add_meta("c", to_string(settings.kernel.shape(), 20));
      t.add_meta("closure", std::string(to_string(sol.closure)));
      meta_done = true;
    }
    const auto y = sol.y_values();
    Real worst(0);
    for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, Real(abs(y[i] - ref.y[i])));
    t.add_row({text_cell(n_text), error_cell(worst), error_cell(sol.condition_estimate),
               text_cell(std::to_string(sol.weights.internal_digits)),
               text_cell(std::to_string(sol.newton_iterations))});
  }
  emit(cfg, t, os);
  return kExitOk;
}

template <class Real>
int figure_impl(const RunConfig& cfg, std::ostream& os) {
  const auto ctx = context_for(cfg.effective_digits());
  auto scope = ctx.activate();
  const auto problem = make_problem<Real>(cfg.problem.value_or("standard:m=1.5"));
  const auto settings = settings_from(cfg, problem);
  const auto sol = solve(problem, settings, ctx);
  constexpr int samples = 400;
  std::vector<Real> xs;
  xs.reserve(samples);
  const Real length = sol.nodes().domain_length();
  for (int k = 0; k < samples; ++k) xs.push_back(length * k / (samples - 1));
  const auto ref = reference_values(problem, xs);
  Table t({"x", "y_rbfdq", "y_reference"});
  add_run_meta(t, sol, settings, ctx);
  t.add_meta("reference", std::string(to_string(ref.method)));
  for (std::size_t i = 0; i < xs.size(); ++i) {
    t.add_row({value_cell(xs[i]), value_cell(sol.value_at(xs[i])), value_cell(ref.y[i])});
  }
  emit(cfg, t, os);
  return kExitOk;
}

}  // namespace detail

/// Runs `body`, mapping library errors to exit codes and messages on `err`.
inline int run_guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const UnknownProblem& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnknownProblem;
  } catch (const PrecisionInsufficient& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const SingularMatrix& e) {
    err << "error: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const NoZeroInDomain& e) {
    err << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

/// Table at the probe points of one problem.
inline int cmd_solve(const RunConfig& cfg, std::ostream& os) {
  return uses_native_double(cfg.effective_digits()) ? detail::solve_impl<double>(cfg, os)
                                                    : detail::solve_impl<mp_real>(cfg, os);
}

/// First zeros of the standard equation for each m.
inline int cmd_zeros(const RunConfig& cfg, std::ostream& os) {
  return uses_native_double(cfg.effective_digits()) ? detail::zeros_impl<double>(cfg, os)
                                                    : detail::zeros_impl<mp_real>(cfg, os);
}

/// Max nodal error against N.
inline int cmd_converge(const RunConfig& cfg, std::ostream& os) {
  return uses_native_double(cfg.effective_digits()) ? detail::converge_impl<double>(cfg, os)
                                                    : detail::converge_impl<mp_real>(cfg, os);
}

/// 400 uniform samples on [0, L] for plotting.
inline int cmd_figure(const RunConfig& cfg, std::ostream& os) {
  return uses_native_double(cfg.effective_digits()) ? detail::figure_impl<double>(cfg, os)
                                                    : detail::figure_impl<mp_real>(cfg, os);
}

}  // namespace emden_dq::cli
