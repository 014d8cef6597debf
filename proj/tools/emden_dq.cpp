#include "emden_dq/cli/commands.hpp"
#include "emden_dq/cli/fixtures.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace emden_dq::cli;

namespace {

void add_run_flags(CLI::App& app, RunConfig& flags, std::optional<std::string>& config_path) {
  app.add_option("--problem", flags.problem, "standard:m=<m>, isothermal, sinh, sin, ex5..ex9");
  app.add_option("--n", flags.n, "number of collocation points");
  app.add_option("--domain", flags.domain, "domain length L");
  app.add_option("--kernel", flags.kernel, "gaussian, mq, imq or iq");
  app.add_option("--c", flags.c, "kernel shape parameter");
  app.add_option("--digits", flags.digits, "working decimal digits (<= 16 uses native double)");
  app.add_option("--closure", flags.closure, "collocation or least-squares");
  app.add_option("--x0", flags.x0, "initial guess: constant or linear-decay");
  app.add_option("--format", flags.format, "csv or markdown");
  app.add_option("--out", flags.out, "output file (default stdout)");
  app.add_option("--config", config_path, "flat key = value config file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RBF differential quadrature solver for Lane-Emden initial value problems"};
  app.require_subcommand(0, 1);

  RunConfig flags;
  std::optional<std::string> config_path;
  bool fixtures = false;
  app.add_flag("--fixtures", fixtures, "run the acceptance criteria and report PASS/FAIL per criterion");

  auto* solve = app.add_subcommand("solve", "solve one problem and tabulate it at its probe points");
  add_run_flags(*solve, flags, config_path);

  auto* zeros = app.add_subcommand("zeros", "first zeros of the standard equation");
  add_run_flags(*zeros, flags, config_path);
  zeros->add_option("--m", flags.m_list, "comma-separated polytropic indices");

  auto* converge = app.add_subcommand("converge", "max nodal error against N");
  add_run_flags(*converge, flags, config_path);
  converge->add_option("--n-list", flags.n_list, "comma-separated node counts");

  auto* figure = app.add_subcommand("figure", "400 uniform samples of the solution for plotting");
  add_run_flags(*figure, flags, config_path);

  CLI11_PARSE(app, argc, argv);

  if (fixtures) return run_fixtures({}, std::cout) ? 0 : 1;

  return run_guarded(
      [&] {
        const RunConfig cfg = resolve_config(flags, config_path);
        if (solve->parsed()) return cmd_solve(cfg, std::cout);
        if (zeros->parsed()) return cmd_zeros(cfg, std::cout);
        if (converge->parsed()) return cmd_converge(cfg, std::cout);
        if (figure->parsed()) return cmd_figure(cfg, std::cout);
        std::cout << app.help();
        return static_cast<int>(kExitUsage);
      },
      std::cerr);
}
