#include "scipi_cli/cli.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "scipi/error.hpp"

namespace scipi::cli {

namespace {

void add_common(CLI::App& cmd, CommonOptions& c) {
  cmd.add_option("--seed", c.seed, "Base seed; trial i uses seed + i");
  cmd.add_option("--gen", c.gen, "Synthetic dataset, e.g. spectrum:d=50,l1=1,l2=0.9");
  cmd.add_option("--data", c.data, "Input matrix (.mtx Matrix Market, otherwise CSV)");
  cmd.add_flag("--header", c.header, "Skip the first CSV line");
  cmd.add_option("--out", c.out, "Trace JSON path ('-' for stdout)");
  cmd.add_option("--csv", c.csv, "Flattened per-iteration CSV export ('-' for stdout)");
  cmd.add_flag("--timing", c.timing, "Record wall time (makes traces nondeterministic)");
  cmd.add_option("--repeats", c.repeats, "Independent seeded trials")->check(CLI::PositiveNumber);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scale invariant power iteration: solvers, experiments and checks", "scipi"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Maximize a built-in problem on the unit sphere");
  add_common(*solve_cmd, solve.common);
  solve_cmd->add_option("--problem", solve.problem, "quadratic | lp-pca | mixture | ica | klnmf-sub")
      ->required();
  solve_cmd->add_option("--solver", solve.solver, "sci-pi | power");
  solve_cmd->add_option("-p,--power", solve.p, "Exponent for lp-pca");
  solve_cmd->add_option("--shift", solve.shift, "Adds shift * ||x||^2 to the objective");
  solve_cmd->add_option("--max-iter", solve.max_iter)->check(CLI::PositiveNumber);
  solve_cmd->add_option("--x-tol", solve.x_tol);
  solve_cmd->add_option("--f-ref", solve.f_ref, "Stop once |f - f_ref| <= f_tol |f_ref|");
  solve_cmd->add_option("--f-tol", solve.f_tol);
  solve_cmd->add_flag("--rate", solve.rate, "Attach predicted and empirical rates");
  solve_cmd->add_option("--column", solve.column, "Column of V for klnmf-sub");

  RateOptions rate;
  auto* rate_cmd = app.add_subcommand("rate", "Predicted versus empirical convergence rate");
  add_common(*rate_cmd, rate.common);
  rate_cmd
      ->add_option("--problem", rate.problem,
                   "quadratic | lp-pca | mixture | ica | klnmf-sub | block-separable | "
                   "block-bilinear | block-product | partial-coupled")
      ->required();
  rate_cmd->add_option("-p,--power", rate.p);
  rate_cmd->add_option("--shift", rate.shift);
  rate_cmd->add_option("--max-iter", rate.max_iter)->check(CLI::PositiveNumber);
  rate_cmd->add_option("--x-tol", rate.x_tol);
  rate_cmd->add_option("--nu", rate.nu, "Coupling strength for partial-coupled");
  rate_cmd->add_option("--mu", rate.mu, "Smallest y curvature for partial-coupled");
  rate_cmd->add_option("--lipschitz", rate.lipschitz, "Largest y curvature for partial-coupled");

  NmfCommandOptions nmf;
  auto* nmf_cmd = app.add_subcommand("nmf", "Compare KL-NMF updates");
  add_common(*nmf_cmd, nmf.common);
  nmf_cmd->add_option("--rank", nmf.rank);
  nmf_cmd->add_option("--methods", nmf.methods);
  nmf_cmd->add_option("--max-iter", nmf.max_iter)->check(CLI::PositiveNumber);
  nmf_cmd->add_option("--sigma", nmf.sigma);

  GmmCommandOptions gmm;
  auto* gmm_cmd = app.add_subcommand("gmm", "Compare EM and SCI-PI for Gaussian mixtures");
  add_common(*gmm_cmd, gmm.common);
  gmm_cmd->add_option("--components", gmm.components);
  gmm_cmd->add_option("--methods", gmm.methods);
  gmm_cmd->add_option("--max-iter", gmm.max_iter)->check(CLI::PositiveNumber);
  gmm_cmd->add_option("--x-tol", gmm.x_tol);
  gmm_cmd->add_option("--alpha", gmm.alpha, "Shift of the weight update");
  gmm_cmd->add_option("--cov-floor", gmm.cov_floor)->check(CLI::PositiveNumber);

  IcaCommandOptions ica;
  auto* ica_cmd = app.add_subcommand("ica", "Compare FastICA and SCI-PI for kurtosis ICA");
  add_common(*ica_cmd, ica.common);
  ica_cmd->add_option("--methods", ica.methods);
  ica_cmd->add_option("--max-iter", ica.max_iter)->check(CLI::PositiveNumber);
  ica_cmd->add_option("--x-tol", ica.x_tol);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check invariance identities on built-in problems");
  verify_cmd->add_option("--seed", verify.seed, "Seed for the built-in problems and sample points");
  verify_cmd->add_flag("--json", verify.json, "Machine-readable report");
  verify_cmd->add_option("--out", verify.out, "Report path");
  verify_cmd->add_option("--perturb-grad", verify.perturb_grad,
                         "Add a constant to every gradient (fault injection)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kConverged;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kConverged;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return kInputError;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(solve, out, err);
    if (rate_cmd->parsed()) return cmd_rate(rate, out, err);
    if (nmf_cmd->parsed()) return cmd_nmf(nmf, out, err);
    if (gmm_cmd->parsed()) return cmd_gmm(gmm, out, err);
    if (ica_cmd->parsed()) return cmd_ica(ica, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace scipi::cli
