#include <cmath>
#include <optional>

#include "common.hpp"
#include "scipi/error.hpp"
#include "scipi/problems.hpp"
#include "scipi/random.hpp"

namespace scipi::cli {

namespace {

struct BuiltProblem {
  std::optional<ScaleInvariantProblem> problem;
  Json descriptor;
  /// Matrix of the quadratic, for the power-iteration baseline.
  std::optional<Matrix> quadratic;
};

Json describe(const ScaleInvariantProblem& p, const std::string& source) {
  Json j;
  j["name"] = p.name();
  j["kind"] = p.kind().to_string();
  j["dimension"] = p.dimension();
  j["source"] = source;
  return j;
}

std::string source_of(const CommonOptions& c, std::uint64_t seed) {
  if (!c.data.empty()) return "file:" + c.data;
  return DatasetSpec::parse(c.gen, seed).to_string() + ";seed=" + std::to_string(seed);
}

void require_source(const CommonOptions& c) {
  if (c.gen.empty() == c.data.empty()) {
    throw InputError("give exactly one data source: --gen SPEC or --data PATH");
  }
}

BuiltProblem build_problem(const std::string& name, const CommonOptions& c, std::uint64_t seed,
                           double p, int column) {
  require_source(c);
  BuiltProblem out;
  if (name == "quadratic") {
    Matrix A;
    if (!c.data.empty()) {
      A = load_data(c);
    } else {
      const auto spec = dataset_spec(c, seed, {"spectrum"});
      const auto d = spec.get_index("d", 10);
      A = gen_spectrum_matrix(seed, d, leading_spectrum(d, spec.get("l1", 1.0), spec.get("l2", 0.9)));
    }
    out.problem = make_quadratic(A);
    out.quadratic = A;
  } else if (name == "lp-pca") {
    Matrix X;
    if (!c.data.empty()) {
      X = load_data(c);
    } else {
      const auto spec = dataset_spec(c, seed, {"gaussian", "design"});
      const auto n = spec.get_index("n", 100);
      const auto d = spec.get_index("d", 5);
      X = spec.generator == "design" ? gen_mixture_design(seed, n, d)
                                     : Rng(seed).normal_matrix(n, d);
    }
    out.problem = make_lp_pca(X, p);
  } else if (name == "mixture") {
    Matrix L;
    if (!c.data.empty()) {
      L = load_data(c);
    } else {
      const auto spec = dataset_spec(c, seed, {"design"});
      L = gen_mixture_design(seed, spec.get_index("n", 200), spec.get_index("d", 10));
    }
    out.problem = make_mixture(L);
  } else if (name == "ica") {
    Matrix W;
    if (!c.data.empty()) {
      W = whiten(load_data(c));
    } else {
      const auto spec = dataset_spec(c, seed, {"ica"});
      W = gen_ica_data(seed, spec.get_index("n", 2000), spec.get_index("d", 2)).W;
    }
    out.problem = make_kurtosis_ica(W);
  } else if (name == "klnmf-sub") {
    Matrix W;
    Vector v;
    if (!c.data.empty()) {
      const Matrix M = load_data(c);
      if (M.cols() < 2) throw InputError("klnmf-sub data needs columns [W | v]");
      W = M.leftCols(M.cols() - 1);
      v = M.col(M.cols() - 1);
    } else {
      const auto spec = dataset_spec(c, seed, {"lowrank"});
      const auto data = gen_lowrank_nonneg(seed, spec.get_index("n", 30), spec.get_index("m", 20),
                                           spec.get_index("k", 4));
      if (column < 0 || column >= data.V.cols()) throw InputError("--column out of range");
      W = data.W;
      v = data.V.col(column);
    }
    out.problem = make_klnmf_subproblem(W, v).problem;
  } else {
    throw InputError("unknown problem '" + name +
                     "' (expected quadratic, lp-pca, mixture, ica or klnmf-sub)");
  }
  out.descriptor = describe(*out.problem, source_of(c, seed));
  return out;
}

Vector initial_point(std::uint64_t seed, Eigen::Index d) {
  Rng init = Rng::derive(seed, "start");
  return init.unit_sphere(d);
}

std::string solve_summary(const std::string& id, const SolveResult& r, double seconds) {
  return id + ": " + to_string(r.stop_reason) + " after " + std::to_string(r.iterations) +
         " iterations, f=" + format_g(r.objective_trace.back(), 12) + ", " +
         format_g(seconds, 3) + " s";
}

std::vector<double> alignment_errors(const std::vector<Vector>& iterates, const Vector& ref) {
  std::vector<double> e;
  e.reserve(iterates.size());
  for (const auto& x : iterates) e.push_back(alignment_error(x, ref));
  return e;
}

std::optional<double> try_empirical(const std::vector<double>& errors) {
  try {
    return empirical_rate_from_errors(errors);
  } catch (const InsufficientDataError&) {
    return std::nullopt;
  }
}

}  // namespace

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.problem.empty()) throw InputError("--problem is required");
  if (opts.solver != "sci-pi" && opts.solver != "power") {
    throw InputError("unknown solver '" + opts.solver + "' (expected sci-pi or power)");
  }
  auto trial = [&](std::uint64_t seed) {
    BuiltProblem built = build_problem(opts.problem, opts.common, seed, opts.p, opts.column);
    if (opts.solver == "power" && !built.quadratic) {
      throw InputError("the power solver only applies to --problem quadratic");
    }
    SolverConfig config;
    config.max_iter = opts.max_iter;
    config.x_tol = opts.x_tol;
    config.f_ref = opts.f_ref;
    config.f_tol = opts.f_tol;
    config.shift = opts.shift;
    config.seed = seed;
    if (opts.rate) config.iterate_cap = std::max<Eigen::Index>(config.iterate_cap, built.problem->dimension());
    const Vector x0 = initial_point(seed, built.problem->dimension());

    SolveResult result;
    const double seconds = timed([&] {
      result = opts.solver == "power" ? power_iteration(*built.quadratic, x0, config)
                                      : sci_pi(*built.problem, x0, config);
    });
    const std::string id = "solve/" + opts.problem + "/" + opts.solver + "/seed=" + std::to_string(seed);
    TrialOutput t;
    t.record = solve_record(id, built.descriptor, opts.solver, config, result);
    add_wall_time(t.record, seconds, opts.common.timing);
    t.exit_code = exit_code_for(result.stop_reason);
    t.summary = solve_summary(id, result, seconds);

    if (opts.rate && result.converged) {
      const ScaleInvariantProblem shifted = apply_shift(*built.problem, opts.shift);
      RateReport report = predicted_rate(shifted, result.final_x);
      report.rho_empirical = try_empirical(alignment_errors(result.iterate_trace, result.final_x));
      t.record["summary"]["rate"] = rate_json(report);
      t.summary += ", rho_pred=" + format_g(report.rho_predicted, 6);
      if (report.rho_empirical) t.summary += ", rho_hat=" + format_g(*report.rho_empirical, 6);
    }
    return t;
  };
  const auto trials = run_trials(opts.common.repeats, opts.common.seed, trial);
  return emit(opts.common, "solve", trials, Json(), out, err);
}

namespace {

TrialOutput rate_single(const RateOptions& opts, std::uint64_t seed, std::ostream& err) {
  BuiltProblem built = build_problem(opts.problem, opts.common, seed, opts.p, 0);
  const ScaleInvariantProblem shifted = apply_shift(*built.problem, opts.shift);
  SolverConfig config;
  config.max_iter = opts.max_iter;
  config.x_tol = opts.x_tol;
  config.seed = seed;
  config.iterate_cap = std::max<Eigen::Index>(512, shifted.dimension());
  const SolveResult result = sci_pi(shifted, initial_point(seed, shifted.dimension()), config);

  const std::string id = "rate/" + opts.problem + "/seed=" + std::to_string(seed);
  TrialOutput t;
  config.shift = opts.shift;
  t.record = solve_record(id, built.descriptor, "sci-pi", config, result);
  t.exit_code = exit_code_for(result.stop_reason);
  t.summary = id + ": ";
  if (!result.converged) {
    err << "warning: " << id << " did not converge; no rate computed\n";
    t.summary += "not converged";
    return t;
  }
  RateReport report = predicted_rate(shifted, result.final_x);
  report.rho_empirical = try_empirical(alignment_errors(result.iterate_trace, result.final_x));
  t.record["summary"]["rate"] = rate_json(report);
  if (!report.condition_ok) {
    err << "warning: " << id << ": lambda* <= lambda_bar_2, rate not applicable\n";
    t.summary += "rate not applicable (lambda*=" + format_g(report.lambda_star) +
                 ", lambda_bar_2=" + format_g(report.lambda_bar_2) + ")";
    return t;
  }
  t.summary += "rho_pred=" + format_g(report.rho_predicted) + ", rho_hat=" +
               (report.rho_empirical ? format_g(*report.rho_empirical) : std::string("n/a"));
  if (report.rho_empirical) {
    t.summary += ", ratio=" + format_g(*report.rho_empirical / report.rho_predicted, 4);
  }
  return t;
}

Json block_summary_record(const std::string& id, const Json& problem, const std::string& solver,
                          const SolverConfig& config, const SolveResult& result,
                          const BlockRateReport& report) {
  Json rec = solve_record(id, problem, solver, config, result);
  rec["summary"]["rate"] = block_rate_json(report);
  return rec;
}

TrialOutput rate_block(const RateOptions& opts, std::uint64_t seed, std::ostream& err) {
  const CommonOptions& c = opts.common;
  require_source(c);
  if (!c.data.empty()) throw InputError("block and partial rate studies use --gen spectrum:...");
  const auto spec = dataset_spec(c, seed, {"spectrum"});
  const auto d = spec.get_index("d", 10);
  const double l1 = spec.get("l1", 1.0);
  const double l2 = spec.get("l2", 0.9);
  const Matrix A = gen_spectrum_matrix(seed, d, leading_spectrum(d, l1, l2));
  const Matrix B = gen_spectrum_matrix(seed + 1, d, leading_spectrum(d, l1, spec.get("l2b", l2)));

  Json problem;
  problem["name"] = opts.problem;
  problem["dimension"] = d;
  problem["source"] = source_of(c, seed);

  SolverConfig config;
  config.max_iter = opts.max_iter;
  config.x_tol = opts.x_tol;
  config.shift = opts.shift;
  config.seed = seed;
  config.iterate_cap = std::max<Eigen::Index>(512, d);
  Rng init = Rng::derive(seed, "start");
  const Vector x0 = init.unit_sphere(d);

  const std::string id = "rate/" + opts.problem + "/seed=" + std::to_string(seed);
  SolveResult result;
  BlockRateReport report;
  std::vector<double> errors;

  if (opts.problem == "partial-coupled") {
    const auto m = spec.get_index("m", 3);
    Vector curvature(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      curvature[j] = m == 1 ? opts.mu
                            : opts.mu + (opts.lipschitz - opts.mu) * static_cast<double>(j) /
                                            static_cast<double>(m - 1);
    }
    std::vector<Matrix> couplings;
    for (Eigen::Index j = 0; j < m; ++j) {
      couplings.push_back(opts.nu * gen_spectrum_matrix(seed + 2 + static_cast<std::uint64_t>(j), d,
                                                        leading_spectrum(d, 1.0, 0.5)));
    }
    const PartialProblem partial =
        make_coupled_quadratic_partial(A, curvature, Vector::Zero(m), couplings);
    result = partial_sci_pi(partial, x0, init.normal_vector(m), config);
    if (result.converged) {
      report = predicted_partial_rate(partial, result.final_x, *result.final_y);
      for (std::size_t k = 0; k < result.iterate_trace.size(); ++k) {
        errors.push_back(alignment_error(result.iterate_trace[k], result.final_x) +
                         (result.iterate_trace_y[k] - *result.final_y).squaredNorm());
      }
    }
  } else {
    BlockProblem block = [&] {
      if (opts.problem == "block-separable") return make_separable_block(A, B);
      if (opts.problem == "block-bilinear") return make_bilinear_block(A);
      if (opts.problem == "block-product") return make_product_block(A, B);
      throw InputError("unknown problem '" + opts.problem + "'");
    }();
    Vector y0 = init.unit_sphere(d);
    // Jacobi steps on x^T C y flip the sign of x every iteration unless y0 agrees with C^T x0.
    if (opts.problem == "block-bilinear") y0 = (A.transpose() * x0).normalized();
    result = block_sci_pi(block, x0, y0, config);
    if (result.converged) {
      report = predicted_block_rate(block, result.final_x, *result.final_y);
      for (std::size_t k = 0; k < result.iterate_trace.size(); ++k) {
        errors.push_back(alignment_error(result.iterate_trace[k], result.final_x) +
                         alignment_error(result.iterate_trace_y[k], *result.final_y));
      }
    }
  }

  TrialOutput t;
  t.exit_code = exit_code_for(result.stop_reason);
  t.summary = id + ": ";
  if (!result.converged) {
    t.record = solve_record(id, problem, "sci-pi", config, result);
    err << "warning: " << id << " did not converge; no rate computed\n";
    t.summary += "not converged";
    return t;
  }
  report.rho_empirical = try_empirical(errors);
  t.record = block_summary_record(id, problem, "sci-pi", config, result, report);
  if (!report.coupling_condition_ok) {
    err << "warning: " << id << ": coupling condition fails, predicted rate is not a contraction bound\n";
  }
  t.summary += "rho_pred=" + format_g(report.rho) + ", rho_hat=" +
               (report.rho_empirical ? format_g(*report.rho_empirical) : std::string("n/a"));
  return t;
}

}  // namespace

int cmd_rate(const RateOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.problem.empty()) throw InputError("--problem is required");
  const bool two_block = opts.problem.rfind("block-", 0) == 0 || opts.problem == "partial-coupled";
  auto trial = [&](std::uint64_t seed) {
    return two_block ? rate_block(opts, seed, err) : rate_single(opts, seed, err);
  };
  const auto trials = run_trials(opts.common.repeats, opts.common.seed, trial);
  return emit(opts.common, "rate", trials, Json(), out, err);
}

}  // namespace scipi::cli
