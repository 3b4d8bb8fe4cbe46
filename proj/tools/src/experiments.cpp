#include <algorithm>
#include <cmath>
#include <ostream>

#include "common.hpp"
#include "scipi/error.hpp"
#include "scipi/gmm.hpp"
#include "scipi/nmf.hpp"
#include "scipi/random.hpp"

namespace scipi::cli {

namespace {

/// Records of every method run on one seed, plus their comparison.
struct SeedOutcome {
  std::vector<TrialOutput> runs;
  Json comparison;
};

std::vector<std::string> checked_methods(const std::string& list,
                                         const std::vector<std::string>& known) {
  const auto methods = split_list(list);
  if (methods.empty()) throw InputError("--methods is empty");
  for (const auto& m : methods) {
    if (std::find(known.begin(), known.end(), m) == known.end()) {
      std::string names;
      for (const auto& k : known) names += (names.empty() ? "" : ", ") + k;
      throw InputError("unknown method '" + m + "' (expected " + names + ")");
    }
  }
  return methods;
}

void require_source(const CommonOptions& c) {
  if (c.gen.empty() == c.data.empty()) {
    throw InputError("give exactly one data source: --gen SPEC or --data PATH");
  }
}

std::string source_of(const CommonOptions& c, std::uint64_t seed) {
  if (!c.data.empty()) return "file:" + c.data;
  return DatasetSpec::parse(c.gen, seed).to_string() + ";seed=" + std::to_string(seed);
}

/// Runs one seed per trial through the thread pool and flattens the per-method
/// records in trial order; comparisons go to the document's "comparison" list.
int run_experiment(const CommonOptions& common, const std::string& command,
                   const std::function<SeedOutcome(std::uint64_t)>& per_seed, std::ostream& out,
                   std::ostream& err) {
  std::vector<SeedOutcome> outcomes(static_cast<std::size_t>(std::max(common.repeats, 0)));
  run_trials(common.repeats, common.seed, [&](std::uint64_t seed) {
    outcomes[seed - common.seed] = per_seed(seed);
    return TrialOutput{};
  });
  std::vector<TrialOutput> flat;
  Json extra;
  extra["comparison"] = Json::array();
  for (auto& o : outcomes) {
    for (auto& r : o.runs) flat.push_back(std::move(r));
    extra["comparison"].push_back(o.comparison);
  }
  return emit(common, command, flat, extra, out, err);
}

Json trace_rows(const std::vector<double>& values, const char* key) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < values.size(); ++k) {
    Json row;
    row["k"] = k;
    row[key] = values[k];
    rows.push_back(row);
  }
  return rows;
}

Json final_values(const std::vector<std::string>& methods, const std::vector<double>& finals) {
  Json j;
  for (std::size_t i = 0; i < methods.size(); ++i) j[methods[i]] = finals[i];
  return j;
}

/// f_sci / f_baseline for every baseline that ran next to sci-pi.
Json ratios(const std::vector<std::string>& methods, const std::vector<double>& finals) {
  Json j = Json::object();
  const auto sci = std::find(methods.begin(), methods.end(), "sci-pi");
  if (sci == methods.end()) return j;
  const double f_sci = finals[static_cast<std::size_t>(sci - methods.begin())];
  for (std::size_t i = 0; i < methods.size(); ++i) {
    if (methods[i] != "sci-pi") j["sci-pi/" + methods[i]] = f_sci / finals[i];
  }
  return j;
}

// ---------------------------------------------------------------- nmf

SeedOutcome nmf_seed(const NmfCommandOptions& opts, const std::vector<std::string>& methods,
                     std::uint64_t seed) {
  const CommonOptions& c = opts.common;
  Matrix V;
  int rank = opts.rank;
  if (!c.data.empty()) {
    V = load_data(c);
    if (rank <= 0) throw InputError("--rank is required with --data");
  } else {
    const auto spec = dataset_spec(c, seed, {"lowrank"});
    const auto k = spec.get_index("k", 4);
    V = gen_lowrank_nonneg(seed, spec.get_index("n", 30), spec.get_index("m", 20), k).V;
    if (rank <= 0) rank = static_cast<int>(k);
  }
  const NmfInit init = nmf_initialize(V, rank, seed);
  NmfOptions options;
  options.max_iter = opts.max_iter;
  options.sigma = opts.sigma;

  Json problem;
  problem["name"] = "klnmf";
  problem["rows"] = V.rows();
  problem["cols"] = V.cols();
  problem["rank"] = rank;
  problem["source"] = source_of(c, seed);

  SeedOutcome outcome;
  std::vector<double> finals;
  for (const auto& name : methods) {
    const NmfMethod method = parse_nmf_method(name);
    NMFModel model;
    const double seconds = timed([&] { model = nmf_solve(V, rank, method, init, options); });
    const std::string id = "nmf/" + name + "/seed=" + std::to_string(seed);
    TrialOutput t;
    t.record["run_id"] = id;
    t.record["problem"] = problem;
    t.record["solver"] = name;
    Json config;
    config["max_iter"] = opts.max_iter;
    config["sigma"] = opts.sigma;
    config["seed"] = seed;
    t.record["config"] = config;
    t.record["iterations"] = trace_rows(model.kl_trace, "kl");
    Json summary;
    summary["iterations"] = model.iterations;
    summary["final_objective"] = model.kl_trace.back();
    summary["stationarity"] = nmf_stationarity(V, model.W, model.H);
    summary["pgd_step"] = model.pgd_step;
    summary["floor_hits"] = model.floor_hits;
    t.record["summary"] = summary;
    add_wall_time(t.record, seconds, c.timing);
    t.summary = id + ": KL=" + format_g(model.kl_trace.back(), 10) + " after " +
                std::to_string(model.iterations) + " iterations, stationarity=" +
                format_g(summary["stationarity"].get<double>(), 3);
    finals.push_back(model.kl_trace.back());
    outcome.runs.push_back(std::move(t));
  }
  outcome.comparison["seed"] = seed;
  outcome.comparison["final_objective"] = final_values(methods, finals);
  outcome.comparison["ratio"] = ratios(methods, finals);
  return outcome;
}

// ---------------------------------------------------------------- gmm

Json gmm_params_json(const GmmParameters& p) {
  Json j;
  j["weights"] = vector_json(p.weights);
  Json means = Json::array();
  for (const auto& m : p.means) means.push_back(vector_json(m));
  j["means"] = means;
  return j;
}

SeedOutcome gmm_seed(const GmmCommandOptions& opts, const std::vector<std::string>& methods,
                     std::uint64_t seed) {
  const CommonOptions& c = opts.common;
  Matrix data;
  int K = opts.components;
  if (!c.data.empty()) {
    data = load_data(c);
    if (K <= 0) throw InputError("--components is required with --data");
  } else {
    const auto spec = dataset_spec(c, seed, {"gmm"});
    const auto k = spec.get_index("k", 2);
    data = gen_gmm_data(seed, spec.get_index("n", 100), k, spec.get_index("dim", 1),
                        spec.get("sep", 6.0))
               .data;
    if (K <= 0) K = static_cast<int>(k);
  }
  const GmmParameters init = gmm_initialize(data, K, seed, opts.cov_floor);
  SolverConfig config;
  config.max_iter = opts.max_iter;
  config.x_tol = opts.x_tol;
  config.shift = opts.alpha;
  config.seed = seed;

  Json problem;
  problem["name"] = "gmm";
  problem["samples"] = data.rows();
  problem["dimension"] = data.cols();
  problem["components"] = K;
  problem["source"] = source_of(c, seed);

  SeedOutcome outcome;
  std::vector<double> finals;
  for (const auto& name : methods) {
    GMMModel model;
    const double seconds = timed([&] {
      model = name == "em" ? em_gmm(data, K, init, config, opts.cov_floor)
                           : gmm_sci_pi(data, K, init, config, opts.alpha, opts.cov_floor);
    });
    const std::string id = "gmm/" + name + "/seed=" + std::to_string(seed);
    TrialOutput t;
    t.record["run_id"] = id;
    t.record["problem"] = problem;
    t.record["solver"] = name;
    Json cfg;
    cfg["max_iter"] = opts.max_iter;
    cfg["x_tol"] = opts.x_tol;
    cfg["alpha"] = name == "em" ? Json(nullptr) : Json(opts.alpha);
    cfg["cov_floor"] = opts.cov_floor;
    cfg["seed"] = seed;
    t.record["config"] = cfg;
    t.record["iterations"] = trace_rows(model.log_likelihood_trace, "log_likelihood");
    Json summary;
    summary["converged"] = model.converged;
    summary["iterations"] = model.iterations;
    summary["stop_reason"] = to_string(model.stop_reason);
    summary["final_objective"] = model.log_likelihood_trace.back();
    summary["model"] = gmm_params_json(model.params);
    t.record["summary"] = summary;
    add_wall_time(t.record, seconds, c.timing);
    t.exit_code = exit_code_for(model.stop_reason);
    t.summary = id + ": " + to_string(model.stop_reason) + " after " +
                std::to_string(model.iterations) + " iterations, log-likelihood=" +
                format_g(model.log_likelihood_trace.back(), 12);
    finals.push_back(model.log_likelihood_trace.back());
    outcome.runs.push_back(std::move(t));
  }
  outcome.comparison["seed"] = seed;
  outcome.comparison["final_objective"] = final_values(methods, finals);
  outcome.comparison["ratio"] = ratios(methods, finals);
  return outcome;
}

// ---------------------------------------------------------------- ica

SeedOutcome ica_seed(const IcaCommandOptions& opts, const std::vector<std::string>& methods,
                     std::uint64_t seed) {
  const CommonOptions& c = opts.common;
  Matrix W;
  std::optional<Matrix> directions;
  if (!c.data.empty()) {
    W = whiten(load_data(c));
  } else {
    const auto spec = dataset_spec(c, seed, {"ica"});
    IcaData data = gen_ica_data(seed, spec.get_index("n", 2000), spec.get_index("d", 2, 2));
    W = std::move(data.W);
    directions = std::move(data.directions);
  }
  Rng init = Rng::derive(seed, "start");
  const Vector x0 = init.unit_sphere(W.cols());
  SolverConfig config;
  config.max_iter = opts.max_iter;
  config.x_tol = opts.x_tol;
  config.seed = seed;

  Json problem;
  problem["name"] = "kurtosis-ica";
  problem["samples"] = W.rows();
  problem["dimension"] = W.cols();
  problem["source"] = source_of(c, seed);

  SeedOutcome outcome;
  std::vector<double> finals;
  Json cosines = Json::object();
  for (const auto& name : methods) {
    SolveResult result;
    const double seconds = timed([&] {
      result = name == "fastica" ? fast_ica(W, x0, config) : ica_sci_pi(W, x0, config);
    });
    const std::string id = "ica/" + name + "/seed=" + std::to_string(seed);
    TrialOutput t;
    t.record = solve_record(id, problem, name, config, result);
    add_wall_time(t.record, seconds, c.timing);
    t.exit_code = exit_code_for(result.stop_reason);
    t.summary = id + ": " + to_string(result.stop_reason) + " after " +
                std::to_string(result.iterations) + " iterations";
    if (directions) {
      const double cosine = (directions->transpose() * result.final_x).cwiseAbs().maxCoeff();
      t.record["summary"]["abs_cosine"] = cosine;
      cosines[name] = cosine;
      t.summary += ", |cosine|=" + format_g(cosine, 6);
    }
    finals.push_back(result.objective_trace.back());
    outcome.runs.push_back(std::move(t));
  }
  outcome.comparison["seed"] = seed;
  outcome.comparison["final_objective"] = final_values(methods, finals);
  outcome.comparison["ratio"] = ratios(methods, finals);
  if (directions) outcome.comparison["abs_cosine"] = cosines;
  return outcome;
}

}  // namespace

int cmd_nmf(const NmfCommandOptions& opts, std::ostream& out, std::ostream& err) {
  require_source(opts.common);
  const auto methods = checked_methods(opts.methods, {"mu", "pgd", "sci-pi"});
  return run_experiment(
      opts.common, "nmf", [&](std::uint64_t seed) { return nmf_seed(opts, methods, seed); }, out,
      err);
}

int cmd_gmm(const GmmCommandOptions& opts, std::ostream& out, std::ostream& err) {
  require_source(opts.common);
  const auto methods = checked_methods(opts.methods, {"em", "sci-pi"});
  return run_experiment(
      opts.common, "gmm", [&](std::uint64_t seed) { return gmm_seed(opts, methods, seed); }, out,
      err);
}

int cmd_ica(const IcaCommandOptions& opts, std::ostream& out, std::ostream& err) {
  require_source(opts.common);
  const auto methods = checked_methods(opts.methods, {"fastica", "sci-pi"});
  return run_experiment(
      opts.common, "ica", [&](std::uint64_t seed) { return ica_seed(opts, methods, seed); }, out,
      err);
}

}  // namespace scipi::cli
