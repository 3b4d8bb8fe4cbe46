#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "common.hpp"
#include "scipi/error.hpp"
#include "scipi/finite_diff.hpp"
#include "scipi/problems.hpp"
#include "scipi/random.hpp"

namespace scipi::cli {

namespace {

constexpr int kSamplePoints = 20;

struct Check {
  std::string problem;
  std::string name;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string note;
};

class Report {
 public:
  void add(const std::string& problem, const std::string& name, double residual,
           double threshold) {
    checks_.push_back({problem, name, residual, threshold, std::isfinite(residual) && residual <= threshold, {}});
  }
  void fail(const std::string& problem, const std::string& name, const std::string& note) {
    checks_.push_back({problem, name, std::nan(""), 0.0, false, note});
  }
  /// Runs `body`, recording an exception from it as a failed check.
  void guarded(const std::string& problem, const std::string& name,
               const std::function<void()>& body) {
    try {
      body();
    } catch (const Error& e) {
      fail(problem, name, e.what());
    }
  }
  bool all_passed() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed; });
  }
  const std::vector<Check>& checks() const { return checks_; }

 private:
  std::vector<Check> checks_;
};

struct Entry {
  ScaleInvariantProblem problem;
  double shift = 0.0;
};

ScaleInvariantProblem perturb_gradient(const ScaleInvariantProblem& problem, double eps) {
  ScaleInvariantProblem::Definition def = problem.definition();
  GradientFn inner = def.gradient;
  def.gradient = [inner, eps](const Vector& x) -> Vector {
    return inner(x) + Vector::Constant(x.size(), eps);
  };
  return ScaleInvariantProblem(def);
}

std::vector<Entry> builtin_problems(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Entry> out;
  out.push_back({make_quadratic(gen_spectrum_matrix(seed, 10, leading_spectrum(10, 1.0, 0.9))), 0.0});
  out.push_back({make_lp_pca(rng.normal_matrix(60, 5), 4.0), 0.0});
  out.push_back({make_mixture(gen_mixture_design(seed + 1, 100, 5)), 0.0});
  out.push_back({make_kurtosis_ica(gen_ica_data(seed + 2, 500, 2).W), 0.0});
  const LowRankNonneg nmf = gen_lowrank_nonneg(seed + 3, 20, 6, 3);
  out.push_back({make_klnmf_subproblem(nmf.W, nmf.V.col(0)).problem, 0.0});
  return out;
}

double relative_error(const Vector& a, const Vector& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

double relative_error(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

void check_problem(const Entry& entry, std::uint64_t seed, Report& report) {
  const ScaleInvariantProblem& p = entry.problem;
  const std::string& name = p.name();
  const InvarianceKind& kind = p.kind();
  const bool invariant = kind.is_multiplicative() || kind.is_additive();

  report.guarded(name, "classification", [&] {
    const InvarianceEstimate est = classify_invariance(p, kSamplePoints, seed);
    report.add(name, "classification", estimate_matches(kind, est) ? 0.0 : 1.0, 0.0);
  });

  Rng rng(seed ^ 0x5eedULL);
  std::vector<Vector> points;
  for (int i = 0; i < kSamplePoints; ++i) points.push_back(rng.unit_sphere(p.dimension()));

  if (invariant) {
    report.guarded(name, "identity.euler", [&] {
      double worst = 0.0;
      double worst_h = 0.0;
      for (const auto& x : points) {
        const IdentityResiduals r = check_identities(p, x);
        worst = std::max(worst, r.euler / r.euler_scale);
        worst_h = std::max(worst_h, r.hessian / r.hessian_scale);
      }
      report.add(name, "identity.euler", worst, 1e-8);
      report.add(name, "identity.hessian", worst_h, 1e-6);
    });
  }

  report.guarded(name, "gradient.finite_difference", [&] {
    double worst = 0.0;
    for (const auto& x : points) {
      const ValueFn f = [&p](const Vector& z) { return p.value(z); };
      worst = std::max(worst, relative_error(p.gradient(x), finite_diff_gradient(f, x)));
    }
    report.add(name, "gradient.finite_difference", worst, 1e-5);
  });

  if (p.has_closed_form_hessian()) {
    report.guarded(name, "hessian.finite_difference", [&] {
      double worst = 0.0;
      for (const auto& x : points) {
        const GradientFn g = [&p](const Vector& z) { return p.gradient(z); };
        worst = std::max(worst, relative_error(p.hessian(x), finite_diff_hessian(g, x)));
      }
      report.add(name, "hessian.finite_difference", worst, 1e-4);
    });
  }

  if (!invariant) return;

  SolverConfig config;
  config.max_iter = 100000;
  config.x_tol = 1e-12;
  config.shift = entry.shift;
  config.seed = seed;
  SolveResult solved;
  try {
    solved = sci_pi(p, points.front(), config);
  } catch (const Error& e) {
    report.fail(name, "solve", e.what());
    return;
  }
  if (!solved.converged) {
    report.fail(name, "solve", "SCI-PI stopped with " + to_string(solved.stop_reason));
    return;
  }
  const Vector& x_star = solved.final_x;

  report.guarded(name, "eigenvector_property", [&] {
    const double r = check_eigenvector_property(p, x_star);
    const double scale = 1.0 + spectral_norm(p.hessian(x_star));
    report.add(name, "eigenvector_property", r / scale, 1e-5);
  });

  if (kind.is_additive() || p.value(x_star) > 0.0) {
    report.guarded(name, "dual_map", [&] { report.add(name, "dual_map", dual_map(p, x_star).residual, 1e-10); });
  }
}

void check_ascent(std::uint64_t seed, Report& report) {
  constexpr int kTrials = 20;
  constexpr Eigen::Index d = 8;
  double worst_drop = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    Rng rng(seed + static_cast<std::uint64_t>(t));
    const Matrix G = rng.normal_matrix(d, d);
    const Matrix A = G * G.transpose();
    SolverConfig config;
    config.max_iter = 200;
    config.x_tol = 1e-12;
    const SolveResult r = sci_pi(make_quadratic(A), rng.unit_sphere(d), config);
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k) {
      worst_drop = std::max(worst_drop, r.objective_trace[k - 1] - r.objective_trace[k]);
    }
  }
  report.add("quadratic-psd", "ascent", worst_drop, 1e-12);
}

Json report_json(const Report& report, std::uint64_t seed, double perturb) {
  Json j;
  j["schema"] = "scipi.verify/1";
  j["seed"] = seed;
  j["perturb_grad"] = perturb;
  j["passed"] = report.all_passed();
  Json checks = Json::array();
  for (const auto& c : report.checks()) {
    Json e;
    e["problem"] = c.problem;
    e["check"] = c.name;
    e["residual"] = c.residual;
    e["threshold"] = c.threshold;
    e["passed"] = c.passed;
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(e);
  }
  j["checks"] = checks;
  return j;
}

std::string report_text(const Report& report) {
  std::string out;
  for (const auto& c : report.checks()) {
    out += c.passed ? "PASS  " : "FAIL  ";
    out += c.problem + "  " + c.name;
    if (c.note.empty()) {
      out += "  residual=" + format_g(c.residual, 3) + " threshold=" + format_g(c.threshold, 3);
    } else {
      out += "  (" + c.note + ")";
    }
    out += '\n';
  }
  std::size_t failed = 0;
  for (const auto& c : report.checks()) failed += c.passed ? 0 : 1;
  out += std::to_string(report.checks().size() - failed) + "/" +
         std::to_string(report.checks().size()) + " checks passed\n";
  return out;
}

}  // namespace

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  Report report;
  for (Entry entry : builtin_problems(opts.seed)) {
    if (opts.perturb_grad != 0.0) entry.problem = perturb_gradient(entry.problem, opts.perturb_grad);
    check_problem(entry, opts.seed, report);
  }
  check_ascent(opts.seed, report);

  const std::string text = opts.json ? dump_json(report_json(report, opts.seed, opts.perturb_grad))
                                     : report_text(report);
  if (opts.out.empty() || opts.out == "-") {
    out << text;
  } else {
    std::ofstream file(opts.out, std::ios::binary);
    if (!file) throw InputError("cannot write '" + opts.out + "'");
    file << text;
    err << (report.all_passed() ? "all checks passed\n" : "some checks failed\n");
  }
  return report.all_passed() ? kConverged : kVerifyFailed;
}

}  // namespace scipi::cli
