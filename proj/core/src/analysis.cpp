#include "scipi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "scipi/error.hpp"
#include "scipi/random.hpp"

namespace scipi {

namespace {

constexpr double kClassifyThreshold = 1e-6;

struct ScaledPair {
  double c;
  double fx;
  double fcx;
};

double safe_value(const ScaleInvariantProblem& problem, const Vector& x, bool& ok) {
  try {
    const double f = problem.value(x);
    ok = std::isfinite(f);
    return f;
  } catch (const DomainError&) {
    ok = false;
    return 0.0;
  }
}

void require_unit(const Vector& x, const char* who) {
  if (std::abs(x.norm() - 1.0) > 1e-8) {
    throw InputError(std::string(who) + ": point must lie on the unit sphere");
  }
}

void require_stationary(const Vector& gradient, const Vector& x, const char* who) {
  const double kkt = kkt_residual(gradient, x);
  if (!(kkt <= kStationarityTolerance)) {
    throw PreconditionError(std::string(who) + ": point is not stationary", kkt);
  }
}

// Eigenvalue cross-check for a 2x2 matrix with b c >= 0: it is similar to the
// symmetric [[a, s], [s, d]] with s = sqrt(b c).
double symmetric_similar_radius(const Matrix& M) {
  const double bc = M(0, 1) * M(1, 0);
  if (bc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double s = std::sqrt(bc);
  Matrix S(2, 2);
  S << M(0, 0), s, s, M(1, 1);
  return std::abs(sym_eig(S).eigenvalues(0));
}

}  // namespace

InvarianceEstimate classify_invariance(const ScaleInvariantProblem& problem, int n_samples,
                                       std::uint64_t seed) {
  if (n_samples < 1) throw InputError("classify_invariance: need at least one sample");
  Rng rng(seed);
  std::vector<ScaledPair> pairs;
  for (int s = 0; s < n_samples; ++s) {
    const Vector x = rng.unit_sphere(problem.dimension());
    bool ok = false;
    const double fx = safe_value(problem, x, ok);
    if (!ok) continue;
    for (double c : {0.5, 2.0, 3.0}) {
      const double fcx = safe_value(problem, c * x, ok);
      if (ok) pairs.push_back({c, fx, fcx});
    }
  }
  if (pairs.empty()) {
    throw InsufficientDataError("classify_invariance: objective undefined at every sample");
  }
  if (std::all_of(pairs.begin(), pairs.end(),
                  [](const ScaledPair& p) { return p.fx == 0.0 && p.fcx == 0.0; })) {
    throw InsufficientDataError("classify_invariance: objective vanishes at every sample");
  }

  const double inf = std::numeric_limits<double>::infinity();

  // Multiplicative: log(f(cx) / f(x)) = p log c.
  double p_sum = 0.0;
  int p_count = 0;
  bool mult_possible = true;
  for (const auto& p : pairs) {
    if (p.fx == 0.0 || p.fcx == 0.0) continue;
    const double ratio = p.fcx / p.fx;
    if (!(ratio > 0.0)) {
      mult_possible = false;
      break;
    }
    p_sum += std::log(ratio) / std::log(p.c);
    ++p_count;
  }
  double p_hat = p_count > 0 ? p_sum / p_count : 0.0;
  double mult_residual = inf;
  if (mult_possible && p_count > 0 && p_hat > 0.0) {
    mult_residual = 0.0;
    for (const auto& p : pairs) {
      const double r = std::abs(p.fcx - std::pow(p.c, p_hat) * p.fx) / (1.0 + std::abs(p.fx));
      mult_residual = std::max(mult_residual, r);
    }
  }

  // Additive: f(cx) - f(x) = kappa ln c with kappa = 1 / ln a.
  double kappa_sum = 0.0;
  for (const auto& p : pairs) kappa_sum += (p.fcx - p.fx) / std::log(p.c);
  const double kappa = kappa_sum / static_cast<double>(pairs.size());
  double add_residual = inf;
  if (std::abs(kappa) > 1e-12) {
    add_residual = 0.0;
    for (const auto& p : pairs) {
      add_residual = std::max(add_residual, std::abs(p.fcx - p.fx - kappa * std::log(p.c)));
    }
  }

  InvarianceEstimate est;
  est.samples = static_cast<int>(pairs.size());
  if (mult_residual <= kClassifyThreshold && mult_residual <= add_residual) {
    est.kind = InvarianceKind::multiplicative(p_hat);
    est.constant = p_hat;
    est.residual = mult_residual;
  } else if (add_residual <= kClassifyThreshold) {
    const double a = std::exp(1.0 / kappa);
    est.kind = InvarianceKind::additive(a);
    est.constant = a;
    est.residual = add_residual;
  } else {
    est.kind = InvarianceKind::none();
    est.constant = std::numeric_limits<double>::quiet_NaN();
    est.residual = std::min(mult_residual, add_residual);
  }
  return est;
}

bool estimate_matches(const InvarianceKind& declared, const InvarianceEstimate& estimate,
                      double constant_tol) {
  switch (declared.type()) {
    case InvarianceKind::Type::Multiplicative:
      return estimate.kind.is_multiplicative() &&
             std::abs(estimate.constant - declared.degree()) <= constant_tol;
    case InvarianceKind::Type::Additive:
      return estimate.kind.is_additive() &&
             std::abs(estimate.constant - declared.base()) <= constant_tol;
    case InvarianceKind::Type::SumOfScaleInvariant:
    case InvarianceKind::Type::None:
      return estimate.kind.type() == InvarianceKind::Type::None;
  }
  return false;
}

IdentityResiduals check_identities(const ScaleInvariantProblem& problem, const Vector& x) {
  const InvarianceKind& kind = problem.kind();
  if (!kind.is_multiplicative() && !kind.is_additive()) {
    throw UnsupportedError("check_identities: " + problem.name() + " has kind " +
                           kind.to_string() + "; identities need a scale invariant objective");
  }
  const Vector g = problem.gradient(x);
  const Vector Hx = problem.hessian(x) * x;
  IdentityResiduals r;
  r.hessian_scale = 1.0 + g.norm();
  if (kind.is_multiplicative()) {
    const double p = kind.degree();
    const double f = problem.value(x);
    r.euler = std::abs(g.dot(x) - p * f);
    r.euler_scale = 1.0 + std::abs(f);
    r.hessian = (Hx - (p - 1.0) * g).norm();
  } else {
    r.euler = std::abs(g.dot(x) - kind.additive_euler_constant());
    r.euler_scale = 1.0;
    r.hessian = (Hx + g).norm();
  }
  return r;
}

double check_eigenvector_property(const ScaleInvariantProblem& problem, const Vector& x_star) {
  const InvarianceKind& kind = problem.kind();
  if (!kind.is_multiplicative() && !kind.is_additive()) {
    throw UnsupportedError("check_eigenvector_property: " + problem.name() +
                           " is not scale invariant");
  }
  require_unit(x_star, "check_eigenvector_property");
  const Vector g = problem.gradient(x_star);
  require_stationary(g, x_star, "check_eigenvector_property");
  const double lambda = g.dot(x_star);
  const double kappa = kind.is_multiplicative() ? kind.degree() - 1.0 : -1.0;
  return (problem.hessian(x_star) * x_star - kappa * lambda * x_star).norm();
}

DualMapResult dual_map(const ScaleInvariantProblem& problem, const Vector& x_star) {
  const InvarianceKind& kind = problem.kind();
  const double f = problem.value(x_star);
  DualMapResult out;
  if (kind.is_multiplicative()) {
    if (!(f > 0.0)) {
      throw DomainError("dual_map: needs f(x*) > 0 for a multiplicative objective");
    }
    out.w = x_star / std::pow(f, 1.0 / kind.degree());
  } else if (kind.is_additive()) {
    if (!(kind.base() > 1.0)) throw DomainError("dual_map: needs base a > 1");
    out.w = std::pow(kind.base(), 1.0 - f) * x_star;
  } else {
    throw UnsupportedError("dual_map: " + problem.name() + " is not scale invariant");
  }
  out.residual = std::abs(problem.value(out.w) - 1.0);
  return out;
}

RateReport predicted_rate(const ScaleInvariantProblem& problem, const Vector& x_star) {
  require_unit(x_star, "predicted_rate");
  const Vector g = problem.gradient(x_star);
  require_stationary(g, x_star, "predicted_rate");
  const Matrix H = problem.hessian(x_star);
  const SymEigResult eig = sym_eig(H);

  RateReport r;
  r.kkt_residual = kkt_residual(g, x_star);
  r.lambda_star = g.dot(x_star);
  r.lambda_bar_2 = projected_hessian_norm(H, x_star);
  r.eigenvalues = eig.eigenvalues;
  r.eigenvectors = eig.eigenvectors;
  r.condition_ok = r.lambda_star > 0.0 && r.lambda_star > r.lambda_bar_2;
  r.rho_predicted = r.lambda_star > 0.0 ? r.lambda_bar_2 / r.lambda_star
                                        : std::numeric_limits<double>::infinity();
  return r;
}

double spectral_radius_2x2(double a, double b, double c, double d) {
  const double q = b * c;
  if (q == 0.0) return std::max(std::abs(a), std::abs(d));
  const double hi = std::max(a, d);
  const double lo = std::min(a, d);
  const double h = 0.5 * (hi - lo);
  const double disc = h * h + q;
  if (a >= 0.0 && d >= 0.0 && q > 0.0) {
    // Perron root, written to avoid cancellation between the two terms.
    return hi + q / (h + std::sqrt(disc));
  }
  const double mid = 0.5 * (a + d);
  if (disc < 0.0) return std::sqrt(a * d - q);
  const double r = std::sqrt(disc);
  return std::max(std::abs(mid + r), std::abs(mid - r));
}

double block_rate_formula(double lambda_star, double lambda_bar_2, double s_star, double s_bar_2,
                          double nu) {
  return spectral_radius_2x2(lambda_bar_2 / lambda_star, nu / lambda_star, nu / s_star,
                             s_bar_2 / s_star);
}

double partial_rate_formula(double lambda_star, double lambda_bar_2, double mu, double L,
                            double nu) {
  if (mu > L) throw InputError("partial_rate_formula: require mu <= L");
  return spectral_radius_2x2(lambda_bar_2 / lambda_star, nu / lambda_star, 2.0 * nu / (L + mu),
                             (L - mu) / (L + mu));
}

BlockRateReport predicted_block_rate(const BlockProblem& problem, const Vector& x_star,
                                     const Vector& y_star) {
  require_unit(x_star, "predicted_block_rate");
  require_unit(y_star, "predicted_block_rate");
  const Vector gx = problem.gradient_x(x_star, y_star);
  const Vector gy = problem.gradient_y(x_star, y_star);
  require_stationary(gx, x_star, "predicted_block_rate (x block)");
  require_stationary(gy, y_star, "predicted_block_rate (y block)");

  BlockRateReport r;
  r.lambda_star = gx.dot(x_star);
  r.s_star = gy.dot(y_star);
  r.lambda_bar_2 = projected_hessian_norm(problem.hessian_xx(x_star, y_star), x_star);
  r.s_bar_2 = projected_hessian_norm(problem.hessian_yy(x_star, y_star), y_star);
  r.nu = spectral_norm(problem.hessian_yx(x_star, y_star));
  r.condition_ok = r.lambda_star > r.lambda_bar_2 && r.s_star > r.s_bar_2 &&
                   r.lambda_star > 0.0 && r.s_star > 0.0;
  r.coupling_condition_ok =
      r.condition_ok &&
      r.nu * r.nu < (r.lambda_star - r.lambda_bar_2) * (r.s_star - r.s_bar_2);
  if (r.lambda_star > 0.0 && r.s_star > 0.0) {
    r.coupling = Matrix(2, 2);
    r.coupling << r.lambda_bar_2 / r.lambda_star, r.nu / r.lambda_star, r.nu / r.s_star,
        r.s_bar_2 / r.s_star;
    r.rho = block_rate_formula(r.lambda_star, r.lambda_bar_2, r.s_star, r.s_bar_2, r.nu);
    r.rho_eigensolver = symmetric_similar_radius(r.coupling);
  } else {
    r.rho = r.rho_eigensolver = std::numeric_limits<double>::infinity();
  }
  return r;
}

BlockRateReport predicted_partial_rate(const PartialProblem& problem, const Vector& x_star,
                                       const Vector& y_star) {
  if (!problem.mu() || !problem.lipschitz()) {
    throw ConfigError("predicted_partial_rate: problem does not provide mu and L");
  }
  require_unit(x_star, "predicted_partial_rate");
  const Vector gx = problem.gradient_x(x_star, y_star);
  require_stationary(gx, x_star, "predicted_partial_rate (x block)");
  const double gy_norm = problem.gradient_y(x_star, y_star).norm();
  if (!(gy_norm <= kStationarityTolerance)) {
    throw PreconditionError("predicted_partial_rate: free block is not stationary", gy_norm);
  }

  const double mu = *problem.mu();
  const double L = *problem.lipschitz();
  BlockRateReport r;
  r.lambda_star = gx.dot(x_star);
  r.lambda_bar_2 = projected_hessian_norm(problem.hessian_xx(x_star, y_star), x_star);
  r.s_star = mu;
  r.s_bar_2 = L;
  r.nu = spectral_norm(problem.hessian_yx(x_star, y_star));
  r.condition_ok = r.lambda_star > 0.0 && r.lambda_star > r.lambda_bar_2;
  r.coupling_condition_ok = r.condition_ok && r.nu * r.nu < mu * (r.lambda_star - r.lambda_bar_2);
  if (r.lambda_star > 0.0) {
    r.coupling = Matrix(2, 2);
    r.coupling << r.lambda_bar_2 / r.lambda_star, r.nu / r.lambda_star, 2.0 * r.nu / (L + mu),
        (L - mu) / (L + mu);
    r.rho = partial_rate_formula(r.lambda_star, r.lambda_bar_2, mu, L, r.nu);
    r.rho_eigensolver = symmetric_similar_radius(r.coupling);
  } else {
    r.rho = r.rho_eigensolver = std::numeric_limits<double>::infinity();
  }
  return r;
}

double empirical_rate_from_errors(const std::vector<double>& errors) {
  constexpr double lo = 1e-12;
  constexpr double hi = 1e-3;
  // Last contiguous run of in-window errors.
  std::ptrdiff_t end = static_cast<std::ptrdiff_t>(errors.size());
  while (end > 0 && !(errors[static_cast<std::size_t>(end - 1)] >= lo &&
                      errors[static_cast<std::size_t>(end - 1)] <= hi)) {
    --end;
  }
  std::ptrdiff_t begin = end;
  while (begin > 0 && errors[static_cast<std::size_t>(begin - 1)] >= lo &&
         errors[static_cast<std::size_t>(begin - 1)] <= hi) {
    --begin;
  }
  const std::ptrdiff_t count = end - begin;
  if (count < 10) {
    throw InsufficientDataError("empirical_rate: only " + std::to_string(count) +
                                " iterates with error in [1e-12, 1e-3]; need 10");
  }
  double sk = 0.0, sy = 0.0, skk = 0.0, sky = 0.0;
  for (std::ptrdiff_t k = begin; k < end; ++k) {
    const double t = static_cast<double>(k - begin);
    const double y = std::log(errors[static_cast<std::size_t>(k)]);
    sk += t;
    sy += y;
    skk += t * t;
    sky += t * y;
  }
  const double m = static_cast<double>(count);
  const double slope = (m * sky - sk * sy) / (m * skk - sk * sk);
  return std::exp(0.5 * slope);
}

double empirical_rate(const SolveResult& trace, const Vector& x_ref) {
  if (trace.iterate_trace.empty()) {
    throw InsufficientDataError("empirical_rate: trace has no retained iterates");
  }
  std::vector<double> errors;
  errors.reserve(trace.iterate_trace.size());
  for (const Vector& x : trace.iterate_trace) errors.push_back(alignment_error(x, x_ref));
  return empirical_rate_from_errors(errors);
}

}  // namespace scipi
