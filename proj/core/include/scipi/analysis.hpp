#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "scipi/problem.hpp"
#include "scipi/solvers.hpp"

namespace scipi {

/// Stationarity threshold used by every check that needs a local maximizer.
inline constexpr double kStationarityTolerance = 1e-6;

struct InvarianceEstimate {
  InvarianceKind kind = InvarianceKind::none();
  /// Fitted p (multiplicative) or a (additive); NaN when kind is None.
  double constant = 0.0;
  /// Largest residual of the fitted law over all samples.
  double residual = 0.0;
  int samples = 0;
};

/// Fits f(cx) = |c|^p f(x) and f(cx) = f(x) + log_a|c| over random unit x and
/// c in {0.5, 2, 3}. Returns the law whose residual is at most 1e-6, or None.
/// Sample points where f is undefined are skipped. Throws
/// InsufficientDataError when f vanishes at every sample.
InvarianceEstimate classify_invariance(const ScaleInvariantProblem& problem, int n_samples = 20,
                                       std::uint64_t seed = 0);

/// True when an estimate is what the declared kind predicts (a sum of scale
/// invariant terms is expected to classify as None).
bool estimate_matches(const InvarianceKind& declared, const InvarianceEstimate& estimate,
                      double constant_tol = 1e-8);

struct IdentityResiduals {
  /// |grad f^T x - p f| or |grad f^T x - 1/ln a|
  double euler = 0.0;
  /// ||H x - (p - 1) grad f|| or ||H x + grad f||
  double hessian = 0.0;
  /// Scales the thresholds are measured against: 1 + |f| (multiplicative) or 1,
  /// and 1 + ||grad f||.
  double euler_scale = 1.0;
  double hessian_scale = 1.0;

  bool passes(double euler_tol = 1e-8, double hessian_tol = 1e-6) const {
    return euler <= euler_tol * euler_scale && hessian <= hessian_tol * hessian_scale;
  }
};

/// Derivative identities of a scale invariant function at x. Throws
/// UnsupportedError unless the kind is Multiplicative or Additive.
IdentityResiduals check_identities(const ScaleInvariantProblem& problem, const Vector& x);

/// ||H(x*) x* - kappa lambda* x*|| with kappa = p - 1 or -1. Throws
/// PreconditionError when the first-order residual at x* exceeds
/// kStationarityTolerance.
double check_eigenvector_property(const ScaleInvariantProblem& problem, const Vector& x_star);

struct DualMapResult {
  Vector w;
  /// |f(w) - 1|
  double residual = 0.0;
};

/// Maps a point to the level set f = 1: w = x / f(x)^(1/p) or w = a^(1 - f(x)) x.
DualMapResult dual_map(const ScaleInvariantProblem& problem, const Vector& x_star);

struct RateReport {
  double lambda_star = 0.0;
  double lambda_bar_2 = 0.0;
  /// Hessian spectrum at x*, sorted by |lambda| descending.
  Vector eigenvalues;
  Matrix eigenvectors;
  /// lambda_bar_2 / lambda_star, or +inf when lambda_star <= 0.
  double rho_predicted = 0.0;
  std::optional<double> rho_empirical;
  bool condition_ok = false;
  double kkt_residual = 0.0;
};

RateReport predicted_rate(const ScaleInvariantProblem& problem, const Vector& x_star);

struct BlockRateReport {
  double lambda_star = 0.0;
  double lambda_bar_2 = 0.0;
  /// Second block: s*, s_bar_2 for a block problem; for a partial problem
  /// these hold mu and L.
  double s_star = 0.0;
  double s_bar_2 = 0.0;
  double nu = 0.0;
  /// The 2x2 coupling matrix whose spectral radius is the rate.
  Matrix coupling;
  double rho = 0.0;
  /// Spectral radius of `coupling` from sym_eig on its symmetrized similar form.
  double rho_eigensolver = 0.0;
  std::optional<double> rho_empirical;
  /// Per-block conditions (lambda* > lambda_bar_2, and s* > s_bar_2 or mu > 0).
  bool condition_ok = false;
  /// nu^2 < (lambda* - lambda_bar_2)(s* - s_bar_2), or nu^2 < mu (lambda* - lambda_bar_2).
  bool coupling_condition_ok = false;
};

/// Spectral radius of [[a, b], [c, d]]. Exact at b c = 0 (returns max(|a|, |d|)
/// without rounding) and free of cancellation for nonnegative entries.
double spectral_radius_2x2(double a, double b, double c, double d);

/// 1/2 [r1 + r2 + sqrt((r1 - r2)^2 + 4 nu^2 / (lambda* s*))] with
/// r1 = lambda_bar_2 / lambda*, r2 = s_bar_2 / s*.
double block_rate_formula(double lambda_star, double lambda_bar_2, double s_star, double s_bar_2,
                          double nu);

/// Spectral radius of [[lambda_bar_2 / lambda*, nu / lambda*], [2 nu / (L + mu), (L - mu) / (L + mu)]].
double partial_rate_formula(double lambda_star, double lambda_bar_2, double mu, double L,
                            double nu);

BlockRateReport predicted_block_rate(const BlockProblem& problem, const Vector& x_star,
                                     const Vector& y_star);

/// Requires mu and L on the problem (ConfigError otherwise).
BlockRateReport predicted_partial_rate(const PartialProblem& problem, const Vector& x_star,
                                       const Vector& y_star);

/// Per-iteration contraction fitted to an error sequence that decays like
/// rho^(2k): least-squares slope of log e_k over the last contiguous run with
/// e_k in [1e-12, 1e-3], returned as exp(slope / 2). Throws
/// InsufficientDataError when that run has fewer than 10 points.
double empirical_rate_from_errors(const std::vector<double>& errors);

/// empirical_rate_from_errors on 1 - (x_k^T x_ref)^2 over the retained iterates.
double empirical_rate(const SolveResult& trace, const Vector& x_ref);

}  // namespace scipi
