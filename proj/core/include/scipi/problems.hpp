#pragma once

#include <vector>

#include "scipi/problem.hpp"

namespace scipi {

/// f(x) = 1/2 x^T A x, Multiplicative(2). A must be symmetric to 1e-10.
ScaleInvariantProblem make_quadratic(const Matrix& A);

/// L_p-norm PCA with identity feature map:
/// f(x) = (1/n) sum_i |a_i^T x|^p over the rows a_i of `data`.
/// Only p > 2 is supported (the objective is C^2 there).
ScaleInvariantProblem make_lp_pca(const Matrix& data, double p);

/// Mixture-proportion log-likelihood on the sphere (pi_k = x_k^2):
/// f(x) = (1/n) sum_j log(floor + sum_k L_jk x_k^2).
/// With floor = 0 the objective is Additive(a = sqrt(e)), i.e.
/// f(cx) = f(x) + 2 ln|c|; a positive floor breaks invariance (kind None).
ScaleInvariantProblem make_mixture(const Matrix& L, double floor = 0.0);

/// Kurtosis-based ICA contrast f(x) = (1/n) sum_i ((w_i^T x)^4 - 3)^2 for
/// whitened rows w_i. A sum of scale invariant terms, not itself invariant.
ScaleInvariantProblem make_kurtosis_ica(const Matrix& W);

/// KL-NMF column subproblem  min_h sum_i [v_i log(v_i / (Wh)_i) - v_i + (Wh)_i], h >= 0
/// recast as a weighted mixture-proportion problem on the sphere.
///
/// With column sums c_k = sum_i W_ik and S = sum_i v_i, the simplex variable
/// is hbar_k = c_k h_k / S and hbar_k = x_k^2. The sphere objective is
///   f(x) = sum_i (v_i / S) log( sum_k (W_ik / c_k) x_k^2 ),
/// which is Additive(sqrt(e)) like make_mixture.
struct KlnmfSubproblem {
  ScaleInvariantProblem problem;
  Vector column_sums;
  double total = 0.0;

  /// Sphere point -> original nonnegative h (uses x_k^2 / ||x||^2).
  Vector to_h(const Vector& x) const;
  /// Nonnegative h -> unit sphere point with x_k >= 0.
  Vector to_sphere(const Vector& h) const;
};

KlnmfSubproblem make_klnmf_subproblem(const Matrix& W, const Vector& v);

/// Adds sigma ||x||^2 to the objective. Stationary directions on the sphere
/// are unchanged; the kind survives only for Multiplicative(2).
ScaleInvariantProblem apply_shift(const ScaleInvariantProblem& problem, double sigma);

/// f(x, y) = 1/2 x^T A x + 1/2 y^T B y. The blocks do not interact.
BlockProblem make_separable_block(const Matrix& A, const Matrix& B);

/// f(x, y) = x^T C y (degree 1 in each block).
BlockProblem make_bilinear_block(const Matrix& C);

/// f(x, y) = 1/2 (x^T A x)(y^T B y) (degree 2 in each block).
BlockProblem make_product_block(const Matrix& A, const Matrix& B);

/// Partially scale invariant test problem, degree 2 in x for every y:
///   f(x, y) = 1/2 x^T A x + 1/2 sum_j d_j x^T B_j x - 1/2 ||x||^2 d^T D d,
/// with d = y - y0 and D = diag(curvature). On the sphere f is strongly
/// concave in y with mu = min(curvature), L = max(curvature). With no
/// couplings this is 1/2 x^T A x - 1/2 (y - y0)^T D (y - y0) on the sphere.
PartialProblem make_coupled_quadratic_partial(const Matrix& A, const Vector& curvature,
                                              const Vector& y0,
                                              const std::vector<Matrix>& couplings = {});

}  // namespace scipi
