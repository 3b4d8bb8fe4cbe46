#include <gtest/gtest.h>

#include <cmath>

#include "scipi/analysis.hpp"
#include "scipi/data_io.hpp"
#include "scipi/error.hpp"
#include "scipi/finite_diff.hpp"
#include "scipi/gmm.hpp"
#include "scipi/problems.hpp"
#include "scipi/solvers.hpp"
#include "test_support.hpp"

namespace scipi {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

TEST(InvarianceKind, Validation) {
  EXPECT_THROW(InvarianceKind::multiplicative(0.0), InputError);
  EXPECT_THROW(InvarianceKind::multiplicative(-1.0), InputError);
  EXPECT_THROW(InvarianceKind::additive(1.0), InputError);
  EXPECT_THROW(InvarianceKind::additive(0.0), InputError);
  EXPECT_NEAR(InvarianceKind::additive(std::sqrt(std::exp(1.0))).additive_euler_constant(), 2.0,
              1e-15);
  EXPECT_THROW(InvarianceKind::none().degree(), InputError);
}

TEST(Quadratic, Examples) {
  const auto id = make_quadratic(Matrix::Identity(2, 2));
  EXPECT_DOUBLE_EQ(id.value(vec({1, 0})), 0.5);
  EXPECT_EQ(id.gradient(vec({1, 0})), vec({1, 0}));

  const Matrix D = vec({2, 1}).asDiagonal();
  const auto diag = make_quadratic(D);
  EXPECT_EQ(diag.gradient(vec({0, 1})), vec({0, 1}));
  EXPECT_EQ(diag.hessian(vec({0, 1})), D);

  Matrix A(2, 2);
  A << 2, 1, 1, 2;
  const auto q = make_quadratic(A);
  EXPECT_DOUBLE_EQ(q.value(vec({1, 0})), 1.0);
  EXPECT_EQ(q.gradient(vec({1, 0})), vec({2, 1}));
  EXPECT_TRUE(q.kind() == InvarianceKind::multiplicative(2.0));
}

TEST(Quadratic, RejectsBadMatrices) {
  EXPECT_THROW(make_quadratic(Matrix::Ones(2, 3)), InputError);
  Matrix A(2, 2);
  A << 1, 1e-9, 0, 1;
  EXPECT_THROW(make_quadratic(A), InputError);
}

TEST(Problem, DimensionChecked) {
  const auto q = make_quadratic(Matrix::Identity(3, 3));
  EXPECT_THROW(q.value(Vector::Ones(2)), InputError);
}

TEST(LpPca, Examples) {
  Matrix one(1, 2);
  one << 1, 0;
  const auto p1 = make_lp_pca(one, 4.0);
  EXPECT_DOUBLE_EQ(p1.value(vec({1, 0})), 1.0);
  EXPECT_LE((p1.gradient(vec({1, 0})) - vec({4, 0})).norm(), 1e-15);

  const auto p2 = make_lp_pca(Matrix::Identity(2, 2), 4.0);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(p2.value(vec({s, s})), 0.25, 1e-15);

  Rng rng(1);
  const auto p3 = make_lp_pca(rng.normal_matrix(10, 3), 4.0);
  const Vector x = rng.normal_vector(3);
  EXPECT_NEAR(p3.value(2.0 * x), 16.0 * p3.value(x), 1e-12 * p3.value(2.0 * x));
}

TEST(LpPca, RejectsSmallPower) {
  EXPECT_THROW(make_lp_pca(Matrix::Identity(2, 2), 2.0), UnsupportedError);
  EXPECT_THROW(make_lp_pca(Matrix::Identity(2, 2), 1.5), UnsupportedError);
}

TEST(Mixture, Examples) {
  Matrix L(1, 2);
  L << 1, 1;
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(make_mixture(L).value(vec({s, s})), 0.0, 1e-15);

  const Matrix L2 = 2.0 * Matrix::Identity(2, 2);
  EXPECT_THROW(make_mixture(L2).value(vec({1, 0})), DomainError);

  Rng rng(4);
  const auto mix = make_mixture(gen_mixture_design(4, 20, 3));
  const Vector x = rng.unit_sphere(3);
  for (double c : {0.3, 2.0, -5.0}) {
    EXPECT_NEAR(mix.value(c * x) - mix.value(x), 2.0 * std::log(std::abs(c)), 1e-12);
  }
}

TEST(Mixture, RejectsBadDesigns) {
  Matrix L(2, 2);
  L << 1, 0, 0, 0;
  EXPECT_THROW(make_mixture(L), InputError);
  L << 1, -1, 1, 1;
  EXPECT_THROW(make_mixture(L), InputError);
}

TEST(KurtosisIca, Examples) {
  Matrix W(1, 2);
  W << 1, 0;
  EXPECT_DOUBLE_EQ(make_kurtosis_ica(W).value(vec({0, 1})), 9.0);
  Matrix W2(1, 2);
  W2 << std::pow(3.0, 0.25), 0;
  EXPECT_NEAR(make_kurtosis_ica(W2).value(vec({1, 0})), 0.0, 1e-14);
}

TEST(KurtosisIca, GradientMatchesFiniteDifferences) {
  Rng rng(8);
  const auto ica = make_kurtosis_ica(rng.normal_matrix(30, 3));
  const Vector x = rng.unit_sphere(3);
  const Vector fd = finite_diff_gradient([&](const Vector& z) { return ica.value(z); }, x);
  EXPECT_LE((ica.gradient(x) - fd).norm(), 1e-5 * fd.norm());
}

TEST(KlnmfSubproblem, SingleComponent) {
  Matrix W(3, 1);
  W << 1, 2, 3;
  const Vector v = vec({2, 2, 2});
  const KlnmfSubproblem sub = make_klnmf_subproblem(W, v);
  const Vector h = sub.to_h(vec({-1}));
  EXPECT_NEAR(h[0], 6.0 / 6.0, 1e-15);
}

TEST(KlnmfSubproblem, SymmetricTwoPointOptimum) {
  const KlnmfSubproblem sub = make_klnmf_subproblem(Matrix::Identity(2, 2), vec({1, 1}));
  // Oracle: grid search of the simplex objective t -> f(sqrt(t), sqrt(1-t)).
  double best_t = 0.0;
  double best_f = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < 10000; ++i) {
    const double t = i / 10000.0;
    const double f = sub.problem.value(vec({std::sqrt(t), std::sqrt(1.0 - t)}));
    if (f > best_f) {
      best_f = f;
      best_t = t;
    }
  }
  EXPECT_NEAR(best_t, 0.5, 1e-4);

  // Unshifted, the update is x -> (1/x_1, 1/x_2) normalized: an exact two-cycle
  // (lambda* = lambda_bar_2 = 2 at the optimum). A shift of 1 contracts it.
  SolverConfig config;
  config.x_tol = 1e-12;
  config.max_iter = 50;
  const SolveResult cycle = sci_pi(sub.problem, vec({0.9, 0.3}), config);
  EXPECT_FALSE(cycle.converged);
  EXPECT_LE((cycle.iterate_trace[2] - cycle.iterate_trace[0]).norm(), 1e-14);
  config.max_iter = 10000;
  config.shift = 1.0;
  const SolveResult r = sci_pi(sub.problem, vec({0.9, 0.3}), config);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.final_x[0] * r.final_x[0], 0.5, 1e-9);
  EXPECT_LE(kkt_residual(sub.problem.gradient(r.final_x), r.final_x), 1e-8);
}

TEST(KlnmfSubproblem, BackMapRoundTrip) {
  const LowRankNonneg data = gen_lowrank_nonneg(3, 8, 2, 3);
  const KlnmfSubproblem sub = make_klnmf_subproblem(data.W, data.V.col(0));
  const Vector h = vec({0.2, 1.5, 0.7});
  const Vector back = sub.to_h(sub.to_sphere(h));
  // to_sphere normalizes the simplex mass, so only the direction survives.
  const Vector expected = h * (sub.total / sub.column_sums.dot(h));
  EXPECT_LE((back - expected).norm(), 1e-12 * expected.norm());
}

TEST(KlnmfSubproblem, RejectsZeroColumn) {
  Matrix W(2, 2);
  W << 1, 0, 1, 0;
  EXPECT_THROW(make_klnmf_subproblem(W, vec({1, 1})), InputError);
  EXPECT_THROW(make_klnmf_subproblem(Matrix::Identity(2, 2), vec({0, 0})), InputError);
}

TEST(ApplyShift, Examples) {
  Rng rng(12);
  const auto q = make_quadratic(test::random_symmetric(rng, 4));
  const auto same = apply_shift(q, 0.0);
  const Vector x = rng.unit_sphere(4);
  EXPECT_EQ(same.value(x), q.value(x));
  EXPECT_TRUE(same.kind() == q.kind());

  const auto shifted = apply_shift(q, 0.7);
  EXPECT_NEAR(shifted.value(x), q.value(x) + 0.7, 1e-14);
  EXPECT_LE((shifted.gradient(x) - q.gradient(x) - 1.4 * x).norm(), 1e-14);
  EXPECT_TRUE(shifted.kind() == InvarianceKind::multiplicative(2.0));

  const auto lp = apply_shift(make_lp_pca(rng.normal_matrix(5, 4), 4.0), 1.0);
  EXPECT_TRUE(lp.kind() == InvarianceKind::none());
}

TEST(ApplyShift, PreservesFixedPoints) {
  Rng rng(13);
  const Matrix A = test::random_symmetric(rng, 5);
  const Vector v = sym_eig(A).eigenvectors.col(2);
  const auto shifted = apply_shift(make_quadratic(A), 3.0);
  EXPECT_LE(kkt_residual(shifted.gradient(v), v), 1e-12);
}

TEST(BlockProblems, ScaleInvariantPerBlock) {
  Rng rng(20);
  const Matrix A = test::random_symmetric(rng, 3);
  const Matrix B = test::random_symmetric(rng, 4);
  const BlockProblem product = make_product_block(A, B);
  const Vector x = rng.unit_sphere(3);
  const Vector y = rng.unit_sphere(4);
  EXPECT_NEAR(product.value(2.0 * x, y), 4.0 * product.value(x, y), 1e-12);
  EXPECT_NEAR(product.value(x, 3.0 * y), 9.0 * product.value(x, y), 1e-12);

  const Matrix C = rng.normal_matrix(3, 4);
  const BlockProblem bilinear = make_bilinear_block(C);
  EXPECT_NEAR(bilinear.value(x, y), x.dot(C * y), 1e-14);
  EXPECT_LE((bilinear.hessian_yx(x, y) - C.transpose()).norm(), 1e-14);
  EXPECT_TRUE(bilinear.kind_x() == InvarianceKind::multiplicative(1.0));
}

TEST(BlockProblems, CrossHessianMatchesFiniteDifferences) {
  Rng rng(21);
  const BlockProblem product =
      make_product_block(test::random_symmetric(rng, 3), test::random_symmetric(rng, 2));
  const Vector x = rng.unit_sphere(3);
  const Vector y = rng.unit_sphere(2);
  const Matrix fd =
      finite_diff_jacobian([&](const Vector& z) { return product.gradient_y(z, y); }, x);
  EXPECT_LE((product.hessian_yx(x, y) - fd).norm(), 1e-6 * (1.0 + fd.norm()));
}

TEST(CoupledPartial, ConcavityConstantsAndGradient) {
  Rng rng(22);
  const Matrix A = test::random_symmetric(rng, 4);
  const std::vector<Matrix> couplings{0.1 * test::random_symmetric(rng, 4),
                                      0.1 * test::random_symmetric(rng, 4)};
  const PartialProblem p = make_coupled_quadratic_partial(A, vec({1, 3}), vec({0.5, -1}), couplings);
  EXPECT_EQ(p.mu(), 1.0);
  EXPECT_EQ(p.lipschitz(), 3.0);
  const Vector x = rng.unit_sphere(4);
  const Vector y = rng.normal_vector(2);
  const Vector fd = finite_diff_gradient([&](const Vector& z) { return p.value(x, z); }, y);
  EXPECT_LE((p.gradient_y(x, y) - fd).norm(), 1e-7);
  EXPECT_NEAR(p.value(2.0 * x, y), 4.0 * p.value(x, y), 1e-12);
}

TEST(Gmm, SingleComponentExactStep) {
  Rng rng(30);
  const Matrix data = rng.normal_matrix(40, 2);
  const PartialProblem gmm = make_gmm(data, 1);
  const Vector y0 = gmm_pack({Vector::Zero(2)}, {Matrix::Identity(2, 2)});
  const Vector y1 = gmm.exact_y_step(vec({1}), y0);
  std::vector<Vector> means;
  std::vector<Matrix> covs;
  gmm_unpack(y1, 1, 2, means, covs);
  const Vector mean = data.colwise().mean();
  const Matrix centered = data.rowwise() - mean.transpose();
  const Matrix cov = centered.transpose() * centered / 40.0 + 1e-6 * Matrix::Identity(2, 2);
  EXPECT_LE((means[0] - mean).norm(), 1e-14);
  EXPECT_LE((covs[0] - cov).norm(), 1e-13);
}

TEST(Gmm, RejectsTooManyComponents) {
  EXPECT_THROW(make_gmm(Matrix::Ones(3, 1), 3), InputError);
}

TEST(Gmm, PackUnpackRoundTrip) {
  Rng rng(31);
  std::vector<Vector> means{rng.normal_vector(3), rng.normal_vector(3)};
  std::vector<Matrix> covs{test::random_psd(rng, 3), test::random_psd(rng, 3)};
  const Vector y = gmm_pack(means, covs);
  EXPECT_EQ(y.size(), gmm_free_dimension(2, 3));
  std::vector<Vector> m2;
  std::vector<Matrix> c2;
  gmm_unpack(y, 2, 3, m2, c2);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(m2[k], means[k]);
    EXPECT_LE((c2[k] - covs[k]).norm(), 1e-15 * covs[k].norm());
  }
}

TEST(Gmm, GradientsMatchFiniteDifferences) {
  const GmmData d = gen_gmm_data(3, 30, 2, 1, 3.0);
  const PartialProblem gmm = make_gmm(d.data, 2);
  const Vector x = vec({0.6, 0.8});
  const Vector y = gmm_pack({vec({0.2}), vec({2.5})}, {vec({1.3}), vec({0.8})});
  const Vector gx = finite_diff_gradient([&](const Vector& z) { return gmm.value(z, y); }, x);
  EXPECT_LE((gmm.gradient_x(x, y) - gx).norm(), 1e-7 * (1.0 + gx.norm()));
  const Vector gy = finite_diff_gradient([&](const Vector& z) { return gmm.value(x, z); }, y);
  EXPECT_LE((gmm.gradient_y(x, y) - gy).norm(), 1e-7 * (1.0 + gy.norm()));
  EXPECT_NEAR(gmm.value(3.0 * x, y) - gmm.value(x, y), 2.0 * std::log(3.0), 1e-12);
}

}  // namespace
}  // namespace scipi
