#include <gtest/gtest.h>

#include <cmath>

#include "scipi/data_io.hpp"
#include "scipi/error.hpp"
#include "scipi/nmf.hpp"
#include "scipi/problems.hpp"
#include "scipi/solvers.hpp"
#include "test_support.hpp"

namespace scipi {
namespace {

Matrix mat(Eigen::Index r, Eigen::Index c, std::initializer_list<double> v) {
  Matrix M(r, c);
  Eigen::Index i = 0;
  for (double x : v) M(i / c, i % c) = x, ++i;
  return M;
}

// Textbook matrix-form multiplicative updates, H first then W.
void reference_mu(const Matrix& V, Matrix& W, Matrix& H) {
  Matrix Z = V.cwiseQuotient(W * H);
  const Vector cw = W.colwise().sum().transpose();
  H = H.cwiseProduct((W.transpose() * Z).cwiseQuotient(cw.replicate(1, H.cols())));
  Z = V.cwiseQuotient(W * H);
  const Vector rh = H.rowwise().sum();
  W = W.cwiseProduct((Z * H.transpose()).cwiseQuotient(rh.transpose().replicate(W.rows(), 1)));
}

// One shifted SCI-PI step per column on the sphere reformulation.
Vector reference_scipi_column(const Matrix& W, const Vector& v, const Vector& h, double sigma) {
  const KlnmfSubproblem sub = make_klnmf_subproblem(W, v);
  SolverConfig config;
  config.max_iter = 1;
  config.x_tol = 0.0;
  const SolveResult r = sci_pi(apply_shift(sub.problem, sigma), sub.to_sphere(h), config);
  return sub.to_h(r.final_x);
}

TEST(KlDivergence, Examples) {
  EXPECT_NEAR(kl_divergence(mat(1, 1, {1}), mat(1, 1, {2}), mat(1, 1, {1})), 1.0 - std::log(2.0),
              1e-15);
  // 0 log 0 = 0: a zero datum contributes the model value only.
  EXPECT_DOUBLE_EQ(kl_divergence(mat(1, 1, {0}), mat(1, 1, {3}), mat(1, 1, {1})), 3.0);
  const LowRankNonneg lr = gen_lowrank_nonneg(1, 5, 4, 2);
  EXPECT_NEAR(kl_divergence(lr.V, lr.W, lr.H), 0.0, 1e-13);
  EXPECT_THROW(kl_divergence(mat(1, 1, {1}), mat(1, 1, {0}), mat(1, 1, {1})), NumericError);
  EXPECT_THROW(kl_divergence(mat(1, 2, {1, 1}), mat(1, 1, {1}), mat(1, 1, {1})), InputError);
}

TEST(NmfMethods, ParseAndPrint) {
  EXPECT_EQ(parse_nmf_method("mu"), NmfMethod::MU);
  EXPECT_EQ(parse_nmf_method("pgd"), NmfMethod::PGD);
  EXPECT_EQ(parse_nmf_method("sci-pi"), NmfMethod::SCIPI);
  EXPECT_EQ(parse_nmf_method("scipi"), NmfMethod::SCIPI);
  EXPECT_THROW(parse_nmf_method("MU"), InputError);
  for (NmfMethod m : {NmfMethod::MU, NmfMethod::PGD, NmfMethod::SCIPI}) {
    EXPECT_EQ(parse_nmf_method(to_string(m)), m);
  }
}

TEST(NmfSolve, MultiplicativeUpdatesMatchMatrixForm) {
  const LowRankNonneg lr = gen_lowrank_nonneg(2, 7, 6, 3);
  Rng rng(3);
  NmfInit init{rng.uniform_matrix(7, 3), rng.uniform_matrix(3, 6)};
  NmfOptions options;
  options.max_iter = 5;
  const NMFModel model = nmf_solve(lr.V, 3, NmfMethod::MU, init, options);
  Matrix W = init.W;
  Matrix H = init.H;
  for (int i = 0; i < 5; ++i) reference_mu(lr.V, W, H);
  EXPECT_LE(test::max_abs(model.W - W), 1e-12);
  EXPECT_LE(test::max_abs(model.H - H), 1e-12);
  EXPECT_EQ(model.kl_trace.size(), 6u);
  EXPECT_EQ(model.iterations, 5);
}

TEST(NmfSolve, SciPiMatchesSphereSolverPerColumn) {
  const LowRankNonneg lr = gen_lowrank_nonneg(4, 6, 5, 2);
  const NmfInit init = nmf_initialize(lr.V, 2, 9);
  NmfOptions options;
  options.max_iter = 1;
  options.sigma = 0.7;
  const NMFModel model = nmf_solve(lr.V, 2, NmfMethod::SCIPI, init, options);

  Matrix H = init.H;
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    H.col(j) = reference_scipi_column(init.W, lr.V.col(j), init.H.col(j), 0.7);
  }
  const Matrix Ht = H.transpose();
  Matrix W = init.W;
  for (Eigen::Index i = 0; i < W.rows(); ++i) {
    W.row(i) = reference_scipi_column(Ht, lr.V.row(i).transpose(), init.W.row(i).transpose(), 0.7)
                   .transpose();
  }
  EXPECT_LE(test::max_abs(model.H - H), 1e-11);
  EXPECT_LE(test::max_abs(model.W - W), 1e-11);
}

TEST(NmfSolve, MultiplicativeTraceIsMonotone) {
  Rng rng(5);
  const Matrix V = rng.uniform_matrix(8, 9);
  const NmfInit init = nmf_initialize(V, 3, 1);
  NmfOptions options;
  options.max_iter = 200;
  const NMFModel model = nmf_solve(V, 3, NmfMethod::MU, init, options);
  for (std::size_t k = 1; k < model.kl_trace.size(); ++k) {
    ASSERT_LE(model.kl_trace[k], model.kl_trace[k - 1] + 1e-12 * (1.0 + model.kl_trace[k - 1]));
  }
}

TEST(NmfSolve, AllMethodsDecreaseAndStayNonnegative) {
  const LowRankNonneg lr = gen_lowrank_nonneg(6, 12, 10, 3);
  const NmfInit init = nmf_initialize(lr.V, 3, 2);
  NmfOptions options;
  options.max_iter = 100;
  for (NmfMethod m : {NmfMethod::MU, NmfMethod::PGD, NmfMethod::SCIPI}) {
    const NMFModel model = nmf_solve(lr.V, 3, m, init, options);
    EXPECT_LT(model.kl_trace.back(), model.kl_trace.front()) << to_string(m);
    EXPECT_GE(model.W.minCoeff(), 0.0);
    EXPECT_GE(model.H.minCoeff(), 0.0);
    EXPECT_EQ(model.floor_hits, 0);
  }
  const NMFModel pgd = nmf_solve(lr.V, 3, NmfMethod::PGD, init, options);
  EXPECT_GT(pgd.pgd_step, 0.0);
}

TEST(NmfStationarity, ExactFactorizationIsStationary) {
  const LowRankNonneg lr = gen_lowrank_nonneg(8, 6, 7, 2);
  EXPECT_LE(nmf_stationarity(lr.V, lr.W, lr.H), 1e-12);
  Matrix H = lr.H;
  H(0, 0) *= 2.0;
  EXPECT_GT(nmf_stationarity(lr.V, lr.W, H), 1e-3);
}

TEST(NmfSolve, Validation) {
  const Matrix V = Matrix::Ones(3, 3);
  const NmfInit init = nmf_initialize(V, 2, 0);
  EXPECT_THROW(nmf_solve(V, 3, NmfMethod::MU, init), InputError);
  EXPECT_THROW(nmf_initialize(V, 0, 0), InputError);
  Matrix bad = V;
  bad(0, 0) = -1.0;
  EXPECT_THROW(nmf_initialize(bad, 2, 0), InputError);
  NmfOptions options;
  options.max_iter = -1;
  EXPECT_THROW(nmf_solve(V, 2, NmfMethod::MU, init, options), ConfigError);
  options.max_iter = 1;
  options.pgd_grid.clear();
  EXPECT_THROW(nmf_solve(V, 2, NmfMethod::PGD, init, options), ConfigError);
}

TEST(NmfInitialize, Deterministic) {
  Rng rng(1);
  const Matrix V = rng.uniform_matrix(5, 4);
  const NmfInit a = nmf_initialize(V, 2, 17);
  const NmfInit b = nmf_initialize(V, 2, 17);
  EXPECT_EQ(a.W, b.W);
  EXPECT_EQ(a.H, b.H);
  EXPECT_NE(nmf_initialize(V, 2, 18).W, a.W);
}

}  // namespace
}  // namespace scipi
