#include "scipi/problems.hpp"

#include <cmath>
#include <numbers>

#include "scipi/error.hpp"

namespace scipi {

namespace {

void require_nonempty(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) throw InputError(std::string(what) + ": empty matrix");
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entry");
}

// sum_j w_j log(floor + sum_k L_jk x_k^2). Rows with zero weight are expected
// to have been dropped by the caller.
ScaleInvariantProblem make_weighted_mixture(std::string name, Matrix L, Vector weights,
                                            double floor, InvarianceKind kind) {
  struct Data {
    Matrix L;
    Vector w;
    double floor;
  };
  auto data = std::make_shared<const Data>(Data{std::move(L), std::move(weights), floor});
  const Eigen::Index d = data->L.cols();

  auto support = [data](const Vector& x) {
    Vector s = (data->L * x.cwiseAbs2()).array() + data->floor;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      if (!(s[j] > 0.0)) {
        throw DomainError("mixture: zero likelihood in row " + std::to_string(j) +
                          " (log of 0 at this x)");
      }
    }
    return s;
  };

  ScaleInvariantProblem::Definition def;
  def.name = std::move(name);
  def.dimension = d;
  def.kind = kind;
  def.value = [data, support](const Vector& x) {
    const Vector s = support(x);
    return data->w.dot(s.array().log().matrix());
  };
  def.gradient = [data, support](const Vector& x) -> Vector {
    const Vector s = support(x);
    const Vector g = data->L.transpose() * data->w.cwiseQuotient(s);
    return 2.0 * x.cwiseProduct(g);
  };
  def.hessian = [data, support](const Vector& x) -> Matrix {
    const Vector s = support(x);
    const Vector g = data->L.transpose() * data->w.cwiseQuotient(s);
    const Matrix M = data->L * x.asDiagonal();
    const Vector row_weight = data->w.cwiseQuotient(s.cwiseAbs2());
    Matrix H = -4.0 * (M.transpose() * row_weight.asDiagonal() * M);
    H.diagonal() += 2.0 * g;
    return 0.5 * (H + H.transpose());
  };
  return ScaleInvariantProblem(std::move(def));
}

}  // namespace

ScaleInvariantProblem make_quadratic(const Matrix& A) {
  require_nonempty(A, "make_quadratic");
  if (A.rows() != A.cols()) throw InputError("make_quadratic: matrix must be square");
  if (!is_symmetric(A, 1e-10)) throw InputError("make_quadratic: matrix must be symmetric");

  auto shared = std::make_shared<const Matrix>(A);
  ScaleInvariantProblem::Definition def;
  def.name = "quadratic";
  def.dimension = A.rows();
  def.kind = InvarianceKind::multiplicative(2.0);
  def.value = [shared](const Vector& x) { return 0.5 * x.dot(*shared * x); };
  def.gradient = [shared](const Vector& x) -> Vector { return *shared * x; };
  def.hessian = [shared](const Vector&) -> Matrix { return *shared; };
  return ScaleInvariantProblem(std::move(def));
}

ScaleInvariantProblem make_lp_pca(const Matrix& data, double p) {
  require_nonempty(data, "make_lp_pca");
  if (!(p > 2.0) || !std::isfinite(p)) {
    throw UnsupportedError(
        "make_lp_pca: only p > 2 is supported; |t|^p is not twice continuously "
        "differentiable at t = 0 for p <= 2");
  }
  auto shared = std::make_shared<const Matrix>(data);
  const double n = static_cast<double>(data.rows());

  ScaleInvariantProblem::Definition def;
  def.name = "lp-pca";
  def.dimension = data.cols();
  def.kind = InvarianceKind::multiplicative(p);
  def.value = [shared, p, n](const Vector& x) {
    const Vector t = *shared * x;
    return t.array().abs().pow(p).sum() / n;
  };
  def.gradient = [shared, p, n](const Vector& x) -> Vector {
    const Vector t = *shared * x;
    const Vector weight = t.array().abs().pow(p - 1.0) * t.array().sign();
    return (p / n) * (shared->transpose() * weight);
  };
  return ScaleInvariantProblem(std::move(def));
}

ScaleInvariantProblem make_mixture(const Matrix& L, double floor) {
  require_nonempty(L, "make_mixture");
  if (!(floor >= 0.0)) throw InputError("make_mixture: floor must be nonnegative");
  if ((L.array() < 0.0).any()) throw InputError("make_mixture: design matrix must be nonnegative");
  if (floor == 0.0) {
    for (Eigen::Index j = 0; j < L.rows(); ++j) {
      if (!(L.row(j).maxCoeff() > 0.0)) {
        throw InputError("make_mixture: row " + std::to_string(j) +
                         " is all zero (log 0 reachable); pass a positive floor");
      }
    }
  }
  const Eigen::Index n = L.rows();
  const Vector weights = Vector::Constant(n, 1.0 / static_cast<double>(n));
  const InvarianceKind kind = floor == 0.0 ? InvarianceKind::additive(std::sqrt(std::numbers::e))
                                           : InvarianceKind::none();
  return make_weighted_mixture("mixture", L, weights, floor, kind);
}

ScaleInvariantProblem make_kurtosis_ica(const Matrix& W) {
  require_nonempty(W, "make_kurtosis_ica");
  auto shared = std::make_shared<const Matrix>(W);
  const double n = static_cast<double>(W.rows());

  ScaleInvariantProblem::Definition def;
  def.name = "ica";
  def.dimension = W.cols();
  def.kind = InvarianceKind::sum_of_scale_invariant();
  def.value = [shared, n](const Vector& x) {
    const Eigen::ArrayXd t = *shared * x;
    return (t.pow(4) - 3.0).square().sum() / n;
  };
  def.gradient = [shared, n](const Vector& x) -> Vector {
    const Eigen::ArrayXd t = *shared * x;
    const Vector weight = (t.pow(4) - 3.0) * t.cube();
    return (8.0 / n) * (shared->transpose() * weight);
  };
  return ScaleInvariantProblem(std::move(def));
}

Vector KlnmfSubproblem::to_h(const Vector& x) const {
  const double norm2 = x.squaredNorm();
  if (!(norm2 > 0.0)) throw InputError("to_h: zero vector");
  return (total / norm2) * x.cwiseAbs2().cwiseQuotient(column_sums);
}

Vector KlnmfSubproblem::to_sphere(const Vector& h) const {
  if ((h.array() < 0.0).any()) throw InputError("to_sphere: h must be nonnegative");
  const Vector hbar = h.cwiseProduct(column_sums) / total;
  const double sum = hbar.sum();
  if (!(sum > 0.0)) throw InputError("to_sphere: h has no mass");
  return (hbar / sum).cwiseSqrt();
}

KlnmfSubproblem make_klnmf_subproblem(const Matrix& W, const Vector& v) {
  require_nonempty(W, "make_klnmf_subproblem");
  if (W.rows() != v.size()) throw InputError("make_klnmf_subproblem: W and v disagree in length");
  if ((W.array() < 0.0).any() || (v.array() < 0.0).any()) {
    throw InputError("make_klnmf_subproblem: W and v must be nonnegative");
  }
  const Vector column_sums = W.colwise().sum().transpose();
  for (Eigen::Index k = 0; k < column_sums.size(); ++k) {
    if (!(column_sums[k] > 0.0)) {
      throw InputError("make_klnmf_subproblem: column " + std::to_string(k) + " of W sums to zero");
    }
  }
  const double total = v.sum();
  if (!(total > 0.0)) throw InputError("make_klnmf_subproblem: v must have positive sum");

  // Keep only rows that carry weight; rows with v_i = 0 do not enter the objective.
  std::vector<Eigen::Index> rows;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) rows.push_back(i);
  }
  Matrix L(static_cast<Eigen::Index>(rows.size()), W.cols());
  Vector weights(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = rows[r];
    const auto out = static_cast<Eigen::Index>(r);
    L.row(out) = W.row(i).cwiseQuotient(column_sums.transpose());
    weights[out] = v[i] / total;
    if (!(L.row(out).maxCoeff() > 0.0)) {
      throw InputError("make_klnmf_subproblem: row " + std::to_string(i) +
                       " of W is zero where v > 0 (KL undefined)");
    }
  }
  return KlnmfSubproblem{
      make_weighted_mixture("klnmf-sub", std::move(L), std::move(weights), 0.0,
                            InvarianceKind::additive(std::sqrt(std::numbers::e))),
      column_sums, total};
}

ScaleInvariantProblem apply_shift(const ScaleInvariantProblem& problem, double sigma) {
  if (sigma == 0.0) return problem;
  const ScaleInvariantProblem base = problem;
  const bool keeps_kind = base.kind().is_multiplicative() && base.kind().degree() == 2.0;

  ScaleInvariantProblem::Definition def;
  def.name = base.name() + "+shift";
  def.dimension = base.dimension();
  def.kind = keeps_kind ? base.kind() : InvarianceKind::none();
  def.value = [base, sigma](const Vector& x) { return base.value(x) + sigma * x.squaredNorm(); };
  def.gradient = [base, sigma](const Vector& x) -> Vector {
    return base.gradient(x) + 2.0 * sigma * x;
  };
  def.hessian = [base, sigma](const Vector& x) -> Matrix {
    Matrix H = base.hessian(x);
    H.diagonal().array() += 2.0 * sigma;
    return H;
  };
  return ScaleInvariantProblem(std::move(def));
}

BlockProblem make_separable_block(const Matrix& A, const Matrix& B) {
  if (!is_symmetric(A, 1e-10) || !is_symmetric(B, 1e-10)) {
    throw InputError("make_separable_block: matrices must be square and symmetric");
  }
  auto a = std::make_shared<const Matrix>(A);
  auto b = std::make_shared<const Matrix>(B);
  BlockProblem::Definition def;
  def.name = "separable-block";
  def.dim_x = A.rows();
  def.dim_y = B.rows();
  def.value = [a, b](const Vector& x, const Vector& y) {
    return 0.5 * x.dot(*a * x) + 0.5 * y.dot(*b * y);
  };
  def.gradient_x = [a](const Vector& x, const Vector&) -> Vector { return *a * x; };
  def.gradient_y = [b](const Vector&, const Vector& y) -> Vector { return *b * y; };
  def.hessian_xx = [a](const Vector&, const Vector&) -> Matrix { return *a; };
  def.hessian_yy = [b](const Vector&, const Vector&) -> Matrix { return *b; };
  def.hessian_yx = [a, b](const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(b->rows(), a->rows());
  };
  return BlockProblem(std::move(def));
}

BlockProblem make_bilinear_block(const Matrix& C) {
  if (C.size() == 0 || !C.allFinite()) throw InputError("make_bilinear_block: bad matrix");
  auto c = std::make_shared<const Matrix>(C);
  BlockProblem::Definition def;
  def.name = "bilinear-block";
  def.dim_x = C.rows();
  def.dim_y = C.cols();
  def.kind_x = InvarianceKind::multiplicative(1.0);
  def.kind_y = InvarianceKind::multiplicative(1.0);
  def.value = [c](const Vector& x, const Vector& y) { return x.dot(*c * y); };
  def.gradient_x = [c](const Vector&, const Vector& y) -> Vector { return *c * y; };
  def.gradient_y = [c](const Vector& x, const Vector&) -> Vector { return c->transpose() * x; };
  def.hessian_xx = [c](const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(c->rows(), c->rows());
  };
  def.hessian_yy = [c](const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(c->cols(), c->cols());
  };
  def.hessian_yx = [c](const Vector&, const Vector&) -> Matrix { return c->transpose(); };
  return BlockProblem(std::move(def));
}

BlockProblem make_product_block(const Matrix& A, const Matrix& B) {
  if (!is_symmetric(A, 1e-10) || !is_symmetric(B, 1e-10)) {
    throw InputError("make_product_block: matrices must be square and symmetric");
  }
  auto a = std::make_shared<const Matrix>(A);
  auto b = std::make_shared<const Matrix>(B);
  BlockProblem::Definition def;
  def.name = "product-block";
  def.dim_x = A.rows();
  def.dim_y = B.rows();
  def.kind_x = InvarianceKind::multiplicative(2.0);
  def.kind_y = InvarianceKind::multiplicative(2.0);
  def.value = [a, b](const Vector& x, const Vector& y) {
    return 0.5 * x.dot(*a * x) * y.dot(*b * y);
  };
  def.gradient_x = [a, b](const Vector& x, const Vector& y) -> Vector {
    return y.dot(*b * y) * (*a * x);
  };
  def.gradient_y = [a, b](const Vector& x, const Vector& y) -> Vector {
    return x.dot(*a * x) * (*b * y);
  };
  def.hessian_xx = [a, b](const Vector&, const Vector& y) -> Matrix { return y.dot(*b * y) * *a; };
  def.hessian_yy = [a, b](const Vector& x, const Vector&) -> Matrix { return x.dot(*a * x) * *b; };
  def.hessian_yx = [a, b](const Vector& x, const Vector& y) -> Matrix {
    return 2.0 * (*b * y) * (*a * x).transpose();
  };
  return BlockProblem(std::move(def));
}

PartialProblem make_coupled_quadratic_partial(const Matrix& A, const Vector& curvature,
                                              const Vector& y0,
                                              const std::vector<Matrix>& couplings) {
  if (!is_symmetric(A, 1e-10)) throw InputError("coupled partial: A must be symmetric");
  if (curvature.size() == 0 || curvature.size() != y0.size()) {
    throw InputError("coupled partial: curvature and y0 must have equal positive length");
  }
  if (!(curvature.minCoeff() > 0.0)) throw InputError("coupled partial: curvature must be positive");
  if (!couplings.empty() && static_cast<Eigen::Index>(couplings.size()) != y0.size()) {
    throw InputError("coupled partial: need one coupling matrix per y coordinate");
  }
  for (const Matrix& B : couplings) {
    if (B.rows() != A.rows() || !is_symmetric(B, 1e-10)) {
      throw InputError("coupled partial: coupling matrices must match A and be symmetric");
    }
  }

  struct Data {
    Matrix A;
    Vector D;
    Vector y0;
    std::vector<Matrix> B;
  };
  auto data = std::make_shared<const Data>(Data{A, curvature, y0, couplings});

  auto effective = [data](const Vector& delta) {
    Matrix M = data->A;
    for (std::size_t j = 0; j < data->B.size(); ++j) {
      M += delta[static_cast<Eigen::Index>(j)] * data->B[j];
    }
    return M;
  };

  PartialProblem::Definition def;
  def.name = "coupled-quadratic-partial";
  def.dim_x = A.rows();
  def.dim_y = y0.size();
  def.kind_x = InvarianceKind::multiplicative(2.0);
  def.mu = curvature.minCoeff();
  def.lipschitz = curvature.maxCoeff();
  def.value = [data, effective](const Vector& x, const Vector& y) {
    const Vector delta = y - data->y0;
    const double penalty = delta.dot(data->D.cwiseProduct(delta));
    return 0.5 * x.dot(effective(delta) * x) - 0.5 * x.squaredNorm() * penalty;
  };
  def.gradient_x = [data, effective](const Vector& x, const Vector& y) -> Vector {
    const Vector delta = y - data->y0;
    const double penalty = delta.dot(data->D.cwiseProduct(delta));
    return effective(delta) * x - penalty * x;
  };
  def.gradient_y = [data](const Vector& x, const Vector& y) -> Vector {
    const Vector delta = y - data->y0;
    Vector g = -x.squaredNorm() * data->D.cwiseProduct(delta);
    for (std::size_t j = 0; j < data->B.size(); ++j) {
      g[static_cast<Eigen::Index>(j)] += 0.5 * x.dot(data->B[j] * x);
    }
    return g;
  };
  def.hessian_xx = [data, effective](const Vector&, const Vector& y) -> Matrix {
    const Vector delta = y - data->y0;
    Matrix H = effective(delta);
    H.diagonal().array() -= delta.dot(data->D.cwiseProduct(delta));
    return H;
  };
  def.hessian_yx = [data](const Vector& x, const Vector& y) -> Matrix {
    const Vector delta = y - data->y0;
    Matrix J = -2.0 * data->D.cwiseProduct(delta) * x.transpose();
    for (std::size_t j = 0; j < data->B.size(); ++j) {
      J.row(static_cast<Eigen::Index>(j)) += (data->B[j] * x).transpose();
    }
    return J;
  };
  return PartialProblem(std::move(def));
}

}  // namespace scipi
