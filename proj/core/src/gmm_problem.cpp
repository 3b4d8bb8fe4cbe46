#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "scipi/error.hpp"
#include "scipi/gmm.hpp"

namespace scipi {

namespace {

void check_gmm_shape(const Matrix& data, int components, const char* who) {
  if (components < 1) throw InputError(std::string(who) + ": need at least one component");
  if (data.rows() < 1 || data.cols() < 1) throw InputError(std::string(who) + ": empty data");
  if (components >= data.rows()) {
    throw InputError(std::string(who) + ": need more samples than components (K=" +
                     std::to_string(components) + ", n=" + std::to_string(data.rows()) + ")");
  }
  if (!data.allFinite()) throw InputError(std::string(who) + ": data contains non-finite entries");
}

// log sum_k exp(a_k), with the empty/all -inf case mapped to -inf.
double log_sum_exp(const Eigen::Ref<const Eigen::RowVectorXd>& a) {
  const double top = a.maxCoeff();
  if (!std::isfinite(top)) return top;
  return top + std::log((a.array() - top).exp().sum());
}

// Row-wise log sum_k w_k exp(logN_ik), plus the weighted posterior matrix.
Vector log_mixture(const Matrix& log_dens, const Vector& weights, Matrix* posterior) {
  const Eigen::Index n = log_dens.rows();
  Matrix shifted = log_dens;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    const double lw = weights(k) > 0.0 ? std::log(weights(k))
                                       : -std::numeric_limits<double>::infinity();
    shifted.col(k).array() += lw;
  }
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = log_sum_exp(shifted.row(i));
  if (posterior) {
    *posterior = Matrix(n, weights.size());
    for (Eigen::Index i = 0; i < n; ++i) {
      posterior->row(i) = (shifted.row(i).array() - out(i)).exp().matrix();
    }
  }
  return out;
}

}  // namespace

Eigen::Index gmm_free_dimension(Eigen::Index components, Eigen::Index q) {
  return components * (q + q * q);
}

Vector gmm_pack(const std::vector<Vector>& means, const std::vector<Matrix>& covariances) {
  if (means.empty() || means.size() != covariances.size()) {
    throw InputError("gmm_pack: means and covariances must be non-empty and of equal count");
  }
  const Eigen::Index q = means.front().size();
  const auto K = static_cast<Eigen::Index>(means.size());
  Vector y(gmm_free_dimension(K, q));
  Eigen::Index at = 0;
  for (std::size_t k = 0; k < means.size(); ++k) {
    if (means[k].size() != q || covariances[k].rows() != q || covariances[k].cols() != q) {
      throw InputError("gmm_pack: inconsistent component shapes");
    }
    y.segment(at, q) = means[k];
    at += q;
    y.segment(at, q * q) = covariances[k].reshaped();
    at += q * q;
  }
  return y;
}

void gmm_unpack(const Vector& y, Eigen::Index components, Eigen::Index q,
                std::vector<Vector>& means, std::vector<Matrix>& covariances) {
  if (y.size() != gmm_free_dimension(components, q)) {
    throw InputError("gmm_unpack: packed vector has wrong size");
  }
  means.assign(static_cast<std::size_t>(components), Vector());
  covariances.assign(static_cast<std::size_t>(components), Matrix());
  Eigen::Index at = 0;
  for (Eigen::Index k = 0; k < components; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    means[kk] = y.segment(at, q);
    at += q;
    const Matrix raw = y.segment(at, q * q).reshaped(q, q);
    covariances[kk] = 0.5 * (raw + raw.transpose());
    at += q * q;
  }
}

Matrix gmm_log_densities(const Matrix& data, const std::vector<Vector>& means,
                         const std::vector<Matrix>& covariances) {
  const Eigen::Index n = data.rows();
  const Eigen::Index q = data.cols();
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  Matrix out(n, static_cast<Eigen::Index>(means.size()));
  for (std::size_t k = 0; k < means.size(); ++k) {
    const Eigen::LLT<Matrix> chol(covariances[k]);
    const Matrix lower = chol.matrixL();
    if (chol.info() != Eigen::Success || !(lower.diagonal().array() > 0.0).all()) {
      throw NumericError("gmm: covariance of component " + std::to_string(k) +
                         " is not positive definite");
    }
    const double log_det = 2.0 * lower.diagonal().array().log().sum();
    const Matrix centered = (data.rowwise() - means[k].transpose()).transpose();
    const Matrix solved = chol.matrixL().solve(centered);
    out.col(static_cast<Eigen::Index>(k)) =
        -0.5 * (solved.colwise().squaredNorm().transpose().array() + log_det +
                static_cast<double>(q) * log_2pi);
  }
  return out;
}

double gmm_log_likelihood(const Matrix& data, const GmmParameters& params) {
  const Matrix log_dens = gmm_log_densities(data, params.means, params.covariances);
  return log_mixture(log_dens, params.weights, nullptr).sum();
}

Matrix gmm_responsibilities(const Matrix& log_densities, const Vector& weights) {
  Matrix posterior;
  const Vector log_s = log_mixture(log_densities, weights, &posterior);
  if (!log_s.allFinite()) throw NumericError("gmm: a sample has zero mixture density");
  return posterior;
}

void gmm_m_step(const Matrix& data, const Matrix& responsibilities, double cov_floor,
                std::vector<Vector>& means, std::vector<Matrix>& covariances) {
  const Eigen::Index n = data.rows();
  const Eigen::Index q = data.cols();
  const Eigen::Index K = responsibilities.cols();
  means.assign(static_cast<std::size_t>(K), Vector());
  covariances.assign(static_cast<std::size_t>(K), Matrix());
  for (Eigen::Index k = 0; k < K; ++k) {
    const Vector r = responsibilities.col(k);
    const double mass = r.sum();
    if (!(mass >= 1e-12 * static_cast<double>(n))) {
      throw NumericError("gmm: component " + std::to_string(k) + " collapsed (weight " +
                         std::to_string(mass / static_cast<double>(n)) + ")");
    }
    const Vector mean = data.transpose() * r / mass;
    const Matrix centered = data.rowwise() - mean.transpose();
    Matrix cov = centered.transpose() * r.asDiagonal() * centered / mass;
    cov = 0.5 * (cov + cov.transpose());
    cov += cov_floor * Matrix::Identity(q, q);
    means[static_cast<std::size_t>(k)] = mean;
    covariances[static_cast<std::size_t>(k)] = cov;
  }
}

PartialProblem make_gmm(const Matrix& data, int components, double cov_floor) {
  check_gmm_shape(data, components, "make_gmm");
  if (!(cov_floor > 0.0)) throw InputError("make_gmm: cov_floor must be positive");

  auto shared = std::make_shared<const Matrix>(data);
  const Eigen::Index K = components;
  const Eigen::Index q = data.cols();
  const double n = static_cast<double>(data.rows());

  // Evaluates log densities at y and the per-sample log mixture for weights x^2.
  struct Eval {
    std::vector<Vector> means;
    std::vector<Matrix> covs;
    Matrix log_dens;
    Matrix posterior;  // x_k^2 N_ik / s_i
    Vector log_s;
  };
  auto evaluate = [shared, K, q](const Vector& x, const Vector& y, bool need_posterior) {
    Eval e;
    gmm_unpack(y, K, q, e.means, e.covs);
    e.log_dens = gmm_log_densities(*shared, e.means, e.covs);
    e.log_s = log_mixture(e.log_dens, x.cwiseAbs2(), need_posterior ? &e.posterior : nullptr);
    if (!e.log_s.allFinite()) throw DomainError("gmm: log-likelihood undefined at this point");
    return e;
  };

  PartialProblem::Definition def;
  def.name = "gmm";
  def.dim_x = K;
  def.dim_y = gmm_free_dimension(K, q);
  def.kind_x = InvarianceKind::additive(std::sqrt(std::numbers::e));
  def.value = [evaluate, n](const Vector& x, const Vector& y) {
    return evaluate(x, y, false).log_s.sum() / n;
  };
  def.gradient_x = [evaluate, n](const Vector& x, const Vector& y) -> Vector {
    const Eval e = evaluate(x, y, false);
    // d/dx_k log s_i = 2 x_k N_ik / s_i
    Vector g(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      g(k) = 2.0 * x(k) * (e.log_dens.col(k) - e.log_s).array().exp().sum() / n;
    }
    return g;
  };
  def.gradient_y = [evaluate, shared, K, q, n](const Vector& x, const Vector& y) -> Vector {
    const Eval e = evaluate(x, y, true);
    Vector g(gmm_free_dimension(K, q));
    Eigen::Index at = 0;
    for (Eigen::Index k = 0; k < K; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const Eigen::LLT<Matrix> chol(e.covs[kk]);
      const Matrix inv = chol.solve(Matrix::Identity(q, q));
      const Vector r = e.posterior.col(k);
      const Matrix centered = shared->rowwise() - e.means[kk].transpose();
      const Matrix z = centered * inv;  // rows: Sigma^{-1} (d_i - mu)
      g.segment(at, q) = z.transpose() * r / n;
      at += q;
      const Matrix scatter = z.transpose() * r.asDiagonal() * z;
      const Matrix grad_cov = 0.5 * (scatter - r.sum() * inv) / n;
      g.segment(at, q * q) = grad_cov.reshaped();
      at += q * q;
    }
    return g;
  };
  def.exact_y_step = [shared, K, q, cov_floor](const Vector& x, const Vector& y) -> Vector {
    std::vector<Vector> means;
    std::vector<Matrix> covs;
    gmm_unpack(y, K, q, means, covs);
    const Vector weights = x.cwiseAbs2() / x.squaredNorm();
    const Matrix resp =
        gmm_responsibilities(gmm_log_densities(*shared, means, covs), weights);
    gmm_m_step(*shared, resp, cov_floor, means, covs);
    return gmm_pack(means, covs);
  };
  return PartialProblem(std::move(def));
}

}  // namespace scipi
