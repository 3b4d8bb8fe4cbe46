#include <cmath>

#include <Eigen/QR>

#include "scipi/data_io.hpp"
#include "scipi/error.hpp"
#include "scipi/random.hpp"

namespace scipi {

Matrix gen_orthogonal(std::uint64_t seed, Eigen::Index d) {
  if (d < 1) throw InputError("gen_orthogonal: dimension must be positive");
  Rng rng(seed);
  const Matrix G = rng.normal_matrix(d, d);
  const Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  }
  return Q;
}

Matrix gen_spectrum_matrix(std::uint64_t seed, Eigen::Index d, const Vector& eigenvalues) {
  if (eigenvalues.size() != d) {
    throw InputError("gen_spectrum_matrix: need exactly d eigenvalues");
  }
  if (!eigenvalues.allFinite()) throw InputError("gen_spectrum_matrix: eigenvalues must be finite");
  const Matrix Q = gen_orthogonal(seed, d);
  Matrix A = Q * eigenvalues.asDiagonal() * Q.transpose();
  return 0.5 * (A + A.transpose());
}

Vector leading_spectrum(Eigen::Index d, double l1, double l2) {
  if (d < 1) throw InputError("leading_spectrum: dimension must be positive");
  Vector ev(d);
  ev(0) = l1;
  for (Eigen::Index i = 1; i < d; ++i) {
    ev(i) = l2 * static_cast<double>(d - i) / static_cast<double>(d - 1);
  }
  return ev;
}

Matrix gen_mixture_design(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  if (n < 1 || d < 1) throw InputError("gen_mixture_design: n and d must be positive");
  Rng rng(seed);
  return rng.uniform_matrix(n, d, 0.1, 1.1);
}

LowRankNonneg gen_lowrank_nonneg(std::uint64_t seed, Eigen::Index n, Eigen::Index m,
                                 Eigen::Index K) {
  if (n < 1 || m < 1 || K < 1) throw InputError("gen_lowrank_nonneg: sizes must be positive");
  Rng rng(seed);
  LowRankNonneg out;
  out.W = rng.uniform_matrix(n, K);
  out.H = rng.uniform_matrix(K, m);
  out.V = out.W * out.H;
  return out;
}

GmmData gen_gmm_data(std::uint64_t seed, Eigen::Index n, Eigen::Index K, Eigen::Index dim,
                     double separation) {
  if (K < 1 || dim < 1) throw InputError("gen_gmm_data: K and dim must be positive");
  if (n < K) throw InputError("gen_gmm_data: need at least one sample per component");
  if (!(separation >= 0.0) || !std::isfinite(separation)) {
    throw InputError("gen_gmm_data: separation must be finite and nonnegative");
  }
  Eigen::Index side = 1;
  while (true) {
    double cells = 1.0;
    for (Eigen::Index j = 0; j < dim; ++j) cells *= static_cast<double>(side);
    if (cells >= static_cast<double>(K)) break;
    ++side;
  }

  Rng rng(seed);
  GmmData out;
  out.data = Matrix(n, dim);
  out.weights = Vector::Constant(K, 1.0 / static_cast<double>(K));
  Eigen::Index row = 0;
  for (Eigen::Index k = 0; k < K; ++k) {
    Vector mean(dim);
    Eigen::Index code = k;
    for (Eigen::Index j = dim - 1; j >= 0; --j) {
      mean(j) = separation * static_cast<double>(code % side);
      code /= side;
    }
    out.means.push_back(mean);
    out.covariances.push_back(Matrix::Identity(dim, dim));
    const Eigen::Index count = n / K + (k < n % K ? 1 : 0);
    for (Eigen::Index s = 0; s < count; ++s, ++row) {
      out.data.row(row) = (mean + rng.normal_vector(dim)).transpose();
      out.labels.push_back(static_cast<int>(k));
    }
  }
  return out;
}

Matrix whiten(const Matrix& X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n <= d) {
    throw InputError("whiten: need more samples than dimensions (n=" + std::to_string(n) +
                     ", d=" + std::to_string(d) + ")");
  }
  const Matrix centered = X.rowwise() - X.colwise().mean();
  const Matrix cov = centered.transpose() * centered / static_cast<double>(n);
  const SymEigResult eig = sym_eig(cov);
  const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
  if (!(top > 0.0) || !(eig.eigenvalues.minCoeff() > 1e-12 * top)) {
    throw InputError("whiten: data covariance is rank deficient");
  }
  // cov = V D^2 V^T, so V D^-1 V^T is its inverse square root.
  const Vector inv_sqrt = eig.eigenvalues.cwiseSqrt().cwiseInverse();
  const Matrix transform = eig.eigenvectors * inv_sqrt.asDiagonal() * eig.eigenvectors.transpose();
  return centered * transform;
}

IcaData gen_ica_data(std::uint64_t seed, Eigen::Index n, Eigen::Index d) {
  if (d < 1) throw InputError("gen_ica_data: dimension must be positive");
  if (n <= d) throw InputError("gen_ica_data: need more samples than sources");
  Rng rng(seed);
  Rng mixing_stream = rng.split();

  Matrix S(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) S(i, j) = rng.laplace(1.0 / std::sqrt(2.0));
  }
  // Exact decorrelation makes the true directions exactly orthonormal.
  S = whiten(S);

  IcaData out;
  out.sources = S;
  out.directions = gen_orthogonal(mixing_stream.next_u64(), d);
  out.W = whiten(S * out.directions.transpose());
  return out;
}

}  // namespace scipi
