#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scipi/linalg.hpp"

namespace scipi {

/// Dense inputs larger than this many entries are rejected.
inline constexpr Eigen::Index kMaxDenseEntries = 10'000'000;

/// Comma-separated numbers, one row per line. Blank lines are skipped; with
/// `header` the first line is skipped. Errors carry the 1-based line number.
Matrix load_dense_csv(const std::string& path, bool header = false);
Matrix parse_dense_csv(std::istream& in, bool header = false);
void write_dense_csv(std::ostream& out, const Matrix& M);

/// Matrix Market exchange format: `coordinate` or `array`, field `real` or
/// `integer`, symmetry `general` or `symmetric` (the stored lower triangle is
/// mirrored). Repeated coordinate entries are summed.
Matrix load_matrix_market(const std::string& path);
Matrix parse_matrix_market(std::istream& in);

enum class MatrixMarketLayout { Array, Coordinate };
/// Writes with 17 significant digits. With `symmetric`, only the lower
/// triangle is stored and M must be symmetric.
void write_matrix_market(std::ostream& out, const Matrix& M,
                         MatrixMarketLayout layout = MatrixMarketLayout::Array,
                         bool symmetric = false);
void save_matrix_market(const std::string& path, const Matrix& M,
                        MatrixMarketLayout layout = MatrixMarketLayout::Array,
                        bool symmetric = false);

/// Named synthetic dataset: `generator:key=value,...`, e.g. "spectrum:d=50,l1=1,l2=0.9".
struct DatasetSpec {
  std::string generator;
  std::uint64_t seed = 0;
  std::map<std::string, double> params;
  std::string note;

  static DatasetSpec parse(const std::string& text, std::uint64_t seed = 0);
  double get(const std::string& key, double fallback) const;
  /// Integer parameter; throws InputError if present but not a whole number
  /// or below `min_value`.
  Eigen::Index get_index(const std::string& key, Eigen::Index fallback,
                         Eigen::Index min_value = 1) const;
  std::string to_string() const;
};

/// Q diag(eigenvalues) Q^T with Q from the QR factorization of a seeded
/// Gaussian matrix (columns sign-fixed so R has a positive diagonal).
Matrix gen_spectrum_matrix(std::uint64_t seed, Eigen::Index d, const Vector& eigenvalues);
/// Orthogonal factor used by gen_spectrum_matrix.
Matrix gen_orthogonal(std::uint64_t seed, Eigen::Index d);
/// (l1, l2, l2 (d-2)/(d-1), ..., l2 / (d-1)): a leading pair followed by a
/// linear tail below l2.
Vector leading_spectrum(Eigen::Index d, double l1, double l2);

/// n x d design with entries Uniform(0.1, 1.1).
Matrix gen_mixture_design(std::uint64_t seed, Eigen::Index n, Eigen::Index d);

struct LowRankNonneg {
  Matrix V;
  Matrix W;
  Matrix H;
};
/// V = W H with W (n x K) and H (K x m) Uniform(0, 1).
LowRankNonneg gen_lowrank_nonneg(std::uint64_t seed, Eigen::Index n, Eigen::Index m,
                                 Eigen::Index K);

struct GmmData {
  Matrix data;
  Vector weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;
  std::vector<int> labels;
};
/// Equal-weight mixture with identity covariances. Component k sits at
/// separation * g_k, where g_k enumerates the integer grid {0, .., m-1}^dim
/// (m = ceil(K^(1/dim))) in lexicographic order; samples are grouped by component.
GmmData gen_gmm_data(std::uint64_t seed, Eigen::Index n, Eigen::Index K, Eigen::Index dim,
                     double separation);

/// Centers the rows of X and applies W = X V D^-1 V^T, where X^T X / n = V D^2 V^T,
/// so that W^T W = n V V^T. Throws InputError when X^T X is numerically singular.
Matrix whiten(const Matrix& X);

struct IcaData {
  /// Whitened observations, n x d.
  Matrix W;
  /// True unmixing directions as orthonormal columns.
  Matrix directions;
  Matrix sources;
};
/// Unit-variance Laplace sources (decorrelated exactly), a random orthogonal
/// mixing, then centering and whitening.
IcaData gen_ica_data(std::uint64_t seed, Eigen::Index n, Eigen::Index d);

}  // namespace scipi
