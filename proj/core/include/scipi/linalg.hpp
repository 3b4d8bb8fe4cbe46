#pragma once

#include <Eigen/Dense>

namespace scipi {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Eigen-pairs of a symmetric matrix.
///
/// Eigenvalues are ordered by absolute value, largest first; ties are broken
/// by signed value (descending) and then by the original diagonal index.
/// Column i of `eigenvectors` pairs with `eigenvalues[i]`; each column is
/// normalized so that its largest-magnitude entry is positive.
struct SymEigResult {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Cyclic Jacobi eigensolver. Sweeps in fixed (p, q) row-major order until
/// the off-diagonal Frobenius norm drops below 1e-13 * ||A||_F. The input is
/// symmetrized as (A + A^T) / 2; asymmetry beyond 1e-8 (relative) or any
/// non-finite entry raises InputError.
SymEigResult sym_eig(const Matrix& A);

/// Spectral norm of H (I - x x^T) for symmetric H and unit x, computed as the
/// square root of the largest eigenvalue of (I - x x^T) H^2 (I - x x^T).
double projected_hessian_norm(const Matrix& H, const Vector& x);

/// Largest singular value of an arbitrary dense matrix.
double spectral_norm(const Matrix& A);

/// Euclidean projection onto {w >= 0, sum(w) = total} (sort-and-threshold).
Vector project_simplex(const Vector& v, double total = 1.0);

/// True when A is square and |A - A^T| <= tol entrywise.
bool is_symmetric(const Matrix& A, double tol);

}  // namespace scipi
