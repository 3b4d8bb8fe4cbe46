#include "scipi/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "scipi/error.hpp"

namespace scipi {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& A) {
  double sum = 0.0;
  const Eigen::Index d = A.rows();
  for (Eigen::Index p = 0; p < d; ++p) {
    for (Eigen::Index q = p + 1; q < d; ++q) {
      sum += 2.0 * A(p, q) * A(p, q);
    }
  }
  return std::sqrt(sum);
}

// One Jacobi rotation annihilating A(p, q). Updates A in place and
// accumulates the rotation into V.
void rotate(Matrix& A, Matrix& V, Eigen::Index p, Eigen::Index q) {
  const double apq = A(p, q);
  const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Eigen::Index d = A.rows();

  for (Eigen::Index k = 0; k < d; ++k) {
    if (k == p || k == q) continue;
    const double akp = A(k, p);
    const double akq = A(k, q);
    A(k, p) = A(p, k) = c * akp - s * akq;
    A(k, q) = A(q, k) = s * akp + c * akq;
  }
  A(p, p) -= t * apq;
  A(q, q) += t * apq;
  A(p, q) = A(q, p) = 0.0;

  for (Eigen::Index k = 0; k < d; ++k) {
    const double vkp = V(k, p);
    const double vkq = V(k, q);
    V(k, p) = c * vkp - s * vkq;
    V(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

bool is_symmetric(const Matrix& A, double tol) {
  if (A.rows() != A.cols()) return false;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < A.cols(); ++j) {
      if (std::abs(A(i, j) - A(j, i)) > tol) return false;
    }
  }
  return true;
}

SymEigResult sym_eig(const Matrix& A) {
  if (A.rows() != A.cols()) throw InputError("sym_eig: matrix must be square");
  if (!A.allFinite()) throw InputError("sym_eig: non-finite entry");
  const Eigen::Index d = A.rows();
  const double scale = A.norm();
  if (!is_symmetric(A, 1e-8 * std::max(1.0, scale))) {
    throw InputError("sym_eig: matrix is not symmetric");
  }

  Matrix work = 0.5 * (A + A.transpose());
  Matrix V = Matrix::Identity(d, d);
  const double tol = 1e-13 * scale;

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(work) <= tol) break;
    for (Eigen::Index p = 0; p < d; ++p) {
      for (Eigen::Index q = p + 1; q < d; ++q) {
        if (work(p, q) != 0.0) rotate(work, V, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double la = work(a, a);
    const double lb = work(b, b);
    if (std::abs(la) != std::abs(lb)) return std::abs(la) > std::abs(lb);
    return la > lb;
  });

  SymEigResult result{Vector(d), Matrix(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    result.eigenvalues[i] = work(src, src);
    Vector v = V.col(src);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v[pivot] < 0.0) v = -v;
    result.eigenvectors.col(i) = v;
  }
  return result;
}

double projected_hessian_norm(const Matrix& H, const Vector& x) {
  if (H.rows() != H.cols() || H.rows() != x.size()) {
    throw InputError("projected_hessian_norm: shape mismatch");
  }
  const Eigen::Index d = x.size();
  const Matrix P = Matrix::Identity(d, d) - x * x.transpose();
  const Matrix HP = H * P;
  Matrix B = HP.transpose() * HP;
  B = 0.5 * (B + B.transpose());
  const SymEigResult eig = sym_eig(B);
  return std::sqrt(std::max(0.0, eig.eigenvalues.maxCoeff()));
}

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Matrix gram = A.cols() <= A.rows() ? Matrix(A.transpose() * A) : Matrix(A * A.transpose());
  gram = 0.5 * (gram + gram.transpose());
  const SymEigResult eig = sym_eig(gram);
  return std::sqrt(std::max(0.0, eig.eigenvalues.maxCoeff()));
}

Vector project_simplex(const Vector& v, double total) {
  if (!(total > 0.0)) throw InputError("project_simplex: total must be positive");
  const Eigen::Index d = v.size();
  if (d == 0) throw InputError("project_simplex: empty vector");

  std::vector<double> u(v.data(), v.data() + d);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double threshold = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) {
    cumulative += u[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - total) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - candidate > 0.0) threshold = candidate;
  }

  Vector w = (v.array() - threshold).cwiseMax(0.0);
  const double sum = w.sum();
  if (sum > 0.0) w *= total / sum;
  return w;
}

}  // namespace scipi
