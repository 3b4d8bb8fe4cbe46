#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <vector>

#include "scipi/linalg.hpp"
#include "scipi/random.hpp"

namespace scipi::test {

/// FNV-1a over the raw IEEE-754 bytes of every entry, column-major.
inline std::uint64_t fnv1a(const Matrix& M) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (Eigen::Index j = 0; j < M.cols(); ++j) {
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
      unsigned char bytes[sizeof(double)];
      const double v = M(i, j);
      std::memcpy(bytes, &v, sizeof v);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ULL;
      }
    }
  }
  return h;
}

inline Matrix random_symmetric(Rng& rng, Eigen::Index d) {
  const Matrix G = rng.normal_matrix(d, d);
  return (G + G.transpose()) / 2.0;
}

inline Matrix random_psd(Rng& rng, Eigen::Index d) {
  const Matrix G = rng.normal_matrix(d, d);
  return G * G.transpose();
}

/// Projection onto {w >= 0, sum w = total} by enumerating every support set:
/// on a support S the projection is v_S - (sum v_S - total) / |S|, kept only
/// if it is nonnegative. The closest feasible candidate wins.
inline Vector brute_force_simplex(const Vector& v, double total) {
  const auto d = static_cast<int>(v.size());
  Vector best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    double sum = 0.0;
    int count = 0;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) {
        sum += v[i];
        ++count;
      }
    }
    const double shift = (sum - total) / count;
    Vector w = Vector::Zero(d);
    bool feasible = true;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) {
        w[i] = v[i] - shift;
        if (w[i] < 0.0) feasible = false;
      }
    }
    if (!feasible) continue;
    const double dist = (w - v).squaredNorm();
    if (dist < best_dist) {
      best_dist = dist;
      best = w;
    }
  }
  return best;
}

inline double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace scipi::test
