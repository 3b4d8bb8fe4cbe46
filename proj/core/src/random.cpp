#include "scipi/random.hpp"

#include <cmath>
#include <numbers>

namespace scipi {

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // 1 - u lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::laplace(double scale) {
  const double u = uniform() - 0.5;
  const double magnitude = -scale * std::log(1.0 - 2.0 * std::abs(u));
  return u < 0.0 ? -magnitude : magnitude;
}

Vector Rng::normal_vector(Eigen::Index d) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = normal();
  return v;
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal();
  }
  return m;
}

Matrix Rng::uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  }
  return m;
}

Vector Rng::unit_sphere(Eigen::Index d) {
  Vector v = normal_vector(d);
  double norm = v.norm();
  while (norm == 0.0) {
    v = normal_vector(d);
    norm = v.norm();
  }
  return v / norm;
}

Rng Rng::derive(std::uint64_t seed, std::string_view purpose) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : purpose) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  Rng mixer(seed ^ h);
  return Rng(mixer.next_u64());
}

Rng Rng::split() {
  // Mix once more so parent and child streams do not overlap trivially.
  std::uint64_t z = next_u64() ^ 0xD1B54A32D192ED03ULL;
  z = (z ^ (z >> 33)) * 0xFF51AFD7ED558CCDULL;
  return Rng(z ^ (z >> 33));
}

}  // namespace scipi
