#pragma once

#include <cstdint>
#include <string_view>

#include "scipi/linalg.hpp"

namespace scipi {

/// Deterministic pseudorandom stream with 64 bits of state (SplitMix64).
///
/// The raw sequence is fully specified by the seed, so every derived draw is
/// reproducible on any platform with IEEE-754 doubles:
///   state += 0x9E3779B97F4A7C15
///   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31)
/// Uniforms take the top 53 bits. Normals use Box-Muller without caching
/// (each normal consumes two uniforms), so the stream is a pure value.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Stream for one purpose under a shared seed. Generators draw from
  /// Rng(seed) directly; initializations use derive(seed, "<name>") so a
  /// start point never replays the draws that built the data.
  static Rng derive(std::uint64_t seed, std::string_view purpose);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);
  /// Standard normal via Box-Muller (cosine branch).
  double normal();
  /// Laplace(0, scale) via inverse CDF.
  double laplace(double scale = 1.0);

  Vector normal_vector(Eigen::Index d);
  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);
  Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo = 0.0, double hi = 1.0);
  /// Uniform on the unit sphere in R^d (normalized Gaussian vector).
  Vector unit_sphere(Eigen::Index d);

  /// Independent child stream; advances this stream by one draw.
  Rng split();

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace scipi
