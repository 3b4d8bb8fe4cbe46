#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scipi/linalg.hpp"

namespace scipi {

enum class NmfMethod { MU, PGD, SCIPI };

std::string to_string(NmfMethod method);
/// Accepts "mu", "pgd", "sci-pi" / "scipi" (case-sensitive).
NmfMethod parse_nmf_method(const std::string& name);

struct NmfInit {
  Matrix W;  ///< n x K
  Matrix H;  ///< K x m
};

/// Uniform(0, 1) factors followed by one MU outer iteration.
NmfInit nmf_initialize(const Matrix& V, int rank, std::uint64_t seed);

struct NmfOptions {
  int max_iter = 500;
  /// Shift for the SCIPI update.
  double sigma = 1.0;
  /// Candidate PGD step factors; the one with the best first-iteration
  /// decrease is used for the whole run.
  std::vector<double> pgd_grid{0.05, 0.1, 0.2, 0.5, 1.0};
};

struct NMFModel {
  Matrix V;
  Matrix W;
  Matrix H;
  int rank = 0;
  NmfMethod method = NmfMethod::MU;
  /// D_KL(V || WH) at the initial point and after every outer iteration.
  std::vector<double> kl_trace;
  int iterations = 0;
  /// PGD step factor picked from the grid (0 for other methods).
  double pgd_step = 0.0;
  /// Number of times a model entry (Wh)_i fell below 1e-300 where v_i > 0.
  long long floor_hits = 0;
};

/// Generalized KL divergence sum_ij [V log(V / WH) - V + WH] with 0 log 0 = 0.
/// Throws NumericError if (WH)_ij = 0 where V_ij > 0.
double kl_divergence(const Matrix& V, const Matrix& W, const Matrix& H);

/// Largest first-order residual over all column subproblems of H and row
/// subproblems of W, measured on the sphere as 2 sqrt(sum_k hbar_k (g_k - 1)^2)
/// where hbar = c .* h / S and g = (W^T z) ./ c.
double nmf_stationarity(const Matrix& V, const Matrix& W, const Matrix& H);

/// Alternating KL-NMF: every outer iteration applies one inner update to each
/// column of H, then to each row of W (the same update on the transposed problem).
NMFModel nmf_solve(const Matrix& V, int rank, NmfMethod method, const NmfInit& init,
                   const NmfOptions& options = {});

}  // namespace scipi
