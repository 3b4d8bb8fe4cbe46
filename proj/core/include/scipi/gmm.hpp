#pragma once

#include <cstdint>
#include <vector>

#include "scipi/problem.hpp"
#include "scipi/solvers.hpp"

namespace scipi {

struct GmmParameters {
  Vector weights;
  std::vector<Vector> means;
  std::vector<Matrix> covariances;

  Eigen::Index components() const { return weights.size(); }
};

/// Free-block layout used by make_gmm: for each component k, the mean
/// (q entries) followed by the covariance (q*q entries, column-major).
Eigen::Index gmm_free_dimension(Eigen::Index components, Eigen::Index q);
Vector gmm_pack(const std::vector<Vector>& means, const std::vector<Matrix>& covariances);
/// Inverse of gmm_pack. Covariances are symmetrized on the way out.
void gmm_unpack(const Vector& y, Eigen::Index components, Eigen::Index q,
                std::vector<Vector>& means, std::vector<Matrix>& covariances);

/// log N(data_i; mu_k, Sigma_k) as an n x K matrix. A covariance that is not
/// positive definite raises NumericError.
Matrix gmm_log_densities(const Matrix& data, const std::vector<Vector>& means,
                         const std::vector<Matrix>& covariances);

/// Total log-likelihood sum_i log sum_k pi_k N(data_i; mu_k, Sigma_k).
double gmm_log_likelihood(const Matrix& data, const GmmParameters& params);

/// Posterior responsibilities (n x K) from log densities and weights.
Matrix gmm_responsibilities(const Matrix& log_densities, const Vector& weights);

/// Weighted mean / covariance update with Sigma_k + cov_floor * I. Throws
/// NumericError naming the component when its total weight drops below
/// 1e-12 * n.
void gmm_m_step(const Matrix& data, const Matrix& responsibilities, double cov_floor,
                std::vector<Vector>& means, std::vector<Matrix>& covariances);

/// GMM log-likelihood as a partially scale invariant problem:
///   f(x, y) = (1/n) sum_i log sum_k x_k^2 N(data_i; mu_k, Sigma_k),
/// with pi_k = x_k^2 on the sphere and y holding means and covariances
/// (layout of gmm_pack). exact_y_step is the M-step for pi = x^2 / ||x||^2.
PartialProblem make_gmm(const Matrix& data, int components, double cov_floor = 1e-6);

/// Shared starting point for em_gmm and gmm_sci_pi. Weights are the squares
/// of a standard Gaussian vector, normalized; means come from farthest-point
/// seeding started at a random data row; every covariance is the pooled
/// sample covariance plus cov_floor * I.
GmmParameters gmm_initialize(const Matrix& data, int components, std::uint64_t seed,
                             double cov_floor = 1e-6);

struct GMMModel {
  GmmParameters params;
  /// Total log-likelihood at the initial point and after every iteration.
  std::vector<double> log_likelihood_trace;
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIter;
};

/// Classic EM. Stops when max(||sqrt(pi_new) - sqrt(pi)||, ||y_new - y||) < x_tol.
GMMModel em_gmm(const Matrix& data, int components, const GmmParameters& init,
                const SolverConfig& config = {}, double cov_floor = 1e-6);

/// SCI-PI on the weights, pi <- pi * (alpha + L^T r / n)^2 normalized, with the
/// exact M-step for means and covariances. Same stopping rule as em_gmm.
GMMModel gmm_sci_pi(const Matrix& data, int components, const GmmParameters& init,
                    const SolverConfig& config = {}, double alpha = 1.0,
                    double cov_floor = 1e-6);

}  // namespace scipi
