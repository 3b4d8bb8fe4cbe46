#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scipi/problem.hpp"

namespace scipi {

enum class StopReason { XTol, FTol, MaxIter, ZeroGradient };

std::string to_string(StopReason reason);

/// Update order for block_sci_pi.
enum class BlockOrder {
  Jacobi,       ///< both blocks from (x_k, y_k)
  GaussSeidel,  ///< y_{k+1} uses the fresh x_{k+1}
};

struct SolverConfig {
  int max_iter = 10000;
  /// Stop when ||x_{k+1} - x_k|| < x_tol (max over blocks for two-block solvers).
  double x_tol = 1e-8;
  /// Objective-gap stopping |f(x_k) - f_ref| <= f_tol * |f_ref|; only active
  /// when f_ref is set.
  std::optional<double> f_ref;
  double f_tol = 1e-6;
  /// Shift sigma: iterate on grad f(x) + 2 sigma x.
  double shift = 0.0;
  /// Gradient step for the free block of partial_sci_pi.
  std::optional<double> step;
  std::uint64_t seed = 0;
  /// Keep iterates only when the dimension is at most this cap.
  Eigen::Index iterate_cap = 512;
  /// Reference directions for alignment tracking, 1 - (x_k^T x_ref)^2.
  std::optional<Vector> x_ref;
  std::optional<Vector> y_ref;
  BlockOrder block_order = BlockOrder::Jacobi;

  void validate() const;
};

struct SolveResult {
  Vector final_x;
  std::optional<Vector> final_y;
  /// f(x_0), ..., f(x_iterations); length iterations + 1.
  std::vector<double> objective_trace;
  /// ||x_{k+1} - x_k|| per iteration (max over blocks); length iterations.
  std::vector<double> step_trace;
  std::vector<Vector> iterate_trace;
  std::vector<Vector> iterate_trace_y;
  /// 1 - (x_k^T x_ref)^2 per iterate when a reference is configured.
  std::vector<double> alignment_trace;
  std::vector<double> alignment_trace_y;
  double best_objective = 0.0;
  bool converged = false;
  int iterations = 0;
  StopReason stop_reason = StopReason::MaxIter;
};

/// Squared sine between two directions, 1 - (x^T r)^2 for unit x and r,
/// evaluated as ||x - (x^T r) r||^2 to avoid cancellation.
double alignment_error(const Vector& x, const Vector& ref);

/// Scale invariant power iteration: x <- (grad f(x) + 2 sigma x) / ||.||.
SolveResult sci_pi(const ScaleInvariantProblem& problem, const Vector& x0,
                   const SolverConfig& config = {});

/// Classical power iteration x <- (A + 2 sigma I) x / ||.||.
SolveResult power_iteration(const Matrix& A, const Vector& x0, const SolverConfig& config = {});

/// Block SCI-PI on a product of spheres.
SolveResult block_sci_pi(const BlockProblem& problem, const Vector& x0, const Vector& y0,
                         const SolverConfig& config = {});

/// SCI-PI step in x, gradient ascent (or the exact maximizer, when the
/// problem provides one) in the free block y. The gradient step is
/// config.step when set, else 2 / (L + mu) from the problem's constants.
SolveResult partial_sci_pi(const PartialProblem& problem, const Vector& x0, const Vector& y0,
                           const SolverConfig& config = {});

/// Step size partial_sci_pi would use for the gradient branch.
double partial_step_size(const PartialProblem& problem, const SolverConfig& config);

/// FastICA fixed point x <- W^T (Wx)^3 - 3 (1^T (Wx)^2) x, normalized.
SolveResult fast_ica(const Matrix& W, const Vector& x0, const SolverConfig& config = {});

/// SCI-PI for the kurtosis contrast x <- W^T [((Wx)^4 - 3) * (Wx)^3], normalized.
SolveResult ica_sci_pi(const Matrix& W, const Vector& x0, const SolverConfig& config = {});

/// ||grad f(x) - (grad f(x)^T x) x||, the first-order residual on the sphere.
double kkt_residual(const Vector& gradient, const Vector& x);

}  // namespace scipi
