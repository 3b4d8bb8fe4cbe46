#include "scipi/error.hpp"
#include "scipi/solvers.hpp"
#include "sphere_iteration.hpp"

namespace scipi {

namespace {

double kurtosis_contrast(const Matrix& W, const Vector& x) {
  const Vector t = W * x;
  return (t.array().pow(4) - 3.0).square().mean();
}

void check_whitened_input(const Matrix& W, const char* who) {
  if (W.rows() < 1 || W.cols() < 1) throw InputError(std::string(who) + ": empty data matrix");
  if (!W.allFinite()) throw InputError(std::string(who) + ": data contains non-finite entries");
}

}  // namespace

SolveResult fast_ica(const Matrix& W, const Vector& x0, const SolverConfig& config) {
  check_whitened_input(W, "fast_ica");
  return detail::run_sphere_iteration(
      W.cols(), [&](const Vector& x) { return kurtosis_contrast(W, x); },
      [&](const Vector& x) -> Vector {
        const Eigen::ArrayXd t = (W * x).array();
        return W.transpose() * t.cube().matrix() - 3.0 * t.square().sum() * x;
      },
      x0, config, "fast_ica");
}

SolveResult ica_sci_pi(const Matrix& W, const Vector& x0, const SolverConfig& config) {
  check_whitened_input(W, "ica_sci_pi");
  const double sigma = config.shift;
  return detail::run_sphere_iteration(
      W.cols(), [&](const Vector& x) { return kurtosis_contrast(W, x); },
      [&](const Vector& x) -> Vector {
        const Eigen::ArrayXd t = (W * x).array();
        Vector g = W.transpose() * ((t.pow(4) - 3.0) * t.cube()).matrix();
        // Same direction as the contrast gradient; the 8/n factor only
        // matters once a shift is added.
        if (sigma != 0.0) g = (8.0 / static_cast<double>(W.rows())) * g + 2.0 * sigma * x;
        return g;
      },
      x0, config, "ica_sci_pi");
}

}  // namespace scipi
