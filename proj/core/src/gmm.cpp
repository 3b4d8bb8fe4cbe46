#include <cmath>
#include <limits>

#include "scipi/error.hpp"
#include "scipi/gmm.hpp"
#include "scipi/random.hpp"

namespace scipi {

namespace {

void check_init(const Matrix& data, int components, const GmmParameters& init, const char* who) {
  if (components < 1 || components >= data.rows()) {
    throw InputError(std::string(who) + ": need 1 <= K < n");
  }
  const auto K = static_cast<std::size_t>(components);
  if (init.weights.size() != components || init.means.size() != K ||
      init.covariances.size() != K) {
    throw InputError(std::string(who) + ": initial parameters do not have K components");
  }
  if ((init.weights.array() < 0.0).any() || !(init.weights.sum() > 0.0)) {
    throw InputError(std::string(who) + ": initial weights must be nonnegative with positive sum");
  }
  for (std::size_t k = 0; k < K; ++k) {
    if (init.means[k].size() != data.cols() || init.covariances[k].rows() != data.cols() ||
        init.covariances[k].cols() != data.cols()) {
      throw InputError(std::string(who) + ": component shapes do not match the data");
    }
  }
}

GMMModel finish(GmmParameters params, std::vector<double> trace,
                int iterations, StopReason reason) {
  GMMModel model;
  model.params = std::move(params);
  model.log_likelihood_trace = std::move(trace);
  model.iterations = iterations;
  model.stop_reason = reason;
  model.converged = reason == StopReason::XTol || reason == StopReason::FTol;
  return model;
}

}  // namespace

GmmParameters gmm_initialize(const Matrix& data, int components, std::uint64_t seed,
                             double cov_floor) {
  if (components < 1 || components >= data.rows()) {
    throw InputError("gmm_initialize: need 1 <= K < n");
  }
  Rng rng = Rng::derive(seed, "gmm-init");
  const Eigen::Index n = data.rows();
  const Eigen::Index q = data.cols();

  GmmParameters p;
  Vector z = rng.normal_vector(components);
  if (!(z.squaredNorm() > 0.0)) z.setOnes();
  p.weights = z.cwiseAbs2() / z.squaredNorm();

  // Farthest-point seeding from a random first row.
  auto first = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(n));
  first = std::min(first, n - 1);
  Vector nearest = Vector::Constant(n, std::numeric_limits<double>::infinity());
  Eigen::Index pick = first;
  for (int k = 0; k < components; ++k) {
    p.means.push_back(data.row(pick).transpose());
    nearest = nearest.cwiseMin((data.rowwise() - data.row(pick)).rowwise().squaredNorm());
    nearest.maxCoeff(&pick);
  }

  const Vector mean = data.colwise().mean().transpose();
  const Matrix centered = data.rowwise() - mean.transpose();
  Matrix pooled = centered.transpose() * centered / static_cast<double>(n);
  pooled += cov_floor * Matrix::Identity(q, q);
  p.covariances.assign(static_cast<std::size_t>(components), pooled);
  return p;
}

GMMModel em_gmm(const Matrix& data, int components, const GmmParameters& init,
                const SolverConfig& config, double cov_floor) {
  config.validate();
  check_init(data, components, init, "em_gmm");
  if (!(cov_floor > 0.0)) throw InputError("em_gmm: cov_floor must be positive");

  GmmParameters params = init;
  params.weights /= params.weights.sum();
  Vector y = gmm_pack(params.means, params.covariances);

  std::vector<double> trace{gmm_log_likelihood(data, params)};
  StopReason reason = StopReason::MaxIter;
  int iterations = 0;
  for (int it = 0; it < config.max_iter; ++it) {
    const Matrix log_dens = gmm_log_densities(data, params.means, params.covariances);
    const Matrix resp = gmm_responsibilities(log_dens, params.weights);

    // pi * (L^T r) with r = 1 / (L pi); the column sums of the responsibilities.
    Vector weights = resp.colwise().sum().transpose();
    weights /= weights.sum();
    std::vector<Vector> means;
    std::vector<Matrix> covs;
    gmm_m_step(data, resp, cov_floor, means, covs);
    const Vector y_next = gmm_pack(means, covs);

    const double step = std::max((weights.cwiseSqrt() - params.weights.cwiseSqrt()).norm(),
                                 (y_next - y).norm());
    params.weights = weights;
    params.means = std::move(means);
    params.covariances = std::move(covs);
    y = y_next;
    trace.push_back(gmm_log_likelihood(data, params));
    ++iterations;

    if (step < config.x_tol) {
      reason = StopReason::XTol;
      break;
    }
    if (config.f_ref &&
        std::abs(trace.back() - *config.f_ref) <= config.f_tol * std::abs(*config.f_ref)) {
      reason = StopReason::FTol;
      break;
    }
  }
  return finish(std::move(params), std::move(trace), iterations, reason);
}

GMMModel gmm_sci_pi(const Matrix& data, int components, const GmmParameters& init,
                    const SolverConfig& config, double alpha, double cov_floor) {
  check_init(data, components, init, "gmm_sci_pi");
  const PartialProblem problem = make_gmm(data, components, cov_floor);
  const double n = static_cast<double>(data.rows());

  // The problem value is the average log-likelihood; the shift acts on it.
  SolverConfig inner = config;
  inner.shift = alpha;
  if (config.f_ref) inner.f_ref = *config.f_ref / n;
  inner.x_ref.reset();
  inner.y_ref.reset();
  inner.iterate_cap = 0;

  const Vector x0 = (init.weights / init.weights.sum()).cwiseSqrt();
  const SolveResult run =
      partial_sci_pi(problem, x0, gmm_pack(init.means, init.covariances), inner);

  GmmParameters params;
  params.weights = run.final_x.cwiseAbs2();
  params.weights /= params.weights.sum();
  gmm_unpack(*run.final_y, components, data.cols(), params.means, params.covariances);

  std::vector<double> trace;
  trace.reserve(run.objective_trace.size());
  for (double f : run.objective_trace) trace.push_back(n * f);
  return finish(std::move(params), std::move(trace), run.iterations, run.stop_reason);
}

}  // namespace scipi
