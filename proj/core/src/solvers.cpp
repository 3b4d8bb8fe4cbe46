#include "scipi/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "scipi/error.hpp"
#include "sphere_iteration.hpp"

namespace scipi {

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::XTol:
      return "x_tol";
    case StopReason::FTol:
      return "f_tol";
    case StopReason::MaxIter:
      return "max_iter";
    case StopReason::ZeroGradient:
      return "zero_gradient";
  }
  return "unknown";
}

void SolverConfig::validate() const {
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (!(x_tol >= 0.0)) throw ConfigError("x_tol must be nonnegative");
  if (!(f_tol >= 0.0)) throw ConfigError("f_tol must be nonnegative");
  if (step && !(*step > 0.0)) throw ConfigError("step must be positive");
  if (!std::isfinite(shift)) throw ConfigError("shift must be finite");
}

double alignment_error(const Vector& x, const Vector& ref) {
  const Vector xu = x / x.norm();
  const Vector ru = ref / ref.norm();
  return (xu - xu.dot(ru) * ru).squaredNorm();
}

double kkt_residual(const Vector& gradient, const Vector& x) {
  return (gradient - gradient.dot(x) * x).norm();
}

namespace detail {

Vector normalized_start(const Vector& x0, const char* who) {
  const double norm = x0.norm();
  if (!(norm > 0.0) || !x0.allFinite()) {
    throw InputError(std::string(who) + ": initial point must be nonzero and finite");
  }
  return x0 / norm;
}

SolveResult run_sphere_iteration(Eigen::Index dimension,
                                 const std::function<double(const Vector&)>& objective,
                                 const std::function<Vector(const Vector&)>& direction,
                                 const Vector& x0, const SolverConfig& config, const char* who) {
  config.validate();
  if (x0.size() != dimension) throw InputError(std::string(who) + ": x0 has wrong size");
  if (config.x_ref && config.x_ref->size() != dimension) {
    throw InputError(std::string(who) + ": x_ref has wrong size");
  }

  SolveResult result;
  const bool keep_iterates = dimension <= config.iterate_cap;
  Vector x = normalized_start(x0, who);

  auto record = [&](const Vector& point, double f) {
    result.objective_trace.push_back(f);
    if (keep_iterates) result.iterate_trace.push_back(point);
    if (config.x_ref) result.alignment_trace.push_back(alignment_error(point, *config.x_ref));
  };

  double f = objective(x);
  result.best_objective = f;
  record(x, f);

  result.stop_reason = StopReason::MaxIter;
  for (int k = 0; k < config.max_iter; ++k) {
    const Vector g = direction(x);
    const double norm = g.norm();
    if (!std::isfinite(norm)) throw NumericError(std::string(who) + ": non-finite update");
    if (norm < 1e-14) {
      result.stop_reason = StopReason::ZeroGradient;
      break;
    }
    Vector next = g / norm;
    const double step = (next - x).norm();
    x = std::move(next);
    f = objective(x);
    result.best_objective = std::max(result.best_objective, f);
    result.step_trace.push_back(step);
    record(x, f);
    ++result.iterations;

    if (step < config.x_tol) {
      result.stop_reason = StopReason::XTol;
      break;
    }
    if (config.f_ref && std::abs(f - *config.f_ref) <= config.f_tol * std::abs(*config.f_ref)) {
      result.stop_reason = StopReason::FTol;
      break;
    }
  }
  result.final_x = x;
  result.converged =
      result.stop_reason == StopReason::XTol || result.stop_reason == StopReason::FTol;
  return result;
}

}  // namespace detail

SolveResult sci_pi(const ScaleInvariantProblem& problem, const Vector& x0,
                   const SolverConfig& config) {
  const double sigma = config.shift;
  return detail::run_sphere_iteration(
      problem.dimension(), [&](const Vector& x) { return problem.value(x); },
      [&](const Vector& x) -> Vector {
        Vector g = problem.gradient(x);
        if (sigma != 0.0) g += 2.0 * sigma * x;
        return g;
      },
      x0, config, "sci_pi");
}

SolveResult power_iteration(const Matrix& A, const Vector& x0, const SolverConfig& config) {
  if (A.rows() != A.cols()) throw InputError("power_iteration: matrix must be square");
  const double sigma = config.shift;
  return detail::run_sphere_iteration(
      A.rows(), [&](const Vector& x) { return 0.5 * x.dot(A * x); },
      [&](const Vector& x) -> Vector {
        Vector g = A * x;
        if (sigma != 0.0) g += 2.0 * sigma * x;
        return g;
      },
      x0, config, "power_iteration");
}

SolveResult block_sci_pi(const BlockProblem& problem, const Vector& x0, const Vector& y0,
                         const SolverConfig& config) {
  config.validate();
  if (x0.size() != problem.dim_x() || y0.size() != problem.dim_y()) {
    throw InputError("block_sci_pi: initial point has wrong size");
  }
  const double sigma = config.shift;
  const bool keep_iterates = std::max(problem.dim_x(), problem.dim_y()) <= config.iterate_cap;

  SolveResult result;
  Vector x = detail::normalized_start(x0, "block_sci_pi");
  Vector y = detail::normalized_start(y0, "block_sci_pi");

  auto record = [&](double f) {
    result.objective_trace.push_back(f);
    if (keep_iterates) {
      result.iterate_trace.push_back(x);
      result.iterate_trace_y.push_back(y);
    }
    if (config.x_ref) result.alignment_trace.push_back(alignment_error(x, *config.x_ref));
    if (config.y_ref) result.alignment_trace_y.push_back(alignment_error(y, *config.y_ref));
  };
  auto unit = [](const Vector& g, bool& zero) -> Vector {
    const double norm = g.norm();
    if (!std::isfinite(norm)) throw NumericError("block_sci_pi: non-finite update");
    zero = zero || norm < 1e-14;
    return zero ? g : Vector(g / norm);
  };

  double f = problem.value(x, y);
  result.best_objective = f;
  record(f);
  result.stop_reason = StopReason::MaxIter;

  for (int k = 0; k < config.max_iter; ++k) {
    bool zero = false;
    const Vector x_next = unit(problem.gradient_x(x, y) + 2.0 * sigma * x, zero);
    if (zero) {
      result.stop_reason = StopReason::ZeroGradient;
      break;
    }
    const Vector& x_for_y = config.block_order == BlockOrder::Jacobi ? x : x_next;
    const Vector y_next = unit(problem.gradient_y(x_for_y, y) + 2.0 * sigma * y, zero);
    if (zero) {
      result.stop_reason = StopReason::ZeroGradient;
      break;
    }
    const double step = std::max((x_next - x).norm(), (y_next - y).norm());
    x = x_next;
    y = y_next;
    f = problem.value(x, y);
    result.best_objective = std::max(result.best_objective, f);
    result.step_trace.push_back(step);
    record(f);
    ++result.iterations;

    if (step < config.x_tol) {
      result.stop_reason = StopReason::XTol;
      break;
    }
    if (config.f_ref && std::abs(f - *config.f_ref) <= config.f_tol * std::abs(*config.f_ref)) {
      result.stop_reason = StopReason::FTol;
      break;
    }
  }
  result.final_x = x;
  result.final_y = y;
  result.converged =
      result.stop_reason == StopReason::XTol || result.stop_reason == StopReason::FTol;
  return result;
}

double partial_step_size(const PartialProblem& problem, const SolverConfig& config) {
  if (config.step) return *config.step;
  if (problem.mu() && problem.lipschitz()) return 2.0 / (*problem.lipschitz() + *problem.mu());
  throw ConfigError(
      "partial_sci_pi: no exact y step, no step size, and no (mu, L) to derive 2/(L+mu)");
}

SolveResult partial_sci_pi(const PartialProblem& problem, const Vector& x0, const Vector& y0,
                           const SolverConfig& config) {
  config.validate();
  if (x0.size() != problem.dim_x() || y0.size() != problem.dim_y()) {
    throw InputError("partial_sci_pi: initial point has wrong size");
  }
  if (!y0.allFinite()) throw InputError("partial_sci_pi: y0 must be finite");
  const bool exact = problem.has_exact_y_step();
  const double alpha = exact ? 0.0 : partial_step_size(problem, config);
  const double sigma = config.shift;
  const bool keep_iterates = problem.dim_x() <= config.iterate_cap;

  SolveResult result;
  Vector x = detail::normalized_start(x0, "partial_sci_pi");
  Vector y = y0;

  auto record = [&](double f) {
    result.objective_trace.push_back(f);
    if (keep_iterates) {
      result.iterate_trace.push_back(x);
      if (problem.dim_y() <= config.iterate_cap) result.iterate_trace_y.push_back(y);
    }
    if (config.x_ref) result.alignment_trace.push_back(alignment_error(x, *config.x_ref));
    if (config.y_ref) result.alignment_trace_y.push_back((y - *config.y_ref).squaredNorm());
  };

  double f = problem.value(x, y);
  result.best_objective = f;
  record(f);
  result.stop_reason = StopReason::MaxIter;

  for (int k = 0; k < config.max_iter; ++k) {
    const Vector g = problem.gradient_x(x, y) + 2.0 * sigma * x;
    const double norm = g.norm();
    if (!std::isfinite(norm)) throw NumericError("partial_sci_pi: non-finite update");
    if (norm < 1e-14) {
      result.stop_reason = StopReason::ZeroGradient;
      break;
    }
    const Vector x_next = g / norm;
    const Vector y_next = exact ? problem.exact_y_step(x, y)
                                : Vector(y + alpha * problem.gradient_y(x, y));
    if (!y_next.allFinite()) throw NumericError("partial_sci_pi: non-finite y update");

    const double step = std::max((x_next - x).norm(), (y_next - y).norm());
    x = x_next;
    y = y_next;
    f = problem.value(x, y);
    result.best_objective = std::max(result.best_objective, f);
    result.step_trace.push_back(step);
    record(f);
    ++result.iterations;

    if (step < config.x_tol) {
      result.stop_reason = StopReason::XTol;
      break;
    }
    if (config.f_ref && std::abs(f - *config.f_ref) <= config.f_tol * std::abs(*config.f_ref)) {
      result.stop_reason = StopReason::FTol;
      break;
    }
  }
  result.final_x = x;
  result.final_y = y;
  result.converged =
      result.stop_reason == StopReason::XTol || result.stop_reason == StopReason::FTol;
  return result;
}

}  // namespace scipi
