#pragma once

#include <functional>

#include "scipi/solvers.hpp"

namespace scipi::detail {

Vector normalized_start(const Vector& x0, const char* who);

/// Shared loop for single-sphere solvers: x <- direction(x) / ||direction(x)||.
SolveResult run_sphere_iteration(Eigen::Index dimension,
                                 const std::function<double(const Vector&)>& objective,
                                 const std::function<Vector(const Vector&)>& direction,
                                 const Vector& x0, const SolverConfig& config, const char* who);

}  // namespace scipi::detail
