#pragma once

#include <functional>
#include <optional>

#include "scipi/linalg.hpp"

namespace scipi {

using ValueFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;
using HessianFn = std::function<Matrix(const Vector&)>;

/// Default central-difference step: cbrt(machine epsilon) * (1 + ||x||).
double default_fd_step(const Vector& x);

/// Central-difference gradient of a scalar function. Throws NumericError when
/// any stencil evaluation is non-finite.
Vector finite_diff_gradient(const ValueFn& value, const Vector& x,
                            std::optional<double> h = std::nullopt);

/// Central-difference Jacobian of a gradient map, symmetrized as (H + H^T)/2.
Matrix finite_diff_hessian(const GradientFn& gradient, const Vector& x,
                           std::optional<double> h = std::nullopt);

/// Central-difference Jacobian d out / d x of an arbitrary vector map
/// (rows = output dimension). Used for cross blocks, so no symmetrization.
Matrix finite_diff_jacobian(const GradientFn& map, const Vector& x,
                            std::optional<double> h = std::nullopt);

}  // namespace scipi
