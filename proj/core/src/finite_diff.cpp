#include "scipi/finite_diff.hpp"

#include <cmath>
#include <limits>

#include "scipi/error.hpp"

namespace scipi {

double default_fd_step(const Vector& x) {
  return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + x.norm());
}

Vector finite_diff_gradient(const ValueFn& value, const Vector& x, std::optional<double> h) {
  const double step = h.value_or(default_fd_step(x));
  if (!(step > 0.0)) throw InputError("finite_diff_gradient: step must be positive");
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const double plus = value(probe);
    probe[i] = x[i] - step;
    const double minus = value(probe);
    probe[i] = x[i];
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("finite_diff_gradient: non-finite value in stencil");
    }
    grad[i] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

Matrix finite_diff_jacobian(const GradientFn& map, const Vector& x, std::optional<double> h) {
  const double step = h.value_or(default_fd_step(x));
  if (!(step > 0.0)) throw InputError("finite_diff_jacobian: step must be positive");
  Vector probe = x;
  Matrix jac;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + step;
    const Vector plus = map(probe);
    probe[i] = x[i] - step;
    const Vector minus = map(probe);
    probe[i] = x[i];
    if (!plus.allFinite() || !minus.allFinite()) {
      throw NumericError("finite_diff_jacobian: non-finite value in stencil");
    }
    if (i == 0) jac.resize(plus.size(), x.size());
    jac.col(i) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

Matrix finite_diff_hessian(const GradientFn& gradient, const Vector& x, std::optional<double> h) {
  const Matrix jac = finite_diff_jacobian(gradient, x, h);
  if (jac.rows() != jac.cols()) throw InputError("finite_diff_hessian: gradient has wrong size");
  return 0.5 * (jac + jac.transpose());
}

}  // namespace scipi
