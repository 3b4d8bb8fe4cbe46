#include "scipi/problem.hpp"

#include <cmath>
#include <sstream>

#include "scipi/error.hpp"

namespace scipi {

InvarianceKind InvarianceKind::multiplicative(double degree) {
  if (!(degree > 0.0) || !std::isfinite(degree)) {
    throw InputError("multiplicative invariance requires degree p > 0");
  }
  return {Type::Multiplicative, degree};
}

InvarianceKind InvarianceKind::additive(double base) {
  if (!(base > 0.0) || base == 1.0 || !std::isfinite(base)) {
    throw InputError("additive invariance requires base a > 0 and a != 1");
  }
  return {Type::Additive, base};
}

double InvarianceKind::degree() const {
  if (type_ != Type::Multiplicative) throw InputError("degree() on a non-multiplicative kind");
  return constant_;
}

double InvarianceKind::base() const {
  if (type_ != Type::Additive) throw InputError("base() on a non-additive kind");
  return constant_;
}

double InvarianceKind::additive_euler_constant() const { return 1.0 / std::log(base()); }

std::string InvarianceKind::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (type_) {
    case Type::Multiplicative:
      os << "multiplicative(p=" << constant_ << ")";
      break;
    case Type::Additive:
      os << "additive(a=" << constant_ << ")";
      break;
    case Type::SumOfScaleInvariant:
      os << "sum-of-scale-invariant";
      break;
    case Type::None:
      os << "none";
      break;
  }
  return os.str();
}

ScaleInvariantProblem::ScaleInvariantProblem(Definition def) {
  if (def.dimension <= 0) throw InputError("problem dimension must be positive");
  if (!def.value || !def.gradient) throw InputError("problem needs value and gradient");
  def_ = std::make_shared<const Definition>(std::move(def));
}

void ScaleInvariantProblem::check_dimension(const Vector& x) const {
  if (x.size() != def_->dimension) {
    throw InputError(def_->name + ": expected a vector of size " + std::to_string(def_->dimension) +
                     ", got " + std::to_string(x.size()));
  }
}

double ScaleInvariantProblem::value(const Vector& x) const {
  check_dimension(x);
  return def_->value(x);
}

Vector ScaleInvariantProblem::gradient(const Vector& x) const {
  check_dimension(x);
  return def_->gradient(x);
}

Matrix ScaleInvariantProblem::hessian(const Vector& x) const {
  check_dimension(x);
  if (def_->hessian) return def_->hessian(x);
  return finite_diff_hessian(def_->gradient, x);
}

BlockProblem::BlockProblem(Definition def) {
  if (def.dim_x <= 0 || def.dim_y <= 0) throw InputError("block dimensions must be positive");
  if (!def.value || !def.gradient_x || !def.gradient_y) {
    throw InputError("block problem needs value and both gradients");
  }
  def_ = std::make_shared<const Definition>(std::move(def));
}

void BlockProblem::check(const Vector& x, const Vector& y) const {
  if (x.size() != def_->dim_x || y.size() != def_->dim_y) {
    throw InputError(def_->name + ": block size mismatch");
  }
}

double BlockProblem::value(const Vector& x, const Vector& y) const {
  check(x, y);
  return def_->value(x, y);
}

Vector BlockProblem::gradient_x(const Vector& x, const Vector& y) const {
  check(x, y);
  return def_->gradient_x(x, y);
}

Vector BlockProblem::gradient_y(const Vector& x, const Vector& y) const {
  check(x, y);
  return def_->gradient_y(x, y);
}

Matrix BlockProblem::hessian_xx(const Vector& x, const Vector& y) const {
  check(x, y);
  if (def_->hessian_xx) return def_->hessian_xx(x, y);
  return finite_diff_hessian([&](const Vector& xp) { return def_->gradient_x(xp, y); }, x);
}

Matrix BlockProblem::hessian_yy(const Vector& x, const Vector& y) const {
  check(x, y);
  if (def_->hessian_yy) return def_->hessian_yy(x, y);
  return finite_diff_hessian([&](const Vector& yp) { return def_->gradient_y(x, yp); }, y);
}

Matrix BlockProblem::hessian_yx(const Vector& x, const Vector& y) const {
  check(x, y);
  if (def_->hessian_yx) return def_->hessian_yx(x, y);
  return finite_diff_jacobian([&](const Vector& xp) { return def_->gradient_y(xp, y); }, x);
}

PartialProblem::PartialProblem(Definition def) {
  if (def.dim_x <= 0 || def.dim_y <= 0) throw InputError("partial dimensions must be positive");
  if (!def.value || !def.gradient_x || !def.gradient_y) {
    throw InputError("partial problem needs value and both gradients");
  }
  if (def.mu.has_value() != def.lipschitz.has_value()) {
    throw InputError("partial problem: mu and L must be given together");
  }
  if (def.mu && (!(*def.mu > 0.0) || *def.mu > *def.lipschitz)) {
    throw InputError("partial problem: require 0 < mu <= L");
  }
  def_ = std::make_shared<const Definition>(std::move(def));
}

void PartialProblem::check(const Vector& x, const Vector& y) const {
  if (x.size() != def_->dim_x || y.size() != def_->dim_y) {
    throw InputError(def_->name + ": block size mismatch");
  }
}

double PartialProblem::value(const Vector& x, const Vector& y) const {
  check(x, y);
  return def_->value(x, y);
}

Vector PartialProblem::gradient_x(const Vector& x, const Vector& y) const {
  check(x, y);
  return def_->gradient_x(x, y);
}

Vector PartialProblem::gradient_y(const Vector& x, const Vector& y) const {
  check(x, y);
  return def_->gradient_y(x, y);
}

Vector PartialProblem::exact_y_step(const Vector& x, const Vector& y) const {
  check(x, y);
  if (!def_->exact_y_step) throw ConfigError(def_->name + ": no exact y step available");
  return def_->exact_y_step(x, y);
}

Matrix PartialProblem::hessian_xx(const Vector& x, const Vector& y) const {
  check(x, y);
  if (def_->hessian_xx) return def_->hessian_xx(x, y);
  return finite_diff_hessian([&](const Vector& xp) { return def_->gradient_x(xp, y); }, x);
}

Matrix PartialProblem::hessian_yx(const Vector& x, const Vector& y) const {
  check(x, y);
  if (def_->hessian_yx) return def_->hessian_yx(x, y);
  return finite_diff_jacobian([&](const Vector& xp) { return def_->gradient_y(xp, y); }, x);
}

}  // namespace scipi
