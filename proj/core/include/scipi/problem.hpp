#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "scipi/finite_diff.hpp"
#include "scipi/linalg.hpp"

namespace scipi {

/// How an objective responds to scaling of its argument.
///
///   Multiplicative(p): f(cx) = |c|^p f(x), p > 0
///   Additive(a):       f(cx) = f(x) + log_a |c|, a > 0, a != 1
///   SumOfScaleInvariant: a sum of terms of the two kinds above; f itself
///                        is generally not scale invariant
class InvarianceKind {
 public:
  enum class Type { Multiplicative, Additive, SumOfScaleInvariant, None };

  static InvarianceKind multiplicative(double degree);
  static InvarianceKind additive(double base);
  static InvarianceKind sum_of_scale_invariant() { return {Type::SumOfScaleInvariant, 0.0}; }
  static InvarianceKind none() { return {Type::None, 0.0}; }

  Type type() const { return type_; }
  bool is_multiplicative() const { return type_ == Type::Multiplicative; }
  bool is_additive() const { return type_ == Type::Additive; }

  /// Degree p; only valid for Multiplicative.
  double degree() const;
  /// Base a; only valid for Additive.
  double base() const;
  /// grad f(x)^T x on any x: p f(x) is not constant, so this returns 1/ln(a)
  /// for Additive and throws otherwise.
  double additive_euler_constant() const;

  std::string to_string() const;

  friend bool operator==(const InvarianceKind&, const InvarianceKind&) = default;

 private:
  InvarianceKind(Type type, double constant) : type_(type), constant_(constant) {}
  Type type_;
  double constant_;
};

/// Objective maximized over the unit sphere. Immutable; copies share state.
class ScaleInvariantProblem {
 public:
  struct Definition {
    std::string name;
    Eigen::Index dimension = 0;
    InvarianceKind kind = InvarianceKind::none();
    ValueFn value;
    GradientFn gradient;
    /// Optional closed form; finite differences of `gradient` otherwise.
    HessianFn hessian;
  };

  explicit ScaleInvariantProblem(Definition def);

  const std::string& name() const { return def_->name; }
  Eigen::Index dimension() const { return def_->dimension; }
  const InvarianceKind& kind() const { return def_->kind; }
  bool has_closed_form_hessian() const { return static_cast<bool>(def_->hessian); }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;
  Matrix hessian(const Vector& x) const;

  const Definition& definition() const { return *def_; }

 private:
  void check_dimension(const Vector& x) const;
  std::shared_ptr<const Definition> def_;
};

using PairValueFn = std::function<double(const Vector&, const Vector&)>;
using PairVectorFn = std::function<Vector(const Vector&, const Vector&)>;
using PairMatrixFn = std::function<Matrix(const Vector&, const Vector&)>;

/// f(x, y) maximized over x on the d1-sphere and y on the d2-sphere; scale
/// invariant in each block with the other fixed.
class BlockProblem {
 public:
  struct Definition {
    std::string name;
    Eigen::Index dim_x = 0;
    Eigen::Index dim_y = 0;
    InvarianceKind kind_x = InvarianceKind::none();
    InvarianceKind kind_y = InvarianceKind::none();
    PairValueFn value;
    PairVectorFn gradient_x;
    PairVectorFn gradient_y;
    PairMatrixFn hessian_xx;  // optional
    PairMatrixFn hessian_yy;  // optional
    PairMatrixFn hessian_yx;  // optional, d2 x d1
  };

  explicit BlockProblem(Definition def);

  const std::string& name() const { return def_->name; }
  Eigen::Index dim_x() const { return def_->dim_x; }
  Eigen::Index dim_y() const { return def_->dim_y; }
  const InvarianceKind& kind_x() const { return def_->kind_x; }
  const InvarianceKind& kind_y() const { return def_->kind_y; }

  double value(const Vector& x, const Vector& y) const;
  Vector gradient_x(const Vector& x, const Vector& y) const;
  Vector gradient_y(const Vector& x, const Vector& y) const;
  Matrix hessian_xx(const Vector& x, const Vector& y) const;
  Matrix hessian_yy(const Vector& x, const Vector& y) const;
  /// Cross block d(grad_y)/dx, shape d2 x d1.
  Matrix hessian_yx(const Vector& x, const Vector& y) const;

 private:
  void check(const Vector& x, const Vector& y) const;
  std::shared_ptr<const Definition> def_;
};

/// f(x, y) with x on the d1-sphere and y free in R^d2; scale invariant in x
/// for each y.
class PartialProblem {
 public:
  struct Definition {
    std::string name;
    Eigen::Index dim_x = 0;
    Eigen::Index dim_y = 0;
    InvarianceKind kind_x = InvarianceKind::none();
    PairValueFn value;
    PairVectorFn gradient_x;
    PairVectorFn gradient_y;
    /// Exact maximizer of f(x, .) given the current (x, y); optional.
    PairVectorFn exact_y_step;
    /// Strong concavity / smoothness constants of f(x, .); optional.
    std::optional<double> mu;
    std::optional<double> lipschitz;
    PairMatrixFn hessian_xx;  // optional
    PairMatrixFn hessian_yx;  // optional, d2 x d1
  };

  explicit PartialProblem(Definition def);

  const std::string& name() const { return def_->name; }
  Eigen::Index dim_x() const { return def_->dim_x; }
  Eigen::Index dim_y() const { return def_->dim_y; }
  const InvarianceKind& kind_x() const { return def_->kind_x; }
  bool has_exact_y_step() const { return static_cast<bool>(def_->exact_y_step); }
  std::optional<double> mu() const { return def_->mu; }
  std::optional<double> lipschitz() const { return def_->lipschitz; }

  double value(const Vector& x, const Vector& y) const;
  Vector gradient_x(const Vector& x, const Vector& y) const;
  Vector gradient_y(const Vector& x, const Vector& y) const;
  Vector exact_y_step(const Vector& x, const Vector& y) const;
  Matrix hessian_xx(const Vector& x, const Vector& y) const;
  Matrix hessian_yx(const Vector& x, const Vector& y) const;

 private:
  void check(const Vector& x, const Vector& y) const;
  std::shared_ptr<const Definition> def_;
};

}  // namespace scipi
