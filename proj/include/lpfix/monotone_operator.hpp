#pragma once

#include "lpfix/convex_set.hpp"
#include "lpfix/lp_space.hpp"
#include "lpfix/tolerances.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>

namespace lpfix {

/// A x = M x + b, M with positive semidefinite symmetric part.
struct LinearMonotone {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd shift;
};

/// A x = J x - J z.
struct DualityResidual {
  PrimalVector target;
};

/// A x = Q x - c, Q symmetric positive semidefinite (gradient of x'Qx/2 - c'x).
struct GradientOfQuadratic {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd vector;
};

/// Single-valued continuous monotone operator defined on all of R^n (hence
/// maximal monotone), with a zero set known in closed form.
class MonotoneOperator {
 public:
  using Kind = std::variant<LinearMonotone, DualityResidual, GradientOfQuadratic>;

  /// Throws when the symmetric part of `matrix` has an eigenvalue below -1e-10.
  static MonotoneOperator linear(Eigen::MatrixXd matrix, Eigen::VectorXd shift);
  static MonotoneOperator duality_residual(PrimalVector target);
  /// Throws unless `matrix` is symmetric positive semidefinite.
  static MonotoneOperator quadratic_gradient(Eigen::MatrixXd matrix, Eigen::VectorXd vector);

  int dimension() const noexcept { return dimension_; }
  const Kind& kind() const noexcept { return kind_; }
  /// True when A is the gradient of a convex potential.
  bool has_potential() const;
  std::string describe() const;

 private:
  MonotoneOperator(int dimension, Kind kind) : dimension_(dimension), kind_(std::move(kind)) {}

  int dimension_;
  Kind kind_;
};

/// The unique element of A x.
DualVector evaluate(const MonotoneOperator& op, const PrimalVector& x);

/// Jacobian of A at x (constant for the linear variants).
Eigen::MatrixXd operator_jacobian(const MonotoneOperator& op, const PrimalVector& x);

enum class ResolventMethod {
  /// Closed form where one exists, damped Newton on J z + r A z = J x otherwise.
  automatic,
  /// Gradient descent with backtracking on the potential
  /// |z|^2/2 + r g(z) - <z, Jx>; only for operators with a potential.
  gradient_descent,
};

struct ResolventOptions {
  double tolerance = Tolerances::resolvent;
  double gradient_tolerance = Tolerances::resolvent_gradient;
  int max_iter = Tolerances::resolvent_max_iter;
  ResolventMethod method = ResolventMethod::automatic;
};

struct ResolventResult {
  PrimalVector point;
  /// |J(point) + r A(point) - J x|_q.
  double residual = 0.0;
  int inner_iterations = 0;
  bool converged = false;
};

/// |J z + r A z - J x|_q.
double resolvent_residual(const MonotoneOperator& op, double r, const PrimalVector& x,
                          const PrimalVector& z);

/// L_r x = (J + r A)^-1 J x. Throws when r <= 0. A non-converged solve is
/// reported through `converged` with the best iterate found.
ResolventResult resolvent(const MonotoneOperator& op, double r, const PrimalVector& x,
                          const ResolventOptions& options = {});

/// A^-1 0 as a convex set: a singleton when the zero is unique, otherwise the
/// affine set (particular solution + null space). Throws when A has no zero.
ConvexSet zero_set_reference(const MonotoneOperator& op);

}  // namespace lpfix
