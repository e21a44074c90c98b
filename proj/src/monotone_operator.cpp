#include "lpfix/monotone_operator.hpp"

#include <sstream>
#include <stdexcept>

namespace lpfix {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

double min_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

void require_square(const Eigen::MatrixXd& m, Eigen::Index n, const char* what) {
  if (n < 1 || m.rows() != n || m.cols() != n) {
    throw std::invalid_argument(std::string(what) + ": matrix must be " + std::to_string(n) +
                                " x " + std::to_string(n));
  }
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": matrix has non-finite entries");
  }
}

bool is_symmetric(const Eigen::MatrixXd& m) {
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + m.cwiseAbs().maxCoeff());
}

void require_dimension(const MonotoneOperator& op, const PrimalVector& x) {
  if (op.dimension() != x.size()) {
    throw std::invalid_argument("operator of dimension " + std::to_string(op.dimension()) +
                                " applied to a vector of length " + std::to_string(x.size()));
  }
}

// Solutions of m x = rhs as a convex set.
ConvexSet affine_solution_set(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  const Eigen::Index n = m.cols();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double top = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  svd.setThreshold(1e-10);
  const Eigen::Index rank = top == 0.0 ? 0 : svd.rank();
  const Eigen::VectorXd particular =
      rank == 0 ? Eigen::VectorXd(Eigen::VectorXd::Zero(n)) : Eigen::VectorXd(svd.solve(rhs));
  if ((m * particular - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) {
    throw std::invalid_argument("operator has no zero: the linear system is inconsistent");
  }
  if (rank == n) {
    return ConvexSet::singleton(particular);
  }
  return ConvexSet::affine(particular, svd.matrixV().rightCols(n - rank));
}

// Potential |z|^2/2 + r g(z) - <z, Jx> whose gradient is J z + r A z - J x.
double potential(const MonotoneOperator& op, double r, const Eigen::VectorXd& jx,
                 const PrimalVector& z) {
  const double nz = norm(z);
  const Eigen::VectorXd& c = z.coords();
  const double g = std::visit(
      Overloaded{
          [&](const LinearMonotone& a) { return 0.5 * c.dot(a.matrix * c) + a.shift.dot(c); },
          [&](const GradientOfQuadratic& a) { return 0.5 * c.dot(a.matrix * c) - a.vector.dot(c); },
          [&](const DualityResidual& a) {
            return 0.5 * nz * nz - pairing(z, duality_map(a.target));
          },
      },
      op.kind());
  return 0.5 * nz * nz + r * g - c.dot(jx);
}

Eigen::VectorXd resolvent_equation(const MonotoneOperator& op, double r, const Eigen::VectorXd& jx,
                                   const PrimalVector& z) {
  return duality_map(z).coords() + r * evaluate(op, z).coords() - jx;
}

ResolventResult finish(const MonotoneOperator& op, double r, const PrimalVector& x,
                       PrimalVector z, int iterations, const ResolventOptions& options) {
  const double res = resolvent_residual(op, r, x, z);
  return {std::move(z), res, iterations, res <= options.tolerance};
}

ResolventResult direct_linear_resolvent(const MonotoneOperator& op, double r,
                                        const PrimalVector& x, const ResolventOptions& options) {
  const auto n = x.size();
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd rhs = x.coords();
  if (const auto* a = std::get_if<LinearMonotone>(&op.kind())) {
    lhs += r * a->matrix;
    rhs -= r * a->shift;
  } else if (const auto* a = std::get_if<GradientOfQuadratic>(&op.kind())) {
    lhs += r * a->matrix;
    rhs += r * a->vector;
  }
  return finish(op, r, x, PrimalVector(x.space(), lhs.partialPivLu().solve(rhs)), 0, options);
}

ResolventResult newton_resolvent(const MonotoneOperator& op, double r, const PrimalVector& x,
                                 const ResolventOptions& options) {
  const LpSpace& space = x.space();
  const Eigen::VectorXd jx = duality_map(x).coords();
  PrimalVector z = x;
  Eigen::VectorXd f = resolvent_equation(op, r, jx, z);
  double merit = 0.5 * f.squaredNorm();

  // Backtracking on |F|^2 / 2 along d, given the directional derivative.
  auto line_search = [&](const Eigen::VectorXd& d, double slope) {
    if (!(slope < 0.0)) {
      return false;
    }
    for (double t = 1.0; t >= 1e-12; t *= 0.5) {
      const Eigen::VectorXd trial_coords = z.coords() + t * d;
      if (!trial_coords.allFinite()) {
        continue;
      }
      PrimalVector trial(space, trial_coords);
      Eigen::VectorXd ft = resolvent_equation(op, r, jx, trial);
      const double mt = 0.5 * ft.squaredNorm();
      if (mt <= merit + Tolerances::armijo * t * slope) {
        z = std::move(trial);
        f = std::move(ft);
        merit = mt;
        return true;
      }
    }
    return false;
  };

  int iterations = 0;
  for (; iterations < options.max_iter; ++iterations) {
    if (power_norm(f, space.q()) <= options.gradient_tolerance) {
      break;
    }
    Eigen::MatrixXd jac = duality_map_jacobian(z) + r * operator_jacobian(op, z);
    Eigen::VectorXd d = jac.partialPivLu().solve(-f);
    if (!d.allFinite()) {
      const double mu = 1e-10 * (1.0 + jac.cwiseAbs().maxCoeff());
      jac.diagonal().array() += mu;
      d = jac.partialPivLu().solve(-f);
    }
    if (d.allFinite() && line_search(d, f.dot(jac * d))) {
      continue;
    }
    const Eigen::VectorXd steepest = -(jac.transpose() * f);
    if (!line_search(steepest, -steepest.squaredNorm())) {
      break;
    }
  }
  return finish(op, r, x, std::move(z), iterations, options);
}

ResolventResult gradient_descent_resolvent(const MonotoneOperator& op, double r,
                                           const PrimalVector& x,
                                           const ResolventOptions& options) {
  if (!op.has_potential()) {
    throw std::invalid_argument(
        "gradient-descent resolvent needs an operator with a potential (symmetric linear part)");
  }
  const LpSpace& space = x.space();
  const Eigen::VectorXd jx = duality_map(x).coords();
  PrimalVector z = x;
  double value = potential(op, r, jx, z);
  int iterations = 0;
  for (; iterations < options.max_iter; ++iterations) {
    const Eigen::VectorXd g = resolvent_equation(op, r, jx, z);
    if (power_norm(g, space.q()) <= options.gradient_tolerance) {
      break;
    }
    bool accepted = false;
    for (double t = 1.0; t >= 1e-20; t *= 0.5) {
      PrimalVector trial(space, z.coords() - t * g);
      const double vt = potential(op, r, jx, trial);
      if (vt <= value - Tolerances::armijo * t * g.squaredNorm()) {
        z = std::move(trial);
        value = vt;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      break;
    }
  }
  return finish(op, r, x, std::move(z), iterations, options);
}

}  // namespace

MonotoneOperator MonotoneOperator::linear(Eigen::MatrixXd matrix, Eigen::VectorXd shift) {
  require_square(matrix, shift.size(), "linear monotone operator");
  if (!shift.allFinite()) {
    throw std::invalid_argument("linear monotone operator: shift has non-finite entries");
  }
  const double lowest = min_symmetric_eigenvalue(matrix);
  if (lowest < -Tolerances::psd_eigenvalue) {
    std::ostringstream msg;
    msg << "linear monotone operator: symmetric part has eigenvalue " << lowest
        << " < 0, operator is not monotone";
    throw std::invalid_argument(msg.str());
  }
  const int n = static_cast<int>(shift.size());
  return MonotoneOperator(n, LinearMonotone{std::move(matrix), std::move(shift)});
}

MonotoneOperator MonotoneOperator::duality_residual(PrimalVector target) {
  const int n = target.size();
  return MonotoneOperator(n, DualityResidual{std::move(target)});
}

MonotoneOperator MonotoneOperator::quadratic_gradient(Eigen::MatrixXd matrix,
                                                      Eigen::VectorXd vector) {
  require_square(matrix, vector.size(), "quadratic gradient operator");
  if (!vector.allFinite()) {
    throw std::invalid_argument("quadratic gradient operator: vector has non-finite entries");
  }
  if (!is_symmetric(matrix)) {
    throw std::invalid_argument("quadratic gradient operator: matrix must be symmetric");
  }
  const double lowest = min_symmetric_eigenvalue(matrix);
  if (lowest < -Tolerances::psd_eigenvalue) {
    std::ostringstream msg;
    msg << "quadratic gradient operator: matrix has eigenvalue " << lowest
        << " < 0, not positive semidefinite";
    throw std::invalid_argument(msg.str());
  }
  const int n = static_cast<int>(vector.size());
  return MonotoneOperator(n, GradientOfQuadratic{std::move(matrix), std::move(vector)});
}

bool MonotoneOperator::has_potential() const {
  if (const auto* a = std::get_if<LinearMonotone>(&kind_)) {
    return is_symmetric(a->matrix);
  }
  return true;
}

std::string MonotoneOperator::describe() const {
  return std::visit(Overloaded{
                        [](const LinearMonotone&) { return std::string("linear monotone Mx + b"); },
                        [](const DualityResidual&) { return std::string("duality residual Jx - Jz"); },
                        [](const GradientOfQuadratic&) {
                          return std::string("gradient of quadratic Qx - c");
                        },
                    },
                    kind_) +
         " on R^" + std::to_string(dimension_);
}

DualVector evaluate(const MonotoneOperator& op, const PrimalVector& x) {
  require_dimension(op, x);
  return std::visit(
      Overloaded{
          [&](const LinearMonotone& a) {
            return DualVector(x.space(), a.matrix * x.coords() + a.shift);
          },
          [&](const GradientOfQuadratic& a) {
            return DualVector(x.space(), a.matrix * x.coords() - a.vector);
          },
          [&](const DualityResidual& a) {
            return duality_map(x) - duality_map(PrimalVector(x.space(), a.target.coords()));
          },
      },
      op.kind());
}

Eigen::MatrixXd operator_jacobian(const MonotoneOperator& op, const PrimalVector& x) {
  require_dimension(op, x);
  return std::visit(
      Overloaded{
          [](const LinearMonotone& a) -> Eigen::MatrixXd { return a.matrix; },
          [](const GradientOfQuadratic& a) -> Eigen::MatrixXd { return a.matrix; },
          [&](const DualityResidual&) -> Eigen::MatrixXd { return duality_map_jacobian(x); },
      },
      op.kind());
}

double resolvent_residual(const MonotoneOperator& op, double r, const PrimalVector& x,
                          const PrimalVector& z) {
  const DualVector lhs = duality_map(z) + r * evaluate(op, z);
  return norm(lhs - duality_map(x));
}

ResolventResult resolvent(const MonotoneOperator& op, double r, const PrimalVector& x,
                          const ResolventOptions& options) {
  require_dimension(op, x);
  if (!(r > 0.0) || !std::isfinite(r)) {
    std::ostringstream msg;
    msg << "resolvent parameter r = " << r << " must be positive and finite";
    throw std::invalid_argument(msg.str());
  }
  if (options.method == ResolventMethod::gradient_descent) {
    return gradient_descent_resolvent(op, r, x, options);
  }
  if (const auto* a = std::get_if<DualityResidual>(&op.kind())) {
    // J z (1 + r) = J x + r J z0, and J^-1 is positively homogeneous.
    const DualVector target = duality_map(PrimalVector(x.space(), a->target.coords()));
    const PrimalVector z = inverse_duality_map((1.0 / (1.0 + r)) * (duality_map(x) + r * target));
    return finish(op, r, x, z, 0, options);
  }
  if (x.space().is_hilbert()) {
    return direct_linear_resolvent(op, r, x, options);
  }
  return newton_resolvent(op, r, x, options);
}

ConvexSet zero_set_reference(const MonotoneOperator& op) {
  return std::visit(
      Overloaded{
          [](const LinearMonotone& a) { return affine_solution_set(a.matrix, -a.shift); },
          [](const GradientOfQuadratic& a) { return affine_solution_set(a.matrix, a.vector); },
          [](const DualityResidual& a) { return ConvexSet::singleton(a.target.coords()); },
      },
      op.kind());
}

}  // namespace lpfix
