#pragma once

#include "lpfix/lp_space.hpp"
#include "lpfix/random.hpp"
#include "lpfix/tolerances.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace lpfix {

struct WholeSpace {};

/// {x : <a, x> <= b}, a != 0.
struct HalfSpace {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

/// {x : lower <= x <= upper} coordinate-wise.
struct Box {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// {x : |x - center|_2 <= radius}.
struct EuclideanBall {
  Eigen::VectorXd center;
  double radius = 1.0;
};

/// point + span(basis). The basis is stored orthonormal (n x k, k may be 0).
struct AffineSet {
  Eigen::VectorXd point;
  Eigen::MatrixXd basis;
};

/// A nonempty closed convex subset C of R^n.
class ConvexSet {
 public:
  using Shape = std::variant<WholeSpace, HalfSpace, Box, EuclideanBall, AffineSet>;

  static ConvexSet whole_space(int dimension);
  static ConvexSet half_space(Eigen::VectorXd normal, double offset);
  static ConvexSet box(Eigen::VectorXd lower, Eigen::VectorXd upper);
  static ConvexSet ball(Eigen::VectorXd center, double radius);
  /// point + span(directions); directions may be rank deficient or empty.
  static ConvexSet affine(Eigen::VectorXd point, const Eigen::MatrixXd& directions);
  static ConvexSet singleton(Eigen::VectorXd point);

  int dimension() const noexcept { return dimension_; }
  const Shape& shape() const noexcept { return shape_; }
  bool is_whole_space() const noexcept { return std::holds_alternative<WholeSpace>(shape_); }
  /// Singleton sets are affine sets with an empty basis.
  bool is_singleton() const noexcept;
  std::string describe() const;

 private:
  ConvexSet(int dimension, Shape shape) : dimension_(dimension), shape_(std::move(shape)) {}

  int dimension_;
  Shape shape_;
};

/// Euclidean distance from x to C.
double distance(const ConvexSet& set, const PrimalVector& x);

/// True iff x is within Euclidean distance `tol` of C.
bool contains(const ConvexSet& set, const PrimalVector& x, double tol);

/// Closed-form metric projection onto C in the Euclidean norm.
PrimalVector euclidean_project(const ConvexSet& set, const PrimalVector& x);

/// Probe points of C: Euclidean projections of Gaussian samples centred at
/// `center` with standard deviation `scale`.
std::vector<PrimalVector> sample_points(const ConvexSet& set, const PrimalVector& center,
                                        double scale, int count, SplitMix64& rng);

struct ProjectionOptions {
  double vi_tolerance = Tolerances::vi;
  double gradient_tolerance = Tolerances::projected_gradient;
  int max_iter = Tolerances::projection_max_iter;
  int probes = Tolerances::projection_probes;
  std::uint64_t seed = 0x9e0c7ec7;
};

struct ProjectionResult {
  PrimalVector point;
  /// max over probe points z of <z - Q_C x, Jx - J Q_C x>; <= 0 at the exact projection.
  double vi_residual = 0.0;
  int inner_iterations = 0;
  bool converged = false;
};

/// max over `probes` of <z - candidate, Jx - J candidate>.
double projection_vi_residual(const PrimalVector& x, const PrimalVector& candidate,
                              const std::vector<PrimalVector>& probes);

/// Generalized projection Q_C x: the minimizer of phi(., x) over C, that is of
/// h(y) = |y|^2 - 2 <y, Jx>.
///
/// Half spaces reduce to one multiplier, Q_C x = J^-1(Jx - lambda a), found by
/// bisection. Affine sets use Newton in basis coordinates, boxes projected
/// Newton, balls projected gradient; all with Armijo backtracking from the
/// Euclidean projection of x. The returned point always lies in C.
/// `converged` is false when the inner solver runs out of iterations or the
/// variational-inequality residual exceeds `vi_tolerance`.
ProjectionResult generalized_projection(const ConvexSet& set, const PrimalVector& x,
                                        const ProjectionOptions& options = {});

}  // namespace lpfix
