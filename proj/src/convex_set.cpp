#include "lpfix/convex_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
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

void require_dimension(const ConvexSet& set, const PrimalVector& x) {
  if (set.dimension() != x.size()) {
    throw std::invalid_argument("convex set of dimension " + std::to_string(set.dimension()) +
                                " queried with a vector of length " +
                                std::to_string(x.size()));
  }
}

Eigen::VectorXd project_coords(const ConvexSet::Shape& shape, const Eigen::VectorXd& x) {
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) -> Eigen::VectorXd { return x; },
          [&](const HalfSpace& h) -> Eigen::VectorXd {
            const double excess = h.normal.dot(x) - h.offset;
            if (excess <= 0.0) {
              return x;
            }
            return x - (excess / h.normal.squaredNorm()) * h.normal;
          },
          [&](const Box& b) -> Eigen::VectorXd { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
          [&](const EuclideanBall& b) -> Eigen::VectorXd {
            const Eigen::VectorXd d = x - b.center;
            const double r = d.norm();
            if (r <= b.radius) {
              return x;
            }
            return b.center + (b.radius / r) * d;
          },
          [&](const AffineSet& a) -> Eigen::VectorXd {
            if (a.basis.cols() == 0) {
              return a.point;
            }
            return a.point + a.basis * (a.basis.transpose() * (x - a.point));
          },
      },
      shape);
}

double distance_coords(const ConvexSet::Shape& shape, const Eigen::VectorXd& x) {
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) { return 0.0; },
          [&](const HalfSpace& h) {
            return std::max(0.0, h.normal.dot(x) - h.offset) / h.normal.norm();
          },
          [&](const Box& b) {
            const Eigen::VectorXd below = (b.lower - x).cwiseMax(0.0);
            const Eigen::VectorXd above = (x - b.upper).cwiseMax(0.0);
            return (below + above).norm();
          },
          [&](const EuclideanBall& b) { return std::max(0.0, (x - b.center).norm() - b.radius); },
          [&](const AffineSet& a) { return (x - project_coords(a, x)).norm(); },
      },
      shape);
}

std::string format_vector(const Eigen::VectorXd& v) {
  std::ostringstream out;
  out << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out << (i ? ", " : "") << v[i];
  }
  out << ')';
  return out.str();
}

}  // namespace

ConvexSet ConvexSet::whole_space(int dimension) {
  if (dimension < 1) {
    throw std::invalid_argument("whole space: dimension must be positive");
  }
  return ConvexSet(dimension, WholeSpace{});
}

ConvexSet ConvexSet::half_space(Eigen::VectorXd normal, double offset) {
  if (normal.size() < 1 || !normal.allFinite() || !std::isfinite(offset)) {
    throw std::invalid_argument("half space: normal and offset must be finite");
  }
  if (normal.norm() == 0.0) {
    throw std::invalid_argument("half space: normal vector must be nonzero");
  }
  const int n = static_cast<int>(normal.size());
  return ConvexSet(n, HalfSpace{std::move(normal), offset});
}

ConvexSet ConvexSet::box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
  if (lower.size() < 1 || lower.size() != upper.size()) {
    throw std::invalid_argument("box: lower and upper bounds must have equal positive length");
  }
  if (lower.hasNaN() || upper.hasNaN()) {
    throw std::invalid_argument("box: bounds must not be NaN");
  }
  if ((lower.array() > upper.array()).any()) {
    throw std::invalid_argument("box: lower bound exceeds upper bound");
  }
  const int n = static_cast<int>(lower.size());
  return ConvexSet(n, Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::ball(Eigen::VectorXd center, double radius) {
  if (center.size() < 1 || !center.allFinite()) {
    throw std::invalid_argument("ball: center must be finite and nonempty");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw std::invalid_argument("ball: radius must be positive and finite");
  }
  const int n = static_cast<int>(center.size());
  return ConvexSet(n, EuclideanBall{std::move(center), radius});
}

ConvexSet ConvexSet::affine(Eigen::VectorXd point, const Eigen::MatrixXd& directions) {
  const int n = static_cast<int>(point.size());
  if (n < 1 || !point.allFinite()) {
    throw std::invalid_argument("affine set: point must be finite and nonempty");
  }
  if (directions.cols() > 0 && directions.rows() != n) {
    throw std::invalid_argument("affine set: direction vectors have the wrong length");
  }
  Eigen::MatrixXd basis(n, 0);
  if (directions.cols() > 0) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(directions);
    qr.setThreshold(1e-12);
    const auto rank = qr.rank();
    const Eigen::MatrixXd q = qr.householderQ();
    basis = q.leftCols(rank);
  }
  return ConvexSet(n, AffineSet{std::move(point), std::move(basis)});
}

ConvexSet ConvexSet::singleton(Eigen::VectorXd point) {
  const Eigen::MatrixXd no_directions(point.size(), 0);
  return affine(std::move(point), no_directions);
}

bool ConvexSet::is_singleton() const noexcept {
  const auto* a = std::get_if<AffineSet>(&shape_);
  return a != nullptr && a->basis.cols() == 0;
}

std::string ConvexSet::describe() const {
  return std::visit(
      Overloaded{
          [&](const WholeSpace&) { return "whole space R^" + std::to_string(dimension_); },
          [&](const HalfSpace& h) {
            std::ostringstream out;
            out << "half space <" << format_vector(h.normal) << ", x> <= " << h.offset;
            return out.str();
          },
          [&](const Box& b) { return "box " + format_vector(b.lower) + " .. " + format_vector(b.upper); },
          [&](const EuclideanBall& b) {
            std::ostringstream out;
            out << "ball center " << format_vector(b.center) << " radius " << b.radius;
            return out.str();
          },
          [&](const AffineSet& a) {
            return "affine set " + format_vector(a.point) + " + span of " +
                   std::to_string(a.basis.cols()) + " direction(s)";
          },
      },
      shape_);
}

double distance(const ConvexSet& set, const PrimalVector& x) {
  require_dimension(set, x);
  return distance_coords(set.shape(), x.coords());
}

bool contains(const ConvexSet& set, const PrimalVector& x, double tol) {
  if (tol < 0.0) {
    throw std::invalid_argument("contains: tolerance must be nonnegative");
  }
  return distance(set, x) <= tol;
}

PrimalVector euclidean_project(const ConvexSet& set, const PrimalVector& x) {
  require_dimension(set, x);
  return PrimalVector(x.space(), project_coords(set.shape(), x.coords()));
}

std::vector<PrimalVector> sample_points(const ConvexSet& set, const PrimalVector& center,
                                        double scale, int count, SplitMix64& rng) {
  require_dimension(set, center);
  std::vector<PrimalVector> points;
  points.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    const Eigen::VectorXd raw = center.coords() + scale * gaussian_vector(rng, center.size());
    points.emplace_back(center.space(), project_coords(set.shape(), raw));
  }
  return points;
}

double projection_vi_residual(const PrimalVector& x, const PrimalVector& candidate,
                              const std::vector<PrimalVector>& probes) {
  const DualVector gap = duality_map(x) - duality_map(candidate);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& z : probes) {
    worst = std::max(worst, pairing(z - candidate, gap));
  }
  return probes.empty() ? 0.0 : worst;
}

namespace {

struct InnerSolve {
  Eigen::VectorXd y;
  int iterations = 0;
  bool stationary = false;
};

// Half space {<a, y> <= b}, x outside: Q_C x = J^-1(Jx - lambda a) with lambda > 0
// the root of g(lambda) = <a, J^-1(Jx - lambda a)> - b. g is nonincreasing
// because J^-1 is monotone, so bisection brackets the root to the last bit.
InnerSolve project_half_space(const HalfSpace& h, const LpSpace& space, const Eigen::VectorXd& jx) {
  auto point = [&](double lambda) {
    return inverse_duality_map(DualVector(space, jx - lambda * h.normal)).coords();
  };
  auto g = [&](double lambda) { return h.normal.dot(point(lambda)) - h.offset; };
  InnerSolve out;
  double lo = 0.0;
  double hi = std::max(1.0, jx.cwiseAbs().maxCoeff() / h.normal.cwiseAbs().maxCoeff());
  while (g(hi) > 0.0 && out.iterations < 2000) {
    lo = hi;
    hi *= 2.0;
    ++out.iterations;
  }
  for (; out.iterations < 4000; ++out.iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  // hi is on the feasible side, so the returned point lies in C.
  out.y = point(hi);
  out.stationary = g(hi) <= 0.0;
  return out;
}

// Affine set p0 + span(B): Newton on t -> h(p0 + B t) in basis coordinates,
// which keeps every iterate exactly in the set.
InnerSolve project_affine(const AffineSet& a, const LpSpace& space, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& jx, const ProjectionOptions& options) {
  const Eigen::MatrixXd& basis = a.basis;
  auto at = [&](const Eigen::VectorXd& t) { return Eigen::VectorXd(a.point + basis * t); };
  auto objective = [&](const Eigen::VectorXd& t) {
    const Eigen::VectorXd y = at(t);
    const double ny = power_norm(y, space.p());
    return ny * ny - 2.0 * y.dot(jx);
  };
  auto reduced_gradient = [&](const Eigen::VectorXd& t) {
    return Eigen::VectorXd(basis.transpose() *
                           (duality_map(PrimalVector(space, at(t))).coords() - jx));
  };

  InnerSolve out;
  Eigen::VectorXd t = basis.transpose() * (x - a.point);
  double ht = objective(t);
  for (; out.iterations < options.max_iter; ++out.iterations) {
    const Eigen::VectorXd g = reduced_gradient(t);
    if (g.norm() <= options.gradient_tolerance) {
      out.stationary = true;
      break;
    }
    const Eigen::MatrixXd hess =
        basis.transpose() * duality_map_jacobian(PrimalVector(space, at(t))) * basis;
    Eigen::VectorXd dir = -hess.ldlt().solve(g);
    if (!dir.allFinite() || g.dot(dir) >= 0.0) {
      dir = -g;
    }
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double hc = 0.0;
    while (step >= 1e-20) {
      candidate = t + step * dir;
      hc = objective(candidate);
      // h's gradient in t is 2 g; compare against half of it throughout.
      const double predicted = 2.0 * step * g.dot(dir);
      if (hc <= ht + Tolerances::armijo * predicted ||
          (std::abs(hc - ht) <= 1e-10 * (1.0 + std::abs(ht)) &&
           (g + reduced_gradient(candidate)).dot(candidate - t) <= Tolerances::armijo * predicted)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || candidate == t) {
      out.stationary = true;
      break;
    }
    t = std::move(candidate);
    ht = hc;
  }
  out.y = at(t);
  return out;
}

// Box: projected Newton (Bertsekas). Bounds that are nearly active with the
// gradient pushing outward are held by a plain gradient step; the remaining
// coordinates take a Newton step on the Hessian of |y|^2 / 2, which is badly
// conditioned for p far from 2 and defeats plain projected gradient.
InnerSolve project_box(const Box& box, const LpSpace& space, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& jx, const ProjectionOptions& options) {
  const ConvexSet::Shape shape = box;
  auto objective = [&](const Eigen::VectorXd& y) {
    const double ny = power_norm(y, space.p());
    return ny * ny - 2.0 * y.dot(jx);
  };
  // Half the gradient of the objective.
  auto gradient = [&](const Eigen::VectorXd& y) {
    return Eigen::VectorXd(duality_map(PrimalVector(space, y)).coords() - jx);
  };

  InnerSolve out;
  const Eigen::Index n = x.size();
  Eigen::VectorXd y = project_coords(shape, x);
  double hy = objective(y);
  for (; out.iterations < options.max_iter; ++out.iterations) {
    const Eigen::VectorXd g = gradient(y);
    const double pg = (y - project_coords(shape, y - 2.0 * g)).norm();
    if (pg <= options.gradient_tolerance) {
      out.stationary = true;
      break;
    }
    const double eps = std::min(1e-6, pg);
    std::vector<Eigen::Index> free;
    Eigen::VectorXd dir = -g;
    for (Eigen::Index i = 0; i < n; ++i) {
      const bool at_lower = y[i] <= box.lower[i] + eps && g[i] > 0.0;
      const bool at_upper = y[i] >= box.upper[i] - eps && g[i] < 0.0;
      if (!at_lower && !at_upper) {
        free.push_back(i);
      }
    }
    if (!free.empty()) {
      const Eigen::MatrixXd hess = duality_map_jacobian(PrimalVector(space, y));
      const auto m = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd hf(m, m);
      Eigen::VectorXd gf(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        gf[a] = g[free[a]];
        for (Eigen::Index b = 0; b < m; ++b) {
          hf(a, b) = hess(free[a], free[b]);
        }
      }
      hf.diagonal().array() += 1e-12 * (1.0 + hf.diagonal().cwiseAbs().maxCoeff());
      const Eigen::VectorXd df = -hf.ldlt().solve(gf);
      if (df.allFinite() && gf.dot(df) < 0.0) {
        for (Eigen::Index a = 0; a < m; ++a) {
          dir[free[a]] = df[a];
        }
      }
    }
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double hc = 0.0;
    while (step >= 1e-20) {
      candidate = project_coords(shape, y + step * dir);
      hc = objective(candidate);
      const double predicted = 2.0 * g.dot(candidate - y);
      if (predicted < 0.0 &&
          (hc <= hy + Tolerances::armijo * predicted ||
           (std::abs(hc - hy) <= 1e-10 * (1.0 + std::abs(hy)) &&
            (g + gradient(candidate)).dot(candidate - y) <= Tolerances::armijo * predicted))) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || candidate == y) {
      out.stationary = true;
      break;
    }
    y = std::move(candidate);
    hy = hc;
  }
  out.y = std::move(y);
  return out;
}

// Balls: projected gradient on h(y) = |y|^2 - 2 <y, Jx> with Armijo
// backtracking from the Euclidean projection of x.
InnerSolve project_by_gradient(const ConvexSet::Shape& shape, const LpSpace& space,
                               const Eigen::VectorXd& x, const Eigen::VectorXd& jx,
                               const ProjectionOptions& options) {
  auto objective = [&](const Eigen::VectorXd& y) {
    const double ny = power_norm(y, space.p());
    return ny * ny - 2.0 * y.dot(jx);
  };
  auto gradient = [&](const Eigen::VectorXd& y) {
    return Eigen::VectorXd(2.0 * (duality_map(PrimalVector(space, y)).coords() - jx));
  };

  InnerSolve out;
  Eigen::VectorXd y = project_coords(shape, x);
  double hy = objective(y);
  for (; out.iterations < options.max_iter; ++out.iterations) {
    const Eigen::VectorXd g = gradient(y);
    const double pg = (y - project_coords(shape, y - g)).norm();
    if (pg <= options.gradient_tolerance) {
      out.stationary = true;
      break;
    }
    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    double hc = 0.0;
    while (step >= 1e-20) {
      candidate = project_coords(shape, y - step * g);
      hc = objective(candidate);
      const double predicted = g.dot(candidate - y);
      if (hc <= hy + Tolerances::armijo * predicted) {
        accepted = true;
        break;
      }
      // Near the minimizer h(c) - h(y) drowns in rounding of |y|^2. The
      // trapezoid estimate (g(y) + g(c)) . (c - y) / 2 stays accurate there.
      if (std::abs(hc - hy) <= 1e-10 * (1.0 + std::abs(hy)) &&
          0.5 * (g + gradient(candidate)).dot(candidate - y) <= Tolerances::armijo * predicted) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || candidate == y) {
      // No representable decrease left: y is stationary to working precision.
      out.stationary = true;
      break;
    }
    y = std::move(candidate);
    hy = hc;
  }
  out.y = std::move(y);
  return out;
}

}  // namespace

ProjectionResult generalized_projection(const ConvexSet& set, const PrimalVector& x,
                                        const ProjectionOptions& options) {
  require_dimension(set, x);
  if (set.is_whole_space()) {
    return {x, 0.0, 0, true};
  }
  if (set.is_singleton()) {
    return {euclidean_project(set, x), 0.0, 0, true};
  }
  if (distance(set, x) == 0.0) {
    // phi(., x) attains its minimum 0 at x itself.
    return {x, 0.0, 0, true};
  }

  const LpSpace& space = x.space();
  const Eigen::VectorXd jx = duality_map(x).coords();
  InnerSolve solve;
  if (space.is_hilbert()) {
    solve = {project_coords(set.shape(), x.coords()), 0, true};
  } else if (const auto* h = std::get_if<HalfSpace>(&set.shape())) {
    solve = project_half_space(*h, space, jx);
  } else if (const auto* a = std::get_if<AffineSet>(&set.shape())) {
    solve = project_affine(*a, space, x.coords(), jx, options);
  } else if (const auto* b = std::get_if<Box>(&set.shape())) {
    solve = project_box(*b, space, x.coords(), jx, options);
  } else {
    solve = project_by_gradient(set.shape(), space, x.coords(), jx, options);
  }

  PrimalVector point(space, solve.y);
  SplitMix64 rng(options.seed);
  const auto probes = sample_points(set, point, 1.0 + x.coords().norm(), options.probes, rng);
  const double vi = projection_vi_residual(x, point, probes);
  return {point, vi, solve.iterations, solve.stationary && vi <= options.vi_tolerance};
}

}  // namespace lpfix
