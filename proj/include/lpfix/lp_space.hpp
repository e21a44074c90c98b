#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace lpfix {

/// The space R^n equipped with the p-norm, 1 < p < infinity.
///
/// Exponents are restricted to [1.1, 10]: outside that window the powers
/// |x_i|^(p-1) lose too many digits for the identity checks to mean anything.
class LpSpace {
 public:
  static constexpr double min_exponent = 1.1;
  static constexpr double max_exponent = 10.0;

  LpSpace(int dimension, double exponent);

  int dimension() const noexcept { return dimension_; }
  double p() const noexcept { return p_; }
  /// Conjugate exponent p / (p - 1).
  double q() const noexcept { return q_; }
  bool is_hilbert() const noexcept { return p_ == 2.0; }

  friend bool operator==(const LpSpace&, const LpSpace&) = default;

 private:
  int dimension_;
  double p_;
  double q_;
};

struct PrimalTag {};
struct DualTag {};

/// Coordinates of a point of E = l^p_n (PrimalTag) or of E* = l^q_n (DualTag).
///
/// The tag keeps primal and dual quantities from being mixed; crossing
/// between the two goes through duality_map / inverse_duality_map or an
/// explicit `reinterpret`.
template <class Tag>
class LpVector {
 public:
  LpVector(const LpSpace& space, Eigen::VectorXd coords)
      : space_(space), coords_(std::move(coords)) {
    if (coords_.size() != space_.dimension()) {
      throw std::invalid_argument("vector length " + std::to_string(coords_.size()) +
                                  " does not match space dimension " +
                                  std::to_string(space_.dimension()));
    }
    if (!coords_.allFinite()) {
      throw std::invalid_argument("vector has non-finite coordinates");
    }
  }

  static LpVector zero(const LpSpace& space) {
    return LpVector(space, Eigen::VectorXd::Zero(space.dimension()));
  }

  const LpSpace& space() const noexcept { return space_; }
  const Eigen::VectorXd& coords() const noexcept { return coords_; }
  int size() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[i]; }

  LpVector& operator+=(const LpVector& other) {
    require_same_space(other);
    return *this = LpVector(space_, coords_ + other.coords_);
  }
  LpVector& operator-=(const LpVector& other) {
    require_same_space(other);
    return *this = LpVector(space_, coords_ - other.coords_);
  }
  LpVector& operator*=(double s) { return *this = LpVector(space_, coords_ * s); }

  friend LpVector operator+(LpVector a, const LpVector& b) { return a += b; }
  friend LpVector operator-(LpVector a, const LpVector& b) { return a -= b; }
  friend LpVector operator*(double s, LpVector a) { return a *= s; }
  friend LpVector operator*(LpVector a, double s) { return a *= s; }
  friend LpVector operator-(const LpVector& a) { return LpVector(a.space_, -a.coords_); }

  void require_same_space(const LpVector& other) const {
    if (!(space_ == other.space_)) {
      throw std::invalid_argument("vectors belong to different spaces");
    }
  }

 private:
  LpSpace space_;
  Eigen::VectorXd coords_;
};

using PrimalVector = LpVector<PrimalTag>;
using DualVector = LpVector<DualTag>;

/// Views the same coordinates as a vector of the other space. Used where a
/// formula genuinely identifies R^n with its dual (Euclidean gradient steps).
template <class To, class From>
LpVector<To> reinterpret(const LpVector<From>& v) {
  return LpVector<To>(v.space(), v.coords());
}

/// (sum |x_i|^p)^(1/p), computed after dividing by max |x_i|.
double norm(const PrimalVector& x);
/// (sum |x*_i|^q)^(1/q).
double norm(const DualVector& xstar);
/// Plain r-norm of raw coordinates, overflow-safe.
double power_norm(const Eigen::VectorXd& v, double r);

/// <x, x*> = sum x_i x*_i.
double pairing(const PrimalVector& x, const DualVector& xstar);

/// Normalized duality mapping J of l^p: |x|^(2-p) |x_i|^(p-1) sign(x_i), J0 = 0.
DualVector duality_map(const PrimalVector& x);
/// J^-1, the duality mapping of l^q.
PrimalVector inverse_duality_map(const DualVector& xstar);

/// Jacobian of J at x (the Hessian of |x|^2 / 2). Coordinates with
/// |x_i| below `floor * max|x|` are lifted to that floor when p < 2, where
/// the true derivative is unbounded. Returns (p - 1) I at the origin.
Eigen::MatrixXd duality_map_jacobian(const PrimalVector& x, double floor = 1e-8);

/// phi(x, y) = |x|^2 - 2 <x, Jy> + |y|^2.
double lyapunov(const PrimalVector& x, const PrimalVector& y);

/// J^-1(lambda Jx + (1 - lambda) Jy). Throws when lambda is outside [0, 1].
PrimalVector dual_convex_combination(double lambda, const PrimalVector& x,
                                     const PrimalVector& y);

}  // namespace lpfix
