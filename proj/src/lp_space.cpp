#include "lpfix/lp_space.hpp"

#include <algorithm>
#include <sstream>

namespace lpfix {

namespace {

// |x|_r = m * s with m = max |x_i| and s = |x / m|_r.
struct ScaledNorm {
  double max_abs;
  double unit_norm;
};

ScaledNorm scaled_norm(const Eigen::VectorXd& v, double r) {
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) {
    return {0.0, 0.0};
  }
  double sum = 0.0;
  if (r == 2.0) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double t = v[i] / m;
      sum += t * t;
    }
    return {m, std::sqrt(sum)};
  }
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    sum += std::pow(std::abs(v[i]) / m, r);
  }
  return {m, std::pow(sum, 1.0 / r)};
}

// Duality mapping of l^r applied to raw coordinates.
Eigen::VectorXd duality_coords(const Eigen::VectorXd& v, double r) {
  if (r == 2.0) {
    return v;
  }
  const auto [m, s] = scaled_norm(v, r);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v.size());
  if (m == 0.0) {
    return out;
  }
  const double lead = m * std::pow(s, 2.0 - r);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == 0.0) {
      continue;
    }
    const double mag = std::pow(std::abs(v[i]) / m, r - 1.0);
    out[i] = std::copysign(lead * mag, v[i]);
  }
  return out;
}

}  // namespace

LpSpace::LpSpace(int dimension, double exponent) : dimension_(dimension), p_(exponent) {
  if (dimension < 1) {
    throw std::invalid_argument("space dimension must be at least 1, got " +
                                std::to_string(dimension));
  }
  if (!(exponent >= min_exponent && exponent <= max_exponent)) {
    std::ostringstream msg;
    msg << "exponent p = " << exponent << " outside the accepted range [" << min_exponent
        << ", " << max_exponent << "]";
    throw std::invalid_argument(msg.str());
  }
  q_ = exponent == 2.0 ? 2.0 : exponent / (exponent - 1.0);
}

double power_norm(const Eigen::VectorXd& v, double r) {
  const auto [m, s] = scaled_norm(v, r);
  return m * s;
}

double norm(const PrimalVector& x) { return power_norm(x.coords(), x.space().p()); }

double norm(const DualVector& xstar) { return power_norm(xstar.coords(), xstar.space().q()); }

double pairing(const PrimalVector& x, const DualVector& xstar) {
  if (!(x.space() == xstar.space())) {
    throw std::invalid_argument("pairing: primal and dual vectors live in different spaces");
  }
  return x.coords().dot(xstar.coords());
}

DualVector duality_map(const PrimalVector& x) {
  return DualVector(x.space(), duality_coords(x.coords(), x.space().p()));
}

PrimalVector inverse_duality_map(const DualVector& xstar) {
  return PrimalVector(xstar.space(), duality_coords(xstar.coords(), xstar.space().q()));
}

Eigen::MatrixXd duality_map_jacobian(const PrimalVector& x, double floor) {
  const double p = x.space().p();
  const int n = x.size();
  if (p == 2.0) {
    return Eigen::MatrixXd::Identity(n, n);
  }
  const auto [m, s] = scaled_norm(x.coords(), p);
  if (m == 0.0) {
    return (p - 1.0) * Eigen::MatrixXd::Identity(n, n);
  }
  // H = (p-1) s^(2-p) diag(|t_i|^(p-2)) + (2-p) s^(2-2p) w w^T,
  // t = x / max|x|, w_i = |t_i|^(p-1) sign(t_i); H is homogeneous of degree 0.
  Eigen::VectorXd w(n);
  Eigen::VectorXd diag(n);
  for (int i = 0; i < n; ++i) {
    double t = std::abs(x[i]) / m;
    w[i] = std::copysign(std::pow(t, p - 1.0), x[i]);
    if (p < 2.0) {
      t = std::max(t, floor);
    }
    diag[i] = t == 0.0 ? 0.0 : std::pow(t, p - 2.0);
  }
  Eigen::MatrixXd h = (2.0 - p) * std::pow(s, 2.0 - 2.0 * p) * (w * w.transpose());
  h.diagonal() += (p - 1.0) * std::pow(s, 2.0 - p) * diag;
  return h;
}

double lyapunov(const PrimalVector& x, const PrimalVector& y) {
  x.require_same_space(y);
  if (x.space().is_hilbert()) {
    return (x.coords() - y.coords()).squaredNorm();
  }
  const double nx = norm(x);
  const double ny = norm(y);
  // Rounding can push the difference a few ulps below zero near x = y.
  return std::max(0.0, nx * nx - 2.0 * pairing(x, duality_map(y)) + ny * ny);
}

PrimalVector dual_convex_combination(double lambda, const PrimalVector& x,
                                     const PrimalVector& y) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream msg;
    msg << "dual_convex_combination: lambda = " << lambda << " outside [0, 1]";
    throw std::invalid_argument(msg.str());
  }
  x.require_same_space(y);
  if (lambda == 1.0) {
    return x;
  }
  if (lambda == 0.0) {
    return y;
  }
  return inverse_duality_map(lambda * duality_map(x) + (1.0 - lambda) * duality_map(y));
}

}  // namespace lpfix
