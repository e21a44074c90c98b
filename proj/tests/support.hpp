#pragma once

// Small independent oracles shared by the test binaries. Nothing here calls
// into the library's solvers.

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace oracle {

/// Minimizer of a unimodal f on [a, b] by golden-section search.
inline double golden_section(const std::function<double(double)>& f, double a, double b,
                             int iterations = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iterations && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Root of a nondecreasing df on [a, b] by bisection. Minimizes a convex f
/// from its derivative, which stays accurate where f is too flat for
/// golden-section search.
inline double derivative_root(const std::function<double(double)>& df, double a, double b) {
  for (int i = 0; i < 200 && b - a > 0.0; ++i) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) {
      break;
    }
    (df(m) < 0.0 ? a : b) = m;
  }
  return 0.5 * (a + b);
}

/// The p-norm straight from the definition.
inline double pnorm(const Eigen::VectorXd& x, double p) {
  double s = 0.0;
  for (const double v : x) {
    s += std::pow(std::abs(v), p);
  }
  return std::pow(s, 1.0 / p);
}

/// J from the definition |x|^(2-p) |x_i|^(p-1) sign(x_i), no rescaling.
inline Eigen::VectorXd duality(const Eigen::VectorXd& x, double p) {
  const double n = pnorm(x, p);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  if (n == 0.0) {
    return out;
  }
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = std::pow(n, 2.0 - p) * std::pow(std::abs(x[i]), p - 1.0) * (x[i] < 0 ? -1.0 : 1.0);
  }
  return out;
}

/// phi(y, x) from the definition.
inline double phi(const Eigen::VectorXd& y, const Eigen::VectorXd& x, double p) {
  const double ny = pnorm(y, p);
  const double nx = pnorm(x, p);
  return ny * ny - 2.0 * y.dot(duality(x, p)) + nx * nx;
}

inline double relative_error(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace oracle
