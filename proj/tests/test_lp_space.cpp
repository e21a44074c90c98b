#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpfix/lp_space.hpp"
#include "lpfix/random.hpp"
#include "support.hpp"

#include <cmath>

using namespace lpfix;

TEST_CASE("exponent range and conjugate exponent") {
  CHECK_THROWS_AS(LpSpace(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(LpSpace(3, 10.5), std::invalid_argument);
  CHECK_THROWS_AS(LpSpace(0, 2.0), std::invalid_argument);
  CHECK(LpSpace(3, 1.1).p() == 1.1);
  CHECK(LpSpace(3, 10.0).p() == 10.0);
  CHECK(LpSpace(3, 2.0).q() == 2.0);
  CHECK(LpSpace(3, 2.0).is_hilbert());
  CHECK(LpSpace(3, 3.0).q() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(LpSpace(3, 4.0).q() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("vectors reject bad input and mixed spaces") {
  const LpSpace e3(3, 3.0);
  CHECK_THROWS_AS(PrimalVector(e3, Eigen::VectorXd::Zero(2)), std::invalid_argument);
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(3);
  bad[1] = std::nan("");
  CHECK_THROWS_AS(PrimalVector(e3, bad), std::invalid_argument);
  const PrimalVector a(e3, Eigen::Vector3d(1, 2, 3));
  const PrimalVector b(LpSpace(3, 4.0), Eigen::Vector3d(1, 2, 3));
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK((a - a).coords().isZero());
  CHECK((2.0 * a)[2] == 6.0);
}

TEST_CASE("norm of (3, 4) in l^2 and (1, -2) in l^3") {
  CHECK(norm(PrimalVector(LpSpace(2, 2.0), Eigen::Vector2d(3, 4))) == doctest::Approx(5.0));
  const double want = std::cbrt(9.0);
  CHECK(norm(PrimalVector(LpSpace(2, 3.0), Eigen::Vector2d(1, -2))) ==
        doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("duality map matches the defining formula") {
  SplitMix64 rng(11);
  for (const double p : {1.1, 1.5, 2.5, 3.0, 7.0, 10.0}) {
    const LpSpace e(6, p);
    for (int k = 0; k < 50; ++k) {
      const Eigen::VectorXd x = gaussian_vector(rng, 6);
      const Eigen::VectorXd want = oracle::duality(x, p);
      const Eigen::VectorXd got = duality_map(PrimalVector(e, x)).coords();
      CHECK((got - want).norm() <= 1e-12 * (1.0 + want.norm()));
    }
  }
  // p = 3, x = (1, -2): J x = (1, -4) / 9^(1/3).
  const auto j = duality_map(PrimalVector(LpSpace(2, 3.0), Eigen::Vector2d(1, -2)));
  CHECK(j[0] == doctest::Approx(1.0 / std::cbrt(9.0)).epsilon(1e-14));
  CHECK(j[1] == doctest::Approx(-4.0 / std::cbrt(9.0)).epsilon(1e-14));
}

TEST_CASE("J0 = 0, J is positively homogeneous, and p = 2 is the identity") {
  const LpSpace e(4, 3.5);
  CHECK(duality_map(PrimalVector::zero(e)).coords().isZero());
  CHECK(inverse_duality_map(DualVector::zero(e)).coords().isZero());
  const PrimalVector x(e, Eigen::Vector4d(0.3, -1.2, 0.0, 2.0));
  const auto scaled = duality_map(3.0 * x).coords();
  CHECK((scaled - 3.0 * duality_map(x).coords()).norm() <= 1e-13);
  const LpSpace h(4, 2.0);
  CHECK(duality_map(PrimalVector(h, x.coords())).coords() == x.coords());
}

TEST_CASE("duality identities hold at extreme magnitudes") {
  SplitMix64 rng(12);
  for (const double p : {1.5, 2.5, 4.0, 10.0}) {
    const LpSpace e(16, p);
    for (const double scale : {1e-150, 1e-8, 1.0, 1e8, 1e150}) {
      const PrimalVector x(e, scale * gaussian_vector(rng, 16));
      const auto jx = duality_map(x);
      const double nx = norm(x);
      CHECK(oracle::relative_error(norm(jx) / nx, 1.0) <= 1e-12);
      CHECK(std::abs(pairing(x, jx) / (nx * nx) - 1.0) <= 1e-12);
      const auto back = inverse_duality_map(jx);
      CHECK(norm(back - x) <= 1e-12 * nx);
    }
  }
}

TEST_CASE("lyapunov functional") {
  SplitMix64 rng(13);
  const LpSpace h(5, 2.0);
  const PrimalVector x(h, gaussian_vector(rng, 5));
  const PrimalVector y(h, gaussian_vector(rng, 5));
  CHECK(lyapunov(x, y) == doctest::Approx((x.coords() - y.coords()).squaredNorm()));
  for (const double p : {1.3, 3.0, 6.0}) {
    const LpSpace e(5, p);
    const PrimalVector a(e, gaussian_vector(rng, 5));
    const PrimalVector b(e, gaussian_vector(rng, 5));
    CHECK(std::abs(lyapunov(a, a)) <= 1e-14 * (1.0 + norm(a) * norm(a)));
    CHECK(lyapunov(a, b) >= 0.0);
    CHECK(lyapunov(a, b) == doctest::Approx(oracle::phi(a.coords(), b.coords(), p)).epsilon(1e-12));
    const double gap = norm(a) - norm(b);
    CHECK(gap * gap <= lyapunov(a, b) + 1e-12);
  }
}

TEST_CASE("duality map jacobian agrees with central differences") {
  SplitMix64 rng(14);
  for (const double p : {1.5, 2.0, 3.0, 5.0}) {
    const LpSpace e(4, p);
    const Eigen::VectorXd x = gaussian_vector(rng, 4) + Eigen::VectorXd::Constant(4, 0.5);
    const Eigen::MatrixXd jac = duality_map_jacobian(PrimalVector(e, x));
    const double h = 1e-6;
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd up = x;
      Eigen::VectorXd down = x;
      up[j] += h;
      down[j] -= h;
      const Eigen::VectorXd col = (oracle::duality(up, p) - oracle::duality(down, p)) / (2 * h);
      CHECK((jac.col(j) - col).norm() <= 1e-6 * (1.0 + col.norm()));
    }
    CHECK((jac - jac.transpose()).norm() <= 1e-12);
  }
  CHECK(duality_map_jacobian(PrimalVector::zero(LpSpace(3, 3.0))).isApprox(2.0 * Eigen::Matrix3d::Identity()));
}

TEST_CASE("dual convex combination") {
  const LpSpace e(3, 3.0);
  const PrimalVector x(e, Eigen::Vector3d(1, 0, -1));
  const PrimalVector y(e, Eigen::Vector3d(0, 2, 1));
  CHECK(dual_convex_combination(1.0, x, y).coords() == x.coords());
  CHECK(dual_convex_combination(0.0, x, y).coords() == y.coords());
  CHECK_THROWS_AS(dual_convex_combination(1.5, x, y), std::invalid_argument);
  CHECK_THROWS_AS(dual_convex_combination(-0.1, x, y), std::invalid_argument);
  const auto mid = dual_convex_combination(0.25, x, y);
  const Eigen::VectorXd want = 0.25 * duality_map(x).coords() + 0.75 * duality_map(y).coords();
  CHECK((duality_map(mid).coords() - want).norm() <= 1e-13);
}
