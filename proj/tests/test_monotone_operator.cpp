#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpfix/monotone_operator.hpp"
#include "support.hpp"

#include <vector>

using namespace lpfix;

namespace {

// Newton with a central-difference Jacobian on F(z) = J z + r(Q z - c) - J x,
// using only the definition-based duality map.
Eigen::VectorXd newton_oracle(const Eigen::MatrixXd& q, const Eigen::VectorXd& c, double r,
                              const Eigen::VectorXd& x, double p) {
  const auto f = [&](const Eigen::VectorXd& z) {
    return Eigen::VectorXd(oracle::duality(z, p) + r * (q * z - c) - oracle::duality(x, p));
  };
  Eigen::VectorXd z = Eigen::VectorXd::Constant(x.size(), 0.3);
  for (int it = 0; it < 100; ++it) {
    const Eigen::VectorXd fz = f(z);
    if (fz.norm() <= 1e-14) {
      break;
    }
    Eigen::MatrixXd jac(z.size(), z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
      Eigen::VectorXd up = z;
      Eigen::VectorXd down = z;
      up[j] += 1e-7;
      down[j] -= 1e-7;
      jac.col(j) = (f(up) - f(down)) / 2e-7;
    }
    const Eigen::VectorXd step = jac.lu().solve(fz);
    double t = 1.0;
    while (t > 1e-10 && f(z - t * step).norm() >= fz.norm()) {
      t *= 0.5;
    }
    z -= t * step;
  }
  return z;
}

std::vector<MonotoneOperator> operators(int n, SplitMix64& rng) {
  const LpSpace e(n, 3.0);
  Eigen::MatrixXd b = Eigen::MatrixXd::Random(n, n);
  Eigen::MatrixXd skew = Eigen::MatrixXd::Random(n, n);
  skew = skew - skew.transpose().eval();
  Eigen::MatrixXd spd = b * b.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
  return {
      MonotoneOperator::linear(spd + skew, gaussian_vector(rng, n)),
      MonotoneOperator::duality_residual(PrimalVector(e, gaussian_vector(rng, n))),
      MonotoneOperator::quadratic_gradient(spd, gaussian_vector(rng, n)),
  };
}

}  // namespace

TEST_CASE("evaluate the three variants") {
  const LpSpace e(2, 3.0);
  const PrimalVector x(e, Eigen::Vector2d(1, 1));
  CHECK(evaluate(MonotoneOperator::linear(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero()), x)
            .coords() == x.coords());
  const PrimalVector z(e, Eigen::Vector2d(0.4, -2.0));
  CHECK(evaluate(MonotoneOperator::duality_residual(z), z).coords().isZero());
  const auto grad =
      MonotoneOperator::quadratic_gradient(Eigen::Vector2d(1, 2).asDiagonal(), Eigen::Vector2d(1, 0));
  CHECK(evaluate(grad, x).coords() == Eigen::Vector2d(0, 2));
  CHECK_THROWS_AS(evaluate(grad, PrimalVector::zero(LpSpace(3, 3.0))), std::invalid_argument);
}

TEST_CASE("construction rejects non-monotone matrices") {
  CHECK_THROWS_AS(MonotoneOperator::linear(Eigen::Vector2d(1, -0.1).asDiagonal(), Eigen::Vector2d::Zero()),
                  std::invalid_argument);
  Eigen::Matrix2d rotation;
  rotation << 0, -1, 1, 0;  // skew: monotone with zero symmetric part
  CHECK_NOTHROW(MonotoneOperator::linear(rotation, Eigen::Vector2d::Zero()));
  CHECK_THROWS_AS(MonotoneOperator::quadratic_gradient(rotation, Eigen::Vector2d::Zero()),
                  std::invalid_argument);
  CHECK_THROWS_AS(MonotoneOperator::linear(Eigen::MatrixXd::Identity(2, 3), Eigen::Vector2d::Zero()),
                  std::invalid_argument);
}

TEST_CASE("resolvent closed forms and argument checks") {
  const LpSpace h(2, 2.0);
  const auto id = MonotoneOperator::linear(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
  const auto res = resolvent(id, 1.0, PrimalVector(h, Eigen::Vector2d(2, 4)));
  CHECK(res.converged);
  CHECK((res.point.coords() - Eigen::Vector2d(1, 2)).norm() <= 1e-14);
  CHECK_THROWS_AS(resolvent(id, 0.0, PrimalVector(h, Eigen::Vector2d(2, 4))), std::invalid_argument);
  CHECK_THROWS_AS(resolvent(id, -1.0, PrimalVector(h, Eigen::Vector2d(2, 4))), std::invalid_argument);

  // Jz + Qz - c = 0 with Q = diag(1, 2), c = (1, 0): z = (1/2, 0), since J(a, 0) = (a, 0).
  const LpSpace e(2, 3.0);
  const auto grad =
      MonotoneOperator::quadratic_gradient(Eigen::Vector2d(1, 2).asDiagonal(), Eigen::Vector2d(1, 0));
  const auto at0 = resolvent(grad, 1.0, PrimalVector::zero(e));
  CHECK(at0.converged);
  CHECK((at0.point.coords() - Eigen::Vector2d(0.5, 0.0)).norm() <= 1e-8);
}

TEST_CASE("resolvent in l^3 against an independent Newton oracle") {
  const double p = 3.0;
  const LpSpace e(2, p);
  const Eigen::Matrix2d q = Eigen::Vector2d(1, 2).asDiagonal();
  const Eigen::Vector2d c(1, 0);
  const auto grad = MonotoneOperator::quadratic_gradient(q, c);
  for (const Eigen::Vector2d& x : {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1), Eigen::Vector2d(-2, 0.5)}) {
    for (const double r : {0.1, 1.0, 10.0}) {
      const Eigen::VectorXd want = newton_oracle(q, c, r, x, p);
      const auto got = resolvent(grad, r, PrimalVector(e, x));
      CHECK(got.converged);
      CHECK((got.point.coords() - want).norm() <= 1e-8);
    }
  }
}

TEST_CASE("gradient descent and the automatic solver agree") {
  SplitMix64 rng(31);
  const LpSpace e(4, 3.0);
  const auto grad = MonotoneOperator::quadratic_gradient(Eigen::Vector4d(0.5, 1, 1.5, 2).asDiagonal(),
                                                         gaussian_vector(rng, 4));
  const auto dres = MonotoneOperator::duality_residual(PrimalVector(e, gaussian_vector(rng, 4)));
  ResolventOptions gd;
  gd.method = ResolventMethod::gradient_descent;
  for (const auto* op : {&grad, &dres}) {
    for (int k = 0; k < 5; ++k) {
      const PrimalVector x(e, gaussian_vector(rng, 4));
      const auto a = resolvent(*op, 1.0, x);
      const auto b = resolvent(*op, 1.0, x, gd);
      CHECK(a.converged);
      CHECK(b.converged);
      CHECK(norm(a.point - b.point) <= 1e-7);
    }
  }
  const auto skew = MonotoneOperator::linear(Eigen::Matrix2d{{0, -1}, {1, 0}}, Eigen::Vector2d::Zero());
  CHECK_THROWS_AS(resolvent(skew, 1.0, PrimalVector(LpSpace(2, 3.0), Eigen::Vector2d(1, 0)), gd),
                  std::invalid_argument);
}

TEST_CASE("zero set references") {
  const LpSpace e(2, 3.0);
  const auto lin = MonotoneOperator::linear(Eigen::Matrix2d::Identity(), Eigen::Vector2d(-1, -2));
  const auto z1 = zero_set_reference(lin);
  REQUIRE(z1.is_singleton());
  CHECK((std::get<AffineSet>(z1.shape()).point - Eigen::Vector2d(1, 2)).norm() <= 1e-14);

  const PrimalVector target(e, Eigen::Vector2d(0.3, -0.7));
  CHECK(std::get<AffineSet>(zero_set_reference(MonotoneOperator::duality_residual(target)).shape()).point ==
        target.coords());

  const auto line = zero_set_reference(
      MonotoneOperator::quadratic_gradient(Eigen::Vector2d(2, 0).asDiagonal(), Eigen::Vector2d(4, 0)));
  REQUIRE_FALSE(line.is_singleton());
  const auto& a = std::get<AffineSet>(line.shape());
  REQUIRE(a.basis.cols() == 1);
  CHECK(a.point[0] == doctest::Approx(2.0));
  CHECK(std::abs(a.basis(0, 0)) <= 1e-14);
  CHECK(std::abs(a.basis(1, 0)) == doctest::Approx(1.0));

  // Q x = c has no solution when c leaves the range of Q.
  CHECK_THROWS(zero_set_reference(
      MonotoneOperator::quadratic_gradient(Eigen::Vector2d(2, 0).asDiagonal(), Eigen::Vector2d(4, 1))));
}

TEST_CASE("resolvent residual, inequality, type (r) and fixed points") {
  SplitMix64 rng(32);
  for (const double p : {1.5, 2.0, 3.0}) {
    const LpSpace e(5, p);
    for (const auto& op : operators(5, rng)) {
      const auto zeros = zero_set_reference(op);
      const PrimalVector u(e, std::get<AffineSet>(zeros.shape()).point);
      for (const double r : {0.1, 1.0, 10.0}) {
        for (int k = 0; k < 10; ++k) {
          const PrimalVector x(e, 2.0 * gaussian_vector(rng, 5));
          const auto res = resolvent(op, r, x);
          CHECK(res.converged);
          CHECK(res.residual <= Tolerances::resolvent);
          CHECK(resolvent_residual(op, r, x, res.point) == doctest::Approx(res.residual).epsilon(1e-6));
          const double lhs = lyapunov(u, res.point) + lyapunov(res.point, x);
          CHECK(lhs - lyapunov(u, x) <= 1e-7);
          CHECK(lyapunov(u, res.point) <= lyapunov(u, x) + 1e-7);
        }
        const auto fixed = resolvent(op, r, u);
        CHECK(norm(fixed.point - u) <= 1e-7);
      }
    }
  }
}

TEST_CASE("monotonicity on 1000 random pairs") {
  SplitMix64 rng(33);
  const LpSpace e(6, 2.5);
  for (const auto& op : operators(6, rng)) {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const PrimalVector x(e, 3.0 * gaussian_vector(rng, 6));
      const PrimalVector y(e, 3.0 * gaussian_vector(rng, 6));
      worst = std::min(worst, pairing(x - y, evaluate(op, x) - evaluate(op, y)));
    }
    CHECK(worst >= -1e-10);
  }
}
