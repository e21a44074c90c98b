#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpfix/iteration.hpp"
#include "support.hpp"

#include <cmath>

using namespace lpfix;

namespace {

HalpernConfig config(PrimalVector u, PrimalVector x1, ConvexSet c, MappingSequence seq,
                     Schedule alpha = Schedule::power(1.0, 1.0), std::int64_t max_iter = 100000) {
  return HalpernConfig{std::move(u), std::move(x1), std::move(c), std::move(seq), std::move(alpha),
                       max_iter,     1e-3,          std::nullopt, 0,              1.0};
}

MonotoneOperator diag_quadratic(const Eigen::VectorXd& diag, const Eigen::VectorXd& c) {
  return MonotoneOperator::quadratic_gradient(diag.asDiagonal(), c);
}

}  // namespace

TEST_CASE("one hand-composed step in l^2") {
  const LpSpace h(2, 2.0);
  const auto id = MonotoneOperator::linear(Eigen::Matrix2d::Identity(), Eigen::Vector2d::Zero());
  auto cfg = prepare(config(PrimalVector::zero(h), PrimalVector(h, Eigen::Vector2d(2, 2)),
                            ConvexSet::whole_space(2),
                            MappingSequence::resolvents(id, Schedule::constant(1.0)),
                            Schedule::shifted_power(0.0, 1.0, 1.0)));
  // alpha_2 = 1/2: y = (1/2) * (x / 2).
  const auto step = halpern_step(cfg, 2, cfg.start);
  CHECK((step.y.coords() - Eigen::Vector2d(0.5, 0.5)).norm() <= 1e-15);
  CHECK((step.x_next.coords() - Eigen::Vector2d(0.5, 0.5)).norm() <= 1e-15);
  CHECK(step.diagnostics.alpha == 0.5);
  CHECK((step.s_x.coords() - Eigen::Vector2d(1, 1)).norm() <= 1e-15);
}

TEST_CASE("a common fixed point anchored at itself stays put") {
  const LpSpace e(3, 3.0);
  const auto op = diag_quadratic(Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(1, 1, 1));
  const PrimalVector w(e, Eigen::Vector3d(1, 0.5, 1.0 / 3.0));
  auto cfg = prepare(config(w, w, ConvexSet::whole_space(3),
                            MappingSequence::resolvents(op, Schedule::constant(1.0))));
  REQUIRE(cfg.reference.has_value());
  CHECK(norm(*cfg.reference - w) <= 1e-15);
  const auto step = halpern_step(cfg, 5, w);
  CHECK(norm(step.x_next - w) <= 1e-8);
  const auto trace = run_proximal_point(cfg);
  CHECK(trace.status == RunStatus::converged);
  CHECK(trace.final_index == 1);
  CHECK(trace.rows.empty());
}

TEST_CASE("alpha_1 = 1 lands on Q_C(u)") {
  const LpSpace e(2, 3.0);
  const auto op = diag_quadratic(Eigen::Vector2d(1, 2), Eigen::Vector2d(-1, 0));
  const auto c = ConvexSet::half_space(Eigen::Vector2d(1, 0), 0.0);
  const PrimalVector u(e, Eigen::Vector2d(2, 1));
  auto cfg = prepare(config(u, PrimalVector(e, Eigen::Vector2d(-1, 0)), c,
                            MappingSequence::resolvents(op, Schedule::constant(1.0))));
  const auto step = halpern_step(cfg, 1, cfg.start);
  CHECK(norm(step.x_next - generalized_projection(c, u).point) <= 1e-12);
}

TEST_CASE("configuration errors") {
  const LpSpace e(2, 3.0);
  const auto op = diag_quadratic(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 0));
  const auto seq = MappingSequence::resolvents(op, Schedule::constant(1.0));
  const PrimalVector u(e, Eigen::Vector2d(0, 0));
  try {
    prepare(config(u, u, ConvexSet::whole_space(2), seq, Schedule::constant(0.5)));
    FAIL("expected a HypothesisError");
  } catch (const HypothesisError& err) {
    CHECK(std::string(err.what()).find("alpha_n -> 0") != std::string::npos);
  }
  const auto c = ConvexSet::half_space(Eigen::Vector2d(1, 0), -1.0);
  const auto problems = validate(config(u, u, c, seq, Schedule::power(1.0, 2.0)));
  CHECK(problems.size() == 2);  // start outside C, summable alpha
  // w = (1, 0) is outside C = {x_1 <= -1}.
  CHECK_THROWS_AS(prepare(config(u, PrimalVector(e, Eigen::Vector2d(-2, 0)), c, seq)), HypothesisError);
  CHECK_THROWS_AS(run_proximal_point(prepare(config(u, PrimalVector(e, Eigen::Vector2d(-2, 0)),
                                                    ConvexSet::half_space(Eigen::Vector2d(1, 0), 5.0), seq))),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_halpern_mann(prepare(config(u, u, ConvexSet::whole_space(2), seq))),
                  std::invalid_argument);
}

TEST_CASE("reference solution on a line in l^3 against golden section") {
  const double p = 3.0;
  const LpSpace e(2, p);
  const auto line = ConvexSet::affine(Eigen::Vector2d(2, 0), Eigen::Vector2d(0, 1));
  for (const Eigen::Vector2d& u : {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 2), Eigen::Vector2d(-3, -1)}) {
    // d/ds phi((2, s), u) = 2 J(2, s)_2 - 2 (Ju)_2.
    const double ju = oracle::duality(u, p)[1];
    const double root = oracle::derivative_root(
        [&](double s) { return oracle::duality(Eigen::Vector2d(2, s), p)[1] - ju; }, -50.0, 50.0);
    const double golden = oracle::golden_section(
        [&](double s) { return oracle::phi(Eigen::Vector2d(2, s), u, p); }, -50.0, 50.0);
    const auto w = reference_solution(line, PrimalVector(e, u));
    CHECK(std::abs(w[0] - 2.0) <= 1e-12);
    CHECK(std::abs(w[1] - root) <= 1e-6);
    // phi is only cubically curved at u = 0, so golden section is looser there.
    CHECK(std::abs(w[1] - golden) <= 1e-4);
  }
  // u = 0: phi((2, t), 0) = |(2, t)|^2 is smallest at t = 0.
  CHECK(std::abs(reference_solution(line, PrimalVector::zero(e))[1]) <= 1e-12);
  CHECK(reference_solution(ConvexSet::singleton(Eigen::Vector2d(4, 5)), PrimalVector::zero(e)).coords() ==
        Eigen::Vector2d(4, 5));
  const PrimalVector u(e, Eigen::Vector2d(3, 3));
  CHECK(reference_solution(ConvexSet::whole_space(2), u).coords() == u.coords());
}

TEST_CASE("proximal point run converges with every invariant intact") {
  SplitMix64 rng(61);
  const LpSpace e(4, 3.0);
  const auto op = diag_quadratic(Eigen::Vector4d(0.25, 0.5, 0.75, 1.0), gaussian_vector(rng, 4));
  auto cfg = prepare(config(PrimalVector(e, gaussian_vector(rng, 4)), PrimalVector(e, gaussian_vector(rng, 4)),
                            ConvexSet::whole_space(4),
                            MappingSequence::resolvents(op, Schedule::alternating(1.0, 10.0))));
  const auto trace = run_proximal_point(cfg);
  CHECK(trace.status == RunStatus::converged);
  CHECK(trace.final_error <= 1e-3);
  CHECK(trace.final_error == doctest::Approx(norm(trace.final_point - *cfg.reference)).epsilon(1e-15));
  CHECK(static_cast<std::int64_t>(trace.rows.size()) == trace.final_index - 1);
  const auto inv = check_invariants(trace);
  CHECK(inv.ok());
  CHECK(inv.min_slack >= -1e-7);
  CHECK(inv.violations == 0);
  CHECK(inv.trend != "invalid");
  // Snapshots every ceil(max_iter / 1000) = 100 steps.
  REQUIRE(trace.snapshots.size() >= 2);
  CHECK(trace.snapshots[1].n - trace.snapshots[0].n == 100);
}

TEST_CASE("Halpern-Mann with T = Q_C converges to Q_C(u)") {
  const LpSpace e(3, 3.0);
  const auto c = ConvexSet::box(Eigen::Vector3d(-1, -1, -1), Eigen::Vector3d(1, 1, 1));
  const PrimalVector u(e, Eigen::Vector3d(3, -0.5, 2));
  auto cfg = prepare(config(u, PrimalVector::zero(e), c,
                            MappingSequence::blends(Mapping::projection(c), Schedule::constant(0.5))));
  CHECK(norm(*cfg.reference - generalized_projection(c, u).point) <= 1e-12);
  const auto trace = run_halpern_mann(cfg);
  CHECK(trace.status == RunStatus::converged);
  const auto inv = check_invariants(trace);
  CHECK(inv.ok());
  CHECK_FALSE(inv.ucft_flagged);
  REQUIRE_FALSE(trace.rows.empty());
  CHECK(trace.rows.back().diagnostics.ucft_quantity.has_value());
}

TEST_CASE("limits follow the anchor") {
  const LpSpace e(2, 3.0);
  const auto op = diag_quadratic(Eigen::Vector2d(2, 0), Eigen::Vector2d(4, 0));  // zeros: {(2, t)}
  const auto seq = MappingSequence::resolvents(op, Schedule::constant(1.0));
  const PrimalVector start(e, Eigen::Vector2d(0, 0));
  const auto a = run_proximal_point(prepare(config(PrimalVector(e, Eigen::Vector2d(0, 3)), start,
                                                   ConvexSet::whole_space(2), seq)));
  const auto b = run_proximal_point(prepare(config(PrimalVector(e, Eigen::Vector2d(0, -3)), start,
                                                   ConvexSet::whole_space(2), seq)));
  REQUIRE(a.status == RunStatus::converged);
  REQUIRE(b.status == RunStatus::converged);
  CHECK(norm(a.final_point - *a.reference) <= 1e-3);
  CHECK(norm(b.final_point - *b.reference) <= 1e-3);
  CHECK(a.final_point[1] > 1.0);
  CHECK(b.final_point[1] < -1.0);
}

TEST_CASE("budget exhaustion and the fault hook") {
  const LpSpace e(2, 3.0);
  const auto op = diag_quadratic(Eigen::Vector2d(1, 2), Eigen::Vector2d(1, 0));
  auto cfg = config(PrimalVector(e, Eigen::Vector2d(3, 3)), PrimalVector(e, Eigen::Vector2d(-2, 1)),
                    ConvexSet::whole_space(2), MappingSequence::resolvents(op, Schedule::constant(1.0)),
                    Schedule::power(1.0, 1.0), 10);
  const auto short_run = run_proximal_point(prepare(cfg));
  CHECK(short_run.status == RunStatus::max_iter);
  CHECK(short_run.rows.size() == 10);

  cfg.max_iter = 2000;
  cfg.duality_corruption = 4.0;
  const auto corrupted = run_proximal_point(prepare(cfg));
  CHECK(check_invariants(corrupted).violations > 0);
  CHECK(to_string(RunStatus::inner_solver_failure) == "InnerSolverFailure");
}
