#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lpfix/schedule.hpp"

#include <algorithm>
#include <cmath>

using namespace lpfix;

namespace {

bool mentions(const std::vector<std::string>& messages, const std::string& needle) {
  return std::any_of(messages.begin(), messages.end(),
                     [&](const std::string& m) { return m.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("generators") {
  CHECK(Schedule::constant(0.5)(7) == 0.5);
  CHECK(Schedule::power(1.0, 1.0)(4) == 0.25);
  CHECK(Schedule::power(2.0, 0.5)(4) == 1.0);
  CHECK(Schedule::shifted_power(0.5, 0.25, 1.0)(1) == 0.75);
  CHECK(Schedule::one_minus_power(1.0, 1.0)(4) == 0.75);
  CHECK(Schedule::linear(2.0)(5) == 10.0);
  const auto alt = Schedule::alternating(1.0, 10.0);
  CHECK(alt(1) == 1.0);
  CHECK(alt(2) == 10.0);
  CHECK(alt(3) == 1.0);
  CHECK_THROWS_AS(alt(0), std::out_of_range);
}

TEST_CASE("constructors reject invalid parameters") {
  CHECK_THROWS_AS(Schedule::power(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::power(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::one_minus_power(1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::linear(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Schedule::constant(std::nan("")), std::invalid_argument);
}

TEST_CASE("declared traits") {
  const auto& p = Schedule::power(1.0, 1.0).traits();
  CHECK(p.divergent_sum);
  CHECK(p.strictly_positive);
  CHECK(Schedule::power(1.0, 1.0).tends_to_zero());
  CHECK_FALSE(Schedule::power(1.0, 2.0).traits().divergent_sum);
  CHECK(Schedule::power(1.0, 0.5).traits().divergent_sum);
  const auto& omp = Schedule::one_minus_power(1.0, 1.0).traits();
  CHECK(omp.limsup == 1.0);
  CHECK(omp.lower == 0.0);
  const auto& lin = Schedule::linear(1.0).traits();
  CHECK(lin.lower == 1.0);
  CHECK(std::isinf(lin.upper));
  const auto& sp = Schedule::shifted_power(0.5, 0.25, 1.0).traits();
  CHECK(sp.liminf == 0.5);
  CHECK(sp.upper == 0.75);
}

TEST_CASE("step size hypotheses") {
  CHECK(check_step_sizes(Schedule::power(1.0, 1.0), 1000).empty());
  CHECK(check_step_sizes(Schedule::power(1.0, 0.5), 1000).empty());
  CHECK(mentions(check_step_sizes(Schedule::constant(0.5), 1000), "alpha_n -> 0"));
  CHECK(mentions(check_step_sizes(Schedule::power(1.0, 2.0), 1000), "sum divergence not declared"));
  CHECK(mentions(check_step_sizes(Schedule::power(2.0, 1.0), 1000), "[0, 1]"));
  CHECK(mentions(check_step_sizes(Schedule::constant(0.0), 1000), "alpha_n > 0"));
}

TEST_CASE("resolvent parameter and blend weight hypotheses") {
  CHECK(check_resolvent_parameters(Schedule::constant(1.0), 1000).empty());
  CHECK(check_resolvent_parameters(Schedule::linear(1.0), 1000).empty());
  CHECK(check_resolvent_parameters(Schedule::alternating(1.0, 10.0), 1000).empty());
  CHECK(mentions(check_resolvent_parameters(Schedule::power(1.0, 1.0), 1000), "inf_n r_n > 0"));

  CHECK(check_blend_weights(Schedule::constant(0.5), 1000).empty());
  CHECK(check_blend_weights(Schedule::shifted_power(0.5, 0.25, 1.0), 1000).empty());
  CHECK(mentions(check_blend_weights(Schedule::one_minus_power(0.5, 1.0), 1000), "limsup beta_n < 1"));
  CHECK(mentions(check_blend_weights(Schedule::power(0.5, 1.0), 1000), "liminf beta_n > 0"));
  CHECK(mentions(check_blend_weights(Schedule::constant(1.5), 1000), "[0, 1]"));
}

TEST_CASE("a schedule whose values leave its declared envelope is caught") {
  ScheduleTraits lying{0.0, 0.5, 0.0, 0.0, true, true};
  const Schedule bad("lying", [](std::int64_t n) { return n == 300 ? 0.9 : 1.0 / (n + 1.0); }, lying);
  CHECK(check_declared_envelope(bad, "alpha", 299).empty());
  const auto found = check_declared_envelope(bad, "alpha", 1000);
  REQUIRE(found.size() == 1);
  CHECK(found[0].find("n = 300") != std::string::npos);
}

TEST_CASE("hypothesis errors carry every violation") {
  try {
    throw_if_violated(check_step_sizes(Schedule::constant(2.0), 10));
    FAIL("expected a HypothesisError");
  } catch (const HypothesisError& e) {
    CHECK(e.violations().size() == 2);  // outside [0, 1] and not tending to 0
    CHECK(std::string(e.what()).find("alpha_n -> 0") != std::string::npos);
  }
  CHECK_NOTHROW(throw_if_violated({}));
}
