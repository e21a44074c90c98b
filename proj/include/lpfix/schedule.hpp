#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lpfix {

/// Raised when a configuration violates a hypothesis of the convergence
/// theorems. Carries every violation found, not just the first.
class HypothesisError : public std::invalid_argument {
 public:
  explicit HypothesisError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Declared analytic behaviour of a real sequence {s_n}, n >= 1.
struct ScheduleTraits {
  double lower = 0.0;  ///< inf_n s_n
  double upper = 0.0;  ///< sup_n s_n
  double liminf = 0.0;
  double limsup = 0.0;
  bool strictly_positive = false;  ///< s_n > 0 for every n
  bool divergent_sum = false;      ///< sum_n s_n = infinity
};

/// A closed-form sequence generator together with its declared traits.
/// The named constructors derive the traits analytically.
class Schedule {
 public:
  Schedule(std::string name, std::function<double(std::int64_t)> generator, ScheduleTraits traits);

  /// s_n = value.
  static Schedule constant(double value);
  /// s_n = scale / n^exponent, exponent > 0.
  static Schedule power(double scale, double exponent);
  /// s_n = offset + scale / n^exponent, exponent > 0.
  static Schedule shifted_power(double offset, double scale, double exponent);
  /// s_n = 1 - scale / n^exponent.
  static Schedule one_minus_power(double scale, double exponent);
  /// s_n = scale * n.
  static Schedule linear(double scale);
  /// a, b, a, b, ...
  static Schedule alternating(double first, double second);

  double operator()(std::int64_t n) const;
  const std::string& name() const noexcept { return name_; }
  const ScheduleTraits& traits() const noexcept { return traits_; }
  bool tends_to_zero() const noexcept { return traits_.liminf == 0.0 && traits_.limsup == 0.0; }

 private:
  std::string name_;
  std::function<double(std::int64_t)> generator_;
  ScheduleTraits traits_;
};

/// Values on 1..count outside the declared [lower, upper] envelope, as messages.
std::vector<std::string> check_declared_envelope(const Schedule& s, const std::string& role,
                                                 std::int64_t count);

/// Halpern step sizes: alpha_n in (0, 1], alpha_n -> 0, sum alpha_n = infinity.
std::vector<std::string> check_step_sizes(const Schedule& alpha, std::int64_t count);
/// Resolvent parameters: inf r_n > 0.
std::vector<std::string> check_resolvent_parameters(const Schedule& r, std::int64_t count);
/// Blend weights: beta_n in [0, 1] and 0 < liminf beta_n <= limsup beta_n < 1.
std::vector<std::string> check_blend_weights(const Schedule& beta, std::int64_t count);

/// Throws HypothesisError when `violations` is nonempty.
void throw_if_violated(std::vector<std::string> violations);

}  // namespace lpfix
