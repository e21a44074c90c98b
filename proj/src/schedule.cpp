#include "lpfix/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lpfix {

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    out += out.empty() ? "" : "; ";
    out += item;
  }
  return out;
}

std::string number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void require_positive_exponent(double exponent, const char* family) {
  if (!(exponent > 0.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument(std::string(family) + " schedule: exponent must be positive");
  }
}

}  // namespace

HypothesisError::HypothesisError(std::vector<std::string> violations)
    : std::invalid_argument("hypothesis violated: " + join(violations)),
      violations_(std::move(violations)) {}

Schedule::Schedule(std::string name, std::function<double(std::int64_t)> generator,
                   ScheduleTraits traits)
    : name_(std::move(name)), generator_(std::move(generator)), traits_(traits) {}

Schedule Schedule::constant(double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("constant schedule: value must be finite");
  }
  ScheduleTraits t{value, value, value, value, value > 0.0, value > 0.0};
  return Schedule("constant(" + number(value) + ")", [value](std::int64_t) { return value; }, t);
}

Schedule Schedule::power(double scale, double exponent) {
  require_positive_exponent(exponent, "power");
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("power schedule: scale must be positive");
  }
  ScheduleTraits t{0.0, scale, 0.0, 0.0, true, exponent <= 1.0};
  return Schedule("power(" + number(scale) + "/n^" + number(exponent) + ")",
                  [scale, exponent](std::int64_t n) {
                    return exponent == 1.0 ? scale / static_cast<double>(n)
                                           : scale / std::pow(static_cast<double>(n), exponent);
                  },
                  t);
}

Schedule Schedule::shifted_power(double offset, double scale, double exponent) {
  require_positive_exponent(exponent, "shifted power");
  if (!std::isfinite(offset) || !std::isfinite(scale)) {
    throw std::invalid_argument("shifted power schedule: offset and scale must be finite");
  }
  const double first = offset + scale;
  ScheduleTraits t{std::min(offset, first), std::max(offset, first), offset, offset,
                   std::min(offset, first) > 0.0 || (offset >= 0.0 && scale > 0.0),
                   offset > 0.0 || (offset == 0.0 && scale > 0.0 && exponent <= 1.0)};
  return Schedule("shifted_power(" + number(offset) + " + " + number(scale) + "/n^" +
                      number(exponent) + ")",
                  [offset, scale, exponent](std::int64_t n) {
                    return offset + scale / std::pow(static_cast<double>(n), exponent);
                  },
                  t);
}

Schedule Schedule::one_minus_power(double scale, double exponent) {
  require_positive_exponent(exponent, "one-minus-power");
  if (!(scale > 0.0) || scale > 1.0) {
    throw std::invalid_argument("one-minus-power schedule: scale must lie in (0, 1]");
  }
  ScheduleTraits t{1.0 - scale, 1.0, 1.0, 1.0, scale < 1.0, true};
  return Schedule("one_minus_power(1 - " + number(scale) + "/n^" + number(exponent) + ")",
                  [scale, exponent](std::int64_t n) {
                    return 1.0 - scale / std::pow(static_cast<double>(n), exponent);
                  },
                  t);
}

Schedule Schedule::linear(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("linear schedule: scale must be positive");
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  ScheduleTraits t{scale, inf, inf, inf, true, true};
  return Schedule("linear(" + number(scale) + "*n)",
                  [scale](std::int64_t n) { return scale * static_cast<double>(n); }, t);
}

Schedule Schedule::alternating(double first, double second) {
  if (!std::isfinite(first) || !std::isfinite(second)) {
    throw std::invalid_argument("alternating schedule: values must be finite");
  }
  const double lo = std::min(first, second);
  const double hi = std::max(first, second);
  ScheduleTraits t{lo, hi, lo, hi, lo > 0.0, hi > 0.0 && lo >= 0.0};
  return Schedule("alternating(" + number(first) + ", " + number(second) + ")",
                  [first, second](std::int64_t n) { return n % 2 == 1 ? first : second; }, t);
}

double Schedule::operator()(std::int64_t n) const {
  if (n < 1) {
    throw std::out_of_range("schedule index must be >= 1, got " + std::to_string(n));
  }
  return generator_(n);
}

std::vector<std::string> check_declared_envelope(const Schedule& s, const std::string& role,
                                                 std::int64_t count) {
  const auto& t = s.traits();
  for (std::int64_t n = 1; n <= count; ++n) {
    const double v = s(n);
    if (!std::isfinite(v) || v < t.lower || v > t.upper || (t.strictly_positive && v <= 0.0)) {
      std::ostringstream msg;
      msg << role << " schedule " << s.name() << ": value " << v << " at n = " << n
          << " contradicts its declared bounds";
      return {msg.str()};
    }
  }
  return {};
}

std::vector<std::string> check_step_sizes(const Schedule& alpha, std::int64_t count) {
  std::vector<std::string> out;
  const auto& t = alpha.traits();
  if (!t.strictly_positive) {
    out.push_back("alpha schedule: alpha_n > 0 for every n not satisfied");
  }
  if (t.upper > 1.0 || t.lower < 0.0) {
    out.push_back("alpha schedule: alpha_n must lie in [0, 1]");
  }
  if (!alpha.tends_to_zero()) {
    out.push_back("alpha schedule: alpha_n -> 0 not satisfied");
  }
  if (!t.divergent_sum) {
    out.push_back("alpha schedule: sum divergence not declared (sum alpha_n = infinity)");
  }
  if (out.empty()) {
    auto envelope = check_declared_envelope(alpha, "alpha", count);
    out.insert(out.end(), envelope.begin(), envelope.end());
  }
  return out;
}

std::vector<std::string> check_resolvent_parameters(const Schedule& r, std::int64_t count) {
  std::vector<std::string> out;
  if (!(r.traits().lower > 0.0)) {
    out.push_back("r schedule: inf_n r_n > 0 not satisfied");
  } else {
    out = check_declared_envelope(r, "r", count);
  }
  return out;
}

std::vector<std::string> check_blend_weights(const Schedule& beta, std::int64_t count) {
  std::vector<std::string> out;
  const auto& t = beta.traits();
  if (t.lower < 0.0 || t.upper > 1.0) {
    out.push_back("beta schedule: beta_n must lie in [0, 1]");
  }
  if (!(t.liminf > 0.0)) {
    out.push_back("beta schedule: liminf beta_n > 0 not satisfied");
  }
  if (!(t.limsup < 1.0)) {
    out.push_back("beta schedule: limsup beta_n < 1 not satisfied");
  }
  if (out.empty()) {
    out = check_declared_envelope(beta, "beta", count);
  }
  return out;
}

void throw_if_violated(std::vector<std::string> violations) {
  if (!violations.empty()) {
    throw HypothesisError(std::move(violations));
  }
}

}  // namespace lpfix
