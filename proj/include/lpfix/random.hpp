#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace lpfix {

/// SplitMix64. Small, fast, and splittable: `split(label)` derives an
/// independent stream so that adding a consumer never perturbs the others.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  SplitMix64 split(std::string_view label) const {
    // FNV-1a of the label, mixed into a copy of the current state.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : label) {
      h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
    }
    SplitMix64 child(state_ ^ h);
    child();
    return SplitMix64(child());
  }

  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Standard normal vector (Box-Muller on our own uniforms, so the stream is
/// identical across standard library implementations).
inline Eigen::VectorXd gaussian_vector(SplitMix64& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; i += 2) {
    double u1 = rng.uniform();
    while (u1 <= 0.0) {
      u1 = rng.uniform();
    }
    const double u2 = rng.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    v[i] = radius * std::cos(two_pi * u2);
    if (i + 1 < n) {
      v[i + 1] = radius * std::sin(two_pi * u2);
    }
  }
  return v;
}

inline Eigen::VectorXd uniform_vector(SplitMix64& rng, int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    v[i] = lo + (hi - lo) * rng.uniform();
  }
  return v;
}

}  // namespace lpfix
