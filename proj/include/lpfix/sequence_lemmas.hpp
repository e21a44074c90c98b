#pragma once

#include "lpfix/schedule.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace lpfix {

/// xi_1, ..., xi_N, addressed 1-based.
class RealSequencePrefix {
 public:
  explicit RealSequencePrefix(std::vector<double> values);

  double operator()(std::int64_t n) const { return values_.at(static_cast<std::size_t>(n - 1)); }
  std::int64_t length() const noexcept { return static_cast<std::int64_t>(values_.size()); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// An index selector tau on 1..N with the properties of the Mainge-type lemmas.
///
/// tau[n - 1] holds tau(n); the value 0 marks "undefined", which is allowed
/// only below start_index. Every flag is recomputable from (prefix, tau,
/// start_index) by `verify_certificate`.
struct TauCertificate {
  std::vector<std::int64_t> tau;
  std::int64_t start_index = 1;
  bool monotone = false;    ///< tau(n) <= tau(n + 1) wherever both are defined
  bool divergent = false;   ///< tau grows over the prefix: tau(N) > tau(start_index)
  bool rises = false;       ///< xi_tau(n) <= xi_tau(n)+1 wherever tau(n) is defined
  bool dominated = false;   ///< xi_n <= xi_tau(n)+1 for n >= start_index

  bool valid() const noexcept { return monotone && rises && dominated; }
  std::int64_t operator()(std::int64_t n) const { return tau.at(static_cast<std::size_t>(n - 1)); }
};

/// The prefix has no strict rise xi_k < xi_k+1: Mainge's hypothesis is unmet.
struct NoRiseEvidence {};

/// The prefix tail looks convergent: no rise in the last quarter, or its
/// spread is within the Cauchy tolerance.
struct ConvergentEvidence {
  double tail_spread = 0.0;
};

using MaingeOutcome = std::variant<TauCertificate, NoRiseEvidence>;
using EventuallyIncreasingOutcome = std::variant<TauCertificate, ConvergentEvidence, NoRiseEvidence>;

/// Recomputes every flag of `tau` against `prefix`.
TauCertificate verify_certificate(const RealSequencePrefix& prefix, std::vector<std::int64_t> tau,
                                  std::int64_t start_index);

/// Equality orbit xi_{n+1} = (1 - alpha_n) xi_n + alpha_n gamma_n, n = 1..N-1.
/// Requires xi_1 >= 0, alpha_n in [0, 1] with a declared divergent sum, and
/// a declared limsup gamma_n <= 0; throws HypothesisError otherwise.
RealSequencePrefix xu_recursion(double xi1, const Schedule& alpha, const Schedule& gamma,
                                std::int64_t length);

/// tau(n) = max{k <= n : xi_k < xi_k+1} for n >= N0 (the first rise).
MaingeOutcome mainge_tau(const RealSequencePrefix& prefix);

/// Mainge's tau patched to tau(n) = tau(N0) for n <= N0, so the rise holds for
/// every n. Only built when the tail oscillates by more than `cauchy_tol` > 0.
EventuallyIncreasingOutcome eventually_increasing_tau(const RealSequencePrefix& prefix,
                                                      double cauchy_tol);

/// 0 for odd n, 1/n for even n.
double example_sequence(std::int64_t n);

struct ExampleClaimsReport {
  std::int64_t n_max = 0;
  /// xi_{2i-1} < xi_{2i} for every i <= n_max / 2.
  bool rising_subsequence = false;
  /// Every m <= n_max with xi_m <= xi_{m+1} is odd.
  bool rises_only_at_odd = false;
  /// For every even k <= n_max, no m >= k has xi_m <= xi_{m+1} and xi_k <= xi_{m+1}.
  bool no_dominating_subsequence = false;
  /// (k, m) that satisfies both constraints, when one was found.
  std::optional<std::pair<std::int64_t, std::int64_t>> witness;
};

/// Exhaustive check of the counterexample's two claims up to n_max. Indices
/// beyond n_max are covered by `tail_sup(n_max)`, an upper bound for
/// sup_{m > n_max} xi_{m+1}.
/// An empty `tail_sup` leaves the tail unbounded, so claim (2) cannot pass.
ExampleClaimsReport verify_example_claims(std::int64_t n_max,
                                          const std::function<double(std::int64_t)>& xi,
                                          const std::function<double(std::int64_t)>& tail_sup);

/// The example sequence, with its exact tail bound.
ExampleClaimsReport verify_example_claims(std::int64_t n_max);

struct CertificateFuzzReport {
  int oscillating_cases = 0;
  int certificates_valid = 0;
  int monotone_cases = 0;
  int correct_evidence = 0;
  /// Returned certificates whose flags do not re-verify, over both families.
  int false_certificates = 0;
};

/// Random oscillating prefixes must yield verifiable certificates from both
/// constructions; monotone nonincreasing prefixes must yield NoRiseEvidence
/// (Mainge) and ConvergentEvidence (eventually increasing).
CertificateFuzzReport fuzz_certificates(int cases, std::int64_t length, std::uint64_t seed);

}  // namespace lpfix
