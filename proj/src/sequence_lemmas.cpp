#include "lpfix/sequence_lemmas.hpp"

#include "lpfix/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpfix {

namespace {

constexpr std::int64_t undefined = 0;

std::vector<std::int64_t> strict_rises(const RealSequencePrefix& prefix) {
  std::vector<std::int64_t> rises;
  for (std::int64_t k = 1; k < prefix.length(); ++k) {
    if (prefix(k) < prefix(k + 1)) {
      rises.push_back(k);
    }
  }
  return rises;
}

// sigma(n) = max{k <= n : xi_k < xi_k+1} for n >= first rise, undefined before.
std::vector<std::int64_t> mainge_selector(const RealSequencePrefix& prefix) {
  const std::int64_t n_total = prefix.length();
  std::vector<std::int64_t> tau(static_cast<std::size_t>(n_total), undefined);
  std::int64_t last = undefined;
  for (std::int64_t n = 1; n <= n_total; ++n) {
    if (n < n_total && prefix(n) < prefix(n + 1)) {
      last = n;
    }
    tau[static_cast<std::size_t>(n - 1)] = last;
  }
  return tau;
}

TauCertificate checked(const RealSequencePrefix& prefix, std::vector<std::int64_t> tau,
                       std::int64_t start) {
  auto cert = verify_certificate(prefix, std::move(tau), start);
  if (!cert.valid()) {
    throw std::logic_error("tau construction produced a certificate that does not verify");
  }
  return cert;
}

}  // namespace

RealSequencePrefix::RealSequencePrefix(std::vector<double> values) : values_(std::move(values)) {
  for (const double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("sequence prefix has a non-finite value");
    }
  }
}

TauCertificate verify_certificate(const RealSequencePrefix& prefix, std::vector<std::int64_t> tau,
                                  std::int64_t start_index) {
  const std::int64_t n_total = prefix.length();
  if (static_cast<std::int64_t>(tau.size()) != n_total) {
    throw std::invalid_argument("tau must have one entry per prefix index");
  }
  TauCertificate cert;
  cert.start_index = start_index;
  cert.tau = std::move(tau);
  if (n_total == 0 || start_index < 1 || start_index > n_total) {
    return cert;
  }
  auto at = [&](std::int64_t n) { return cert.tau[static_cast<std::size_t>(n - 1)]; };
  auto defined = [&](std::int64_t n) { return at(n) >= 1 && at(n) + 1 <= n_total; };

  cert.monotone = true;
  cert.rises = true;
  cert.dominated = true;
  for (std::int64_t n = 1; n <= n_total; ++n) {
    if (at(n) == undefined) {
      // Undefined entries are only allowed before the start index.
      cert.monotone = cert.monotone && n < start_index;
      continue;
    }
    if (!defined(n)) {
      cert.rises = false;
      continue;
    }
    if (n < n_total && at(n + 1) != undefined && at(n) > at(n + 1)) {
      cert.monotone = false;
    }
    if (!(prefix(at(n)) <= prefix(at(n) + 1))) {
      cert.rises = false;
    }
  }
  for (std::int64_t n = start_index; n <= n_total; ++n) {
    if (!defined(n) || !(prefix(n) <= prefix(at(n) + 1))) {
      cert.dominated = false;
    }
  }
  cert.divergent = defined(start_index) && defined(n_total) && at(n_total) > at(start_index);
  return cert;
}

RealSequencePrefix xu_recursion(double xi1, const Schedule& alpha, const Schedule& gamma,
                                std::int64_t length) {
  std::vector<std::string> violations;
  if (!(xi1 >= 0.0)) {
    violations.push_back("xi_1 must be nonnegative");
  }
  if (alpha.traits().lower < 0.0 || alpha.traits().upper > 1.0) {
    violations.push_back("alpha schedule: alpha_n must lie in [0, 1]");
  }
  if (!alpha.traits().divergent_sum) {
    violations.push_back("alpha schedule: sum divergence not declared (sum alpha_n = infinity)");
  }
  if (!(gamma.traits().limsup <= 0.0)) {
    violations.push_back("gamma schedule: limsup gamma_n <= 0 not declared");
  }
  if (length < 1) {
    violations.push_back("prefix length must be positive");
  }
  if (violations.empty()) {
    violations = check_declared_envelope(alpha, "alpha", length);
  }
  throw_if_violated(std::move(violations));

  std::vector<double> xi(static_cast<std::size_t>(length));
  xi[0] = xi1;
  for (std::int64_t n = 1; n < length; ++n) {
    const double a = alpha(n);
    xi[static_cast<std::size_t>(n)] = (1.0 - a) * xi[static_cast<std::size_t>(n - 1)] + a * gamma(n);
  }
  return RealSequencePrefix(std::move(xi));
}

MaingeOutcome mainge_tau(const RealSequencePrefix& prefix) {
  const auto rises = strict_rises(prefix);
  if (rises.empty()) {
    return NoRiseEvidence{};
  }
  return checked(prefix, mainge_selector(prefix), rises.front());
}

EventuallyIncreasingOutcome eventually_increasing_tau(const RealSequencePrefix& prefix,
                                                      double cauchy_tol) {
  if (!(cauchy_tol > 0.0)) {
    throw std::invalid_argument("cauchy tolerance must be positive");
  }
  const std::int64_t n_total = prefix.length();
  if (n_total < 2) {
    return ConvergentEvidence{0.0};
  }
  const std::int64_t tail = std::max<std::int64_t>(2, (n_total + 3) / 4);
  const std::int64_t tail_start = n_total - std::min(tail, n_total) + 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool tail_rise = false;
  for (std::int64_t n = tail_start; n <= n_total; ++n) {
    lo = std::min(lo, prefix(n));
    hi = std::max(hi, prefix(n));
    tail_rise = tail_rise || (n < n_total && prefix(n) < prefix(n + 1));
  }
  if (!tail_rise || hi - lo <= cauchy_tol) {
    return ConvergentEvidence{hi - lo};
  }
  const auto rises = strict_rises(prefix);
  if (rises.empty()) {
    return NoRiseEvidence{};
  }
  const std::int64_t start = rises.front();
  auto tau = mainge_selector(prefix);
  std::fill(tau.begin(), tau.begin() + (start - 1), tau[static_cast<std::size_t>(start - 1)]);
  return checked(prefix, std::move(tau), start);
}

double example_sequence(std::int64_t n) {
  if (n < 1) {
    throw std::out_of_range("example sequence index must be >= 1");
  }
  return n % 2 == 1 ? 0.0 : 1.0 / static_cast<double>(n);
}

ExampleClaimsReport verify_example_claims(std::int64_t n_max,
                                          const std::function<double(std::int64_t)>& xi,
                                          const std::function<double(std::int64_t)>& tail_sup) {
  if (n_max < 4) {
    throw std::invalid_argument("verify_example_claims needs n_max >= 4");
  }
  ExampleClaimsReport report;
  report.n_max = n_max;
  std::vector<double> v(static_cast<std::size_t>(n_max + 2));
  for (std::int64_t n = 1; n <= n_max + 1; ++n) {
    v[static_cast<std::size_t>(n)] = xi(n);
  }

  report.rising_subsequence = true;
  for (std::int64_t i = 1; 2 * i <= n_max; ++i) {
    report.rising_subsequence = report.rising_subsequence && v[2 * i - 1] < v[2 * i];
  }

  report.rises_only_at_odd = true;
  for (std::int64_t m = 1; m <= n_max; ++m) {
    if (v[m] <= v[m + 1] && m % 2 == 0) {
      report.rises_only_at_odd = false;
    }
  }

  // best[k] = max{xi_{m+1} : k <= m <= n_max, xi_m <= xi_{m+1}} and its argmax.
  constexpr double none = -std::numeric_limits<double>::infinity();
  std::vector<double> best(static_cast<std::size_t>(n_max + 2), none);
  std::vector<std::int64_t> best_at(static_cast<std::size_t>(n_max + 2), 0);
  for (std::int64_t m = n_max; m >= 1; --m) {
    best[m] = best[m + 1];
    best_at[m] = best_at[m + 1];
    if (v[m] <= v[m + 1] && v[m + 1] >= best[m]) {
      best[m] = v[m + 1];
      best_at[m] = m;
    }
  }
  const double beyond = tail_sup ? tail_sup(n_max) : std::numeric_limits<double>::infinity();
  report.no_dominating_subsequence = true;
  for (std::int64_t k = 2; k <= n_max; k += 2) {
    if (best[k] >= v[k]) {
      report.no_dominating_subsequence = false;
      if (!report.witness) {
        report.witness = std::make_pair(k, best_at[k]);
      }
    } else if (beyond >= v[k]) {
      // Not refuted by the enumeration, but the tail bound cannot exclude it.
      report.no_dominating_subsequence = false;
    }
  }
  return report;
}

ExampleClaimsReport verify_example_claims(std::int64_t n_max) {
  // The largest even index past n_max + 1 bounds the tail: 1 / (that index).
  auto tail = [](std::int64_t n) {
    const std::int64_t first_even = (n + 2) % 2 == 0 ? n + 2 : n + 3;
    return 1.0 / static_cast<double>(first_even);
  };
  return verify_example_claims(n_max, example_sequence, tail);
}

CertificateFuzzReport fuzz_certificates(int cases, std::int64_t length, std::uint64_t seed) {
  CertificateFuzzReport report;
  SplitMix64 root(seed);
  SplitMix64 osc_rng = root.split("oscillating");
  SplitMix64 mono_rng = root.split("monotone");
  const auto n_len = static_cast<std::size_t>(length);

  auto re_verifies = [](const RealSequencePrefix& prefix, const TauCertificate& cert) {
    const auto again = verify_certificate(prefix, cert.tau, cert.start_index);
    return again.valid() && again.monotone == cert.monotone && again.rises == cert.rises &&
           again.dominated == cert.dominated && again.divergent == cert.divergent;
  };

  for (int c = 0; c < cases; ++c) {
    std::vector<double> values(n_len);
    const double phase = osc_rng.uniform() * 6.283185307179586;
    for (std::size_t i = 0; i < n_len; ++i) {
      const double n = static_cast<double>(i + 1);
      switch (c % 3) {
        case 0:
          values[i] = osc_rng.uniform();
          break;
        case 1:
          values[i] = 1.0 + std::sin(0.7 * n + phase) + 0.1 * osc_rng.uniform();
          break;
        default:
          values[i] = (i % 2 == 0) ? 0.0 : 0.05 + osc_rng.uniform();
          break;
      }
    }
    RealSequencePrefix prefix(std::move(values));
    ++report.oscillating_cases;
    bool ok = true;
    const auto mainge = mainge_tau(prefix);
    if (const auto* cert = std::get_if<TauCertificate>(&mainge)) {
      if (!re_verifies(prefix, *cert)) {
        ++report.false_certificates;
        ok = false;
      }
      ok = ok && cert->divergent;
    } else {
      ok = false;
    }
    const auto eventual = eventually_increasing_tau(prefix, 1e-9);
    if (const auto* cert = std::get_if<TauCertificate>(&eventual)) {
      if (!re_verifies(prefix, *cert) || (*cert)(1) == undefined) {
        ++report.false_certificates;
        ok = false;
      }
      ok = ok && cert->divergent;
    } else {
      ok = false;
    }
    report.certificates_valid += ok ? 1 : 0;
  }

  for (int c = 0; c < cases; ++c) {
    std::vector<double> values(n_len);
    for (auto& v : values) {
      v = mono_rng.uniform();
      if (c % 2 == 1) {
        v = std::round(v * 10.0) / 10.0;  // ties
      }
    }
    std::sort(values.begin(), values.end(), std::greater<>());
    RealSequencePrefix prefix(std::move(values));
    ++report.monotone_cases;
    const auto mainge = mainge_tau(prefix);
    const auto eventual = eventually_increasing_tau(prefix, 1e-9);
    if (std::holds_alternative<TauCertificate>(mainge)) {
      ++report.false_certificates;
    }
    if (std::holds_alternative<TauCertificate>(eventual)) {
      ++report.false_certificates;
    }
    if (std::holds_alternative<NoRiseEvidence>(mainge) &&
        std::holds_alternative<ConvergentEvidence>(eventual)) {
      ++report.correct_evidence;
    }
  }
  return report;
}

}  // namespace lpfix
