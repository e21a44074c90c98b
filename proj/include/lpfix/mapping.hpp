#pragma once

#include "lpfix/convex_set.hpp"
#include "lpfix/lp_space.hpp"
#include "lpfix/monotone_operator.hpp"
#include "lpfix/schedule.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace lpfix {

class Mapping;

/// T = L_r, the resolvent of a monotone operator.
struct ResolventMap {
  MonotoneOperator op;
  double r;
};

/// T = Q_C, the generalized projection onto C.
struct ProjectionMap {
  ConvexSet set;
};

/// S = J^-1(beta J + (1 - beta) J T).
struct BlendMap {
  std::shared_ptr<const Mapping> inner;
  double beta;
};

/// A mapping of type (r) with a computable fixed-point set.
class Mapping {
 public:
  using Kind = std::variant<ResolventMap, ProjectionMap, BlendMap>;

  static Mapping resolvent(MonotoneOperator op, double r);
  static Mapping projection(ConvexSet set);
  static Mapping blend(Mapping inner, double beta);

  const Kind& kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }
  std::string describe() const;

 private:
  Mapping(int dimension, Kind kind) : dimension_(dimension), kind_(std::move(kind)) {}

  int dimension_;
  Kind kind_;
};

struct MapOutcome {
  PrimalVector point;
  bool converged = true;
  int inner_iterations = 0;
};

MapOutcome apply(const Mapping& map, const PrimalVector& x);

/// F(T) as a convex set. For a blend with beta < 1, F(S) = F(T).
ConvexSet fixed_point_reference(const Mapping& map);

struct ResolventSequence {
  MonotoneOperator op;
  Schedule r;
};

struct BlendSequence {
  Mapping inner;
  Schedule beta;
};

/// A strongly relatively nonexpansive sequence {S_n}: resolvents L_{r_n} with
/// inf r_n > 0, or blends J^-1(beta_n J + (1 - beta_n) J T) with
/// 0 < liminf beta_n <= limsup beta_n < 1. The constructors check the
/// declared schedule traits and throw HypothesisError when they fail.
class MappingSequence {
 public:
  using Kind = std::variant<ResolventSequence, BlendSequence>;

  static MappingSequence resolvents(MonotoneOperator op, Schedule r,
                                    std::int64_t checked_indices = Tolerances::schedule_checked_indices);
  static MappingSequence blends(Mapping inner, Schedule beta,
                                std::int64_t checked_indices = Tolerances::schedule_checked_indices);

  const Kind& kind() const noexcept { return kind_; }
  int dimension() const noexcept;
  bool is_resolvent_sequence() const noexcept {
    return std::holds_alternative<ResolventSequence>(kind_);
  }
  bool is_blend_sequence() const noexcept { return std::holds_alternative<BlendSequence>(kind_); }

  /// The n-th mapping S_n.
  Mapping at(std::int64_t n) const;
  /// Common fixed points: A^-1 0 for resolvents, F(T) for blends.
  ConvexSet common_fixed_points() const;
  std::string describe() const;

 private:
  explicit MappingSequence(Kind kind) : kind_(std::move(kind)) {}

  Kind kind_;
};

/// S_n x.
MapOutcome apply_indexed(const MappingSequence& seq, std::int64_t n, const PrimalVector& x);

struct SrnsThresholds {
  double d_threshold = 1e-6;
  double e_threshold = 1e-3;
  /// Fraction of the prefix (from the end) the flag rule looks at.
  double tail_fraction = 0.25;
};

struct SrnsReport {
  /// d_n = phi(p, x_n) - phi(p, S_n x_n).
  std::vector<double> d;
  /// e_n = phi(S_n x_n, x_n).
  std::vector<double> e;
  double tail_max_d = 0.0;
  double tail_min_e = 0.0;
  /// d_n stays below d_threshold on the tail while e_n stays above e_threshold.
  bool flagged = false;
};

/// Finite-sample check of the strongly-relatively-nonexpansive implication
/// "d_n -> 0 forces e_n -> 0" on iterates xs[0] = x_1, xs[1] = x_2, ...
SrnsReport srns_diagnostic(const MappingSequence& seq, std::span<const PrimalVector> xs,
                           const PrimalVector& fixed_point, const SrnsThresholds& thresholds = {});

}  // namespace lpfix
