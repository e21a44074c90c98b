#include "lpfix/mapping.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lpfix {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace

Mapping Mapping::resolvent(MonotoneOperator op, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw std::invalid_argument("resolvent mapping: r must be positive");
  }
  const int n = op.dimension();
  return Mapping(n, ResolventMap{std::move(op), r});
}

Mapping Mapping::projection(ConvexSet set) {
  const int n = set.dimension();
  return Mapping(n, ProjectionMap{std::move(set)});
}

Mapping Mapping::blend(Mapping inner, double beta) {
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("blend mapping: beta must lie in [0, 1]");
  }
  const int n = inner.dimension();
  return Mapping(n, BlendMap{std::make_shared<const Mapping>(std::move(inner)), beta});
}

std::string Mapping::describe() const {
  return std::visit(Overloaded{
                        [](const ResolventMap& m) {
                          std::ostringstream out;
                          out << "resolvent L_" << m.r << " of " << m.op.describe();
                          return out.str();
                        },
                        [](const ProjectionMap& m) {
                          return "generalized projection onto " + m.set.describe();
                        },
                        [](const BlendMap& m) {
                          std::ostringstream out;
                          out << "blend beta = " << m.beta << " with " << m.inner->describe();
                          return out.str();
                        },
                    },
                    kind_);
}

MapOutcome apply(const Mapping& map, const PrimalVector& x) {
  return std::visit(
      Overloaded{
          [&](const ResolventMap& m) {
            auto res = resolvent(m.op, m.r, x);
            return MapOutcome{std::move(res.point), res.converged, res.inner_iterations};
          },
          [&](const ProjectionMap& m) {
            auto res = generalized_projection(m.set, x);
            return MapOutcome{std::move(res.point), res.converged, res.inner_iterations};
          },
          [&](const BlendMap& m) {
            if (m.beta == 1.0) {
              return MapOutcome{x, true, 0};
            }
            auto inner = apply(*m.inner, x);
            return MapOutcome{dual_convex_combination(m.beta, x, inner.point), inner.converged,
                              inner.inner_iterations};
          },
      },
      map.kind());
}

ConvexSet fixed_point_reference(const Mapping& map) {
  return std::visit(Overloaded{
                        [](const ResolventMap& m) { return zero_set_reference(m.op); },
                        [](const ProjectionMap& m) { return m.set; },
                        [&](const BlendMap& m) {
                          if (m.beta == 1.0) {
                            return ConvexSet::whole_space(map.dimension());
                          }
                          return fixed_point_reference(*m.inner);
                        },
                    },
                    map.kind());
}

MappingSequence MappingSequence::resolvents(MonotoneOperator op, Schedule r,
                                            std::int64_t checked_indices) {
  throw_if_violated(check_resolvent_parameters(r, checked_indices));
  return MappingSequence(ResolventSequence{std::move(op), std::move(r)});
}

MappingSequence MappingSequence::blends(Mapping inner, Schedule beta,
                                        std::int64_t checked_indices) {
  throw_if_violated(check_blend_weights(beta, checked_indices));
  return MappingSequence(BlendSequence{std::move(inner), std::move(beta)});
}

int MappingSequence::dimension() const noexcept {
  return std::visit(Overloaded{
                        [](const ResolventSequence& s) { return s.op.dimension(); },
                        [](const BlendSequence& s) { return s.inner.dimension(); },
                    },
                    kind_);
}

Mapping MappingSequence::at(std::int64_t n) const {
  return std::visit(Overloaded{
                        [n](const ResolventSequence& s) { return Mapping::resolvent(s.op, s.r(n)); },
                        [n](const BlendSequence& s) { return Mapping::blend(s.inner, s.beta(n)); },
                    },
                    kind_);
}

ConvexSet MappingSequence::common_fixed_points() const {
  return std::visit(Overloaded{
                        [](const ResolventSequence& s) { return zero_set_reference(s.op); },
                        [](const BlendSequence& s) { return fixed_point_reference(s.inner); },
                    },
                    kind_);
}

std::string MappingSequence::describe() const {
  return std::visit(Overloaded{
                        [](const ResolventSequence& s) {
                          return "resolvents of " + s.op.describe() + ", r_n = " + s.r.name();
                        },
                        [](const BlendSequence& s) {
                          return "blends of " + s.inner.describe() + ", beta_n = " + s.beta.name();
                        },
                    },
                    kind_);
}

MapOutcome apply_indexed(const MappingSequence& seq, std::int64_t n, const PrimalVector& x) {
  if (n < 1) {
    throw std::out_of_range("mapping sequence index must be >= 1");
  }
  return std::visit(
      Overloaded{
          [&](const ResolventSequence& s) {
            auto res = resolvent(s.op, s.r(n), x);
            return MapOutcome{std::move(res.point), res.converged, res.inner_iterations};
          },
          [&](const BlendSequence& s) {
            const double beta = s.beta(n);
            if (beta == 1.0) {
              return MapOutcome{x, true, 0};
            }
            auto inner = apply(s.inner, x);
            return MapOutcome{dual_convex_combination(beta, x, inner.point), inner.converged,
                              inner.inner_iterations};
          },
      },
      seq.kind());
}

SrnsReport srns_diagnostic(const MappingSequence& seq, std::span<const PrimalVector> xs,
                           const PrimalVector& fixed_point, const SrnsThresholds& thresholds) {
  SrnsReport report;
  report.d.reserve(xs.size());
  report.e.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto sx = apply_indexed(seq, static_cast<std::int64_t>(i + 1), xs[i]).point;
    report.d.push_back(lyapunov(fixed_point, xs[i]) - lyapunov(fixed_point, sx));
    report.e.push_back(lyapunov(sx, xs[i]));
  }
  if (xs.empty()) {
    return report;
  }
  const auto tail = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(thresholds.tail_fraction * xs.size())));
  const auto begin = xs.size() - std::min(tail, xs.size());
  report.tail_max_d = *std::max_element(report.d.begin() + begin, report.d.end());
  report.tail_min_e = *std::min_element(report.e.begin() + begin, report.e.end());
  report.flagged =
      report.tail_max_d < thresholds.d_threshold && report.tail_min_e > thresholds.e_threshold;
  return report;
}

}  // namespace lpfix
