#include "lpfix/iteration.hpp"

#include "lpfix/sequence_lemmas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpfix {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::int64_t stride_for(const HalpernConfig& cfg) {
  if (cfg.snapshot_stride > 0) {
    return cfg.snapshot_stride;
  }
  return std::max<std::int64_t>(1, (cfg.max_iter + 999) / 1000);
}

double sq(double v) { return v * v; }

}  // namespace

std::vector<std::string> validate(const HalpernConfig& cfg) {
  std::vector<std::string> out;
  const int n = cfg.anchor.size();
  if (!(cfg.start.space() == cfg.anchor.space())) {
    out.push_back("start and anchor live in different spaces");
  }
  if (cfg.constraint.dimension() != n || cfg.sequence.dimension() != n) {
    out.push_back("constraint or mapping sequence dimension differs from the space dimension");
    return out;
  }
  if (!contains(cfg.constraint, cfg.start, Tolerances::membership)) {
    out.push_back("start x_1 is not in C");
  }
  auto alpha = check_step_sizes(cfg.alpha, std::min<std::int64_t>(
                                               Tolerances::schedule_checked_indices,
                                               std::max<std::int64_t>(cfg.max_iter, 1)));
  out.insert(out.end(), alpha.begin(), alpha.end());
  if (cfg.max_iter < 1) {
    out.push_back("max_iter must be positive");
  }
  if (!(cfg.stop_tol > 0.0)) {
    out.push_back("stop_tol must be positive");
  }
  if (!(cfg.duality_corruption > 0.0) || !std::isfinite(cfg.duality_corruption)) {
    out.push_back("duality corruption factor must be positive");
  }
  if (cfg.reference) {
    if (!(cfg.reference->space() == cfg.anchor.space())) {
      out.push_back("reference w lives in a different space");
    } else if (!contains(cfg.constraint, *cfg.reference, Tolerances::membership)) {
      out.push_back("reference w = Q_F(u) is not in C");
    }
  }
  return out;
}

PrimalVector reference_solution(const ConvexSet& fixed_points, const PrimalVector& u) {
  if (fixed_points.is_whole_space()) {
    return u;
  }
  if (fixed_points.is_singleton()) {
    return PrimalVector(u.space(), std::get<AffineSet>(fixed_points.shape()).point);
  }
  auto projected = generalized_projection(fixed_points, u);
  if (!projected.converged) {
    throw std::runtime_error("generalized projection onto the fixed-point set did not converge");
  }
  return projected.point;
}

HalpernConfig prepare(HalpernConfig cfg) {
  auto violations = validate(cfg);
  if (violations.empty() && !cfg.reference) {
    try {
      cfg.reference = reference_solution(cfg.sequence.common_fixed_points(), cfg.anchor);
      if (!contains(cfg.constraint, *cfg.reference, Tolerances::membership)) {
        violations.push_back("Q_F(u) falls outside C; the fixed points met with C are not computable here");
      }
    } catch (const std::exception& e) {
      violations.push_back(std::string("reference solution: ") + e.what());
    }
  }
  throw_if_violated(std::move(violations));
  return cfg;
}

StepResult halpern_step(const HalpernConfig& cfg, std::int64_t n, const PrimalVector& x) {
  StepDiagnostics d;
  d.alpha = cfg.alpha(n);

  MapOutcome s = [&] {
    if (const auto* blend = std::get_if<BlendSequence>(&cfg.sequence.kind())) {
      const double beta = blend->beta(n);
      auto tx = apply(blend->inner, x);
      const auto jx = duality_map(x);
      const auto jtx = duality_map(tx.point);
      const auto mixed = beta * jx + (1.0 - beta) * jtx;
      d.ucft_quantity = beta * sq(norm(jx)) + (1.0 - beta) * sq(norm(jtx)) - sq(norm(mixed));
      d.ucft_gap = (1.0 - beta) * norm(jx - jtx);
      return MapOutcome{inverse_duality_map(mixed), tx.converged, tx.inner_iterations};
    }
    return apply_indexed(cfg.sequence, n, x);
  }();

  const auto ju = duality_map(cfg.anchor);
  const auto jsx = duality_map(s.point);
  PrimalVector y = inverse_duality_map(d.alpha * cfg.duality_corruption * ju + (1.0 - d.alpha) * jsx);

  PrimalVector x_next = y;
  d.inner_iterations = s.inner_iterations;
  d.inner_converged = s.converged;
  if (!cfg.constraint.is_whole_space()) {
    auto projected = generalized_projection(cfg.constraint, y);
    x_next = projected.point;
    d.inner_iterations += projected.inner_iterations;
    d.inner_converged = d.inner_converged && projected.converged;
  }

  d.res_fixed_point = norm(x - s.point);
  d.res_y_minus_sx = norm(y - s.point);
  if (cfg.reference) {
    const auto& w = *cfg.reference;
    const double phi_next = lyapunov(w, x_next);
    const double phi_u = lyapunov(w, cfg.anchor);
    d.phi_w_x = lyapunov(w, x);
    d.slack_b = d.alpha * phi_u + lyapunov(w, s.point) - phi_next;
    d.slack_c = (1.0 - d.alpha) * d.phi_w_x + 2.0 * d.alpha * pairing(y - w, ju - duality_map(w)) -
                phi_next;
    d.slack_bound = std::max(lyapunov(w, cfg.start), phi_u) - d.phi_w_x;
  } else {
    d.phi_w_x = d.slack_b = d.slack_c = d.slack_bound = nan;
  }
  return StepResult{std::move(x_next), std::move(y), std::move(s.point), d};
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged:
      return "Converged";
    case RunStatus::max_iter:
      return "MaxIter";
    case RunStatus::inner_solver_failure:
      return "InnerSolverFailure";
  }
  return "Unknown";
}

IterationTrace run_halpern(const HalpernConfig& cfg) {
  throw_if_violated(validate(cfg));
  const std::int64_t stride = stride_for(cfg);
  IterationTrace trace{{}, {}, RunStatus::max_iter, 0, cfg.start, cfg.reference, nan, nan};
  trace.rows.reserve(static_cast<std::size_t>(std::min<std::int64_t>(cfg.max_iter, 1 << 20)));

  PrimalVector x = cfg.start;
  std::int64_t n = 1;
  for (;; ++n) {
    if (cfg.reference && norm(x - *cfg.reference) <= cfg.stop_tol) {
      trace.status = RunStatus::converged;
      break;
    }
    if (n > cfg.max_iter) {
      trace.status = RunStatus::max_iter;
      break;
    }
    if ((n - 1) % stride == 0) {
      trace.snapshots.push_back({n, x});
    }
    auto step = halpern_step(cfg, n, x);
    trace.rows.push_back({n, step.diagnostics});
    if (!step.diagnostics.inner_converged) {
      trace.status = RunStatus::inner_solver_failure;
      x = std::move(step.x_next);  // best iterate the failed step produced
      ++n;
      break;
    }
    if (!cfg.reference && step.diagnostics.res_fixed_point <= cfg.stop_tol) {
      trace.status = RunStatus::converged;
      break;
    }
    x = std::move(step.x_next);
  }

  trace.final_index = n;
  if (trace.snapshots.empty() || trace.snapshots.back().n != n) {
    trace.snapshots.push_back({n, x});
  }
  trace.final_point = x;
  if (cfg.reference) {
    trace.final_error = norm(x - *cfg.reference);
    trace.final_phi = lyapunov(*cfg.reference, x);
  } else {
    trace.final_error = trace.final_phi = nan;
  }
  return trace;
}

IterationTrace run_proximal_point(const HalpernConfig& cfg) {
  if (!cfg.constraint.is_whole_space()) {
    throw std::invalid_argument("proximal point scheme runs on the whole space");
  }
  if (!cfg.sequence.is_resolvent_sequence()) {
    throw std::invalid_argument("proximal point scheme needs a resolvent sequence");
  }
  return run_halpern(cfg);
}

IterationTrace run_halpern_mann(const HalpernConfig& cfg) {
  if (!cfg.sequence.is_blend_sequence()) {
    throw std::invalid_argument("Halpern-Mann scheme needs a blend sequence");
  }
  return run_halpern(cfg);
}

InvariantReport check_invariants(const IterationTrace& trace) {
  InvariantReport report;
  constexpr double inf = std::numeric_limits<double>::infinity();
  report.min_slack_b = report.min_slack_c = report.min_slack_bound = inf;
  std::vector<double> phi;
  phi.reserve(trace.rows.size());
  for (const auto& row : trace.rows) {
    const auto& d = row.diagnostics;
    if (std::isnan(d.slack_b)) {
      continue;  // no reference, nothing to check
    }
    report.min_slack_b = std::min(report.min_slack_b, d.slack_b);
    report.min_slack_c = std::min(report.min_slack_c, d.slack_c);
    report.min_slack_bound = std::min(report.min_slack_bound, d.slack_bound);
    const double worst = std::min({d.slack_b, d.slack_c, d.slack_bound});
    if (worst < -Tolerances::theorem_slack) {
      ++report.violations;
    }
    phi.push_back(d.phi_w_x);
  }
  report.min_slack = std::min({report.min_slack_b, report.min_slack_c, report.min_slack_bound});
  if (phi.empty()) {
    report.min_slack_b = report.min_slack_c = report.min_slack_bound = report.min_slack = 0.0;
  }

  const std::size_t rows = trace.rows.size();
  const std::size_t tail = std::max<std::size_t>(1, (rows + 9) / 10);
  for (std::size_t i = rows - std::min(tail, rows); i < rows; ++i) {
    const auto& d = trace.rows[i].diagnostics;
    report.tail_residual = std::max(report.tail_residual, d.res_y_minus_sx);
    if (d.ucft_quantity && *d.ucft_quantity < 1e-8 && *d.ucft_gap >= 1e-3) {
      report.ucft_flagged = true;
    }
  }

  report.phi_monotone = std::adjacent_find(phi.begin(), phi.end(), std::less<>()) == phi.end();
  if (report.phi_monotone) {
    report.trend = "monotone";
  } else {
    try {
      // Any visible oscillation of the tail asks for a certificate.
      const auto outcome = eventually_increasing_tau(RealSequencePrefix(phi),
                                                     std::numeric_limits<double>::min());
      if (std::holds_alternative<TauCertificate>(outcome)) {
        report.trend = "certificate";
      } else if (std::holds_alternative<ConvergentEvidence>(outcome)) {
        report.trend = "convergent";
      } else {
        report.trend = "no-rise";
      }
    } catch (const std::logic_error&) {
      report.trend = "invalid";
    }
  }
  return report;
}

}  // namespace lpfix
