#pragma once

#include "lpfix/convex_set.hpp"
#include "lpfix/lp_space.hpp"
#include "lpfix/mapping.hpp"
#include "lpfix/schedule.hpp"
#include "lpfix/tolerances.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lpfix {

/// x_{n+1} = Q_C J^-1(alpha_n J u + (1 - alpha_n) J S_n x_n).
struct HalpernConfig {
  PrimalVector anchor;
  PrimalVector start;
  ConvexSet constraint;
  MappingSequence sequence;
  Schedule alpha;
  std::int64_t max_iter = Tolerances::max_iter;
  double stop_tol = Tolerances::stop;
  /// w = Q_F(u). Filled by `prepare` when absent.
  std::optional<PrimalVector> reference;
  /// Full iterates are kept every `snapshot_stride` steps; 0 picks ceil(max_iter / 1000).
  std::int64_t snapshot_stride = 0;
  /// Test hook: J u is replaced by c J u inside the anchor blend. 1 means no fault.
  double duality_corruption = 1.0;
};

/// Every violated precondition, as readable messages. Empty when the config is runnable.
std::vector<std::string> validate(const HalpernConfig& cfg);

/// Validates (throwing HypothesisError listing every violation) and fills in the reference w.
HalpernConfig prepare(HalpernConfig cfg);

/// Q_F(u). Throws std::runtime_error when the projection does not converge.
PrimalVector reference_solution(const ConvexSet& fixed_points, const PrimalVector& u);

struct StepDiagnostics {
  double alpha = 0.0;
  double phi_w_x = 0.0;
  /// |x_n - S_n x_n|_p.
  double res_fixed_point = 0.0;
  /// |y_n - S_n x_n|_p.
  double res_y_minus_sx = 0.0;
  /// alpha phi(w,u) + phi(w,S x) - phi(w,x_{n+1}).
  double slack_b = 0.0;
  /// (1 - alpha) phi(w,x) + 2 alpha <y - w, Ju - Jw> - phi(w,x_{n+1}).
  double slack_c = 0.0;
  /// max{phi(w,x_1), phi(w,u)} - phi(w,x_n).
  double slack_bound = 0.0;
  int inner_iterations = 0;
  bool inner_converged = true;
  /// Blends only: beta|Jx|^2 + (1 - beta)|JTx|^2 - |beta Jx + (1 - beta) JTx|^2 and (1 - beta)|Jx - JTx|_q.
  std::optional<double> ucft_quantity;
  std::optional<double> ucft_gap;
};

struct StepResult {
  PrimalVector x_next;
  PrimalVector y;
  PrimalVector s_x;
  StepDiagnostics diagnostics;
};

/// One step at index n. Slacks are NaN when cfg.reference is unset.
StepResult halpern_step(const HalpernConfig& cfg, std::int64_t n, const PrimalVector& x);

enum class RunStatus { converged, max_iter, inner_solver_failure };

std::string to_string(RunStatus status);

struct TraceRow {
  std::int64_t n = 0;
  StepDiagnostics diagnostics;
};

struct Snapshot {
  std::int64_t n = 0;
  PrimalVector x;
};

struct IterationTrace {
  std::vector<TraceRow> rows;
  std::vector<Snapshot> snapshots;
  RunStatus status = RunStatus::max_iter;
  /// Index of the last iterate x_n examined.
  std::int64_t final_index = 0;
  PrimalVector final_point;
  std::optional<PrimalVector> reference;
  /// |x_final - w|_p, NaN without a reference.
  double final_error = 0.0;
  /// phi(w, x_final), NaN without a reference.
  double final_phi = 0.0;
};

/// Runs from x_1 until |x_n - w|_p <= stop_tol (or |x_n - S_n x_n|_p <= stop_tol
/// when w is unknown), max_iter steps, or an inner solver failure.
IterationTrace run_halpern(const HalpernConfig& cfg);

/// C must be the whole space and the sequence made of resolvents.
IterationTrace run_proximal_point(const HalpernConfig& cfg);

/// The sequence must be made of blends J^-1(beta_n J + (1 - beta_n) J T).
IterationTrace run_halpern_mann(const HalpernConfig& cfg);

struct InvariantReport {
  double min_slack_b = 0.0;
  double min_slack_c = 0.0;
  double min_slack_bound = 0.0;
  /// Smallest of the three.
  double min_slack = 0.0;
  /// Rows where some slack is below -theorem_slack.
  std::int64_t violations = 0;
  /// max |y_n - S_n x_n| over the last 10% of rows.
  double tail_residual = 0.0;
  bool phi_monotone = true;
  /// "monotone", "certificate", "convergent" or "no-rise"; "invalid" when a
  /// returned certificate does not verify.
  std::string trend;
  /// A blend step in the last 10% had a vanishing uc-ft quantity but a visible gap.
  bool ucft_flagged = false;

  bool ok() const noexcept { return violations == 0 && trend != "invalid" && !ucft_flagged; }
};

InvariantReport check_invariants(const IterationTrace& trace);

}  // namespace lpfix
