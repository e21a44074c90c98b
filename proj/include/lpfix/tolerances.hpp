#pragma once

namespace lpfix {

// Every numerical threshold used by the library lives here.
struct Tolerances {
  // Algebraic identities (J round trips, <x,Jx> = |x|^2), relative.
  static constexpr double identity_rel = 1e-10;
  // Inequalities that accumulate two duality-map evaluations, absolute.
  static constexpr double inequality_slack = 1e-9;
  // Theorem-bearing per-step inequalities of the drivers, absolute.
  static constexpr double theorem_slack = 1e-7;

  // Generalized projection inner solver.
  static constexpr double vi = 1e-6;
  static constexpr double projected_gradient = 1e-9;
  static constexpr int projection_max_iter = 10000;
  static constexpr int projection_probes = 100;
  static constexpr double armijo = 1e-4;

  // Resolvent inner solver.
  static constexpr double resolvent = 1e-8;
  static constexpr double resolvent_gradient = 1e-10;
  static constexpr int resolvent_max_iter = 20000;

  // Construction checks.
  static constexpr double psd_eigenvalue = 1e-10;
  static constexpr double membership = 1e-9;

  // Driver defaults.
  static constexpr double stop = 1e-3;
  static constexpr long long max_iter = 1000000;

  // Schedules are checked eagerly on this many leading indices.
  static constexpr long long schedule_checked_indices = 1000000;
};

}  // namespace lpfix
