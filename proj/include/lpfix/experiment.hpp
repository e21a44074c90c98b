#pragma once

#include "lpfix/iteration.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lpfix {

/// A config file that cannot be run: malformed text, unknown keys, or violated
/// hypotheses. Each problem is one line, prefixed with "file:line:" when known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

enum class Scheme { halpern_generic, proximal_point, halpern_mann };

std::string to_string(Scheme scheme);

struct ExperimentConfig {
  std::string id;
  Scheme scheme = Scheme::halpern_generic;
  std::uint64_t seed = 0;
  /// Validated, with the reference w filled in. Always set after parsing.
  std::optional<HalpernConfig> run;
  /// Trace path from the file, relative to the output directory when not absolute.
  std::optional<std::filesystem::path> csv;
};

/// Parses and validates; throws ConfigError. `seed_override` replaces the file's seed.
ExperimentConfig parse_config(const std::filesystem::path& path,
                              std::optional<std::uint64_t> seed_override = {});
ExperimentConfig parse_config_text(std::string_view text, const std::string& source,
                                   std::optional<std::uint64_t> seed_override = {});

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 1;
inline constexpr int max_iter = 2;
inline constexpr int slack_violation = 3;
inline constexpr int inner_failure = 4;
inline constexpr int io_failure = 5;
}  // namespace exit_code

struct RunSummary {
  std::string id;
  /// Converged, MaxIter, InnerSolverFailure, ConfigError or IOError.
  std::string status;
  int exit_code = exit_code::ok;
  std::int64_t iterations = 0;
  double final_error = 0.0;
  double final_phi = 0.0;
  double min_slack = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  /// First problem line for failed configs and I/O errors.
  std::string message;
};

struct ExperimentResult {
  RunSummary summary;
  /// Absent when the run broke down before producing a trace.
  std::optional<IterationTrace> trace;
  InvariantReport invariants;
};

/// Runs the scheme and writes <out>/<id>.csv (or the configured path) plus
/// <out>/<id>.final.csv holding the final iterate and w. Never throws for I/O;
/// failures are reported as exit code 5.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Per-step CSV: versioned comment line, header, one row per step.
void write_trace_csv(std::ostream& out, const IterationTrace& trace);

/// Shortest round-trip decimal form; "nan" and "inf" for non-finite values.
std::string format_number(double v);

std::string summary_header();
std::string summary_line(const RunSummary& s);

struct SuiteReport {
  /// Sorted by id.
  std::vector<RunSummary> rows;
  /// The largest per-run exit code, 0 for an empty suite.
  int exit_code = exit_code::ok;
};

/// *.yaml and *.yml files directly inside `dir`, sorted by name.
std::vector<std::filesystem::path> suite_configs(const std::filesystem::path& dir);

/// Runs every config with at most `parallelism` runs in flight. A config that
/// fails to parse becomes a ConfigError row; the others still run.
SuiteReport run_suite(const std::vector<std::filesystem::path>& configs, int parallelism,
                      const std::filesystem::path& out_dir,
                      std::optional<std::uint64_t> seed_override = {});

}  // namespace lpfix
