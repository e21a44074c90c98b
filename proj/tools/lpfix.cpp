// lpfix: run experiments, suites, and the sequence-lemma checks from the shell.

#include "lpfix/experiment.hpp"
#include "lpfix/sequence_lemmas.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int run_one(const std::string& config, const std::string& out_dir,
            std::optional<std::uint64_t> seed) {
  lpfix::ExperimentConfig cfg;
  try {
    cfg = lpfix::parse_config(config, seed);
  } catch (const lpfix::ConfigError& e) {
    for (const auto& p : e.problems()) {
      std::cerr << p << '\n';
    }
    return lpfix::exit_code::config_error;
  }
  const auto result = lpfix::run_experiment(cfg, out_dir);
  std::cout << lpfix::summary_header() << '\n' << lpfix::summary_line(result.summary) << '\n';
  if (result.trace && result.invariants.violations > 0) {
    std::cerr << result.invariants.violations << " step(s) violate a theorem inequality (min slack "
              << lpfix::format_number(result.invariants.min_slack) << ")\n";
  }
  return result.summary.exit_code;
}

int run_suite(const std::string& dir, int parallel, const std::string& out_dir,
              std::optional<std::uint64_t> seed) {
  std::vector<std::filesystem::path> configs;
  try {
    configs = lpfix::suite_configs(dir);
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return lpfix::exit_code::io_failure;
  }
  const auto report = lpfix::run_suite(configs, parallel, out_dir, seed);
  std::ostringstream table;
  table << lpfix::summary_header() << '\n';
  for (const auto& row : report.rows) {
    table << lpfix::summary_line(row) << '\n';
  }
  std::cout << table.str();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::ofstream out(std::filesystem::path(out_dir) / "summary.tsv");
  out << table.str();
  out.close();
  if (!out) {
    std::cerr << "cannot write " << out_dir << "/summary.tsv\n";
    return std::max(report.exit_code, lpfix::exit_code::io_failure);
  }
  return report.exit_code;
}

int verify_lemmas(std::int64_t nmax, int fuzz, std::uint64_t seed) {
  const auto claims = lpfix::verify_example_claims(nmax);
  std::cout << "example claims up to N = " << nmax << '\n'
            << "  rising subsequence xi_{2i-1} < xi_{2i}: " << (claims.rising_subsequence ? "yes" : "no")
            << '\n'
            << "  rises only at odd indices: " << (claims.rises_only_at_odd ? "yes" : "no") << '\n'
            << "  no eventually dominating rise selector: "
            << (claims.no_dominating_subsequence ? "yes" : "no") << '\n';
  if (claims.witness) {
    std::cout << "  witness k = " << claims.witness->first << ", m = " << claims.witness->second << '\n';
  }
  const auto f = lpfix::fuzz_certificates(fuzz, 200, seed);
  std::cout << "certificate fuzzing (" << fuzz << " cases per family, seed " << seed << ")\n"
            << "  oscillating: " << f.certificates_valid << "/" << f.oscillating_cases << " valid\n"
            << "  monotone: " << f.correct_evidence << "/" << f.monotone_cases << " correct evidence\n"
            << "  false certificates: " << f.false_certificates << '\n';
  const bool ok = claims.rising_subsequence && claims.rises_only_at_odd &&
                  claims.no_dominating_subsequence && f.certificates_valid == f.oscillating_cases &&
                  f.correct_evidence == f.monotone_cases && f.false_certificates == 0;
  return ok ? lpfix::exit_code::ok : lpfix::exit_code::slack_violation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Halpern-type fixed-point experiments in l^p"};
  app.require_subcommand(1);
  // Global options may follow the subcommand.
  app.fallthrough();
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  app.add_option("--out", out_dir, "Output directory for traces and summaries");
  app.add_option("--seed", seed, "Override the seed of every config");

  std::string config;
  auto* run = app.add_subcommand("run", "Run one experiment config");
  run->add_option("config", config, "YAML config file")->required();

  std::string dir;
  int parallel = 1;
  auto* suite = app.add_subcommand("suite", "Run every *.yaml config in a directory");
  suite->add_option("dir", dir, "Directory of configs")->required();
  suite->add_option("--parallel", parallel, "Concurrent runs")->check(CLI::PositiveNumber);

  std::int64_t nmax = 10000;
  int fuzz = 500;
  auto* lemmas = app.add_subcommand("verify-lemmas", "Check the sequence lemmas numerically");
  lemmas->add_option("--nmax", nmax, "Prefix length for the example claims")->check(CLI::Range(4, 100000000));
  lemmas->add_option("--fuzz", fuzz, "Random prefixes per family")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lpfix::exit_code::config_error;
  }

  if (*run) {
    return run_one(config, out_dir, seed);
  }
  if (*suite) {
    return run_suite(dir, parallel, out_dir, seed);
  }
  return verify_lemmas(nmax, fuzz, seed.value_or(20240611));
}
