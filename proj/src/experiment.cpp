#include "lpfix/experiment.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <thread>

namespace lpfix {

namespace fs = std::filesystem;

namespace {

std::string joined(const std::vector<std::string>& problems) {
  std::string out;
  for (const auto& p : problems) {
    out += out.empty() ? "" : "\n";
    out += p;
  }
  return out;
}

// Builds an ExperimentConfig from a YAML tree. Structural problems abort at
// once; hypothesis violations are collected so the user sees all of them.
class Parser {
 public:
  Parser(std::string source, std::uint64_t seed) : source_(std::move(source)), rng_(seed) {}

  std::vector<std::string>& problems() { return problems_; }

  std::string where(const YAML::Node& node) const {
    const auto mark = node.Mark();
    if (mark.is_null()) {
      return source_ + ":";
    }
    return source_ + ":" + std::to_string(mark.line + 1) + ":";
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const {
    throw ConfigError({where(node) + " " + message});
  }

  void note(const YAML::Node& node, const std::string& message) {
    problems_.push_back(where(node) + " " + message);
  }

  void expect_map(const YAML::Node& node, const std::string& path,
                  std::initializer_list<std::string_view> keys) const {
    if (!node.IsMap()) {
      fail(node, path + " must be a mapping");
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        fail(kv.first, "unknown key '" + key + "' in " + path);
      }
    }
  }

  YAML::Node require(const YAML::Node& map, const std::string& key, const std::string& path) const {
    const YAML::Node child = map[key];
    if (!child) {
      fail(map, path + " is missing '" + key + "'");
    }
    return child;
  }

  double number(const YAML::Node& node, const std::string& path) const {
    if (!node.IsScalar()) {
      fail(node, path + " must be a number");
    }
    try {
      return node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, path + " must be a number, got '" + node.Scalar() + "'");
    }
  }

  double number_or(const YAML::Node& map, const std::string& key, double fallback,
                   const std::string& path) const {
    const YAML::Node child = map[key];
    return child ? number(child, path + "." + key) : fallback;
  }

  std::int64_t integer(const YAML::Node& node, const std::string& path) const {
    const double v = number(node, path);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) {
      fail(node, path + " must be an integer");
    }
    return static_cast<std::int64_t>(v);
  }

  std::string text(const YAML::Node& node, const std::string& path) const {
    if (!node.IsScalar()) {
      fail(node, path + " must be a string");
    }
    return node.Scalar();
  }

  Eigen::VectorXd vector(const YAML::Node& node, const std::string& path, int dim) {
    if (node.IsSequence()) {
      if (static_cast<int>(node.size()) != dim) {
        fail(node, path + " has " + std::to_string(node.size()) + " entries, expected " +
                       std::to_string(dim));
      }
      Eigen::VectorXd v(dim);
      for (int i = 0; i < dim; ++i) {
        v[i] = number(node[i], path + "[" + std::to_string(i) + "]");
      }
      return v;
    }
    if (node.IsMap() && node["fill"]) {
      expect_map(node, path, {"fill"});
      return Eigen::VectorXd::Constant(dim, number(node["fill"], path + ".fill"));
    }
    if (node.IsMap() && node["random"]) {
      const auto kind = text(node["random"], path + ".random");
      // The stream label defaults to the key path; `stream` lets configs share draws.
      SplitMix64 stream =
          rng_.split(node["stream"] ? text(node["stream"], path + ".stream") : path);
      if (kind == "normal") {
        expect_map(node, path, {"random", "scale", "stream"});
        return number_or(node, "scale", 1.0, path) * gaussian_vector(stream, dim);
      }
      if (kind == "uniform") {
        expect_map(node, path, {"random", "low", "high", "stream"});
        const double lo = number_or(node, "low", -1.0, path);
        const double hi = number_or(node, "high", 1.0, path);
        if (!(lo < hi)) {
          fail(node, path + ": uniform needs low < high");
        }
        return uniform_vector(stream, dim, lo, hi);
      }
      fail(node["random"], path + ".random must be 'normal' or 'uniform'");
    }
    fail(node, path + " must be a list, {fill: v} or {random: normal|uniform}");
  }

  Eigen::MatrixXd matrix(const YAML::Node& node, const std::string& path, int dim) {
    if (node.IsSequence()) {
      if (static_cast<int>(node.size()) != dim) {
        fail(node, path + " must have " + std::to_string(dim) + " rows");
      }
      Eigen::MatrixXd m(dim, dim);
      for (int i = 0; i < dim; ++i) {
        m.row(i) = vector(node[i], path + "[" + std::to_string(i) + "]", dim).transpose();
      }
      return m;
    }
    if (node.IsMap() && node["diagonal"]) {
      expect_map(node, path, {"diagonal"});
      return vector(node["diagonal"], path + ".diagonal", dim).asDiagonal();
    }
    if (node.IsMap() && node["identity"]) {
      expect_map(node, path, {"identity"});
      return number(node["identity"], path + ".identity") * Eigen::MatrixXd::Identity(dim, dim);
    }
    fail(node, path + " must be a list of rows, {diagonal: ...} or {identity: scale}");
  }

  std::optional<Schedule> schedule(const YAML::Node& node, const std::string& path) {
    if (node.IsScalar()) {
      return Schedule::constant(number(node, path));
    }
    if (!node.IsMap()) {
      fail(node, path + " must be a number or a schedule mapping");
    }
    const auto family = text(require(node, "family", path), path + ".family");
    try {
      if (family == "constant") {
        expect_map(node, path, {"family", "value"});
        return Schedule::constant(number(require(node, "value", path), path + ".value"));
      }
      if (family == "power") {
        expect_map(node, path, {"family", "scale", "exponent"});
        return Schedule::power(number_or(node, "scale", 1.0, path),
                               number_or(node, "exponent", 1.0, path));
      }
      if (family == "shifted_power") {
        expect_map(node, path, {"family", "offset", "scale", "exponent"});
        return Schedule::shifted_power(number(require(node, "offset", path), path + ".offset"),
                                       number_or(node, "scale", 1.0, path),
                                       number_or(node, "exponent", 1.0, path));
      }
      if (family == "one_minus_power") {
        expect_map(node, path, {"family", "scale", "exponent"});
        return Schedule::one_minus_power(number_or(node, "scale", 1.0, path),
                                         number_or(node, "exponent", 1.0, path));
      }
      if (family == "linear") {
        expect_map(node, path, {"family", "scale"});
        return Schedule::linear(number_or(node, "scale", 1.0, path));
      }
      if (family == "alternating") {
        expect_map(node, path, {"family", "first", "second"});
        return Schedule::alternating(number(require(node, "first", path), path + ".first"),
                                     number(require(node, "second", path), path + ".second"));
      }
    } catch (const std::invalid_argument& e) {
      note(node, e.what());
      return std::nullopt;
    }
    fail(node, path + ".family '" + family +
                   "' is not one of constant, power, shifted_power, one_minus_power, linear, "
                   "alternating");
  }

  std::optional<MonotoneOperator> op(const YAML::Node& node, const std::string& path,
                                     const LpSpace& space) {
    const int dim = space.dimension();
    const auto type = text(require(node, "type", path), path + ".type");
    try {
      if (type == "linear_monotone") {
        expect_map(node, path, {"type", "matrix", "shift"});
        const Eigen::VectorXd shift = node["shift"] ? vector(node["shift"], path + ".shift", dim)
                                                    : Eigen::VectorXd::Zero(dim);
        return MonotoneOperator::linear(matrix(require(node, "matrix", path), path + ".matrix", dim),
                                        shift);
      }
      if (type == "duality_residual") {
        expect_map(node, path, {"type", "target"});
        return MonotoneOperator::duality_residual(
            PrimalVector(space, vector(require(node, "target", path), path + ".target", dim)));
      }
      if (type == "gradient_of_quadratic") {
        expect_map(node, path, {"type", "matrix", "vector"});
        const Eigen::MatrixXd q = matrix(require(node, "matrix", path), path + ".matrix", dim);
        const Eigen::VectorXd c = vector(require(node, "vector", path), path + ".vector", dim);
        return MonotoneOperator::quadratic_gradient(q, c);
      }
    } catch (const std::invalid_argument& e) {
      note(node, e.what());
      return std::nullopt;
    }
    fail(node["type"], path + ".type must be linear_monotone, duality_residual or "
                              "gradient_of_quadratic");
  }

  ConvexSet constraint(const YAML::Node& node, const std::string& path, int dim) {
    const auto type = text(require(node, "type", path), path + ".type");
    try {
      if (type == "whole_space") {
        expect_map(node, path, {"type"});
        return ConvexSet::whole_space(dim);
      }
      if (type == "half_space") {
        expect_map(node, path, {"type", "normal", "offset"});
        return ConvexSet::half_space(vector(require(node, "normal", path), path + ".normal", dim),
                                     number(require(node, "offset", path), path + ".offset"));
      }
      if (type == "box") {
        expect_map(node, path, {"type", "lower", "upper"});
        return ConvexSet::box(vector(require(node, "lower", path), path + ".lower", dim),
                              vector(require(node, "upper", path), path + ".upper", dim));
      }
      if (type == "ball") {
        expect_map(node, path, {"type", "center", "radius"});
        const Eigen::VectorXd center = node["center"] ? vector(node["center"], path + ".center", dim)
                                                      : Eigen::VectorXd::Zero(dim);
        return ConvexSet::ball(center, number(require(node, "radius", path), path + ".radius"));
      }
    } catch (const std::invalid_argument& e) {
      fail(node, path + ": " + e.what());
    }
    fail(node["type"], path + ".type must be whole_space, half_space, box or ball");
  }

  std::optional<Mapping> mapping(const YAML::Node& node, const std::string& path,
                                 const LpSpace& space) {
    const auto type = text(require(node, "type", path), path + ".type");
    if (type == "resolvent") {
      expect_map(node, path, {"type", "operator", "r"});
      auto a = op(require(node, "operator", path), path + ".operator", space);
      const double r = node["r"] ? number(node["r"], path + ".r") : 1.0;
      if (!(r > 0.0)) {
        note(node, path + ".r must be positive");
        return std::nullopt;
      }
      return a ? std::optional<Mapping>(Mapping::resolvent(*a, r)) : std::nullopt;
    }
    if (type == "projection") {
      expect_map(node, path, {"type", "set"});
      return Mapping::projection(
          constraint(require(node, "set", path), path + ".set", space.dimension()));
    }
    if (type == "blend") {
      expect_map(node, path, {"type", "mapping", "beta"});
      auto inner = mapping(require(node, "mapping", path), path + ".mapping", space);
      const double beta = number(require(node, "beta", path), path + ".beta");
      if (!(beta >= 0.0 && beta <= 1.0)) {
        note(node, path + ".beta must lie in [0, 1]");
        return std::nullopt;
      }
      return inner ? std::optional<Mapping>(Mapping::blend(*inner, beta)) : std::nullopt;
    }
    fail(node["type"], path + ".type must be resolvent, projection or blend");
  }

  std::optional<MappingSequence> sequence(const YAML::Node& node, const LpSpace& space) {
    const std::string path = "sequence";
    const auto type = text(require(node, "type", path), path + ".type");
    try {
      if (type == "resolvent") {
        expect_map(node, path, {"type", "operator", "r"});
        auto a = op(require(node, "operator", path), path + ".operator", space);
        auto r = schedule(require(node, "r", path), path + ".r");
        if (a && r) {
          return MappingSequence::resolvents(*a, *r);
        }
        return std::nullopt;
      }
      if (type == "blend") {
        expect_map(node, path, {"type", "mapping", "beta"});
        auto inner = mapping(require(node, "mapping", path), path + ".mapping", space);
        auto beta = schedule(require(node, "beta", path), path + ".beta");
        if (inner && beta) {
          return MappingSequence::blends(*inner, *beta);
        }
        return std::nullopt;
      }
    } catch (const HypothesisError& e) {
      for (const auto& v : e.violations()) {
        note(node, v);
      }
      return std::nullopt;
    }
    fail(node["type"], "sequence.type must be resolvent or blend");
  }

 private:
  std::string source_;
  SplitMix64 rng_;
  std::vector<std::string> problems_;
};

ExperimentConfig build(const YAML::Node& root, const std::string& source,
                       std::optional<std::uint64_t> seed_override) {
  Parser bootstrap(source, 0);
  bootstrap.expect_map(root, "config",
                       {"id", "scheme", "seed", "space", "sequence", "constraint", "alpha",
                        "anchor", "start", "budget", "output", "fault_injection"});
  ExperimentConfig out;
  out.id = bootstrap.text(bootstrap.require(root, "id", "config"), "id");
  if (out.id.empty() || out.id.find_first_of("/\\\t\n") != std::string::npos) {
    bootstrap.fail(root["id"], "id must be a non-empty name without separators or tabs");
  }
  const auto scheme = bootstrap.text(bootstrap.require(root, "scheme", "config"), "scheme");
  if (scheme == "halpern_generic") {
    out.scheme = Scheme::halpern_generic;
  } else if (scheme == "proximal_point") {
    out.scheme = Scheme::proximal_point;
  } else if (scheme == "halpern_mann") {
    out.scheme = Scheme::halpern_mann;
  } else {
    bootstrap.fail(root["scheme"], "scheme must be halpern_generic, proximal_point or halpern_mann");
  }
  if (seed_override) {
    out.seed = *seed_override;
  } else if (root["seed"]) {
    try {
      out.seed = root["seed"].as<std::uint64_t>();
    } catch (const YAML::Exception&) {
      bootstrap.fail(root["seed"], "seed must be an unsigned 64-bit integer");
    }
  }

  Parser p(source, out.seed);
  const auto space_node = p.require(root, "space", "config");
  p.expect_map(space_node, "space", {"dimension", "exponent"});
  const auto dim = p.integer(p.require(space_node, "dimension", "space"), "space.dimension");
  const double exponent = p.number(p.require(space_node, "exponent", "space"), "space.exponent");
  std::optional<LpSpace> space;
  try {
    space.emplace(static_cast<int>(std::clamp<std::int64_t>(dim, -1, 1 << 20)), exponent);
  } catch (const std::invalid_argument& e) {
    p.fail(space_node, std::string("space: ") + e.what());
  }
  const int n = space->dimension();

  auto sequence = p.sequence(p.require(root, "sequence", "config"), *space);
  const ConvexSet constraint = root["constraint"]
                                   ? p.constraint(root["constraint"], "constraint", n)
                                   : ConvexSet::whole_space(n);
  std::optional<Schedule> alpha = Schedule::power(1.0, 1.0);
  if (root["alpha"]) {
    alpha = p.schedule(root["alpha"], "alpha");
  }
  const PrimalVector anchor(*space, p.vector(p.require(root, "anchor", "config"), "anchor", n));
  const auto start_node = p.require(root, "start", "config");
  PrimalVector start(*space, p.vector(start_node, "start", n));
  if (start_node.IsMap() && start_node["random"]) {
    start = euclidean_project(constraint, start);
  }

  std::int64_t max_iter = Tolerances::max_iter;
  double stop_tol = Tolerances::stop;
  if (const auto budget = root["budget"]) {
    p.expect_map(budget, "budget", {"max_iter", "stop_tol"});
    if (budget["max_iter"]) {
      max_iter = p.integer(budget["max_iter"], "budget.max_iter");
    }
    stop_tol = p.number_or(budget, "stop_tol", stop_tol, "budget");
  }
  if (const auto output = root["output"]) {
    p.expect_map(output, "output", {"csv"});
    if (output["csv"]) {
      out.csv = p.text(output["csv"], "output.csv");
    }
  }
  double corruption = 1.0;
  if (const auto fault = root["fault_injection"]) {
    p.expect_map(fault, "fault_injection", {"duality_scale"});
    corruption = p.number_or(fault, "duality_scale", 1.0, "fault_injection");
  }

  // Step sizes are checked here too, so their problems are listed even when
  // another part of the config already failed.
  std::vector<std::string> alpha_problems;
  if (alpha) {
    alpha_problems = check_step_sizes(
        *alpha, std::clamp<std::int64_t>(max_iter, 1, Tolerances::schedule_checked_indices));
    for (const auto& v : alpha_problems) {
      p.note(root["alpha"] ? root["alpha"] : root, v);
    }
  }

  if (sequence) {
    if (out.scheme == Scheme::proximal_point) {
      if (!constraint.is_whole_space()) {
        p.note(root["constraint"], "proximal_point scheme requires constraint type whole_space");
      }
      if (!sequence->is_resolvent_sequence()) {
        p.note(root["sequence"], "proximal_point scheme requires a resolvent sequence");
      }
    }
    if (out.scheme == Scheme::halpern_mann && !sequence->is_blend_sequence()) {
      p.note(root["sequence"], "halpern_mann scheme requires a blend sequence");
    }
  }
  if (sequence && alpha && p.problems().empty()) {
    HalpernConfig cfg{anchor,   start,    constraint,   *sequence, *alpha,
                      max_iter, stop_tol, std::nullopt, 0,         corruption};
    try {
      out.run.emplace(prepare(std::move(cfg)));
    } catch (const HypothesisError& e) {
      for (const auto& v : e.violations()) {
        if (std::find(alpha_problems.begin(), alpha_problems.end(), v) == alpha_problems.end()) {
          p.note(root, v);
        }
      }
    }
  }
  if (!p.problems().empty()) {
    throw ConfigError(p.problems());
  }
  return out;
}

void write_final_point(std::ostream& out, const IterationTrace& trace) {
  out << "# lpfix final iterate v1\ni,x_final,w\n";
  const auto& x = trace.final_point.coords();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out << i << ',' << format_number(x[i]) << ','
        << (trace.reference ? format_number(trace.reference->coords()[i]) : "nan") << '\n';
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(joined(problems)), problems_(std::move(problems)) {}

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::halpern_generic:
      return "halpern_generic";
    case Scheme::proximal_point:
      return "proximal_point";
    case Scheme::halpern_mann:
      return "halpern_mann";
  }
  return "unknown";
}

ExperimentConfig parse_config_text(std::string_view text, const std::string& source,
                                   std::optional<std::uint64_t> seed_override) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError({source + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg});
  }
  return build(root, source, seed_override);
}

ExperimentConfig parse_config(const fs::path& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError({path.string() + ": cannot open config file"});
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string(), seed_override);
}

std::string format_number(double v) {
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const IterationTrace& trace) {
  out << "# lpfix trace v1\n"
      << "n,alpha_n,phi_w_xn,res_fixed_point,res_y_minus_Sx,slack_b,slack_c,inner_iters\n";
  for (const auto& row : trace.rows) {
    const auto& d = row.diagnostics;
    out << row.n << ',' << format_number(d.alpha) << ',' << format_number(d.phi_w_x) << ','
        << format_number(d.res_fixed_point) << ',' << format_number(d.res_y_minus_sx) << ','
        << format_number(d.slack_b) << ',' << format_number(d.slack_c) << ','
        << d.inner_iterations << '\n';
  }
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  ExperimentResult result;
  auto& s = result.summary;
  s.id = cfg.id;
  s.seed = cfg.seed;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (cfg.scheme) {
      case Scheme::proximal_point:
        result.trace = run_proximal_point(*cfg.run);
        break;
      case Scheme::halpern_mann:
        result.trace = run_halpern_mann(*cfg.run);
        break;
      case Scheme::halpern_generic:
        result.trace = run_halpern(*cfg.run);
        break;
    }
  } catch (const std::exception& e) {
    // Non-finite iterates and similar numerical breakdowns.
    s.status = "InnerSolverFailure";
    s.exit_code = exit_code::inner_failure;
    s.message = e.what();
    s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
  }
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  result.invariants = check_invariants(*result.trace);
  s.status = to_string(result.trace->status);
  s.iterations = result.trace->final_index;
  s.final_error = result.trace->final_error;
  s.final_phi = result.trace->final_phi;
  s.min_slack = result.invariants.min_slack;

  if (result.trace->status == RunStatus::inner_solver_failure) {
    s.exit_code = exit_code::inner_failure;
  } else if (!result.invariants.ok()) {
    s.exit_code = exit_code::slack_violation;
  } else if (result.trace->status == RunStatus::max_iter) {
    s.exit_code = exit_code::max_iter;
  }

  const fs::path csv = cfg.csv ? (cfg.csv->is_absolute() ? *cfg.csv : out_dir / *cfg.csv)
                               : out_dir / (cfg.id + ".csv");
  const fs::path final_point = out_dir / (cfg.id + ".final.csv");
  try {
    fs::create_directories(csv.parent_path().empty() ? fs::path(".") : csv.parent_path());
    fs::create_directories(out_dir);
    std::ofstream trace_out(csv);
    write_trace_csv(trace_out, *result.trace);
    std::ofstream point_out(final_point);
    write_final_point(point_out, *result.trace);
    trace_out.close();
    point_out.close();
    if (!trace_out || !point_out) {
      throw std::runtime_error("write failed for " + csv.string());
    }
  } catch (const std::exception& e) {
    s.exit_code = exit_code::io_failure;
    s.message = e.what();
  }
  return result;
}

std::string summary_header() {
  return "id\tstatus\texit\titerations\tfinal_error\tfinal_phi\tmin_slack\twall_seconds\tseed\tmessage";
}

std::string summary_line(const RunSummary& s) {
  char wall[32];
  std::snprintf(wall, sizeof wall, "%.3f", s.wall_seconds);
  std::string message = s.message;
  std::replace_if(message.begin(), message.end(), [](char c) { return c == '\t' || c == '\n'; },
                  ' ');
  return s.id + '\t' + s.status + '\t' + std::to_string(s.exit_code) + '\t' +
         std::to_string(s.iterations) + '\t' + format_number(s.final_error) + '\t' +
         format_number(s.final_phi) + '\t' + format_number(s.min_slack) + '\t' + wall + '\t' +
         std::to_string(s.seed) + '\t' + message;
}

std::vector<fs::path> suite_configs(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (entry.is_regular_file() && (ext == ".yaml" || ext == ".yml")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

SuiteReport run_suite(const std::vector<fs::path>& configs, int parallelism,
                      const fs::path& out_dir, std::optional<std::uint64_t> seed_override) {
  if (parallelism < 1) {
    throw std::invalid_argument("parallelism must be at least 1");
  }
  SuiteReport report;
  report.rows.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      RunSummary& row = report.rows[i];
      try {
        const auto cfg = parse_config(configs[i], seed_override);
        row = run_experiment(cfg, out_dir).summary;
      } catch (const ConfigError& e) {
        row.id = configs[i].stem().string();
        row.status = "ConfigError";
        row.exit_code = exit_code::config_error;
        row.message = e.problems().front();
      } catch (const std::exception& e) {
        row.id = configs[i].stem().string();
        row.status = "Error";
        row.exit_code = exit_code::inner_failure;
        row.message = e.what();
      }
    }
  };
  const auto threads = std::min<std::size_t>(static_cast<std::size_t>(parallelism), configs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const RunSummary& a, const RunSummary& b) { return a.id < b.id; });
  for (const auto& row : report.rows) {
    report.exit_code = std::max(report.exit_code, row.exit_code);
  }
  return report;
}

}  // namespace lpfix
