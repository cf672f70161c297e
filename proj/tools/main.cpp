#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "expdet/doptimal.hpp"
#include "expdet/expdet.hpp"
#include "expdet/graphs.hpp"
#include "expdet/io.hpp"
#include "expdet/report.hpp"
#include "expdet/verify.hpp"

namespace {

using expdet::cli::RunReport;

// Exit code contract: 0 success, 1 verification failure, 2 input/parse
// error, 3 capacity or singularity error.
constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;
constexpr int kExitCapacityError = 3;

struct Clock {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

void emit(RunReport& report, const Clock& clock, bool json) {
  report.elapsed_ms = clock.elapsed_ms();
  std::cout << (json ? expdet::cli::render_json(report) : expdet::cli::render_text(report));
}

// EXPDET_MAX_BRUTE overrides the brute-force enumeration caps.
unsigned brute_cap(unsigned fallback) {
  const char* env = std::getenv("EXPDET_MAX_BRUTE");
  if (!env) return fallback;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || v == 0 || v > 62)
    throw expdet::DomainError("EXPDET_MAX_BRUTE must be an integer in [1, 62], got '" +
                              std::string(env) + "'");
  return static_cast<unsigned>(v);
}

void add_deviation(RunReport& report, const std::string& label, double value, double reference) {
  report.results.emplace_back(label, value);
  report.results.emplace_back(label + "_abs_dev", std::fabs(value - reference));
  report.results.emplace_back(label + "_rel_dev", expdet::verify::relative_deviation(value, reference));
}

struct ExpdetArgs {
  std::string u_file, v_file, p_file;
  bool bruteforce = false;
  bool cauchy_binet = false;
  std::uint64_t mc_samples = 0;
  std::uint64_t seed = 42;
  bool json = false;
};

int run_expdet(const ExpdetArgs& args) {
  Clock clock;
  const expdet::Matrix u = expdet::io::read_csv_matrix(args.u_file);
  const expdet::Matrix v = expdet::io::read_csv_matrix(args.v_file);
  const expdet::Vector p = expdet::io::read_csv_vector(args.p_file);
  const expdet::RankOneEnsemble ensemble(u, v, p);

  RunReport report;
  report.command = "expdet";
  report.inputs = {{"u", args.u_file}, {"v", args.v_file}, {"p", args.p_file}};
  const double closed = expdet::expected_det_closed_form(ensemble);
  report.results.emplace_back("closed_form", closed);
  if (ensemble.always_singular())
    report.notes.emplace_back("always_singular", "true (m < n, the expectation is 0)");

  if (args.bruteforce)
    add_deviation(report, "bruteforce",
                  expdet::expected_det_bruteforce(ensemble, brute_cap(expdet::kDefaultBruteForceCap)),
                  closed);
  if (args.cauchy_binet)
    add_deviation(report, "cauchy_binet", expdet::expected_det_cauchy_binet(ensemble), closed);
  if (args.mc_samples > 0) {
    const expdet::McEstimate mc =
        expdet::expected_det_monte_carlo(ensemble, args.mc_samples, args.seed);
    add_deviation(report, "mc_mean", mc.mean, closed);
    report.results.emplace_back("mc_std_error", mc.std_error);
    report.notes.emplace_back("mc_samples", std::to_string(mc.samples));
    report.notes.emplace_back("mc_seed", std::to_string(mc.seed));
  }
  emit(report, clock, args.json);
  return kExitOk;
}

struct TreesArgs {
  std::string edge_file;
  bool expected = false;
  bool bruteforce = false;
  bool blocks = false;
  int removed_vertex = 0;
  bool json = false;
};

int run_trees(const TreesArgs& args) {
  Clock clock;
  const auto graph = expdet::io::read_edge_list(args.edge_file);

  RunReport report;
  report.command = "trees";
  report.inputs = {{"edges", args.edge_file}};
  report.results.emplace_back("weighted_tree_count",
                              expdet::graphs::weighted_tree_count(graph, args.removed_vertex));

  const bool want_expected = args.expected || args.bruteforce;
  if (want_expected) {
    const double expected =
        expdet::graphs::expected_tree_count(graph, args.removed_vertex);
    report.results.emplace_back("expected_tree_count", expected);
    if (args.bruteforce)
      add_deviation(report, "expected_bruteforce",
                    expdet::graphs::expected_tree_count_bruteforce(graph, brute_cap(16)),
                    expected);
  }
  if (args.blocks) {
    const double closed = expdet::graphs::block_expected_tree_count(
        graph, expdet::graphs::BlockMethod::kClosed, brute_cap(16));
    const double brute = expdet::graphs::block_expected_tree_count(
        graph, expdet::graphs::BlockMethod::kBruteForce, brute_cap(16), brute_cap(20));
    report.results.emplace_back("block_closed", closed);
    add_deviation(report, "block_bruteforce", brute, closed);
  }
  emit(report, clock, args.json);
  return kExitOk;
}

struct SelectArgs {
  std::string h_file;
  std::string noise_file;
  std::string survival_file;
  unsigned k = 0;
  expdet::doptimal::SolverOptions opts;
  bool json = false;
};

expdet::doptimal::LinearSensorModel load_model(const SelectArgs& args) {
  expdet::Matrix h = expdet::io::read_csv_matrix(args.h_file);
  const std::size_t m = h.rows();
  expdet::Vector survival = args.survival_file.empty()
                                ? expdet::Vector::constant(m, 1.0)
                                : expdet::io::read_csv_vector(args.survival_file);
  if (args.noise_file.empty())
    return {std::move(h), expdet::Vector::constant(m, 1.0), std::move(survival)};
  expdet::Matrix noise = expdet::io::read_csv_matrix(args.noise_file);
  if (noise.rows() == 1) {
    std::vector<double> diag(noise.entries().begin(), noise.entries().end());
    return {std::move(h), expdet::Vector(std::move(diag)), std::move(survival)};
  }
  return {std::move(h), std::move(noise), std::move(survival)};
}

int run_select(const SelectArgs& args) {
  Clock clock;
  const auto model = load_model(args);
  const auto result = expdet::doptimal::select_sensors(model, args.k, args.opts);

  RunReport report;
  report.command = "select";
  report.inputs = {{"h", args.h_file}};
  if (!args.noise_file.empty()) report.inputs.emplace_back("noise", args.noise_file);
  if (!args.survival_file.empty()) report.inputs.emplace_back("survival", args.survival_file);

  for (std::size_t i = 0; i < result.probs.size(); ++i)
    report.results.emplace_back("p." + std::to_string(i), result.probs[i]);

  std::string selected;
  expdet::Vector rounded(result.probs.size());
  for (int idx : result.selected) {
    if (!selected.empty()) selected += ",";
    selected += std::to_string(idx);
    rounded[idx] = 1.0;
  }
  report.notes.emplace_back("selected", selected);
  report.notes.emplace_back("converged", result.converged ? "true" : "false");
  report.results.emplace_back("iterations",
                              static_cast<double>(result.objective_trace.size() - 1));
  report.results.emplace_back("objective_initial", result.objective_trace.front().second);
  report.results.emplace_back("objective_final", result.objective_trace.back().second);
  report.results.emplace_back("expected_doptimality_relaxed",
                              expdet::doptimal::expected_doptimality(model, result.probs));
  report.results.emplace_back("expected_doptimality_rounded",
                              expdet::doptimal::expected_doptimality(model, rounded));
  emit(report, clock, args.json);
  return kExitOk;
}

struct VerifyArgs {
  std::string size = "small";
  std::uint64_t seed = 42;
  bool json = false;
};

int run_verify(const VerifyArgs& args) {
  Clock clock;
  const auto size =
      args.size == "medium" ? expdet::verify::Size::kMedium : expdet::verify::Size::kSmall;
  const auto results = expdet::verify::run_battery(size, args.seed);

  RunReport report;
  report.command = "verify";
  report.notes.emplace_back("size", args.size);
  report.notes.emplace_back("seed", std::to_string(args.seed));
  bool all_passed = true;
  for (const auto& r : results) {
    expdet::cli::CheckLine line;
    line.name = r.name;
    line.passed = r.passed;
    line.max_deviation = r.max_deviation;
    line.instances = r.instances;
    line.failing_seed = r.worst_instance;
    line.note = r.note;
    report.checks.push_back(std::move(line));
    all_passed = all_passed && r.passed;
  }
  report.notes.emplace_back("all_passed", all_passed ? "true" : "false");
  emit(report, clock, args.json);
  return all_passed ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Expected determinants of Bernoulli-weighted rank-one sums: closed form, "
               "oracles, tree-connectivity of random graphs, D-optimal sensor selection"};
  app.require_subcommand(1);

  ExpdetArgs expdet_args;
  auto* cmd_expdet = app.add_subcommand(
      "expdet", "Expected determinant of a rank-one ensemble (U, V, p files)");
  cmd_expdet->add_option("u_file", expdet_args.u_file, "CSV matrix U (n×m)")->required();
  cmd_expdet->add_option("v_file", expdet_args.v_file, "CSV matrix V (n×m)")->required();
  cmd_expdet->add_option("p_file", expdet_args.p_file, "CSV row/column of m probabilities")
      ->required();
  cmd_expdet->add_flag("--bruteforce", expdet_args.bruteforce,
                       "Also run the 2^m enumeration oracle");
  cmd_expdet->add_flag("--cauchy-binet", expdet_args.cauchy_binet,
                       "Also run the subset-expansion oracle");
  cmd_expdet->add_option("--mc", expdet_args.mc_samples, "Also run Monte Carlo with N samples");
  cmd_expdet->add_option("--seed", expdet_args.seed, "Monte Carlo seed (default 42)");
  cmd_expdet->add_flag("--json", expdet_args.json, "Emit a single JSON object");

  TreesArgs trees_args;
  auto* cmd_trees =
      app.add_subcommand("trees", "Weighted spanning-tree counts of a random graph");
  cmd_trees->add_option("edge_file", trees_args.edge_file,
                        "Edge list: tail head weight prob [block]")
      ->required();
  cmd_trees->add_flag("--expected", trees_args.expected,
                      "Expected tree count of the random graph");
  cmd_trees->add_flag("--bruteforce", trees_args.bruteforce,
                      "Also run the 2^m edge-state oracle");
  cmd_trees->add_flag("--blocks", trees_args.blocks,
                      "Block-correlated edges: closed form and block-state oracle");
  cmd_trees->add_option("--removed-vertex", trees_args.removed_vertex,
                        "Vertex whose row is removed (default 0)");
  cmd_trees->add_flag("--json", trees_args.json, "Emit a single JSON object");

  SelectArgs select_args;
  auto* cmd_select = app.add_subcommand(
      "select", "D-optimal sensor selection by convex relaxation");
  cmd_select->add_option("h_file", select_args.h_file, "CSV observation matrix H (m×n)")
      ->required();
  cmd_select->add_option("--k", select_args.k, "Number of sensors to select")->required();
  cmd_select->add_option("--noise", select_args.noise_file,
                         "CSV noise: single row of variances or full covariance");
  cmd_select->add_option("--survival", select_args.survival_file,
                         "CSV row of per-sensor survival probabilities");
  cmd_select->add_option("--max-iters", select_args.opts.max_iters, "Iteration cap");
  cmd_select->add_option("--step", select_args.opts.step, "Initial line-search step");
  cmd_select->add_option("--tol", select_args.opts.tol, "Projected-gradient stop tolerance");
  cmd_select->add_flag("--json", select_args.json, "Emit a single JSON object");

  VerifyArgs verify_args;
  auto* cmd_verify =
      app.add_subcommand("verify", "Run the randomized oracle cross-check battery");
  cmd_verify->add_option("--size", verify_args.size, "small or medium (default small)")
      ->check(CLI::IsMember({"small", "medium"}));
  cmd_verify->add_option("--seed", verify_args.seed, "Battery seed (default 42)");
  cmd_verify->add_flag("--json", verify_args.json, "Emit a single JSON object");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (cmd_expdet->parsed()) return run_expdet(expdet_args);
    if (cmd_trees->parsed()) return run_trees(trees_args);
    if (cmd_select->parsed()) return run_select(select_args);
    return run_verify(verify_args);
  } catch (const expdet::CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacityError;
  } catch (const expdet::SingularityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCapacityError;
  } catch (const expdet::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}
