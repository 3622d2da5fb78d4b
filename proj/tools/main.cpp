// rpa: regression localization over commit graphs.
//
// Subcommands: run (recorded instances), git-run (live repository),
// interactive (human answers the validity prompts), gen (synthetic
// instances), bench (algorithm matrix with CSV output).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "rpa/bench.hpp"
#include "rpa/bisect.hpp"
#include "rpa/engine.hpp"
#include "rpa/git.hpp"
#include "rpa/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // oracle/engine failure
constexpr int kExitUsage = 2;     // input errors
constexpr int kExitAbort = 3;     // test command cannot decide (exit 125)
constexpr int kExitPartial = 4;   // interactive quit

struct RunInputs {
  rpa::Radag graph;
  std::map<rpa::VertexId, bool> labels;
  std::vector<rpa::VertexId> leaves;
};

void print_result_line(std::ostream& out, const rpa::VertexId& leaf, const rpa::RegressionPoint& rp,
                       const rpa::DistanceTable& table) {
  out << "LEAF " << leaf << " REGRESSION " << rp.valid_end << " -> " << rp.invalid_end
      << " (distance " << table.dist(rp.invalid_end, leaf) << ")\n";
}

// propagate flag: tri-state so the default can depend on the leaf count
// (single-leaf propagation is pointless and explicitly rejected).
std::optional<bool> propagate_flag(const CLI::App& cmd) {
  if (cmd.count("--propagate")) return true;
  if (cmd.count("--no-propagate")) return false;
  return std::nullopt;
}

bool resolve_propagate(std::optional<bool> flag, std::size_t leaf_count) {
  if (flag.has_value()) {
    if (*flag && leaf_count == 1)
      throw rpa::Error(
          "propagation with a single leaf is pointless: there is no other leaf "
          "to share the found regression point with; drop --propagate");
    return *flag;
  }
  return leaf_count > 1;
}

int cmd_run(const std::string& graph_file, const std::string& labels_file,
            const std::string& leaves_file, const std::vector<std::string>& leaf_flags,
            const std::string& strategy_name, std::optional<bool> propagate,
            const std::string& algorithm) {
  RunInputs in;
  in.graph = rpa::parse_graph_file(graph_file);
  in.labels = rpa::parse_labels_file(labels_file);
  if (!leaves_file.empty()) {
    auto from_file = rpa::parse_leaves_file(leaves_file);
    in.leaves.insert(in.leaves.end(), from_file.begin(), from_file.end());
  }
  in.leaves.insert(in.leaves.end(), leaf_flags.begin(), leaf_flags.end());
  if (in.leaves.empty()) throw rpa::Error("no leaves given (use a leaves file or --leaf)");

  auto oracle = rpa::ValidityOracle::recorded(in.labels);
  rpa::DistanceTable table(in.graph, in.leaves);

  if (algorithm == "bisect") {
    if (propagate.has_value() && *propagate)
      throw rpa::Error("--propagate applies to the rpa algorithm only");
    for (const auto& [leaf, rp] : rpa::run_bisect_multi(in.graph, in.leaves, oracle))
      print_result_line(std::cout, leaf, rp, table);
  } else if (algorithm == "rpa") {
    rpa::EngineConfig config;
    config.strategy = rpa::strategy_from_name(strategy_name);
    config.propagate = resolve_propagate(propagate, in.leaves.size());
    rpa::Engine engine(in.graph, in.leaves, oracle, config);
    engine.run();
    for (const auto& leaf : engine.emitted_leaves())
      print_result_line(std::cout, leaf, engine.results().at(leaf), table);
  } else {
    throw rpa::Error("unknown algorithm '" + algorithm + "' (expected rpa or bisect)");
  }
  std::cout << "QUERIES " << oracle.distinct_queries() << "\n";
  return kExitOk;
}

int cmd_interactive(const std::string& graph_file, const std::vector<std::string>& leaves,
                    const std::string& strategy_name, std::optional<bool> propagate) {
  rpa::Radag graph = rpa::parse_graph_file(graph_file);
  if (leaves.empty()) throw rpa::Error("no leaves given");

  rpa::EngineConfig config;
  config.strategy = rpa::strategy_from_name(strategy_name);
  config.propagate = resolve_propagate(propagate, leaves.size());

  auto oracle = rpa::ValidityOracle::external();
  rpa::Engine engine(graph, leaves, oracle, config);

  for (;;) {
    rpa::EngineAction action = engine.next_action();
    if (std::holds_alternative<rpa::EngineDone>(action)) return kExitOk;
    if (auto* emit = std::get_if<rpa::ResultEmit>(&action)) {
      std::cout << "LEAF " << emit->leaf << " REGRESSION " << emit->point.valid_end << " -> "
                << emit->point.invalid_end << "\n";
      continue;
    }
    const auto& request = std::get<rpa::QueryRequest>(action);
    for (;;) {
      std::cout << "TEST " << request.vertex << "? [valid/invalid] " << std::flush;
      std::string token;
      if (!(std::cin >> token) || token == "quit") {
        std::cout << "PARTIAL\n";
        return kExitPartial;
      }
      if (token == "valid" || token == "good") {
        engine.submit_answer(request.vertex, true);
        break;
      }
      if (token == "invalid" || token == "bad") {
        engine.submit_answer(request.vertex, false);
        break;
      }
      std::cout << "unrecognized answer '" << token << "' (valid/invalid/quit)\n";
    }
  }
}

int cmd_git_run(const std::string& repo_path, const std::string& leaf_ref,
                const std::vector<std::string>& test_command, const std::string& strategy_name,
                double timeout_seconds) {
  if (test_command.empty()) throw rpa::Error("no test command given (use --test ...)");

  rpa::RepoHandle repo{repo_path, {leaf_ref}};
  if (!rpa::worktree_clean(repo))
    throw rpa::DirtyWorktree("worktree at '" + repo_path + "' has local changes; commit or stash them");

  rpa::VertexId leaf = rpa::resolve_ref(repo, leaf_ref);
  auto [graph, sinks] = rpa::extract_commit_graph(repo);
  (void)sinks;

  // Restore the original checkout no matter how the run ends.
  std::string original_head = rpa::current_head(repo);
  struct HeadGuard {
    const rpa::RepoHandle& repo;
    std::string head;
    ~HeadGuard() {
      try {
        rpa::checkout_ref(repo, head);
      } catch (const rpa::Error& e) {
        std::cerr << "warning: could not restore '" << head << "': " << e.what() << "\n";
      }
    }
  } guard{repo, original_head};

  rpa::CommandSpec spec;
  spec.workdir = repo_path;
  spec.test_command = test_command;
  spec.timeout_seconds = timeout_seconds;
  spec.checkout = [&repo](const rpa::VertexId& v) { rpa::checkout(repo, v); };
  auto oracle = rpa::ValidityOracle::command(std::move(spec));

  rpa::EngineConfig config;
  config.strategy = rpa::strategy_from_name(strategy_name);
  config.propagate = false;  // single leaf

  rpa::Engine engine(graph, {leaf}, oracle, config);
  engine.run();
  rpa::DistanceTable table(graph, {leaf});
  for (const auto& l : engine.emitted_leaves())
    print_result_line(std::cout, l, engine.results().at(l), table);
  std::cout << "QUERIES " << oracle.distinct_queries() << "\n";
  return kExitOk;
}

struct RandomSpec {
  rpa::GeneratorParams params;
  bool given = false;
};

// --random n=100,branch=0.25,merge=0.15,regressions=3,repair=0.15
RandomSpec parse_random_spec(const std::string& text) {
  RandomSpec spec;
  spec.given = true;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw rpa::Error("bad --random item '" + item + "' (expected key=value)");
    std::string key = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    try {
      if (key == "n") spec.params.n_vertices = std::stoul(value);
      else if (key == "branch") spec.params.branch_prob = std::stod(value);
      else if (key == "merge") spec.params.merge_prob = std::stod(value);
      else if (key == "regressions") spec.params.n_regressions = std::stoul(value);
      else if (key == "repair") spec.params.repair_prob = std::stod(value);
      else throw rpa::Error("unknown --random key '" + key + "'");
    } catch (const std::invalid_argument&) {
      throw rpa::Error("bad --random value '" + value + "' for key '" + key + "'");
    } catch (const std::out_of_range&) {
      throw rpa::Error("--random value '" + value + "' for key '" + key + "' is out of range");
    }
  }
  return spec;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      std::uint64_t s = std::stoull(text);
      return {s, s};
    }
    std::uint64_t a = std::stoull(text.substr(0, dots));
    std::uint64_t b = std::stoull(text.substr(dots + 2));
    if (b < a) throw rpa::Error("empty seed range '" + text + "'");
    return {a, b};
  } catch (const std::invalid_argument&) {
    throw rpa::Error("bad seed range '" + text + "' (expected a or a..b)");
  } catch (const std::out_of_range&) {
    throw rpa::Error("seed range '" + text + "' is out of range");
  }
}

int cmd_gen(const std::string& out_dir, const std::string& random_spec, const std::string& seeds) {
  RandomSpec spec = parse_random_spec(random_spec.empty() ? "n=80" : random_spec);
  auto [first, last] = parse_seed_range(seeds);
  for (std::uint64_t s = first; s <= last; ++s) {
    rpa::BenchmarkInstance instance = rpa::generate_random_radag(spec.params, s);
    rpa::write_instance_bundle(instance, out_dir);
    std::cout << instance.name << ": " << instance.graph.vertex_count() << " vertices, "
              << instance.invalid_leaves.size() << " invalid leaves\n";
  }
  return kExitOk;
}

void print_domination(const rpa::DominationTable& table, std::ostream& out) {
  out << "strictly fewer validity queries (row beats column):\n";
  out << "  <";
  for (const auto& a : table.algorithms) out << '\t' << a;
  out << '\n';
  for (std::size_t i = 0; i < table.algorithms.size(); ++i) {
    out << "  " << table.algorithms[i];
    for (std::size_t j = 0; j < table.algorithms.size(); ++j) {
      if (i == j) {
        out << "\t-";
        continue;
      }
      std::size_t wins = table.strict_wins[i][j];
      std::size_t total = table.comparable[i][j];
      out << '\t' << wins;
      if (total > 0) out << " (" << (100 * wins + total / 2) / total << "%)";
    }
    out << '\n';
  }
}

int cmd_bench(const std::string& instances_dir, const std::string& random_spec,
              const std::string& seeds, std::vector<std::string> algorithms,
              const std::string& out_csv, const std::string& cumulative_metric) {
  std::vector<rpa::BenchmarkInstance> instances;
  if (!instances_dir.empty()) {
    auto loaded = rpa::load_instance_directory(instances_dir);
    instances.insert(instances.end(), std::make_move_iterator(loaded.begin()),
                     std::make_move_iterator(loaded.end()));
  }
  if (!random_spec.empty()) {
    RandomSpec spec = parse_random_spec(random_spec);
    auto [first, last] = parse_seed_range(seeds.empty() ? "1..20" : seeds);
    for (std::uint64_t s = first; s <= last; ++s)
      instances.push_back(rpa::generate_random_radag(spec.params, s));
  }
  if (instances.empty())
    throw rpa::Error("no instance source (use --instances or --random)");

  if (algorithms.empty()) algorithms = rpa::all_algorithm_ids();
  for (const auto& id : algorithms)
    if (!rpa::is_known_algorithm(id)) throw rpa::Error("unknown algorithm id '" + id + "'");

  std::vector<rpa::ResultRow> rows = rpa::run_matrix(instances, algorithms);
  for (const auto& row : rows)
    if (row.leaf == rpa::kErrorRowLeaf)
      std::cerr << "error: " << row.instance << " / " << row.algorithm << ": " << row.error << "\n";

  if (!out_csv.empty()) {
    std::ofstream out(out_csv);
    if (!out) throw rpa::Error("cannot write '" + out_csv + "'");
    rpa::write_rows_csv(rows, out);
    std::cout << "wrote " << rows.size() << " rows to " << out_csv << "\n";
  }

  if (!cumulative_metric.empty()) {
    rpa::Metric metric;
    if (cumulative_metric == "queries") metric = rpa::Metric::queries;
    else if (cumulative_metric == "distance") metric = rpa::Metric::distance;
    else throw rpa::Error("--cumulative expects 'queries' or 'distance'");
    std::string stem = out_csv.empty() ? std::string("cumulative")
                                       : std::filesystem::path(out_csv).stem().string();
    std::string dir = out_csv.empty() ? std::string(".")
                                      : std::filesystem::path(out_csv).parent_path().string();
    if (dir.empty()) dir = ".";
    for (const auto& id : algorithms) {
      std::vector<rpa::ResultRow> subset;
      for (const auto& row : rows)
        if (row.algorithm == id) subset.push_back(row);
      auto table = rpa::cumulative_distribution(subset, metric);
      std::string path = dir + "/" + stem + ".cum." + id + ".csv";
      std::ofstream out(path);
      if (!out) throw rpa::Error("cannot write '" + path + "'");
      rpa::write_cumulative_csv(table, out);
      std::cout << "wrote cumulative " << cumulative_metric << " table to " << path << "\n";
    }
  }

  print_domination(rpa::compute_domination(rows, rpa::Metric::queries, algorithms), std::cout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regression localization over commit graphs"};
  app.require_subcommand(1);

  // run
  std::string run_graph, run_labels, run_leaves_file, run_strategy = "multiplying";
  std::string run_algorithm = "rpa";
  std::vector<std::string> run_leaf_flags;
  auto* run = app.add_subcommand("run", "localize regressions on a recorded instance");
  run->add_option("graph", run_graph, "graph file")->required();
  run->add_option("labels", run_labels, "validity label file")->required();
  run->add_option("--leaves", run_leaves_file, "file with one invalid leaf per line");
  run->add_option("--leaf", run_leaf_flags, "invalid leaf id (repeatable)");
  run->add_option("--strategy", run_strategy, "linear|binary|multiplying (default multiplying)");
  run->add_flag("--propagate", "share found points with reachable leaves");
  run->add_flag("--no-propagate", "resolve every leaf by its own search");
  run->add_option("--algorithm", run_algorithm, "rpa|bisect (default rpa)");

  // interactive
  std::string ia_graph, ia_strategy = "multiplying";
  std::vector<std::string> ia_leaves;
  auto* interactive = app.add_subcommand("interactive", "answer validity prompts by hand");
  interactive->add_option("graph", ia_graph, "graph file")->required();
  interactive->add_option("leaves", ia_leaves, "invalid leaf ids")->required();
  interactive->add_option("--strategy", ia_strategy, "linear|binary|multiplying");
  interactive->add_flag("--propagate", "share found points with reachable leaves");
  interactive->add_flag("--no-propagate", "resolve every leaf by its own search");

  // git-run
  std::string gr_repo, gr_leaf, gr_strategy = "multiplying";
  std::vector<std::string> gr_test;
  double gr_timeout = 3600.0;
  auto* git_run = app.add_subcommand("git-run", "localize a regression in a git repository");
  git_run->add_option("repo", gr_repo, "repository path")->required();
  git_run->add_option("--leaf", gr_leaf, "failing ref (branch, tag or commit)")->required();
  git_run->add_option("--test", gr_test, "test command and arguments (put it after the other flags)")
      ->required()
      ->take_all();
  git_run->add_option("--strategy", gr_strategy, "linear|binary|multiplying");
  git_run->add_option("--timeout", gr_timeout, "per-probe test timeout in seconds");
  // Dash-leading test arguments (e.g. `test ! -f BUG`) fall out of --test's
  // greedy capture; collect them back in order.
  git_run->allow_extras();

  // gen
  std::string gen_out, gen_random, gen_seeds = "1..10";
  auto* gen = app.add_subcommand("gen", "generate synthetic instance bundles");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--random", gen_random, "n=..,branch=..,merge=..,regressions=..,repair=..");
  gen->add_option("--seeds", gen_seeds, "seed or seed range a..b");

  // bench
  std::string bench_dir, bench_random, bench_seeds, bench_out, bench_cumulative;
  std::vector<std::string> bench_algorithms;
  auto* bench = app.add_subcommand("bench", "run the algorithm matrix and emit CSV tables");
  bench->add_option("--instances", bench_dir, "directory of instance bundles");
  bench->add_option("--random", bench_random, "generator parameters (see gen)");
  bench->add_option("--seeds", bench_seeds, "seed or seed range a..b");
  bench->add_option("--algorithms", bench_algorithms, "algorithm ids")->delimiter(',');
  bench->add_option("--out", bench_out, "result CSV path");
  bench->add_option("--cumulative", bench_cumulative, "queries|distance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run->parsed())
      return cmd_run(run_graph, run_labels, run_leaves_file, run_leaf_flags, run_strategy,
                     propagate_flag(*run), run_algorithm);
    if (interactive->parsed())
      return cmd_interactive(ia_graph, ia_leaves, ia_strategy, propagate_flag(*interactive));
    if (git_run->parsed()) {
      for (const auto& extra : git_run->remaining()) gr_test.push_back(extra);
      return cmd_git_run(gr_repo, gr_leaf, gr_test, gr_strategy, gr_timeout);
    }
    if (gen->parsed()) return cmd_gen(gen_out, gen_random, gen_seeds);
    if (bench->parsed())
      return cmd_bench(bench_dir, bench_random, bench_seeds, bench_algorithms, bench_out,
                       bench_cumulative);
  } catch (const rpa::CommandAbort& e) {
    std::cerr << "abort: " << e.what() << "\n";
    return kExitAbort;
  } catch (const rpa::CommandTimeout& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const rpa::OracleFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const rpa::InvariantViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const rpa::UnreachableLeaf& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const rpa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
