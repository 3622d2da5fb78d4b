#include "rpa/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "rpa/bisect.hpp"
#include "rpa/engine.hpp"
#include "rpa/oracle.hpp"

namespace rpa {

namespace {

// mt19937_64 output is pinned by the standard; the reductions below avoid
// std::*_distribution, whose sequences vary across library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 gen_;
};

std::optional<BenchmarkInstance> try_generate(const GeneratorParams& params, std::uint64_t seed,
                                              std::uint64_t attempt, bool pin_sink_breakage) {
  Rng rng(seed * 0x9E3779B97F4A7C15ull + attempt + 1);
  std::size_t n = params.n_vertices;

  auto name_of = [](std::size_t i) { return "v" + std::to_string(i); };
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<std::vector<std::size_t>> parents(n);
  std::vector<bool> has_child(n, false);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t first = rng.chance(params.branch_prob) ? rng.below(i) : i - 1;
    parents[i].push_back(first);
    has_child[first] = true;
    edges.emplace_back(name_of(first), name_of(i));
    if (i >= 2 && rng.chance(params.merge_prob)) {
      std::size_t second = rng.below(i);
      if (second != first) {
        parents[i].push_back(second);
        has_child[second] = true;
        edges.emplace_back(name_of(second), name_of(i));
      }
    }
  }
  Radag graph = n == 1 ? build_graph({}, VertexId(name_of(0))) : build_graph(edges);

  std::set<std::size_t> breakage;
  std::size_t wanted = std::min(params.n_regressions, n - 1);
  if (pin_sink_breakage && wanted > 0) {
    // Rescue attempt: one breakage lands on a sink, which then is an
    // invalid leaf by construction.
    std::vector<std::size_t> sinks;
    for (std::size_t i = 1; i < n; ++i)
      if (!has_child[i]) sinks.push_back(i);
    if (!sinks.empty()) breakage.insert(sinks[rng.below(sinks.size())]);
  }
  while (breakage.size() < wanted) breakage.insert(1 + rng.below(n - 1));

  // Construction order is topological (parents have lower indices), so
  // validity can be assigned in one forward sweep.
  std::vector<bool> valid(n, true);
  for (std::size_t i = 1; i < n; ++i) {
    if (breakage.count(i)) {
      valid[i] = false;
      continue;
    }
    bool all_parents_valid = true;
    for (std::size_t p : parents[i])
      if (!valid[p]) { all_parents_valid = false; break; }
    if (all_parents_valid) valid[i] = true;
    else valid[i] = rng.chance(params.repair_prob);
  }

  BenchmarkInstance instance;
  instance.name = "rand-" + std::to_string(seed);
  instance.seed = seed;
  for (std::size_t i = 0; i < n; ++i) instance.validity.emplace(name_of(i), valid[i]);
  for (const auto& leaf : graph.leaves())
    if (!instance.validity.at(leaf)) instance.invalid_leaves.push_back(leaf);
  instance.graph = std::move(graph);
  if (instance.invalid_leaves.empty()) return std::nullopt;
  return instance;
}

}  // namespace

BenchmarkInstance generate_random_radag(const GeneratorParams& params, std::uint64_t seed) {
  if (params.n_vertices < 2) throw DegenerateParams("need at least 2 vertices");
  // Natural attempts first; later ones pin a breakage onto a sink so that
  // only genuinely unsatisfiable parameters (no regressions at all) fail.
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    if (auto instance = try_generate(params, seed, attempt, attempt >= 32))
      return std::move(*instance);
  }
  throw DegenerateParams("no invalid leaf produced after 64 attempts (seed " +
                         std::to_string(seed) + ")");
}

// ---- algorithm ids -----------------------------------------------------------

namespace {

struct AlgorithmSpec {
  bool is_bisect = false;
  bool shared_cache = false;  // bisect only
  Strategy strategy = Strategy::multiplying;
  bool propagate = false;
};

std::optional<AlgorithmSpec> parse_algorithm(const std::string& id) {
  if (id == "bisect") return AlgorithmSpec{true, false, Strategy::multiplying, false};
  if (id == "bisect-cache") return AlgorithmSpec{true, true, Strategy::multiplying, false};
  std::string base = id;
  bool propagate = false;
  if (base.size() > 5 && base.rfind("-prop") == base.size() - 5) {
    propagate = true;
    base.resize(base.size() - 5);
  } else if (base.size() > 7 && base.rfind("-noprop") == base.size() - 7) {
    base.resize(base.size() - 7);
  }
  Strategy strategy;
  if (base == "rpa-linear") strategy = Strategy::linear;
  else if (base == "rpa-binary") strategy = Strategy::binary;
  else if (base == "rpa-mult") strategy = Strategy::multiplying;
  else return std::nullopt;
  return AlgorithmSpec{false, false, strategy, propagate};
}

}  // namespace

bool is_known_algorithm(const std::string& id) { return parse_algorithm(id).has_value(); }

const std::vector<std::string>& all_algorithm_ids() {
  static const std::vector<std::string> ids = {
      "rpa-linear-prop", "rpa-linear-noprop", "rpa-binary-prop", "rpa-binary-noprop",
      "rpa-mult-prop",   "rpa-mult-noprop",   "bisect",          "bisect-cache"};
  return ids;
}

// ---- matrix ------------------------------------------------------------------

namespace {

std::vector<ResultRow> run_cell(const BenchmarkInstance& instance, const std::string& algorithm_id,
                                const DistanceTable& distances) {
  AlgorithmSpec spec = *parse_algorithm(algorithm_id);
  std::vector<ResultRow> rows;

  std::map<VertexId, RegressionPoint> results;
  std::size_t total_queries = 0;

  if (spec.is_bisect) {
    if (spec.shared_cache) {
      auto oracle = ValidityOracle::recorded(instance.validity);
      for (auto& [leaf, rp] : run_bisect_multi(instance.graph, instance.invalid_leaves, oracle))
        results.emplace(leaf, rp);
      total_queries = oracle.distinct_queries();
    } else {
      for (const auto& leaf : instance.invalid_leaves) {
        auto oracle = ValidityOracle::recorded(instance.validity);
        oracle.seed(instance.graph.root(), true);
        results.emplace(leaf, run_bisect(instance.graph, leaf, {instance.graph.root()}, oracle));
        total_queries += oracle.distinct_queries();
      }
    }
  } else {
    auto oracle = ValidityOracle::recorded(instance.validity);
    results = run_rpa(instance.graph, instance.invalid_leaves, oracle,
                      EngineConfig{spec.strategy, spec.propagate});
    total_queries = oracle.distinct_queries();
  }

  for (const auto& leaf : instance.invalid_leaves) {
    const RegressionPoint& rp = results.at(leaf);
    ResultRow row;
    row.instance = instance.name;
    row.algorithm = algorithm_id;
    row.leaf = leaf;
    row.queries = total_queries;
    row.rp_valid = rp.valid_end;
    row.rp_invalid = rp.invalid_end;
    row.distance = distances.dist(rp.invalid_end, leaf);
    rows.push_back(std::move(row));
  }
  ResultRow total;
  total.instance = instance.name;
  total.algorithm = algorithm_id;
  total.leaf = kTotalRowLeaf;
  total.queries = total_queries;
  rows.push_back(std::move(total));
  return rows;
}

}  // namespace

std::vector<ResultRow> run_matrix(const std::vector<BenchmarkInstance>& instances,
                                  const std::vector<std::string>& algorithms) {
  for (const auto& id : algorithms)
    if (!is_known_algorithm(id)) throw Error("unknown algorithm id '" + id + "'");

  std::vector<ResultRow> rows;
  for (const auto& instance : instances) {
    DistanceTable distances(instance.graph, instance.invalid_leaves);
    for (const auto& id : algorithms) {
      try {
        auto cell = run_cell(instance, id, distances);
        rows.insert(rows.end(), std::make_move_iterator(cell.begin()),
                    std::make_move_iterator(cell.end()));
      } catch (const Error& e) {
        ResultRow row;
        row.instance = instance.name;
        row.algorithm = id;
        row.leaf = kErrorRowLeaf;
        row.error = e.what();
        rows.push_back(std::move(row));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.instance != b.instance) return a.instance < b.instance;
    return a.algorithm < b.algorithm;
  });
  return rows;
}

// ---- statistics -----------------------------------------------------------------

std::vector<std::pair<std::size_t, std::size_t>> cumulative_distribution(
    const std::vector<ResultRow>& rows, Metric metric) {
  std::vector<std::size_t> values;
  for (const auto& row : rows) {
    if (row.leaf == kErrorRowLeaf) continue;
    if (metric == Metric::queries) {
      if (row.leaf == kTotalRowLeaf) values.push_back(row.queries);
    } else {
      if (row.leaf != kTotalRowLeaf && row.distance) values.push_back(*row.distance);
    }
  }
  if (values.empty()) throw EmptyInput("no rows with the requested metric");
  std::sort(values.begin(), values.end());
  std::vector<std::pair<std::size_t, std::size_t>> table;
  for (std::size_t y = values.front(); y <= values.back(); ++y) {
    std::size_t count = static_cast<std::size_t>(
        std::upper_bound(values.begin(), values.end(), y) - values.begin());
    table.emplace_back(y, count);
  }
  return table;
}

DominationTable compute_domination(const std::vector<ResultRow>& rows, Metric metric,
                                   const std::vector<std::string>& algorithms) {
  // unit key -> algorithm -> value
  std::map<std::string, std::map<std::string, std::size_t>> units;
  for (const auto& row : rows) {
    if (row.leaf == kErrorRowLeaf) continue;
    if (metric == Metric::queries) {
      if (row.leaf == kTotalRowLeaf) units[row.instance][row.algorithm] = row.queries;
    } else {
      if (row.leaf != kTotalRowLeaf && row.distance)
        units[row.instance + "\x1f" + row.leaf][row.algorithm] = *row.distance;
    }
  }
  DominationTable table;
  table.algorithms = algorithms;
  std::size_t k = algorithms.size();
  table.strict_wins.assign(k, std::vector<std::size_t>(k, 0));
  table.comparable.assign(k, std::vector<std::size_t>(k, 0));
  for (const auto& [unit, by_algo] : units) {
    for (std::size_t i = 0; i < k; ++i) {
      auto a = by_algo.find(algorithms[i]);
      if (a == by_algo.end()) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        auto b = by_algo.find(algorithms[j]);
        if (b == by_algo.end()) continue;
        ++table.comparable[i][j];
        if (a->second < b->second) ++table.strict_wins[i][j];
      }
    }
  }
  return table;
}

// ---- IO -------------------------------------------------------------------------

std::vector<VertexId> parse_leaves(std::istream& in) {
  std::vector<VertexId> leaves;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::string id;
    if (!(tokens >> id) || id[0] == '#') continue;
    leaves.push_back(id);
  }
  return leaves;
}

std::vector<VertexId> parse_leaves_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open leaves file '" + path + "'");
  return parse_leaves(in);
}

void write_instance_bundle(const BenchmarkInstance& instance, const std::string& directory) {
  namespace fs = std::filesystem;
  fs::create_directories(directory);
  auto base = fs::path(directory) / instance.name;
  {
    std::ofstream out(base.string() + ".graph");
    if (!out) throw Error("cannot write " + base.string() + ".graph");
    serialize_graph(instance.graph, out);
  }
  {
    std::ofstream out(base.string() + ".labels");
    if (!out) throw Error("cannot write " + base.string() + ".labels");
    serialize_labels(instance.validity, out);
  }
  {
    std::ofstream out(base.string() + ".leaves");
    if (!out) throw Error("cannot write " + base.string() + ".leaves");
    for (const auto& leaf : instance.invalid_leaves) out << leaf << '\n';
  }
}

BenchmarkInstance load_instance_bundle(const std::string& directory, const std::string& name) {
  namespace fs = std::filesystem;
  auto base = (fs::path(directory) / name).string();
  BenchmarkInstance instance;
  instance.name = name;
  instance.graph = parse_graph_file(base + ".graph");
  instance.validity = parse_labels_file(base + ".labels");
  instance.invalid_leaves = parse_leaves_file(base + ".leaves");

  for (std::size_t i = 0; i < instance.graph.vertex_count(); ++i) {
    const VertexId& v = instance.graph.vertex_at(i);
    if (!instance.validity.count(v))
      throw Error("bundle '" + name + "': no validity label for vertex '" + v + "'");
  }
  if (!instance.validity.at(instance.graph.root()))
    throw Error("bundle '" + name + "': root must be labeled valid");
  for (const auto& leaf : instance.invalid_leaves) {
    if (!instance.graph.contains(leaf))
      throw Error("bundle '" + name + "': unknown leaf '" + leaf + "'");
    if (!instance.graph.is_sink(leaf))
      throw Error("bundle '" + name + "': leaf '" + leaf + "' is not a sink");
    if (instance.validity.at(leaf))
      throw Error("bundle '" + name + "': leaf '" + leaf + "' is labeled valid");
  }
  return instance;
}

std::vector<BenchmarkInstance> load_instance_directory(const std::string& directory) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) throw Error("'" + directory + "' is not a directory");
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(directory))
    if (entry.is_regular_file() && entry.path().extension() == ".graph")
      names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  std::vector<BenchmarkInstance> instances;
  for (const auto& name : names) instances.push_back(load_instance_bundle(directory, name));
  return instances;
}

void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << "instance,algorithm,leaf,queries,rp_valid,rp_invalid,distance\n";
  for (const auto& row : rows) {
    out << row.instance << ',' << row.algorithm << ',' << row.leaf << ',' << row.queries << ','
        << row.rp_valid << ',' << row.rp_invalid << ',';
    if (row.distance) out << *row.distance;
    out << '\n';
  }
}

void write_cumulative_csv(const std::vector<std::pair<std::size_t, std::size_t>>& table,
                          std::ostream& out) {
  out << "threshold,count\n";
  for (const auto& [threshold, count] : table) out << threshold << ',' << count << '\n';
}

}  // namespace rpa
