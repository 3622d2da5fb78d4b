#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rpa/dag.hpp"
#include "rpa/search.hpp"

namespace rpa {

/// A replayable problem: a graph, a total validity labeling, and the invalid
/// leaves to localize.
struct BenchmarkInstance {
  Radag graph;
  std::map<VertexId, bool> validity;
  std::vector<VertexId> invalid_leaves;
  std::string name;
  std::optional<std::uint64_t> seed;
};

struct GeneratorParams {
  std::size_t n_vertices = 80;
  double branch_prob = 0.25;   // chance a vertex forks off an older vertex
  double merge_prob = 0.15;    // chance a vertex gets a second parent
  std::size_t n_regressions = 3;
  double repair_prob = 0.15;   // chance an invalid-parent vertex comes back valid
};

/// Deterministic for a fixed (params, seed): a single-root DAG with validity
/// assigned by planting breakages and optional downstream repairs, so
/// repair_prob > 0 yields non-monotone instances. Throws DegenerateParams if
/// no invalid leaf appears after bounded retries.
BenchmarkInstance generate_random_radag(const GeneratorParams& params, std::uint64_t seed);

/// One CSV record. Per-leaf rows carry the whole-run query figure and the
/// found point; each (instance, algorithm) cell additionally gets a TOTAL
/// row (leaf column "TOTAL", point and distance columns empty).
struct ResultRow {
  std::string instance;
  std::string algorithm;
  std::string leaf;  // vertex id, "TOTAL", or "ERROR"
  std::size_t queries = 0;
  std::string rp_valid;
  std::string rp_invalid;
  std::optional<std::size_t> distance;
  std::string error;  // diagnostic for ERROR rows; not serialized
};

inline constexpr const char* kTotalRowLeaf = "TOTAL";
inline constexpr const char* kErrorRowLeaf = "ERROR";

/// Known algorithm ids:
///   rpa-linear, rpa-binary, rpa-mult (optionally suffixed -prop / -noprop;
///   bare ids mean no propagation), bisect, bisect-cache.
bool is_known_algorithm(const std::string& id);
const std::vector<std::string>& all_algorithm_ids();

/// Runs every (instance, algorithm) cell with a fresh replay oracle and
/// exact distinct-query accounting; failed cells become ERROR rows and the
/// run continues. Rows come back sorted by (instance, algorithm).
std::vector<ResultRow> run_matrix(const std::vector<BenchmarkInstance>& instances,
                                  const std::vector<std::string>& algorithms);

enum class Metric { queries, distance };

/// (threshold, count) pairs for every integer threshold between the smallest
/// and largest observed value; count = units with metric <= threshold.
/// Queries are counted per (instance, algorithm) cell, distances per leaf
/// row. Throws EmptyInput when no unit has a value.
std::vector<std::pair<std::size_t, std::size_t>> cumulative_distribution(
    const std::vector<ResultRow>& rows, Metric metric);

/// strict_wins[i][j] = units where algorithm i's metric is strictly below
/// algorithm j's; comparable[i][j] = units where both have a value.
struct DominationTable {
  std::vector<std::string> algorithms;
  std::vector<std::vector<std::size_t>> strict_wins;
  std::vector<std::vector<std::size_t>> comparable;
};

DominationTable compute_domination(const std::vector<ResultRow>& rows, Metric metric,
                                   const std::vector<std::string>& algorithms);

// ---- bundle and CSV IO -------------------------------------------------------
//
// An instance bundle is <name>.graph + <name>.labels + <name>.leaves
// (one vertex id per line) in one directory.

void write_instance_bundle(const BenchmarkInstance& instance, const std::string& directory);
BenchmarkInstance load_instance_bundle(const std::string& directory, const std::string& name);
/// Loads every *.graph bundle in the directory, sorted by name.
std::vector<BenchmarkInstance> load_instance_directory(const std::string& directory);

std::vector<VertexId> parse_leaves(std::istream& in);
std::vector<VertexId> parse_leaves_file(const std::string& path);

/// Header: instance,algorithm,leaf,queries,rp_valid,rp_invalid,distance
void write_rows_csv(const std::vector<ResultRow>& rows, std::ostream& out);
void write_cumulative_csv(const std::vector<std::pair<std::size_t, std::size_t>>& table,
                          std::ostream& out);

}  // namespace rpa
