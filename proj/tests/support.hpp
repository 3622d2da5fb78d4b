// Shared fixtures and reference implementations for the test suites. The
// reference routines here recompute results from first principles (plain
// BFS/DFS over edge lists, full-table scans) so they stay independent of the
// library code they check.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rpa/dag.hpp"
#include "rpa/search.hpp"

namespace testsupport {

using rpa::VertexId;

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

// Sixteen-vertex trace fixture: four invalid branch heads, three distinct
// regression points, one of them shared by two heads.
inline const EdgeList& trace_edges() {
  static const EdgeList edges = {
      {"a", "b"}, {"b", "c"}, {"c", "d"}, {"c", "n"}, {"d", "e"}, {"e", "f"},
      {"e", "h"}, {"f", "g"}, {"h", "i"}, {"i", "j"}, {"j", "k"}, {"j", "l"},
      {"l", "m"}, {"n", "o"}, {"n", "i"}, {"o", "p"},
  };
  return edges;
}

inline const std::map<VertexId, bool>& trace_validity() {
  static const std::map<VertexId, bool> validity = {
      {"a", true},  {"b", true},  {"c", true},  {"d", false}, {"e", true},  {"f", true},
      {"g", false}, {"h", false}, {"i", false}, {"j", false}, {"k", false}, {"l", false},
      {"m", false}, {"n", true},  {"o", false}, {"p", false},
  };
  return validity;
}

inline const std::vector<VertexId>& trace_leaves() {
  static const std::vector<VertexId> leaves = {"g", "k", "m", "p"};
  return leaves;
}

inline std::string trace_graph_text() {
  std::string text = "# trace fixture\n";
  for (const auto& [parent, child] : trace_edges()) text += child + " " + parent + "\n";
  return text;
}

// ---- reference implementations ----------------------------------------------

// Forward adjacency built directly from an edge list.
inline std::map<VertexId, std::vector<VertexId>> adjacency(const EdgeList& edges) {
  std::map<VertexId, std::vector<VertexId>> out;
  for (const auto& [parent, child] : edges) {
    out[parent].push_back(child);
    out.try_emplace(child);
  }
  return out;
}

// Plain BFS distance from every vertex to the target, by scanning all
// vertices as sources.
inline std::map<VertexId, std::size_t> reference_distances(const EdgeList& edges,
                                                           const VertexId& target) {
  auto adj = adjacency(edges);
  std::map<VertexId, std::size_t> dist;
  for (const auto& [source, unused] : adj) {
    (void)unused;
    std::map<VertexId, std::size_t> d;
    std::deque<VertexId> queue{source};
    d[source] = 0;
    while (!queue.empty()) {
      VertexId u = queue.front();
      queue.pop_front();
      if (u == target) break;
      for (const auto& s : adj[u]) {
        if (d.count(s)) continue;
        d[s] = d[u] + 1;
        queue.push_back(s);
      }
    }
    if (d.count(target)) dist[source] = d[target];
  }
  return dist;
}

inline bool reference_reaches(const EdgeList& edges, const VertexId& from, const VertexId& to) {
  auto adj = adjacency(edges);
  std::set<VertexId> seen{from};
  std::vector<VertexId> stack{from};
  while (!stack.empty()) {
    VertexId u = stack.back();
    stack.pop_back();
    if (u == to) return true;
    for (const auto& s : adj[u])
      if (seen.insert(s).second) stack.push_back(s);
  }
  return false;
}

// The definition check: (u,v) is an edge, u valid, v invalid, and v reaches
// the leaf (or is the leaf).
inline bool is_regression_predecessor(const EdgeList& edges,
                                      const std::map<VertexId, bool>& validity,
                                      const VertexId& leaf, const rpa::RegressionPoint& rp) {
  bool edge_exists = std::find(edges.begin(), edges.end(),
                               std::make_pair(rp.valid_end, rp.invalid_end)) != edges.end();
  if (!edge_exists) return false;
  auto u = validity.find(rp.valid_end);
  auto v = validity.find(rp.invalid_end);
  if (u == validity.end() || !u->second) return false;
  if (v == validity.end() || v->second) return false;
  return rp.invalid_end == leaf || reference_reaches(edges, rp.invalid_end, leaf);
}

inline EdgeList edges_of(const rpa::Radag& g) {
  EdgeList edges;
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    for (std::size_t s : g.successor_indices(i))
      edges.emplace_back(g.vertex_at(i), g.vertex_at(s));
  return edges;
}

// Full-evaluation scan of a path: the regression point nearest the last
// vertex.
inline rpa::RegressionPoint nearest_regression_point(const std::vector<VertexId>& path,
                                                     const std::map<VertexId, bool>& validity) {
  for (std::size_t i = path.size() - 1; i-- > 0;) {
    if (validity.at(path[i])) return {path[i], path[i + 1]};
  }
  throw std::logic_error("path has no regression point");
}

inline std::size_t ceil_log2(std::size_t n) {
  std::size_t bits = 0;
  std::size_t value = 1;
  while (value < n) {
    value <<= 1;
    ++bits;
  }
  return bits;
}

inline std::size_t floor_log2(std::size_t n) {
  std::size_t bits = 0;
  while (n > 1) {
    n >>= 1;
    ++bits;
  }
  return bits;
}

// Small standalone generator for random search paths (independent of the
// benchmark generator): v0 valid, last invalid, interior drawn at random.
class PathGen {
 public:
  explicit PathGen(std::uint64_t seed) : state_(seed * 2654435769u + 1) {}

  std::uint64_t next() {
    state_ ^= state_ << 13;
    state_ ^= state_ >> 7;
    state_ ^= state_ << 17;
    return state_;
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool chance_percent(std::size_t p) { return below(100) < p; }

  std::pair<std::vector<VertexId>, std::map<VertexId, bool>> path(std::size_t min_vertices,
                                                                  std::size_t max_vertices) {
    std::size_t n = min_vertices + below(max_vertices - min_vertices + 1);
    std::vector<VertexId> path;
    std::map<VertexId, bool> validity;
    for (std::size_t i = 0; i < n; ++i) path.push_back("p" + std::to_string(i));
    validity[path.front()] = true;
    validity[path.back()] = false;
    for (std::size_t i = 1; i + 1 < n; ++i) validity[path[i]] = chance_percent(50);
    return {path, validity};
  }

  // Monotone variant: a valid prefix followed by an invalid suffix.
  std::pair<std::vector<VertexId>, std::map<VertexId, bool>> monotone_path(
      std::size_t min_vertices, std::size_t max_vertices) {
    auto [path, validity] = this->path(min_vertices, max_vertices);
    std::size_t cut = 1 + below(path.size() - 1);  // first invalid index
    for (std::size_t i = 0; i < path.size(); ++i) validity[path[i]] = i < cut;
    return {path, validity};
  }

 private:
  std::uint64_t state_;
};

}  // namespace testsupport
