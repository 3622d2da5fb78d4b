#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rpa/errors.hpp"

namespace rpa {

/// Opaque vertex identifier. For live repositories this is a commit hash;
/// ids must not contain whitespace (file-format compatibility).
using VertexId = std::string;

/// Id given to the synthetic root inserted when the raw graph has more than
/// one parentless vertex. It is treated as valid by construction.
inline constexpr const char* kVirtualRootId = "__virtual_root__";

/// Rooted annotated DAG of commits. Exactly one vertex has no predecessors
/// (the root); successor and predecessor adjacency lists are kept mutually
/// consistent and ordered by edge insertion. Vertices can be tombstoned:
/// logically removed, skipped by every traversal, but still present so that
/// index-based tables stay valid.
///
/// Immutable after construction except for the tombstone set (single writer,
/// multiple readers).
class Radag {
 public:
  /// Empty placeholder; assign a built graph before use.
  Radag() = default;

  /// Builds a graph from (parent, child) edges plus optional standalone
  /// vertices (vertices mentioned without any edge, e.g. a lone root).
  /// Duplicate edges are tolerated and deduplicated. If the raw graph has
  /// several parentless vertices, a virtual root is inserted with an edge to
  /// each of them, in first-appearance order.
  ///
  /// Throws CycleDetected (with one offending cycle) or EmptyGraph.
  static Radag from_edges(const std::vector<std::pair<VertexId, VertexId>>& parent_child,
                          const std::vector<VertexId>& standalone_vertices = {});

  std::size_t vertex_count() const { return ids_.size(); }
  bool contains(const VertexId& v) const { return index_.count(v) != 0; }
  const VertexId& root() const { return ids_[root_]; }
  bool has_virtual_root() const { return ids_[root_] == kVirtualRootId; }

  /// Dense index of a vertex, stable for the graph's lifetime.
  std::size_t index_of(const VertexId& v) const;
  const VertexId& vertex_at(std::size_t i) const { return ids_.at(i); }

  const std::vector<std::size_t>& successor_indices(std::size_t i) const { return succ_.at(i); }
  const std::vector<std::size_t>& predecessor_indices(std::size_t i) const { return pred_.at(i); }
  std::vector<VertexId> successors(const VertexId& v) const;
  std::vector<VertexId> predecessors(const VertexId& v) const;

  /// Sinks (no non-tombstoned successors), in vertex-index order.
  std::vector<VertexId> leaves() const;
  bool is_sink(const VertexId& v) const;

  void tombstone(const VertexId& v) { tombstoned_.at(index_of(v)) = true; }
  void tombstone_index(std::size_t i) { tombstoned_.at(i) = true; }
  bool is_tombstoned(const VertexId& v) const { return tombstoned_.at(index_of(v)); }
  bool is_tombstoned_index(std::size_t i) const { return tombstoned_.at(i); }
  std::vector<VertexId> tombstoned_vertices() const;

  /// {v} plus every non-tombstoned vertex reachable from v by directed
  /// edges. The traversal never enters a tombstoned vertex.
  std::vector<VertexId> reachable_from(const VertexId& v) const;

  /// Deterministic Kahn order: FIFO over ready vertices, successors scanned
  /// in adjacency order. Tombstoned vertices are ignored.
  std::vector<std::size_t> topological_order() const;

  /// Edges in insertion order (deduplicated); adjacency list orders derive
  /// from this sequence, so serializing it reproduces them exactly.
  const std::vector<std::pair<std::size_t, std::size_t>>& edge_order() const {
    return edge_order_;
  }

 private:
  std::vector<VertexId> ids_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::vector<std::pair<std::size_t, std::size_t>> edge_order_;  // (parent, child)
  std::vector<bool> tombstoned_;
  std::size_t root_ = 0;
};

/// Convenience entry point mirroring the file format: an edge list plus an
/// optional declared root for edge-less graphs.
Radag build_graph(const std::vector<std::pair<VertexId, VertexId>>& parent_child,
                  const std::optional<VertexId>& declared_root = std::nullopt);

/// Per-leaf shortest-path distances (edge counts) and next hops, computed by
/// one backwards breadth-first search per leaf over the predecessor lists.
/// Among equal-distance next hops the one earliest in the successor list
/// order is chosen, so reconstructed paths are deterministic.
class DistanceTable {
 public:
  static constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

  DistanceTable(const Radag& g, const std::vector<VertexId>& leaves);

  /// Edge count of a shortest v->leaf path, or kUnreachable.
  std::size_t dist(const VertexId& v, const VertexId& leaf) const;
  std::size_t dist_index(std::size_t v, std::size_t leaf_column) const;

  /// Next hop on a shortest v->leaf path. Undefined (throws Unreachable)
  /// when dist is zero or infinite.
  VertexId succ(const VertexId& v, const VertexId& leaf) const;

  std::size_t column_of(const VertexId& leaf) const;
  const std::vector<VertexId>& leaves() const { return leaf_ids_; }

  /// ⟨from, ..., leaf⟩ with exactly dist(from,leaf)+1 elements.
  std::vector<VertexId> shortest_path(const VertexId& from, const VertexId& leaf) const;

 private:
  const Radag* graph_;
  std::vector<VertexId> leaf_ids_;
  std::unordered_map<VertexId, std::size_t> leaf_column_;
  // dist_[col][vertex index]; -1 encodes unreachable. next_[col][i] is the
  // vertex index of the chosen hop, -1 when undefined.
  std::vector<std::vector<std::int64_t>> dist_;
  std::vector<std::vector<std::int64_t>> next_;
};

DistanceTable compute_distance_table(const Radag& g, const std::vector<VertexId>& leaves);

// ---- graph file format -----------------------------------------------------
//
// UTF-8 text, one record per line:
//   <child-id> <parent-id> [<parent-id> ...]
//   <id>              (a vertex with no parents)
//   # comment
// Blank lines are ignored.

Radag parse_graph(std::istream& in);
Radag parse_graph_file(const std::string& path);

/// Parentless vertices first as bare lines (sorted), then one `<child>
/// <parent>` line per edge in insertion order. parse(serialize(g))
/// reproduces g's adjacency exactly, lists in the same order, and the
/// serialized form is a byte-stable fixed point.
void serialize_graph(const Radag& g, std::ostream& out);
std::string serialize_graph(const Radag& g);

/// Structural equality: same vertex set, root, and adjacency (order included).
bool same_structure(const Radag& a, const Radag& b);

}  // namespace rpa
