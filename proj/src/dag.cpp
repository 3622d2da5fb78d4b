#include "rpa/dag.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <sstream>

namespace rpa {

namespace {

// Registers v if unseen; returns its dense index.
std::size_t intern(std::vector<VertexId>& ids,
                   std::unordered_map<VertexId, std::size_t>& index,
                   const VertexId& v) {
  auto it = index.find(v);
  if (it != index.end()) return it->second;
  if (v.empty() || v.find_first_of(" \t\r\n") != VertexId::npos)
    throw Error("vertex id '" + v + "' is empty or contains whitespace");
  std::size_t i = ids.size();
  ids.push_back(v);
  index.emplace(v, i);
  return i;
}

}  // namespace

Radag Radag::from_edges(const std::vector<std::pair<VertexId, VertexId>>& parent_child,
                        const std::vector<VertexId>& standalone_vertices) {
  if (parent_child.empty() && standalone_vertices.empty())
    throw EmptyGraph("graph has no edges and no vertices");

  Radag g;
  for (const auto& v : standalone_vertices) intern(g.ids_, g.index_, v);
  for (const auto& [parent, child] : parent_child) {
    intern(g.ids_, g.index_, parent);
    intern(g.ids_, g.index_, child);
  }

  std::size_t n = g.ids_.size();
  g.succ_.assign(n, {});
  g.pred_.assign(n, {});
  for (const auto& [parent, child] : parent_child) {
    std::size_t p = g.index_.at(parent);
    std::size_t c = g.index_.at(child);
    auto& succs = g.succ_[p];
    if (std::find(succs.begin(), succs.end(), c) != succs.end()) continue;  // duplicate edge
    succs.push_back(c);
    g.pred_[c].push_back(p);
    g.edge_order_.emplace_back(p, c);
  }

  // Cycle check: iterative three-color DFS; report one offending cycle.
  {
    enum : std::uint8_t { kWhite, kGrey, kBlack };
    std::vector<std::uint8_t> color(n, kWhite);
    std::vector<std::size_t> stack;      // vertices on the current DFS path
    std::vector<std::size_t> edge_pos;   // next successor offset per stack slot
    for (std::size_t s = 0; s < n; ++s) {
      if (color[s] != kWhite) continue;
      stack.assign(1, s);
      edge_pos.assign(1, 0);
      color[s] = kGrey;
      while (!stack.empty()) {
        std::size_t u = stack.back();
        if (edge_pos.back() < g.succ_[u].size()) {
          std::size_t w = g.succ_[u][edge_pos.back()++];
          if (color[w] == kGrey) {
            std::vector<VertexId> cycle;
            auto it = std::find(stack.begin(), stack.end(), w);
            for (; it != stack.end(); ++it) cycle.push_back(g.ids_[*it]);
            cycle.push_back(g.ids_[w]);
            throw CycleDetected("graph contains a cycle through '" + g.ids_[w] + "'",
                                std::move(cycle));
          }
          if (color[w] == kWhite) {
            color[w] = kGrey;
            stack.push_back(w);
            edge_pos.push_back(0);
          }
        } else {
          color[u] = kBlack;
          stack.pop_back();
          edge_pos.pop_back();
        }
      }
    }
  }

  // Root determination, with virtual-root normalization for multi-root graphs.
  std::vector<std::size_t> raw_roots;
  for (std::size_t i = 0; i < n; ++i)
    if (g.pred_[i].empty()) raw_roots.push_back(i);
  if (raw_roots.empty())
    throw CycleDetected("graph has no parentless vertex", {});
  if (raw_roots.size() == 1) {
    g.root_ = raw_roots[0];
  } else {
    std::size_t vr = intern(g.ids_, g.index_, kVirtualRootId);
    if (vr != n) throw Error("reserved vertex id '" + std::string(kVirtualRootId) +
                             "' already present in a multi-root graph");
    g.succ_.emplace_back();
    g.pred_.emplace_back();
    for (std::size_t r : raw_roots) {
      g.succ_[vr].push_back(r);
      g.pred_[r].push_back(vr);
      g.edge_order_.emplace_back(vr, r);
    }
    g.root_ = vr;
    n = g.ids_.size();
  }

  g.tombstoned_.assign(g.ids_.size(), false);
  return g;
}

std::size_t Radag::index_of(const VertexId& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw UnknownVertex("unknown vertex '" + v + "'");
  return it->second;
}

std::vector<VertexId> Radag::successors(const VertexId& v) const {
  std::vector<VertexId> out;
  for (std::size_t s : succ_.at(index_of(v))) out.push_back(ids_[s]);
  return out;
}

std::vector<VertexId> Radag::predecessors(const VertexId& v) const {
  std::vector<VertexId> out;
  for (std::size_t p : pred_.at(index_of(v))) out.push_back(ids_[p]);
  return out;
}

bool Radag::is_sink(const VertexId& v) const {
  for (std::size_t s : succ_.at(index_of(v)))
    if (!tombstoned_[s]) return false;
  return true;
}

std::vector<VertexId> Radag::leaves() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (tombstoned_[i]) continue;
    bool sink = true;
    for (std::size_t s : succ_[i])
      if (!tombstoned_[s]) { sink = false; break; }
    if (sink) out.push_back(ids_[i]);
  }
  return out;
}

std::vector<VertexId> Radag::tombstoned_vertices() const {
  std::vector<VertexId> out;
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (tombstoned_[i]) out.push_back(ids_[i]);
  return out;
}

std::vector<VertexId> Radag::reachable_from(const VertexId& v) const {
  std::size_t start = index_of(v);
  std::vector<bool> seen(ids_.size(), false);
  std::vector<VertexId> out{ids_[start]};
  seen[start] = true;
  if (tombstoned_[start]) return out;
  std::vector<std::size_t> stack{start};
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t s : succ_[u]) {
      if (seen[s] || tombstoned_[s]) continue;
      seen[s] = true;
      out.push_back(ids_[s]);
      stack.push_back(s);
    }
  }
  return out;
}

std::vector<std::size_t> Radag::topological_order() const {
  std::vector<std::size_t> indegree(ids_.size(), 0);
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (tombstoned_[i]) continue;
    for (std::size_t s : succ_[i])
      if (!tombstoned_[s]) ++indegree[s];
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < ids_.size(); ++i)
    if (!tombstoned_[i] && indegree[i] == 0) ready.push_back(i);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t u = ready.front();
    ready.pop_front();
    order.push_back(u);
    for (std::size_t s : succ_[u]) {
      if (tombstoned_[s]) continue;
      if (--indegree[s] == 0) ready.push_back(s);
    }
  }
  return order;
}

Radag build_graph(const std::vector<std::pair<VertexId, VertexId>>& parent_child,
                  const std::optional<VertexId>& declared_root) {
  std::vector<VertexId> standalone;
  if (declared_root) standalone.push_back(*declared_root);
  return Radag::from_edges(parent_child, standalone);
}

// ---- distance table ---------------------------------------------------------

DistanceTable::DistanceTable(const Radag& g, const std::vector<VertexId>& leaves)
    : graph_(&g) {
  std::size_t n = g.vertex_count();
  for (const auto& leaf : leaves) {
    std::size_t li = g.index_of(leaf);
    if (g.is_tombstoned_index(li))
      throw UnknownVertex("leaf '" + leaf + "' is tombstoned");
    if (leaf_column_.count(leaf)) continue;
    leaf_column_.emplace(leaf, leaf_ids_.size());
    leaf_ids_.push_back(leaf);

    // Backwards BFS from the leaf over predecessor lists.
    std::vector<std::int64_t> dist(n, -1);
    dist[li] = 0;
    std::deque<std::size_t> queue{li};
    while (!queue.empty()) {
      std::size_t cur = queue.front();
      queue.pop_front();
      for (std::size_t p : g.predecessor_indices(cur)) {
        if (g.is_tombstoned_index(p) || dist[p] >= 0) continue;
        dist[p] = dist[cur] + 1;
        queue.push_back(p);
      }
    }

    // Next hops in a second pass so ties resolve by successor list order.
    std::vector<std::int64_t> next(n, -1);
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] <= 0) continue;
      for (std::size_t s : g.successor_indices(v)) {
        if (!g.is_tombstoned_index(s) && dist[s] == dist[v] - 1) {
          next[v] = static_cast<std::int64_t>(s);
          break;
        }
      }
    }
    dist_.push_back(std::move(dist));
    next_.push_back(std::move(next));
  }
}

std::size_t DistanceTable::column_of(const VertexId& leaf) const {
  auto it = leaf_column_.find(leaf);
  if (it == leaf_column_.end())
    throw UnknownVertex("vertex '" + leaf + "' is not a leaf of this table");
  return it->second;
}

std::size_t DistanceTable::dist_index(std::size_t v, std::size_t leaf_column) const {
  std::int64_t d = dist_.at(leaf_column).at(v);
  return d < 0 ? kUnreachable : static_cast<std::size_t>(d);
}

std::size_t DistanceTable::dist(const VertexId& v, const VertexId& leaf) const {
  return dist_index(graph_->index_of(v), column_of(leaf));
}

VertexId DistanceTable::succ(const VertexId& v, const VertexId& leaf) const {
  std::int64_t nxt = next_.at(column_of(leaf)).at(graph_->index_of(v));
  if (nxt < 0)
    throw Unreachable("no next hop from '" + v + "' towards '" + leaf + "'");
  return graph_->vertex_at(static_cast<std::size_t>(nxt));
}

std::vector<VertexId> DistanceTable::shortest_path(const VertexId& from,
                                                   const VertexId& leaf) const {
  std::size_t col = column_of(leaf);
  std::size_t v = graph_->index_of(from);
  std::int64_t d = dist_.at(col).at(v);
  if (d < 0)
    throw Unreachable("'" + leaf + "' is not reachable from '" + from + "'");
  std::vector<VertexId> path;
  path.reserve(static_cast<std::size_t>(d) + 1);
  path.push_back(graph_->vertex_at(v));
  while (dist_.at(col).at(v) > 0) {
    v = static_cast<std::size_t>(next_.at(col).at(v));
    path.push_back(graph_->vertex_at(v));
  }
  return path;
}

DistanceTable compute_distance_table(const Radag& g, const std::vector<VertexId>& leaves) {
  return DistanceTable(g, leaves);
}

// ---- file format --------------------------------------------------------------

Radag parse_graph(std::istream& in) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<VertexId> standalone;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream tokens(line);
    std::string child;
    if (!(tokens >> child) || child[0] == '#') continue;
    std::string parent;
    bool any_parent = false;
    while (tokens >> parent) {
      if (parent[0] == '#') break;
      if (parent == child)
        throw ParseError("self edge on '" + child + "'", line_number);
      edges.emplace_back(parent, child);
      any_parent = true;
    }
    if (!any_parent) standalone.push_back(child);
  }
  try {
    return Radag::from_edges(edges, standalone);
  } catch (const EmptyGraph&) {
    throw ParseError("graph file declares no vertices", line_number);
  }
}

Radag parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

void serialize_graph(const Radag& g, std::ostream& out) {
  std::vector<VertexId> parentless;
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    if (g.predecessor_indices(i).empty()) parentless.push_back(g.vertex_at(i));
  std::sort(parentless.begin(), parentless.end());
  for (const auto& v : parentless) out << v << '\n';
  for (const auto& [p, c] : g.edge_order())
    out << g.vertex_at(c) << ' ' << g.vertex_at(p) << '\n';
}

std::string serialize_graph(const Radag& g) {
  std::ostringstream out;
  serialize_graph(g, out);
  return out.str();
}

bool same_structure(const Radag& a, const Radag& b) {
  if (a.vertex_count() != b.vertex_count() || a.root() != b.root()) return false;
  for (std::size_t i = 0; i < a.vertex_count(); ++i) {
    const VertexId& v = a.vertex_at(i);
    if (!b.contains(v)) return false;
    if (a.successors(v) != b.successors(v)) return false;
    if (a.predecessors(v) != b.predecessors(v)) return false;
  }
  return true;
}

}  // namespace rpa
