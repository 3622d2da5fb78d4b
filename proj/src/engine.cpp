#include "rpa/engine.hpp"

#include <algorithm>

namespace rpa {

namespace {

// Control-flow signal used during search replay: the strategy hit a vertex
// whose verdict is not cached yet.
struct NeedVerdict {
  VertexId vertex;
};

}  // namespace

Engine::Engine(Radag graph, const std::vector<VertexId>& leaves, ValidityOracle& oracle,
               EngineConfig config)
    : graph_(std::move(graph)),
      oracle_(oracle),
      config_(config),
      input_leaves_([&] {
        std::vector<VertexId> unique;
        for (const auto& l : leaves)
          if (std::find(unique.begin(), unique.end(), l) == unique.end()) unique.push_back(l);
        return unique;
      }()),
      table_([this]() -> const Radag& {
        // Leaf validation must precede table construction.
        if (input_leaves_.empty()) throw Error("no leaves given");
        for (const auto& l : input_leaves_)
          if (!graph_.is_sink(l)) throw LeafNotSink("leaf '" + l + "' has successors");
        return graph_;
      }(), input_leaves_) {
  for (std::size_t i = 0; i < input_leaves_.size(); ++i) input_pos_.emplace(input_leaves_[i], i);

  const VertexId& root = graph_.root();
  if (auto cached = oracle_.peek(root); cached && !*cached)
    throw InvariantViolation("root '" + root + "' is cached invalid; a rooted run needs a valid root");
  oracle_.seed(root, true);
  for (const auto& l : input_leaves_) {
    if (auto cached = oracle_.peek(l); cached && *cached)
      throw LeafNotInvalid("leaf '" + l + "' is cached valid");
    oracle_.seed(l, false);
  }

  known_valid_.push_back(root);
  known_valid_set_.insert(root);
  for (const auto& l : input_leaves_) {
    std::size_t d = table_.dist(root, l);
    if (d == DistanceTable::kUnreachable)
      throw UnreachableLeaf("leaf '" + l + "' is unreachable from the root (internal error)");
    dist_.emplace(l, d);
    start_.emplace(l, root);
    unresolved_.insert(l);
    heap_.push({d, input_pos_.at(l), l});
  }
}

std::size_t Engine::dist_of(const VertexId& leaf) const {
  auto it = dist_.find(leaf);
  if (it == dist_.end()) throw UnknownVertex("'" + leaf + "' is not an input leaf");
  return it->second;
}

const VertexId& Engine::start_of(const VertexId& leaf) const {
  auto it = start_.find(leaf);
  if (it == start_.end()) throw UnknownVertex("'" + leaf + "' is not an input leaf");
  return it->second;
}

void Engine::note_verdict(const VertexId& v, bool verdict) {
  query_log_.emplace_back(v, verdict);
  if (current_) {
    (verdict ? current_->new_valid : current_->new_invalid).push_back(v);
    current_->pending.reset();
  }
}

void Engine::submit_answer(const VertexId& v, bool verdict) {
  if (!current_ || !current_->pending || *current_->pending != v) {
    if (oracle_.cached(v))
      throw UnexpectedAnswer("verdict for '" + v + "' is already cached; the cache is authoritative");
    throw UnexpectedAnswer("no pending request for '" + v + "'");
  }
  oracle_.record(v, verdict);
  note_verdict(v, verdict);
}

std::optional<VertexId> Engine::pop_next_leaf() {
  while (!heap_.empty()) {
    QueueEntry e = heap_.top();
    heap_.pop();
    if (!unresolved_.count(e.leaf)) continue;      // resolved meanwhile
    if (e.dist != dist_.at(e.leaf)) continue;      // superseded priority
    return e.leaf;
  }
  return std::nullopt;
}

EngineAction Engine::next_action() {
  for (;;) {
    if (!emit_outbox_.empty()) {
      ResultEmit e = emit_outbox_.front();
      emit_outbox_.pop_front();
      return e;
    }
    if (done_) return EngineDone{};

    if (current_) {
      if (current_->pending) return QueryRequest{*current_->pending};
      try {
        const PathSeq& path = current_->path;
        IndexPoint point = run_search_core(config_.strategy, path.edge_count(),
                                           [&](std::size_t i) -> bool {
                                             if (auto v = oracle_.peek(path[i])) return *v;
                                             throw NeedVerdict{path[i]};
                                           });
        finalize_iteration(point);
        current_.reset();
      } catch (const NeedVerdict& need) {
        current_->pending = need.vertex;
        return QueryRequest{need.vertex};
      }
      continue;
    }

    std::optional<VertexId> leaf = pop_next_leaf();
    if (!leaf) {
      done_ = true;
      continue;
    }
    const VertexId& start = start_.at(*leaf);
    PathSeq path{table_.shortest_path(start, *leaf)};
    if (path.size() < 2)
      throw InvariantViolation("degenerate search path for leaf '" + *leaf + "'");
    current_ = CurrentSearch{*leaf, std::move(path), std::nullopt, {}, {}};
  }
}

void Engine::finalize_iteration(const IndexPoint& point) {
  const PathSeq& path = current_->path;
  RegressionPoint rp{path[point.valid_index], path[point.invalid_index]};

  for (const auto& v : current_->new_valid) {
    if (known_valid_set_.insert(v).second) known_valid_.push_back(v);
  }

  if (config_.propagate) {
    propagate(rp.invalid_end, rp);
    if (unresolved_.count(current_->leaf))
      throw Error("propagation failed to resolve the searched leaf (internal error)");
  } else {
    resolve_leaf(current_->leaf, rp);
  }
  update_priorities(current_->new_valid);
}

void Engine::resolve_leaf(const VertexId& leaf, const RegressionPoint& rp) {
  results_.emplace(leaf, rp);
  unresolved_.erase(leaf);
  emitted_leaves_.push_back(leaf);
  emit_outbox_.push_back({leaf, rp});
}

std::vector<VertexId> Engine::propagate(const VertexId& v, const RegressionPoint& rp) {
  std::vector<VertexId> resolved;
  std::size_t start = graph_.index_of(v);
  if (graph_.is_tombstoned_index(start)) return resolved;

  // Iterative post-order walk in successor-list order.
  std::vector<bool> visited(graph_.vertex_count(), false);
  std::vector<std::pair<std::size_t, std::size_t>> stack;  // (vertex, next child offset)
  visited[start] = true;
  stack.emplace_back(start, 0);
  while (!stack.empty()) {
    auto& [u, pos] = stack.back();
    const auto& succs = graph_.successor_indices(u);
    if (pos < succs.size()) {
      std::size_t s = succs[pos++];
      if (!visited[s] && !graph_.is_tombstoned_index(s)) {
        visited[s] = true;
        stack.emplace_back(s, 0);
      }
      continue;
    }
    const VertexId& id = graph_.vertex_at(u);
    if (unresolved_.count(id)) {
      resolve_leaf(id, rp);
      resolved.push_back(id);
    }
    graph_.tombstone_index(u);
    stack.pop_back();
  }
  return resolved;
}

void Engine::update_priorities(const std::vector<VertexId>& new_valid) {
  for (const auto& v : new_valid) {
    for (const auto& leaf : unresolved_) {
      std::size_t d = table_.dist(v, leaf);
      if (d < dist_.at(leaf)) {
        dist_[leaf] = d;
        start_[leaf] = v;
        heap_.push({d, input_pos_.at(leaf), leaf});
      }
    }
  }
}

std::map<VertexId, RegressionPoint> Engine::run() {
  for (;;) {
    EngineAction action = next_action();
    if (std::holds_alternative<EngineDone>(action)) break;
    if (auto* req = std::get_if<QueryRequest>(&action)) {
      bool verdict = oracle_.query(req->vertex);
      note_verdict(req->vertex, verdict);
    }
    // ResultEmit actions are already reflected in results_.
  }
  return results_;
}

std::map<VertexId, RegressionPoint> run_rpa(const Radag& g, const std::vector<VertexId>& leaves,
                                            ValidityOracle& oracle, const EngineConfig& config) {
  Engine engine(g, leaves, oracle, config);
  return engine.run();
}

}  // namespace rpa
