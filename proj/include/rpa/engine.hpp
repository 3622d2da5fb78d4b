#pragma once

#include <deque>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <variant>
#include <vector>

#include "rpa/dag.hpp"
#include "rpa/oracle.hpp"
#include "rpa/search.hpp"

namespace rpa {

struct EngineConfig {
  Strategy strategy = Strategy::multiplying;
  bool propagate = true;
};

/// The engine needs this vertex's verdict next.
struct QueryRequest {
  VertexId vertex;
};

/// A leaf has been assigned its regression predecessor.
struct ResultEmit {
  VertexId leaf;
  RegressionPoint point;
};

struct EngineDone {};

using EngineAction = std::variant<QueryRequest, ResultEmit, EngineDone>;

/// Finds a regression predecessor for every invalid leaf while minimizing
/// oracle evaluations: leaves are scheduled by shortest known-valid-to-leaf
/// distance, each dequeued leaf is searched along that shortest path with the
/// configured strategy, found points are optionally propagated to every
/// still-unprocessed leaf reachable from their invalid end (tombstoning that
/// region), and newly valid vertices shorten the remaining leaves' paths.
///
/// The engine is a pull-based state machine: next_action() yields the next
/// verdict request or result, submit_answer() feeds verdicts in. run() drives
/// the same machine internally against the oracle's own source, so batch and
/// stepped executions are identical by construction.
///
/// Single-threaded; may be moved between threads but never shared mutably.
class Engine {
 public:
  /// Seeds the oracle with root=valid and each leaf=invalid (trusted, not
  /// queried) and computes the per-leaf distance table. The graph is copied;
  /// propagation tombstones only the engine's copy.
  Engine(Radag graph, const std::vector<VertexId>& leaves, ValidityOracle& oracle,
         EngineConfig config);

  // The distance table points into the engine's own graph copy.
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Next verdict request, next result, or EngineDone. Repeated calls without
  /// submit_answer return the same QueryRequest; each ResultEmit is returned
  /// once.
  EngineAction next_action();

  /// Answers the pending QueryRequest. The verdict is cached, counted and
  /// logged exactly like a source-pulled one.
  void submit_answer(const VertexId& v, bool verdict);

  /// Drives next_action/submit_answer to completion, pulling verdicts from
  /// the oracle's source. Returns the full result map.
  std::map<VertexId, RegressionPoint> run();

  /// Assigns rp to every unprocessed leaf reachable from v (v included) and
  /// tombstones the reachable region, each vertex visited once. Returns the
  /// resolved leaves in traversal (post-)order. Idempotent on tombstoned
  /// regions.
  std::vector<VertexId> propagate(const VertexId& v, const RegressionPoint& rp);

  /// Re-keys the leaf queue: a leaf whose distance from some newly valid
  /// vertex beats its current priority gets that vertex as its new start.
  void update_priorities(const std::vector<VertexId>& new_valid);

  // ---- observation ----
  std::size_t dist_of(const VertexId& leaf) const;
  const VertexId& start_of(const VertexId& leaf) const;
  const std::vector<VertexId>& known_valid() const { return known_valid_; }
  const std::map<VertexId, RegressionPoint>& results() const { return results_; }
  const std::vector<std::pair<VertexId, bool>>& query_log() const { return query_log_; }
  const Radag& graph() const { return graph_; }
  const DistanceTable& table() const { return table_; }
  const std::vector<VertexId>& input_leaves() const { return input_leaves_; }
  /// Leaves resolved so far, in emission order.
  const std::vector<VertexId>& emitted_leaves() const { return emitted_leaves_; }

 private:
  struct CurrentSearch {
    VertexId leaf;
    PathSeq path;
    std::optional<VertexId> pending;
    std::vector<VertexId> new_valid;
    std::vector<VertexId> new_invalid;
  };

  struct QueueEntry {
    std::size_t dist;
    std::size_t input_pos;
    VertexId leaf;
    bool operator>(const QueueEntry& o) const {
      if (dist != o.dist) return dist > o.dist;
      return input_pos > o.input_pos;
    }
  };

  void note_verdict(const VertexId& v, bool verdict);
  void finalize_iteration(const IndexPoint& point);
  void resolve_leaf(const VertexId& leaf, const RegressionPoint& rp);
  std::optional<VertexId> pop_next_leaf();

  Radag graph_;
  ValidityOracle& oracle_;
  EngineConfig config_;
  std::vector<VertexId> input_leaves_;
  std::map<VertexId, std::size_t> input_pos_;
  DistanceTable table_;

  std::map<VertexId, std::size_t> dist_;
  std::map<VertexId, VertexId> start_;
  std::set<VertexId> unresolved_;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> heap_;

  std::vector<VertexId> known_valid_;
  std::set<VertexId> known_valid_set_;
  std::map<VertexId, RegressionPoint> results_;
  std::vector<std::pair<VertexId, bool>> query_log_;
  std::deque<ResultEmit> emit_outbox_;
  std::vector<VertexId> emitted_leaves_;
  std::optional<CurrentSearch> current_;
  bool done_ = false;
};

/// Batch entry point over Engine.
std::map<VertexId, RegressionPoint> run_rpa(const Radag& g, const std::vector<VertexId>& leaves,
                                            ValidityOracle& oracle, const EngineConfig& config);

}  // namespace rpa
