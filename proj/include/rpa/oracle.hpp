#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rpa/dag.hpp"
#include "rpa/errors.hpp"

namespace rpa {

/// How a commit is evaluated by the command source: check the commit out in
/// workdir, run test_command there, map the exit code to a verdict
/// (0 -> valid; 1-124, 126, 127 -> invalid; 125 -> abort the run).
struct CommandSpec {
  std::string workdir;
  std::function<void(const VertexId&)> checkout;  // throws CheckoutFailure
  std::vector<std::string> test_command;
  double timeout_seconds = 3600.0;
};

/// Source of valid/invalid verdicts with a write-once cache and distinct-
/// evaluation counting. Every verdict, however obtained, lands in the cache;
/// a cached vertex is never evaluated again.
class ValidityOracle {
 public:
  struct LogEntry {
    VertexId vertex;
    bool verdict;
    bool served_from_cache;
  };

  /// Answers from a fixed table; a probe outside the table is UnknownVertex.
  static ValidityOracle recorded(std::map<VertexId, bool> table);
  /// Answers by checking the commit out and running the test command.
  static ValidityOracle command(CommandSpec spec);
  /// Prompts on `out` and reads valid/invalid (good/bad) tokens from `in`.
  static ValidityOracle interactive(std::istream& in, std::ostream& out);
  /// No pull source: uncached queries throw AwaitingAnswer and the verdict
  /// must be supplied through record().
  static ValidityOracle external();

  ValidityOracle(const ValidityOracle&) = delete;
  ValidityOracle& operator=(const ValidityOracle&) = delete;
  ValidityOracle(ValidityOracle&&) = default;
  ValidityOracle& operator=(ValidityOracle&&) = default;

  /// Cached verdict if present (no counting, no logging).
  std::optional<bool> peek(const VertexId& v) const;
  bool cached(const VertexId& v) const { return peek(v).has_value(); }

  /// Cached verdict, or one pulled from the source (cached, counted, logged).
  bool query(const VertexId& v);

  /// Stores an externally obtained verdict: cached, counted and logged like
  /// any other evaluation. Re-recording a cached vertex is ConflictingSeed.
  void record(const VertexId& v, bool verdict);

  /// Inserts given verdicts without counting them as evaluations.
  void seed(const std::map<VertexId, bool>& verdicts);
  void seed(const VertexId& v, bool verdict);

  std::size_t distinct_queries() const { return distinct_queries_; }
  const std::vector<LogEntry>& log() const { return log_; }
  const std::map<VertexId, bool>& cache() const { return cache_; }

 private:
  enum class Source { recorded, command, interactive, external };

  explicit ValidityOracle(Source s) : source_(s) {}
  bool pull_from_source(const VertexId& v);

  Source source_;
  std::map<VertexId, bool> table_;
  CommandSpec command_;
  std::istream* prompt_in_ = nullptr;
  std::ostream* prompt_out_ = nullptr;

  std::map<VertexId, bool> cache_;
  std::size_t distinct_queries_ = 0;
  std::vector<LogEntry> log_;
};

// ---- validity label file -----------------------------------------------------
//
// UTF-8 text, one record per line: `<vertex-id> <valid|invalid>`.
// `#` begins a comment line; blank lines are ignored.

std::map<VertexId, bool> parse_labels(std::istream& in);
std::map<VertexId, bool> parse_labels_file(const std::string& path);
void serialize_labels(const std::map<VertexId, bool>& labels, std::ostream& out);
std::string serialize_labels(const std::map<VertexId, bool>& labels);

}  // namespace rpa
