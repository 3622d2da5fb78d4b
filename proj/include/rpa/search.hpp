#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "rpa/dag.hpp"
#include "rpa/oracle.hpp"

namespace rpa {

/// An edge (valid_end, invalid_end) whose tail is valid and head invalid.
struct RegressionPoint {
  VertexId valid_end;
  VertexId invalid_end;

  friend bool operator==(const RegressionPoint& a, const RegressionPoint& b) {
    return a.valid_end == b.valid_end && a.invalid_end == b.invalid_end;
  }
  friend bool operator!=(const RegressionPoint& a, const RegressionPoint& b) {
    return !(a == b);
  }
};

/// Vertex sequence along graph edges; as a search input the first element is
/// known valid and the last known invalid.
struct PathSeq {
  std::vector<VertexId> vertices;

  std::size_t size() const { return vertices.size(); }
  std::size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  const VertexId& operator[](std::size_t i) const { return vertices[i]; }
};

struct SearchOutcome {
  RegressionPoint point;
  std::vector<VertexId> new_valid;    // newly evaluated, in probe order
  std::vector<VertexId> new_invalid;
  std::size_t queries_performed = 0;  // non-cached evaluations only
};

/// Answers "is path[i] valid?". Implementations decide how verdicts are
/// obtained; the search cores only see indices.
using ProbeFn = std::function<bool(std::size_t)>;

/// Index pair (i, i+1) of the found regression point. The cores never probe
/// the last path vertex, and only the linear core probes the first.
struct IndexPoint {
  std::size_t valid_index;
  std::size_t invalid_index;
};

/// Backward scan from the end; finds the regression point nearest the last
/// vertex. Throws InvariantViolation if the first vertex probes invalid.
IndexPoint linear_search_core(std::size_t edge_count, const ProbeFn& probe);

/// Classic bisection with floor midpoints; at most ceil(log2(edge_count))
/// probes.
IndexPoint binary_search_core(std::size_t edge_count, const ProbeFn& probe);

/// Backward probing at exponentially growing gaps (offsets 2^k - 1 from the
/// end), recursing on the bracketing window; O(log^2 n) probes, biased
/// towards regression points near the end.
IndexPoint multiplying_search_core(std::size_t edge_count, const ProbeFn& probe);

/// Oracle-backed wrappers over the cores; cached verdicts are reused without
/// counting as queries.
SearchOutcome linear_search(const PathSeq& path, ValidityOracle& oracle);
SearchOutcome binary_search(const PathSeq& path, ValidityOracle& oracle);
SearchOutcome multiplying_search(const PathSeq& path, ValidityOracle& oracle);

enum class Strategy { linear, binary, multiplying };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

IndexPoint run_search_core(Strategy s, std::size_t edge_count, const ProbeFn& probe);
SearchOutcome run_search(Strategy s, const PathSeq& path, ValidityOracle& oracle);

}  // namespace rpa
