#include "rpa/search.hpp"

#include <cstdint>

namespace rpa {

IndexPoint linear_search_core(std::size_t edge_count, const ProbeFn& probe) {
  for (std::size_t i = edge_count; i-- > 0;) {
    if (probe(i)) return {i, i + 1};
  }
  throw InvariantViolation("first path vertex tested invalid; the path endpoint contract is broken");
}

IndexPoint binary_search_core(std::size_t edge_count, const ProbeFn& probe) {
  std::size_t lo = 0;
  std::size_t hi = edge_count;
  while (hi - lo > 1) {
    std::size_t mid = (lo + hi) / 2;
    if (probe(mid)) lo = mid;
    else hi = mid;
  }
  return {lo, hi};
}

IndexPoint multiplying_search_core(std::size_t edge_count, const ProbeFn& probe) {
  std::size_t first = 0;
  std::size_t last = edge_count;
  while (last - first > 1) {
    unsigned k = 1;
    bool narrowed = false;
    // Probe at offsets 2^k - 1 from the window's end until a valid vertex
    // brackets the window or the offsets leave it.
    while (((std::uint64_t{1} << k) - 1) < last - first) {
      std::size_t idx = last - ((std::size_t{1} << k) - 1);
      if (probe(idx)) {
        first = idx;
        last = last - ((std::size_t{1} << (k - 1)) - 1);
        narrowed = true;
        break;
      }
      ++k;
    }
    if (!narrowed) {
      // All probed offsets were invalid; keep the window start and cut the
      // end back to the last (invalid) probe.
      last = last - ((std::size_t{1} << (k - 1)) - 1);
    }
  }
  return {first, last};
}

namespace {

SearchOutcome run_with_oracle(Strategy s, const PathSeq& path, ValidityOracle& oracle) {
  if (path.size() < 2)
    throw InvariantViolation("search path needs at least two vertices");
  SearchOutcome outcome;
  ProbeFn probe = [&](std::size_t i) {
    const VertexId& v = path[i];
    bool was_cached = oracle.cached(v);
    bool verdict = oracle.query(v);
    if (!was_cached) {
      ++outcome.queries_performed;
      (verdict ? outcome.new_valid : outcome.new_invalid).push_back(v);
    }
    return verdict;
  };
  IndexPoint point = run_search_core(s, path.edge_count(), probe);
  outcome.point = {path[point.valid_index], path[point.invalid_index]};
  return outcome;
}

}  // namespace

SearchOutcome linear_search(const PathSeq& path, ValidityOracle& oracle) {
  return run_with_oracle(Strategy::linear, path, oracle);
}

SearchOutcome binary_search(const PathSeq& path, ValidityOracle& oracle) {
  return run_with_oracle(Strategy::binary, path, oracle);
}

SearchOutcome multiplying_search(const PathSeq& path, ValidityOracle& oracle) {
  return run_with_oracle(Strategy::multiplying, path, oracle);
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::linear: return "linear";
    case Strategy::binary: return "binary";
    case Strategy::multiplying: return "multiplying";
  }
  return "?";
}

Strategy strategy_from_name(const std::string& name) {
  if (name == "linear") return Strategy::linear;
  if (name == "binary") return Strategy::binary;
  if (name == "multiplying" || name == "mult") return Strategy::multiplying;
  throw Error("unknown strategy '" + name + "' (expected linear, binary or multiplying)");
}

IndexPoint run_search_core(Strategy s, std::size_t edge_count, const ProbeFn& probe) {
  switch (s) {
    case Strategy::linear: return linear_search_core(edge_count, probe);
    case Strategy::binary: return binary_search_core(edge_count, probe);
    case Strategy::multiplying: return multiplying_search_core(edge_count, probe);
  }
  throw Error("unreachable strategy");
}

SearchOutcome run_search(Strategy s, const PathSeq& path, ValidityOracle& oracle) {
  return run_with_oracle(s, path, oracle);
}

}  // namespace rpa
