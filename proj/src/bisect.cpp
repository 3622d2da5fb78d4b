#include "rpa/bisect.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>

namespace rpa {

namespace {

// Ancestors of v, v included, as an index-keyed bitmap.
std::vector<bool> ancestors_inclusive(const Radag& g, std::size_t v) {
  std::vector<bool> in(g.vertex_count(), false);
  std::vector<std::size_t> stack{v};
  in[v] = true;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t p : g.predecessor_indices(u)) {
      if (in[p] || g.is_tombstoned_index(p)) continue;
      in[p] = true;
      stack.push_back(p);
    }
  }
  return in;
}

std::size_t popcount_words(const std::vector<std::uint64_t>& words) {
  std::size_t n = 0;
  for (std::uint64_t w : words) n += static_cast<std::size_t>(__builtin_popcountll(w));
  return n;
}

}  // namespace

std::set<VertexId> candidate_set(const Radag& g, const VertexId& bad,
                                 const std::set<VertexId>& goods) {
  std::vector<bool> kept = ancestors_inclusive(g, g.index_of(bad));
  for (const auto& good : goods) {
    std::vector<bool> drop = ancestors_inclusive(g, g.index_of(good));
    for (std::size_t i = 0; i < kept.size(); ++i)
      if (drop[i]) kept[i] = false;
  }
  std::set<VertexId> out;
  for (std::size_t i = 0; i < kept.size(); ++i)
    if (kept[i]) out.insert(g.vertex_at(i));
  if (!out.count(bad))
    throw EmptyCandidates("bad commit '" + bad +
                          "' is excluded by the good set; good/bad labeling is inconsistent");
  return out;
}

std::size_t bisect_score(const Radag& g, const VertexId& c, const std::set<VertexId>& kept) {
  // x = kept commits strictly preceding c. Any kept ancestor is reachable
  // through kept vertices only (a path through an excluded vertex would put
  // the ancestor below a good commit and exclude it too), so the walk can
  // prune at non-kept vertices.
  std::vector<bool> seen(g.vertex_count(), false);
  std::vector<std::size_t> stack{g.index_of(c)};
  seen[stack[0]] = true;
  std::size_t x = 0;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t p : g.predecessor_indices(u)) {
      if (seen[p]) continue;
      seen[p] = true;
      if (!kept.count(g.vertex_at(p))) continue;
      ++x;
      stack.push_back(p);
    }
  }
  std::size_t n = kept.size();
  return std::min(x + 1, n - (x + 1));
}

RegressionPoint run_bisect(const Radag& g, const VertexId& bad_in, const std::set<VertexId>& goods_in,
                           ValidityOracle& oracle) {
  VertexId bad = bad_in;
  std::set<VertexId> goods = goods_in;
  oracle.seed(bad, false);
  for (const auto& good : goods) oracle.seed(good, true);

  std::size_t n = g.vertex_count();

  // Positions in a deterministic Kahn order break score ties.
  std::vector<std::size_t> topo_pos(n, 0);
  std::vector<std::size_t> topo_order = g.topological_order();
  for (std::size_t i = 0; i < topo_order.size(); ++i) topo_pos[topo_order[i]] = i;

  // Commits preceding any good commit stay excluded for the whole run.
  std::vector<bool> excluded(n, false);
  auto exclude_good = [&](const VertexId& good) {
    std::vector<bool> drop = ancestors_inclusive(g, g.index_of(good));
    for (std::size_t i = 0; i < n; ++i)
      if (drop[i]) excluded[i] = true;
  };
  for (const auto& good : goods) exclude_good(good);

  for (;;) {
    bool bad_excluded = excluded[g.index_of(bad)];
    if (bad_excluded && bad == bad_in)
      throw EmptyCandidates("bad commit '" + bad +
                            "' is excluded by the good set; good/bad labeling is inconsistent");

    std::vector<std::size_t> kept;  // in topological order
    if (!bad_excluded) {
      std::vector<bool> kept_map = ancestors_inclusive(g, g.index_of(bad));
      for (std::size_t i : topo_order)
        if (kept_map[i] && !excluded[i]) kept.push_back(i);
    }

    if (kept.size() <= 1) {
      // The halving has pinned bad down (or validity turned out non-monotone
      // and every remaining ancestor precedes a good commit). Pair bad with
      // a valid predecessor from the original graph; a predecessor that
      // probes invalid becomes the new bad, the same rule the main loop
      // applies to its probes.
      std::vector<VertexId> preds = g.predecessors(bad);
      if (preds.empty())
        throw NoValidPredecessor("'" + bad +
                                 "' has no predecessors; the rooted-valid assumption is violated");
      const VertexId* cached_invalid = nullptr;
      std::optional<VertexId> next_bad;
      for (const auto& p : preds) {
        auto cached = oracle.peek(p);
        if (cached && *cached) return {p, bad};
        if (cached && !cached_invalid) cached_invalid = &p;
      }
      for (const auto& p : preds) {
        if (oracle.cached(p)) continue;
        if (oracle.query(p)) return {p, bad};
        next_bad = p;
        break;
      }
      bad = next_bad ? *next_bad : *cached_invalid;
      continue;
    }

    // Kept-ancestor counts for every candidate in one topological sweep,
    // one bit per kept vertex.
    std::vector<std::size_t> rank(n, SIZE_MAX);
    for (std::size_t r = 0; r < kept.size(); ++r) rank[kept[r]] = r;
    std::size_t words = (kept.size() + 63) / 64;
    std::vector<std::vector<std::uint64_t>> anc(kept.size(),
                                                std::vector<std::uint64_t>(words, 0));
    std::size_t best_index = 0;
    std::size_t best_score = 0;
    bool have_best = false;
    for (std::size_t r = 0; r < kept.size(); ++r) {
      auto& bits = anc[r];
      for (std::size_t p : g.predecessor_indices(kept[r])) {
        std::size_t pr = rank[p];
        if (pr == SIZE_MAX) continue;
        for (std::size_t w = 0; w < words; ++w) bits[w] |= anc[pr][w];
        bits[pr / 64] |= std::uint64_t{1} << (pr % 64);
      }
      std::size_t x = popcount_words(bits);
      std::size_t score = std::min(x + 1, kept.size() - (x + 1));
      // kept is in topological order, so '>' keeps the lowest-position tie.
      if (!have_best || score > best_score) {
        have_best = true;
        best_score = score;
        best_index = kept[r];
      }
    }

    const VertexId& pick = g.vertex_at(best_index);
    if (oracle.query(pick)) {
      goods.insert(pick);
      exclude_good(pick);
    } else {
      bad = pick;
    }
  }
}

std::vector<std::pair<VertexId, RegressionPoint>> run_bisect_multi(
    const Radag& g, const std::vector<VertexId>& leaves, ValidityOracle& oracle) {
  oracle.seed(g.root(), true);
  for (const auto& l : leaves) oracle.seed(l, false);
  std::vector<std::pair<VertexId, RegressionPoint>> results;
  for (const auto& l : leaves)
    results.emplace_back(l, run_bisect(g, l, {g.root()}, oracle));
  return results;
}

}  // namespace rpa
