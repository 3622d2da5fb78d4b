#pragma once

#include <set>
#include <vector>

#include "rpa/dag.hpp"
#include "rpa/oracle.hpp"
#include "rpa/search.hpp"

namespace rpa {

/// Commits that precede bad (bad included) and do not precede any known-good
/// commit (the good commits themselves excluded).
std::set<VertexId> candidate_set(const Radag& g, const VertexId& bad,
                                 const std::set<VertexId>& goods);

/// Halving score of a candidate: min(x + 1, n - (x + 1)) where x counts the
/// kept commits strictly preceding c and n = |kept|. Both are taken within
/// the kept subgraph.
std::size_t bisect_score(const Radag& g, const VertexId& c, const std::set<VertexId>& kept);

/// Iterative bisection: repeatedly probe the highest-score candidate
/// (ties go to the lowest topological index), shrinking the candidate set,
/// until only the bad commit is left; the result pairs it with a valid
/// predecessor from the original graph. Under non-monotone validity a
/// predecessor can itself probe invalid; it then becomes the new bad and the
/// search resumes, so a regression predecessor of the original bad commit is
/// found whenever the root is valid.
RegressionPoint run_bisect(const Radag& g, const VertexId& bad, const std::set<VertexId>& goods,
                           ValidityOracle& oracle);

/// One bisect run per leaf, in input order, over a single shared oracle so no
/// commit is evaluated twice across the batch.
std::vector<std::pair<VertexId, RegressionPoint>> run_bisect_multi(
    const Radag& g, const std::vector<VertexId>& leaves, ValidityOracle& oracle);

}  // namespace rpa
