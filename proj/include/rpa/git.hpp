#pragma once

#include <string>
#include <utility>
#include <vector>

#include "rpa/dag.hpp"

namespace rpa {

/// A git repository plus the refs bounding the extracted graph (defaults to
/// all branch heads when empty).
struct RepoHandle {
  std::string path;
  std::vector<std::string> scope;
};

/// Resolves a ref to a commit hash. Throws RefNotFound.
VertexId resolve_ref(const RepoHandle& repo, const std::string& ref);

/// Builds a Radag from the parent-listing plumbing over the scoped refs
/// (virtual root inserted for multi-root histories) and returns it together
/// with the extracted subgraph's sinks.
std::pair<Radag, std::vector<VertexId>> extract_commit_graph(const RepoHandle& repo);

/// True when `git status --porcelain` reports nothing.
bool worktree_clean(const RepoHandle& repo);

/// Detached checkout of v. Throws DirtyWorktree (unless force) or
/// UnknownCommit.
void checkout(const RepoHandle& repo, const VertexId& v, bool force = false);

/// HEAD as a branch name when on one, else as a commit hash; feed back to
/// checkout_ref() to restore the original state.
std::string current_head(const RepoHandle& repo);
void checkout_ref(const RepoHandle& repo, const std::string& ref);

}  // namespace rpa
