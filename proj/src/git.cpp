#include "rpa/git.hpp"

#include <sstream>

#include "rpa/errors.hpp"
#include "rpa/subprocess.hpp"

namespace rpa {

namespace {

ProcessResult git(const RepoHandle& repo, std::vector<std::string> args) {
  std::vector<std::string> argv{"git", "-C", repo.path};
  argv.insert(argv.end(), std::make_move_iterator(args.begin()),
              std::make_move_iterator(args.end()));
  return run_process(argv);
}

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

void ensure_repository(const RepoHandle& repo) {
  auto res = git(repo, {"rev-parse", "--git-dir"});
  if (res.exit_code != 0)
    throw NotARepository("'" + repo.path + "' is not a git repository: " + strip(res.err));
}

}  // namespace

VertexId resolve_ref(const RepoHandle& repo, const std::string& ref) {
  ensure_repository(repo);
  auto res = git(repo, {"rev-parse", "--verify", ref + "^{commit}"});
  if (res.exit_code != 0)
    throw RefNotFound("cannot resolve '" + ref + "': " + strip(res.err));
  return strip(res.out);
}

std::pair<Radag, std::vector<VertexId>> extract_commit_graph(const RepoHandle& repo) {
  ensure_repository(repo);

  std::vector<std::string> scope = repo.scope;
  if (scope.empty()) {
    auto heads = git(repo, {"for-each-ref", "--format=%(objectname)", "refs/heads"});
    if (heads.exit_code != 0)
      throw Error("cannot list branch heads: " + strip(heads.err));
    std::istringstream lines(heads.out);
    std::string line;
    while (std::getline(lines, line))
      if (!strip(line).empty()) scope.push_back(strip(line));
    if (scope.empty()) throw RefNotFound("repository has no branches");
  }

  std::vector<std::string> args{"rev-list", "--parents"};
  for (const auto& ref : scope) args.push_back(ref);
  auto res = git(repo, args);
  if (res.exit_code != 0)
    throw RefNotFound("rev-list over the scope failed: " + strip(res.err));

  // One line per commit: <hash> <parent-hash>...
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<VertexId> standalone;
  std::istringstream lines(res.out);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (strip(line).empty()) continue;
    std::istringstream tokens(line);
    std::string child, parent;
    if (!(tokens >> child))
      throw ParseError("unparseable parent listing: '" + line + "'", line_number);
    bool any_parent = false;
    while (tokens >> parent) {
      edges.emplace_back(parent, child);
      any_parent = true;
    }
    if (!any_parent) standalone.push_back(child);
  }
  if (edges.empty() && standalone.empty())
    throw ParseError("parent listing is empty", line_number);

  Radag graph = Radag::from_edges(edges, standalone);
  std::vector<VertexId> sinks = graph.leaves();
  return {std::move(graph), std::move(sinks)};
}

bool worktree_clean(const RepoHandle& repo) {
  ensure_repository(repo);
  auto res = git(repo, {"status", "--porcelain"});
  if (res.exit_code != 0) throw Error("git status failed: " + strip(res.err));
  return strip(res.out).empty();
}

void checkout(const RepoHandle& repo, const VertexId& v, bool force) {
  if (!force && !worktree_clean(repo))
    throw DirtyWorktree("worktree at '" + repo.path + "' has local changes");
  std::vector<std::string> args{"checkout", "--detach"};
  if (force) args.push_back("--force");
  args.push_back(v);
  auto res = git(repo, args);
  if (res.exit_code != 0) {
    auto probe = git(repo, {"cat-file", "-e", v + "^{commit}"});
    if (probe.exit_code != 0)
      throw UnknownCommit("'" + v + "' is not a commit of this repository");
    throw CheckoutFailure("checkout of '" + v + "' failed: " + strip(res.err));
  }
}

std::string current_head(const RepoHandle& repo) {
  auto branch = git(repo, {"symbolic-ref", "--short", "-q", "HEAD"});
  if (branch.exit_code == 0 && !strip(branch.out).empty()) return strip(branch.out);
  auto hash = git(repo, {"rev-parse", "HEAD"});
  if (hash.exit_code != 0) throw Error("cannot determine HEAD: " + strip(hash.err));
  return strip(hash.out);
}

void checkout_ref(const RepoHandle& repo, const std::string& ref) {
  auto res = git(repo, {"checkout", ref});
  if (res.exit_code != 0)
    throw CheckoutFailure("cannot restore '" + ref + "': " + strip(res.err));
}

}  // namespace rpa
