#include "rpa/oracle.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "rpa/subprocess.hpp"

namespace rpa {

ValidityOracle ValidityOracle::recorded(std::map<VertexId, bool> table) {
  ValidityOracle o(Source::recorded);
  o.table_ = std::move(table);
  return o;
}

ValidityOracle ValidityOracle::command(CommandSpec spec) {
  if (spec.test_command.empty())
    throw Error("command oracle needs a non-empty test command");
  if (spec.timeout_seconds <= 0)
    throw Error("command oracle timeout must be positive");
  ValidityOracle o(Source::command);
  o.command_ = std::move(spec);
  return o;
}

ValidityOracle ValidityOracle::interactive(std::istream& in, std::ostream& out) {
  ValidityOracle o(Source::interactive);
  o.prompt_in_ = &in;
  o.prompt_out_ = &out;
  return o;
}

ValidityOracle ValidityOracle::external() { return ValidityOracle(Source::external); }

std::optional<bool> ValidityOracle::peek(const VertexId& v) const {
  auto it = cache_.find(v);
  if (it == cache_.end()) return std::nullopt;
  return it->second;
}

bool ValidityOracle::query(const VertexId& v) {
  if (auto hit = peek(v)) {
    log_.push_back({v, *hit, true});
    return *hit;
  }
  bool verdict = pull_from_source(v);
  cache_.emplace(v, verdict);
  ++distinct_queries_;
  log_.push_back({v, verdict, false});
  return verdict;
}

void ValidityOracle::record(const VertexId& v, bool verdict) {
  if (cached(v))
    throw ConflictingSeed("verdict for '" + v + "' is already cached; the cache is authoritative");
  cache_.emplace(v, verdict);
  ++distinct_queries_;
  log_.push_back({v, verdict, false});
}

void ValidityOracle::seed(const VertexId& v, bool verdict) {
  auto it = cache_.find(v);
  if (it != cache_.end()) {
    if (it->second != verdict)
      throw ConflictingSeed("seed for '" + v + "' conflicts with its cached verdict");
    return;
  }
  cache_.emplace(v, verdict);
}

void ValidityOracle::seed(const std::map<VertexId, bool>& verdicts) {
  for (const auto& [v, verdict] : verdicts) seed(v, verdict);
}

bool ValidityOracle::pull_from_source(const VertexId& v) {
  switch (source_) {
    case Source::recorded: {
      auto it = table_.find(v);
      if (it == table_.end())
        throw UnknownVertex("recorded oracle has no verdict for '" + v + "'");
      return it->second;
    }
    case Source::command: {
      command_.checkout(v);
      ProcessOptions opts;
      opts.workdir = command_.workdir;
      opts.timeout_seconds = command_.timeout_seconds;
      opts.capture_stdout = false;  // test output passes through
      opts.capture_stderr = false;
      ProcessResult res = run_process(command_.test_command, opts);
      if (res.timed_out)
        throw CommandTimeout("test command timed out on '" + v + "'", v);
      if (res.exit_code == 0) return true;
      if (res.exit_code == 125 || res.exit_code > 127)
        throw CommandAbort("test command cannot decide '" + v + "' (exit " +
                               std::to_string(res.exit_code) + ")",
                           v);
      return false;
    }
    case Source::interactive: {
      for (;;) {
        *prompt_out_ << v << "? [valid/invalid] " << std::flush;
        std::string token;
        if (!(*prompt_in_ >> token))
          throw OracleFailure("interactive oracle: input ended before a verdict for '" + v + "'");
        if (token == "valid" || token == "good") return true;
        if (token == "invalid" || token == "bad") return false;
        *prompt_out_ << "unrecognized answer '" << token << "'\n";
      }
    }
    case Source::external:
      throw AwaitingAnswer("no cached verdict for '" + v +
                           "'; supply one with record() first");
  }
  throw OracleFailure("unreachable oracle source");
}

// ---- label file -----------------------------------------------------------

std::map<VertexId, bool> parse_labels(std::istream& in) {
  std::map<VertexId, bool> labels;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream tokens(line);
    std::string id, word;
    if (!(tokens >> id) || id[0] == '#') continue;
    if (!(tokens >> word))
      throw ParseError("missing verdict for '" + id + "'", line_number);
    bool verdict;
    if (word == "valid") verdict = true;
    else if (word == "invalid") verdict = false;
    else throw ParseError("verdict must be 'valid' or 'invalid', got '" + word + "'", line_number);
    auto [it, inserted] = labels.emplace(id, verdict);
    if (!inserted && it->second != verdict)
      throw ParseError("conflicting verdicts for '" + id + "'", line_number);
  }
  return labels;
}

std::map<VertexId, bool> parse_labels_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open label file '" + path + "'");
  return parse_labels(in);
}

void serialize_labels(const std::map<VertexId, bool>& labels, std::ostream& out) {
  for (const auto& [v, verdict] : labels)
    out << v << ' ' << (verdict ? "valid" : "invalid") << '\n';
}

std::string serialize_labels(const std::map<VertexId, bool>& labels) {
  std::ostringstream out;
  serialize_labels(labels, out);
  return out.str();
}

}  // namespace rpa
