#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rpa {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// ---- graph construction / lookup ----------------------------------------

class CycleDetected : public Error {
 public:
  CycleDetected(const std::string& what, std::vector<std::string> cycle)
      : Error(what), cycle_(std::move(cycle)) {}
  /// One offending cycle, listed vertex by vertex (first == last).
  const std::vector<std::string>& cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class EmptyGraph : public Error {
 public:
  using Error::Error;
};

class UnknownVertex : public Error {
 public:
  using Error::Error;
};

class Unreachable : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line_number)
      : Error(what + " (line " + std::to_string(line_number) + ")"),
        line_number_(line_number) {}
  std::size_t line_number() const { return line_number_; }

 private:
  std::size_t line_number_ = 0;
};

// ---- oracle ---------------------------------------------------------------

class OracleFailure : public Error {
 public:
  using Error::Error;
};

class ConflictingSeed : public OracleFailure {
 public:
  using OracleFailure::OracleFailure;
};

/// Test command exceeded its time budget.
class CommandTimeout : public OracleFailure {
 public:
  CommandTimeout(const std::string& what, std::string vertex)
      : OracleFailure(what), vertex_(std::move(vertex)) {}
  const std::string& vertex() const { return vertex_; }

 private:
  std::string vertex_;
};

/// Test command exited 125: "cannot decide". The run aborts rather than guess.
class CommandAbort : public OracleFailure {
 public:
  CommandAbort(const std::string& what, std::string vertex)
      : OracleFailure(what), vertex_(std::move(vertex)) {}
  const std::string& vertex() const { return vertex_; }

 private:
  std::string vertex_;
};

class CheckoutFailure : public OracleFailure {
 public:
  using OracleFailure::OracleFailure;
};

/// Raised when an oracle without a pull source is queried for an uncached
/// vertex; the verdict has to be supplied externally first.
class AwaitingAnswer : public OracleFailure {
 public:
  using OracleFailure::OracleFailure;
};

// ---- search / engine -------------------------------------------------------

/// A probe contradicted a contract the caller vouched for (for example the
/// first path vertex testing invalid). The run stops instead of continuing
/// with inconsistent state.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class LeafNotSink : public Error {
 public:
  using Error::Error;
};

class LeafNotInvalid : public Error {
 public:
  using Error::Error;
};

class UnreachableLeaf : public Error {
 public:
  using Error::Error;
};

class UnexpectedAnswer : public Error {
 public:
  using Error::Error;
};

// ---- bisect ----------------------------------------------------------------

class EmptyCandidates : public Error {
 public:
  using Error::Error;
};

class NoValidPredecessor : public Error {
 public:
  using Error::Error;
};

// ---- repository adapter ------------------------------------------------------

class NotARepository : public Error {
 public:
  using Error::Error;
};

class RefNotFound : public Error {
 public:
  using Error::Error;
};

class DirtyWorktree : public Error {
 public:
  using Error::Error;
};

class UnknownCommit : public Error {
 public:
  using Error::Error;
};

// ---- benchmarking -------------------------------------------------------------

class DegenerateParams : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

}  // namespace rpa
