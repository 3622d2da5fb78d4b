#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rpa {

struct ProcessOptions {
  std::optional<std::string> workdir;
  /// Seconds; the whole process group is killed on expiry.
  std::optional<double> timeout_seconds;
  /// When set, this data is written to the child's stdin (then closed);
  /// otherwise stdin reads from /dev/null.
  std::optional<std::string> stdin_data;
  bool capture_stdout = true;  // false: inherit the parent's stream
  bool capture_stderr = true;
};

struct ProcessResult {
  int exit_code = -1;   // 128+signal when signal-terminated
  bool timed_out = false;
  std::string out;      // empty unless captured
  std::string err;
};

/// Runs argv[0] with the given arguments (PATH lookup). Throws rpa::Error
/// only when the process cannot be started at all.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const ProcessOptions& opts = {});

}  // namespace rpa
