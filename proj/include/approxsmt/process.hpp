#ifndef APPROXSMT_PROCESS_HPP
#define APPROXSMT_PROCESS_HPP

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace approxsmt {

struct ProcessResult
{
  /// Exit code, or -signal when the child was killed by a signal.
  int status = 0;
  bool timedOut = false;
  std::string out;
  std::string err;
};

/**
 * Runs argv[0] (searched in PATH) with `input` on stdin and collects both
 * output streams. The child is killed once `timeout` expires.
 * Throws BackendFailure when the program cannot be started.
 */
ProcessResult runProcess(const std::vector<std::string>& argv, std::string_view input,
                         std::optional<std::chrono::milliseconds> timeout);

}  // namespace approxsmt

#endif
