// The approximation loop: encode at the current precision, ask the backend,
// decode and reconstruct on sat, refine on failure, and hand the original
// formula to the fallback solver once every precision is at top.

#ifndef APPROXSMT_SOLVER_HPP
#define APPROXSMT_SOLVER_HPP

#include <string>
#include <vector>

#include "approxsmt/approximation.hpp"
#include "approxsmt/backend.hpp"

namespace approxsmt {

struct Limits
{
  /// Backend calls allowed, the fallback call included.
  int maxIterations = 100;
  /// Per backend call.
  Timeout backendTimeout;
};

struct PhaseTimes
{
  double encodeMs = 0;
  double backendMs = 0;
  double decodeMs = 0;
  double reconstructMs = 0;
  double refineMs = 0;

  double sum() const { return encodeMs + backendMs + decodeMs + reconstructMs + refineMs; }
};

struct SolveStats
{
  /// Backend calls made, the fallback call included.
  int iterations = 0;
  bool fallbackUsed = false;
  /// The last precision map was all-top (always true when the fallback ran).
  bool maxPrecisionReached = false;
  /// Precision map used by each approximate round, in order.
  std::vector<std::string> precisions;
  PhaseTimes times;
  double totalMs = 0;
};

struct SolveOutcome
{
  Verdict verdict = Verdict::Unknown;
  /// On sat: a model of the original formula over its variables.
  Model model;
  std::string reason;
  SolveStats stats;
};

SolveOutcome solve(const Formula& f, const Approximation& approx, Backend& backend, Backend& fallback,
                   const Limits& limits = {});

/// Sends `f` to `backend` as is; sat models are re-checked against `f`.
SolveOutcome solveDirect(const Formula& f, Backend& backend, const Limits& limits = {});

}  // namespace approxsmt

#endif
