#include "approxsmt/solver.hpp"

#include <chrono>
#include <map>

#include "approxsmt/errors.hpp"
#include "approxsmt/eval.hpp"
#include "approxsmt/smtlib.hpp"

namespace approxsmt {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch
{
 public:
  explicit Stopwatch(double& sink) : d_sink(sink), d_start(Clock::now()) {}
  ~Stopwatch() { d_sink += std::chrono::duration<double, std::milli>(Clock::now() - d_start).count(); }

 private:
  double& d_sink;
  Clock::time_point d_start;
};

void fillMissing(const Formula& f, Model& m)
{
  for (const VarDecl& v : f.vars)
  {
    if (!m.contains(v.label())) m.set(v.label(), defaultValue(v.sort));
  }
}

/// Some assertion is definitely false under the model.
bool contradicts(const std::vector<Term>& assertions, const Model& m)
{
  for (const Term& a : assertions)
  {
    if (evalBool(a, m) == false) return true;
  }
  return false;
}

void callDirect(const Formula& f, Backend& backend, const Limits& limits, SolveOutcome& out)
{
  BackendVerdict v;
  {
    Stopwatch sw(out.stats.times.backendMs);
    v = backend.checkSat(f, limits.backendTimeout);
  }
  ++out.stats.iterations;
  out.verdict = v.status;
  out.reason = v.reason;
  if (v.status != Verdict::Sat) return;

  fillMissing(f, v.model);
  if (!satisfiesAll(f.assertions, v.model))
  {
    out.verdict = Verdict::Unknown;
    out.reason = backend.name() + " returned a model that does not satisfy the formula";
    return;
  }
  out.model = std::move(v.model);
}

}  // namespace

SolveOutcome solve(const Formula& f, const Approximation& approx, Backend& backend, Backend& fallback,
                   const Limits& limits)
{
  const Clock::time_point start = Clock::now();
  SolveOutcome out;
  auto finish = [&]() {
    out.stats.totalMs = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
  };
  if (f.assertions.empty())
  {
    out.verdict = Verdict::Sat;
    return finish();
  }

  const PrecisionOrder& order = approx.order();
  PrecisionMap p = approx.initialPrecision(f);
  auto runFallback = [&](const std::string& why) {
    out.stats.fallbackUsed = true;
    out.stats.maxPrecisionReached = true;
    callDirect(f, fallback, limits, out);
    if (out.verdict == Verdict::Unknown && out.reason.empty()) out.reason = why;
    return finish();
  };

  std::map<std::string, BackendVerdict> answered;
  while (true)
  {
    if (out.stats.iterations >= limits.maxIterations)
    {
      out.verdict = Verdict::Unknown;
      out.reason = "iteration limit reached";
      out.stats.maxPrecisionReached = p.allTop(order);
      return finish();
    }
    if (p.allTop(order)) return runFallback("maximal precision reached");

    out.stats.precisions.push_back(p.toString());
    Formula encoded;
    try
    {
      Stopwatch sw(out.stats.times.encodeMs);
      encoded = approx.encode(f, p);
    }
    catch (const UnsupportedValue& e)
    {
      return runFallback(e.what());
    }
    catch (const UnsupportedOp& e)
    {
      return runFallback(e.what());
    }
    if (!backend.accepts(encoded.logic)) return runFallback(backend.name() + " does not accept " + encoded.logic);

    // Distinct maps can encode to the same formula (formats clamp at the
    // input width); the backend has already answered those.
    BackendVerdict v;
    std::string key = printScript(encoded);
    if (auto it = answered.find(key); it != answered.end())
      v = it->second;
    else
    {
      Stopwatch sw(out.stats.times.backendMs);
      v = backend.checkSat(encoded, limits.backendTimeout);
      answered.emplace(std::move(key), v);
    }
    ++out.stats.iterations;

    PrecisionMap next;
    if (v.status == Verdict::Sat)
    {
      if (contradicts(encoded.assertions, v.model))
      {
        out.verdict = Verdict::Unknown;
        out.reason = backend.name() + " returned a model that does not satisfy the encoded formula";
        return finish();
      }
      Model decoded, candidate;
      try
      {
        Stopwatch sw(out.stats.times.decodeMs);
        decoded = approx.decode(f, encoded, v.model, p);
      }
      catch (const RangeError& e)
      {
        return runFallback(e.what());
      }
      {
        Stopwatch sw(out.stats.times.reconstructMs);
        candidate = approx.reconstruct(f, decoded);
        fillMissing(f, candidate);
      }
      if (satisfiesAll(f.assertions, candidate))
      {
        out.verdict = Verdict::Sat;
        out.model = std::move(candidate);
        out.stats.maxPrecisionReached = p.allTop(order);
        return finish();
      }
      Stopwatch sw(out.stats.times.refineMs);
      next = approx.refineWithModel(f, decoded, candidate, p);
    }
    else
    {
      // No model to learn from; an unknown answer is treated like unsat.
      Stopwatch sw(out.stats.times.refineMs);
      next = approx.refineWithProof(f, {}, p);
    }
    if (!next.strictlyAbove(p, order)) next = p.raisedToTop(order);
    p = std::move(next);
  }
}

SolveOutcome solveDirect(const Formula& f, Backend& backend, const Limits& limits)
{
  const Clock::time_point start = Clock::now();
  SolveOutcome out;
  if (f.assertions.empty())
    out.verdict = Verdict::Sat;
  else
    callDirect(f, backend, limits, out);
  out.stats.totalMs = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return out;
}

}  // namespace approxsmt
