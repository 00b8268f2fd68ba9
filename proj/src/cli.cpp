#include <chrono>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "approxsmt/errors.hpp"
#include "approxsmt/harness.hpp"

namespace approxsmt {

namespace {

constexpr int kUsageError = 1;
constexpr int kInternalError = 2;

struct SolveFlags
{
  std::string approx = "rpfp";
  std::string backend = "enum";
  std::string fallback;
  double timeoutSeconds = 0;
  int maxIters = 100;

  void attach(CLI::App* cmd)
  {
    cmd->add_option("--approx", approx, "Approximation: rpfp, bv, ra or none")
        ->check(CLI::IsMember({"rpfp", "bv", "ra", "none"}));
    cmd->add_option("--backend", backend, "Backend solver (enum, z3, cvc5, ...)");
    cmd->add_option("--fallback", fallback, "Solver for the original formula (defaults to the backend)");
    cmd->add_option("--timeout", timeoutSeconds, "Seconds per backend call, 0 for none")->check(CLI::NonNegativeNumber);
    cmd->add_option("--max-iters", maxIters, "Backend calls allowed")->check(CLI::PositiveNumber);
  }

  RunConfig config() const
  {
    RunConfig c;
    c.approx = approx;
    c.backend = backend;
    c.fallback = fallback.empty() ? backend : fallback;
    c.limits.maxIterations = maxIters;
    if (timeoutSeconds > 0)
      c.limits.backendTimeout = std::chrono::milliseconds(static_cast<long long>(timeoutSeconds * 1000));
    return c;
  }
};

void printStats(std::ostream& out, const RunRecord& r)
{
  const PhaseTimes& t = r.stats.times;
  out << "; iterations " << r.stats.iterations << ", fallback " << (r.stats.fallbackUsed ? "yes" : "no")
      << ", max precision " << (r.stats.maxPrecisionReached ? "yes" : "no") << '\n';
  for (std::size_t i = 0; i < r.stats.precisions.size(); ++i)
    out << "; round " << i + 1 << " precision " << r.stats.precisions[i] << '\n';
  out << "; time ms: total " << r.stats.totalMs << ", encode " << t.encodeMs << ", backend " << t.backendMs
      << ", decode " << t.decodeMs << ", reconstruct " << t.reconstructMs << ", refine " << t.refineMs << '\n';
  if (!r.reason.empty()) out << "; " << r.reason << '\n';
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Approximating SMT solver for floating-point arithmetic", "approxsmt"};
  app.require_subcommand(1);

  std::string file;
  SolveFlags solveFlags;
  bool stats = false;
  CLI::App* solveCmd = app.add_subcommand("solve", "Solve one SMT-LIB file");
  solveCmd->add_option("file", file, "Input .smt2 file")->required();
  solveFlags.attach(solveCmd);
  solveCmd->add_flag("--stats", stats, "Print iteration and timing statistics");

  std::string dir, csv;
  int jobs = 1;
  SolveFlags benchFlags;
  CLI::App* benchCmd = app.add_subcommand("bench", "Solve every .smt2 file in a directory");
  benchCmd->add_option("dir", dir, "Benchmark directory")->required();
  benchCmd->add_option("--csv", csv, "Output CSV file")->required();
  benchCmd->add_option("--jobs", jobs, "Files solved in parallel")->check(CLI::PositiveNumber);
  benchFlags.attach(benchCmd);

  std::string encodeFile, encodeApprox = "rpfp", precision;
  CLI::App* encodeCmd = app.add_subcommand("encode", "Print the encoding of a file at a given precision");
  encodeCmd->add_option("file", encodeFile, "Input .smt2 file")->required();
  encodeCmd->add_option("--approx", encodeApprox, "Approximation: rpfp, bv or ra")
      ->check(CLI::IsMember({"rpfp", "bv", "ra"}));
  encodeCmd->add_option("--precision", precision, "rpfp: 0-5, bv: i,f, ra: bot|top")->required();

  std::vector<const char*> argv{"approxsmt"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try
  {
    app.parse(static_cast<int>(argv.size()), argv.data());
  }
  catch (const CLI::ParseError& e)
  {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kUsageError;
  }

  try
  {
    if (*solveCmd)
    {
      RunConfig config = solveFlags.config();
      makeApproximation(config.approx);
      makeBackend(config.backend);
      makeBackend(config.fallback);
      RunRecord r = runFile(file, config);
      if (r.error)
      {
        err << "error: " << *r.error << '\n';
        return kInternalError;
      }
      out << toString(r.verdict) << '\n';
      if (r.verdict == Verdict::Sat) out << printModel(r.model, r.vars);
      if (stats) printStats(out, r);
      return 0;
    }
    if (*benchCmd)
    {
      RunConfig config = benchFlags.config();
      makeApproximation(config.approx);
      makeBackend(config.backend);
      makeBackend(config.fallback);
      std::vector<RunRecord> records = runBench(dir, config, jobs);
      std::ofstream csvOut(csv);
      if (!csvOut)
      {
        err << "error: cannot write " << csv << '\n';
        return kInternalError;
      }
      writeCsv(csvOut, records);
      if (!csvOut.flush())
      {
        err << "error: writing " << csv << " failed\n";
        return kInternalError;
      }
      return 0;
    }
    Precision p = parsePrecision(encodeApprox, precision);
    out << encodeScript(readFormulaFile(encodeFile), encodeApprox, p);
    return 0;
  }
  catch (const UsageError& e)
  {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  catch (const Error& e)
  {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  }
  catch (const std::exception& e)
  {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace approxsmt
