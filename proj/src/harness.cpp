#include "approxsmt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "approxsmt/errors.hpp"
#include "approxsmt/fixedpoint.hpp"
#include "approxsmt/real.hpp"
#include "approxsmt/rpfp.hpp"
#include "approxsmt/smtlib.hpp"

namespace approxsmt {

namespace {

std::vector<std::string> splitWords(const std::string& s)
{
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct KnownSolver
{
  const char* name;
  std::vector<std::string> command;
  std::vector<std::string> logics;
};

const std::vector<KnownSolver>& knownSolvers()
{
  static const std::vector<KnownSolver> solvers = {
      {"z3", {"z3", "-in", "-smt2"}, {"QF_FP", "QF_BV", "QF_NRA"}},
      {"cvc5", {"cvc5", "--lang", "smt2"}, {"QF_FP", "QF_BV", "QF_NRA"}},
      {"mathsat", {"mathsat"}, {"QF_FP", "QF_BV", "QF_NRA"}},
      {"bitwuzla", {"bitwuzla"}, {"QF_FP", "QF_BV"}},
  };
  return solvers;
}

std::string csvField(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s)
  {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::unique_ptr<Approximation> makeApproximation(std::string_view name)
{
  if (name == "rpfp") return std::make_unique<RpfpApproximation>();
  if (name == "bv") return std::make_unique<FixedPointApproximation>();
  if (name == "ra") return std::make_unique<RealApproximation>();
  if (name == "none") return nullptr;
  throw UsageError("unknown approximation '" + std::string(name) + "' (expected rpfp, bv, ra or none)");
}

std::unique_ptr<Backend> makeBackend(std::string_view name)
{
  if (name == "enum") return std::make_unique<EnumerationBackend>();

  std::string var = "APPROXSMT_SOLVER_";
  for (char c : name) var += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const char* override = std::getenv(var.c_str());

  for (const KnownSolver& s : knownSolvers())
  {
    if (name != s.name) continue;
    std::vector<std::string> cmd = override ? splitWords(override) : s.command;
    return std::make_unique<ProcessBackend>(s.name, cmd, s.logics);
  }
  if (override && !splitWords(override).empty())
    return std::make_unique<ProcessBackend>(std::string(name), splitWords(override),
                                            std::vector<std::string>{"QF_FP", "QF_BV", "QF_NRA"});
  throw UsageError("unknown backend '" + std::string(name) + "' (set " + var + " to its command line)");
}

Precision parsePrecision(std::string_view approx, std::string_view text)
{
  std::unique_ptr<Approximation> a = makeApproximation(approx);
  if (!a) throw UsageError("--approx none has no precision");
  std::string s(text);
  Precision p;
  try
  {
    std::size_t used = 0;
    if (approx == "rpfp")
    {
      p = Precision::scalar(std::stoi(s, &used));
      if (used != s.size()) throw Error("");
    }
    else if (approx == "bv")
    {
      std::size_t comma = s.find(',');
      if (comma == std::string::npos) throw Error("");
      std::string f = s.substr(comma + 1);
      int i = std::stoi(s.substr(0, comma), &used);
      if (used != comma) throw Error("");
      p = Precision::pair(i, std::stoi(f, &used));
      if (used != f.size()) throw Error("");
    }
    else if (s == "bot")
      p = Precision::bottom();
    else if (s == "top")
      p = Precision::top();
    else
      throw Error("");
  }
  catch (const std::exception&)
  {
    throw UsageError("malformed precision '" + s + "' for " + std::string(approx));
  }
  if (!a->order().contains(p)) throw UsageError("precision " + s + " is outside the range of " + std::string(approx));
  return p;
}

Formula readFormulaFile(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parseScript(text.str());
}

RunRecord runFile(const std::filesystem::path& path, const RunConfig& config)
{
  RunRecord r;
  r.file = path.string();
  try
  {
    Formula f = readFormulaFile(path);
    r.vars = f.vars;
    std::unique_ptr<Approximation> approx = makeApproximation(config.approx);
    std::unique_ptr<Backend> backend = makeBackend(config.backend);
    SolveOutcome o;
    if (approx)
    {
      std::unique_ptr<Backend> fallback = makeBackend(config.fallback);
      o = solve(f, *approx, *backend, *fallback, config.limits);
    }
    else
      o = solveDirect(f, *backend, config.limits);
    r.verdict = o.verdict;
    r.reason = o.reason;
    r.stats = o.stats;
    r.model = std::move(o.model);
  }
  catch (const Error& e)
  {
    r.error = e.what();
  }
  return r;
}

std::vector<RunRecord> runBench(const std::filesystem::path& dir, const RunConfig& config, int jobs)
{
  if (!std::filesystem::is_directory(dir)) throw UsageError(dir.string() + " is not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir))
  {
    if (entry.is_regular_file() && entry.path().extension() == ".smt2") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<RunRecord> records(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < files.size(); i = next++) records[i] = runFile(files[i], config);
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  return records;
}

void writeCsv(std::ostream& out, std::vector<RunRecord> records)
{
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) { return a.file < b.file; });
  out << "file,verdict,iterations,max_precision_reached,fallback_used,time_total_ms,time_encode_ms,"
         "time_backend_ms,time_decode_ms,time_reconstruct_ms,time_refine_ms\n";
  out << std::fixed << std::setprecision(3);
  for (const RunRecord& r : records)
  {
    const PhaseTimes& t = r.stats.times;
    out << csvField(r.file) << ',' << (r.error ? "error" : toString(r.verdict)) << ',' << r.stats.iterations
        << ',' << (r.stats.maxPrecisionReached ? 1 : 0) << ',' << (r.stats.fallbackUsed ? 1 : 0) << ','
        << r.stats.totalMs << ',' << t.encodeMs << ',' << t.backendMs << ',' << t.decodeMs << ','
        << t.reconstructMs << ',' << t.refineMs << '\n';
  }
}

std::string encodeScript(const Formula& f, std::string_view approx, const Precision& p)
{
  std::unique_ptr<Approximation> a = makeApproximation(approx);
  // At the top the solver hands the formula itself to the fallback.
  if (!a || a->order().isTop(p)) return printScript(f);
  return printScript(a->encode(f, PrecisionMap::uniform(p)));
}

}  // namespace approxsmt
