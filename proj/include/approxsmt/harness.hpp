// Command-line front end and benchmark harness.

#ifndef APPROXSMT_HARNESS_HPP
#define APPROXSMT_HARNESS_HPP

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "approxsmt/solver.hpp"

namespace approxsmt {

/// "rpfp", "bv" or "ra"; nullptr for "none". Throws Error for other names.
std::unique_ptr<Approximation> makeApproximation(std::string_view name);

/**
 * "enum" is the built-in enumeration backend. Other names start an external
 * solver; the command line comes from APPROXSMT_SOLVER_<NAME> when set, else
 * from a built-in default for z3, cvc5, mathsat and bitwuzla.
 * Throws Error for names with neither.
 */
std::unique_ptr<Backend> makeBackend(std::string_view name);

/// Integer for rpfp, "i,f" for bv, "bot"/"top" for ra. Throws Error on malformed text.
Precision parsePrecision(std::string_view approx, std::string_view text);

struct RunConfig
{
  std::string approx = "rpfp";
  std::string backend = "enum";
  std::string fallback = "enum";
  Limits limits;
};

struct RunRecord
{
  std::string file;
  Verdict verdict = Verdict::Unknown;
  /// Set when the file could not be solved at all (unreadable, unsupported).
  std::optional<std::string> error;
  std::string reason;
  SolveStats stats;
  Model model;
  std::vector<VarDecl> vars;
};

Formula readFormulaFile(const std::filesystem::path& path);

/// Parse and solve one file; input errors end up in RunRecord::error.
RunRecord runFile(const std::filesystem::path& path, const RunConfig& config);

/// Every *.smt2 file below `dir`, sorted by path. `jobs` files are solved at a time.
std::vector<RunRecord> runBench(const std::filesystem::path& dir, const RunConfig& config, int jobs = 1);

void writeCsv(std::ostream& out, std::vector<RunRecord> records);

/// Encoded script for `approx` at a uniform precision; the input itself at the top precision.
std::string encodeScript(const Formula& f, std::string_view approx, const Precision& p);

/// Entry point of the approxsmt executable; returns the process exit status.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace approxsmt

#endif
