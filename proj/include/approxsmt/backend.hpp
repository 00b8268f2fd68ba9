#ifndef APPROXSMT_BACKEND_HPP
#define APPROXSMT_BACKEND_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "approxsmt/term.hpp"

namespace approxsmt {

enum class Verdict { Sat, Unsat, Unknown };

std::string_view toString(Verdict v);

struct BackendVerdict
{
  Verdict status = Verdict::Unknown;
  /// On sat: a value for every declared variable, keyed by variable label.
  Model model;
  /// Model text as printed by an external solver.
  std::string rawModel;
  /// Why the answer is unknown.
  std::string reason;
};

using Timeout = std::optional<std::chrono::milliseconds>;

class Backend
{
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual bool accepts(std::string_view logic) const = 0;
  /// Never throws for solver-side problems; those become unknown verdicts.
  virtual BackendVerdict checkSat(const Formula& f, Timeout timeout) = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 20;

/**
 * Exhaustive search over every declared variable, in declaration order and
 * increasing bit order, pruning as soon as an assertion is definitely false.
 * Real variables range over the finite values of a small FP format, so a
 * real search that finds nothing answers unknown rather than unsat.
 */
class EnumerationBackend : public Backend
{
 public:
  explicit EnumerationBackend(std::uint64_t budget = kDefaultEnumerationBudget, FpFormat realGrid = {3, 3});

  std::string name() const override { return "enum"; }
  bool accepts(std::string_view) const override { return true; }
  BackendVerdict checkSat(const Formula& f, Timeout timeout) override;

  /// Candidate values of a variable; throws SortTooLarge.
  std::vector<Value> domain(const Sort& s) const;

 private:
  std::uint64_t d_budget;
  FpFormat d_realGrid;
};

/** Drives an external solver through SMT-LIB text on stdin/stdout, one process per call. */
class ProcessBackend : public Backend
{
 public:
  ProcessBackend(std::string name, std::vector<std::string> command, std::vector<std::string> logics);

  std::string name() const override { return d_name; }
  bool accepts(std::string_view logic) const override;
  BackendVerdict checkSat(const Formula& f, Timeout timeout) override;

  const std::vector<std::string>& command() const { return d_command; }
  /// Script sent by the most recent checkSat call.
  const std::string& lastScript() const { return d_lastScript; }

 private:
  std::string d_name;
  std::vector<std::string> d_command;
  std::vector<std::string> d_logics;
  std::string d_lastScript;
};

/**
 * Reads a get-model response: either a list of define-fun forms (optionally
 * headed by "model") or a single define-fun. Bindings for names that are not
 * declared in `vars` are ignored. Throws ModelParseError.
 */
Model parseModel(std::string_view text, const std::vector<VarDecl>& vars);

/// Model in define-fun form over the declared variables, one binding per line.
std::string printModel(const Model& m, const std::vector<VarDecl>& vars);

/// A value of sort `s` used for variables the solver left out of its model.
Value defaultValue(const Sort& s);

}  // namespace approxsmt

#endif
