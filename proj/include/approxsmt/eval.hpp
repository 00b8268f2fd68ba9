#ifndef APPROXSMT_EVAL_HPP
#define APPROXSMT_EVAL_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>

#include "approxsmt/term.hpp"
#include "approxsmt/value.hpp"

namespace approxsmt {

/**
 * Memo table for FP operations over narrow formats. The exact-rational
 * path costs microseconds per call; enumeration revisits the same operand
 * pairs millions of times.
 */
class FpOpCache
{
 public:
  FpOpCache();
  ~FpOpCache();
  FpOpCache(const FpOpCache&) = delete;
  FpOpCache& operator=(const FpOpCache&) = delete;

  FpLiteral eval(FpOp op, RoundingMode rm, std::span<const FpLiteral> args, std::optional<FpFormat> target);
  std::size_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> d_impl;
};

/**
 * Applies a non-leaf symbol to constant arguments. Returns nullopt only for
 * real division by zero, which has no fixed value.
 */
std::optional<Value> applyOp(const Symbol& sym, std::span<const Value> args, FpOpCache* cache = nullptr);

/// Resolves a variable occurrence; returns nullptr for unassigned variables.
using VarLookup = std::function<const Value*(const Node& var)>;

/**
 * Three-valued evaluation: nullopt means undefined. `and`/`or` short-circuit
 * on a decisive child even when other children are undefined.
 */
std::optional<Value> evaluate(const Term& t, const VarLookup& lookup, FpOpCache* cache = nullptr);
std::optional<Value> evaluate(const Term& t, const Model& model, FpOpCache* cache = nullptr);

/// Boolean layer of evaluate(); Undefined iff a needed leaf is missing.
std::optional<bool> evalBool(const Term& t, const Model& model);

/// Value of every node of `terms` under the variable assignment, keyed by label.
Model evaluateAll(const std::vector<Term>& terms, const Model& vars, FpOpCache* cache = nullptr);

/// evalBool is true for every assertion.
bool satisfiesAll(const std::vector<Term>& assertions, const Model& model);

}  // namespace approxsmt

#endif
