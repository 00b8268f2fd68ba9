// SMT-LIB 2 reader and writer for the QF_FP / QF_BV / QF_NRA subset.

#ifndef APPROXSMT_SMTLIB_HPP
#define APPROXSMT_SMTLIB_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "approxsmt/term.hpp"

namespace approxsmt {

struct SExpr
{
  bool isList = false;
  std::string atom;
  std::vector<SExpr> items;
  /// Byte offset of the expression in the source text.
  std::size_t offset = 0;

  bool isAtom(std::string_view s) const { return !isList && atom == s; }
  std::string toString() const;
};

/// Splits `text` into top-level s-expressions. Throws ParseError.
std::vector<SExpr> readSExprs(std::string_view text);

/// Parses a sort expression such as "(_ FloatingPoint 8 24)" or "Float32".
Sort parseSort(const SExpr& e);

/**
 * Parses a constant of sort `expected` as printed in models: fp triples,
 * special FP values, #b/#x bit-vectors, (_ bvN w), real numerals, decimals,
 * negations and quotients, Booleans, rounding-mode names.
 * Throws ParseError when the expression is not such a constant.
 */
Value parseConstant(const SExpr& e, const Sort& expected);

/**
 * Reads a script. Assertions are labeled in preorder (see labelFormula);
 * define-fun becomes a declaration plus an asserted equality.
 * Throws UnsupportedConstruct, SortMismatch or ParseError.
 */
Formula parseScript(std::string_view text);

std::string printTerm(const Term& t);

struct PrintOptions
{
  bool produceModels = false;
  /// Emit (get-model) after (check-sat) when there is something to model.
  bool getModel = true;
};

/// declare-fun for every variable, one assert per tree, then check-sat.
std::string printScript(const Formula& f, const PrintOptions& opts = {});

}  // namespace approxsmt

#endif
