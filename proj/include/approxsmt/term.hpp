// Labeled abstract syntax trees.
//
// Terms are immutable and shared. Each node carries a Label that links the
// nodes of an original formula with the nodes of its encodings: an encoded
// node reuses the label of the node it encodes, and nodes that an encoding
// introduces (casts, helper bit-vector operations) carry synthetic labels.

#ifndef APPROXSMT_TERM_HPP
#define APPROXSMT_TERM_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "approxsmt/sort.hpp"
#include "approxsmt/value.hpp"

namespace approxsmt {

enum class Op {
  Var,
  Const,
  // Core
  Not, And, Or, Implies, Xor, Eq,
  // Floating point
  FpAdd, FpSub, FpMul, FpDiv, FpFma, FpNeg, FpAbs, FpToFp,
  FpEq, FpLeq, FpLt, FpGeq, FpGt,
  FpIsNaN, FpIsInfinite, FpIsZero, FpIsNormal, FpIsSubnormal, FpIsNegative, FpIsPositive,
  // Bit-vectors
  BvAdd, BvSub, BvMul, BvNeg, BvSdiv, BvShl, BvAshr, BvXor, BvSignExtend, BvExtract,
  BvSle, BvSlt, BvSge, BvSgt,
  // Reals
  RealAdd, RealSub, RealMul, RealDiv, RealNeg, RealLeq, RealLt, RealGeq, RealGt,
};

enum class SymbolKind {
  Variable,
  FpOperation,
  FpPredicate,
  BvOperation,
  RealOperation,
  BooleanConnective,
  Equality,
  RoundingModeLiteral,
  FpLiteral,
  BvLiteral,
  RealLiteral,
  BoolLiteral,
};

struct Symbol
{
  Op op = Op::Const;
  /// Variable name, or the SMT-LIB operator name.
  std::string name;
  Sort sort;
  std::vector<Sort> argSorts;
  /// Set for literals only.
  std::optional<Value> value;
  /// (e,s) for to_fp, (k,0) for sign_extend, (hi,lo) for extract.
  std::array<int, 2> indices{0, 0};

  SymbolKind kind() const;
  bool isLiteral() const { return op == Op::Const; }
  bool isVariable() const { return op == Op::Var; }
};

struct Node;
using Term = std::shared_ptr<const Node>;

struct Node
{
  Symbol symbol;
  Label label;
  std::vector<Term> children;

  const Sort& sort() const { return symbol.sort; }
  Op op() const { return symbol.op; }
  bool isVariable() const { return symbol.isVariable(); }
  bool isLiteral() const { return symbol.isLiteral(); }
};

/// SMT-LIB name of an operator ("fp.add", "bvsge", "=").
std::string_view opName(Op op);

/// Variables live under a label derived from their name, shared by all occurrences.
Label variableLabel(std::string_view name);

Term mkVar(std::string name, Sort sort);
Term mkConst(Value v, Label label = {});
/**
 * Builds an application, inferring the result sort.
 * Throws SortMismatch on ill-sorted arguments or a wrong argument count.
 */
Term mkApp(Op op, std::vector<Term> children, Label label = {}, std::array<int, 2> indices = {0, 0});
/// Same symbol, new label and children (re-checked for sorts).
Term rebuild(const Node& node, Label label, std::vector<Term> children);

/// True for FP-sorted applications other than literals and variables.
bool isFpFunction(const Node& n);
/// True for theory atoms: Bool-sorted nodes that are not connectives or Boolean equalities.
bool isTheoryAtom(const Node& n);
/// And, Or, Not, Implies, Xor, and `=` between Booleans.
bool isBooleanConnective(const Node& n);

struct VarDecl
{
  std::string name;
  Sort sort;

  Label label() const { return variableLabel(name); }
  bool operator==(const VarDecl&) const = default;
};

/** An assertion set together with its declared variables and logic tag. */
struct Formula
{
  std::string logic;
  std::vector<VarDecl> vars;
  std::vector<Term> assertions;

  const VarDecl* findVar(std::string_view name) const;
};

/**
 * Assigns preorder path labels: assertion i is labeled "i" and child j of a
 * node labeled L is labeled "L.j". Variables keep their name-derived label.
 */
Term labelTree(const Term& t, const std::string& rootLabel);
void labelFormula(Formula& f);

/// Visits every node below `t` in post-order (children before parents).
void postOrder(const Term& t, const std::function<void(const Term&)>& visit);
/// Variables of `terms` in order of first occurrence.
std::vector<VarDecl> collectVariables(const std::vector<Term>& terms);

bool structurallyEqual(const Term& a, const Term& b);
bool structurallyEqual(const Formula& a, const Formula& b);

std::size_t countNodes(const Term& t);

}  // namespace approxsmt

#endif
