#include "approxsmt/term.hpp"

#include <set>

#include "approxsmt/errors.hpp"

namespace approxsmt {

namespace {

[[noreturn]] void mismatch(Op op, const std::string& why)
{
  throw SortMismatch(std::string(opName(op)) + ": " + why);
}

void requireArity(Op op, const std::vector<Term>& ch, std::size_t lo, std::size_t hi)
{
  if (ch.size() < lo || ch.size() > hi)
    mismatch(op, "wrong number of arguments (" + std::to_string(ch.size()) + ")");
}

void requireAll(Op op, const std::vector<Term>& ch, std::size_t from, SortKind kind)
{
  for (std::size_t i = from; i < ch.size(); ++i)
  {
    if (ch[i]->sort().kind() != kind) mismatch(op, "argument " + std::to_string(i) + " has sort " + ch[i]->sort().toString());
  }
}

void requireSame(Op op, const std::vector<Term>& ch, std::size_t from)
{
  for (std::size_t i = from + 1; i < ch.size(); ++i)
  {
    if (ch[i]->sort() != ch[from]->sort())
      mismatch(op, "arguments of different sorts " + ch[from]->sort().toString() + " and "
                       + ch[i]->sort().toString());
  }
}

/// Result sort of `op` applied to `ch`; validates argument sorts.
Sort inferSort(Op op, const std::vector<Term>& ch, const std::array<int, 2>& idx)
{
  constexpr std::size_t kMany = static_cast<std::size_t>(-1);
  switch (op)
  {
    case Op::Var:
    case Op::Const: mismatch(op, "not an application");
    case Op::Not:
      requireArity(op, ch, 1, 1);
      requireAll(op, ch, 0, SortKind::Bool);
      return Sort::boolean();
    case Op::And:
    case Op::Or:
    case Op::Xor:
    case Op::Implies:
      requireArity(op, ch, op == Op::And || op == Op::Or ? 1 : 2, kMany);
      requireAll(op, ch, 0, SortKind::Bool);
      return Sort::boolean();
    case Op::Eq:
      requireArity(op, ch, 2, 2);
      requireSame(op, ch, 0);
      return Sort::boolean();
    case Op::FpAdd:
    case Op::FpSub:
    case Op::FpMul:
    case Op::FpDiv:
    case Op::FpFma:
      requireArity(op, ch, op == Op::FpFma ? 4 : 3, op == Op::FpFma ? 4 : 3);
      if (ch[0]->sort() != Sort::roundingMode()) mismatch(op, "first argument must be a rounding mode");
      requireAll(op, ch, 1, SortKind::FloatingPoint);
      requireSame(op, ch, 1);
      return ch[1]->sort();
    case Op::FpNeg:
    case Op::FpAbs:
      requireArity(op, ch, 1, 1);
      requireAll(op, ch, 0, SortKind::FloatingPoint);
      return ch[0]->sort();
    case Op::FpToFp:
      requireArity(op, ch, 2, 2);
      if (!ch[0]->sort().isRoundingMode()) mismatch(op, "first argument must be a rounding mode");
      if (!ch[1]->sort().isFloatingPoint()) mismatch(op, "only floating-point sources are supported");
      return Sort::floatingPoint(idx[0], idx[1]);
    case Op::FpEq:
    case Op::FpLeq:
    case Op::FpLt:
    case Op::FpGeq:
    case Op::FpGt:
      requireArity(op, ch, 2, 2);
      requireAll(op, ch, 0, SortKind::FloatingPoint);
      requireSame(op, ch, 0);
      return Sort::boolean();
    case Op::FpIsNaN:
    case Op::FpIsInfinite:
    case Op::FpIsZero:
    case Op::FpIsNormal:
    case Op::FpIsSubnormal:
    case Op::FpIsNegative:
    case Op::FpIsPositive:
      requireArity(op, ch, 1, 1);
      requireAll(op, ch, 0, SortKind::FloatingPoint);
      return Sort::boolean();
    case Op::BvAdd:
    case Op::BvSub:
    case Op::BvMul:
    case Op::BvSdiv:
    case Op::BvShl:
    case Op::BvAshr:
    case Op::BvXor:
      requireArity(op, ch, 2, 2);
      requireAll(op, ch, 0, SortKind::BitVector);
      requireSame(op, ch, 0);
      return ch[0]->sort();
    case Op::BvNeg:
      requireArity(op, ch, 1, 1);
      requireAll(op, ch, 0, SortKind::BitVector);
      return ch[0]->sort();
    case Op::BvSignExtend:
      requireArity(op, ch, 1, 1);
      requireAll(op, ch, 0, SortKind::BitVector);
      if (idx[0] < 0) mismatch(op, "negative extension");
      return Sort::bitVector(ch[0]->sort().bvWidth() + idx[0]);
    case Op::BvExtract:
      requireArity(op, ch, 1, 1);
      requireAll(op, ch, 0, SortKind::BitVector);
      if (idx[1] < 0 || idx[0] < idx[1] || idx[0] >= ch[0]->sort().bvWidth()) mismatch(op, "bad extract indices");
      return Sort::bitVector(idx[0] - idx[1] + 1);
    case Op::BvSle:
    case Op::BvSlt:
    case Op::BvSge:
    case Op::BvSgt:
      requireArity(op, ch, 2, 2);
      requireAll(op, ch, 0, SortKind::BitVector);
      requireSame(op, ch, 0);
      return Sort::boolean();
    case Op::RealAdd:
    case Op::RealSub:
    case Op::RealMul:
      requireArity(op, ch, 2, kMany);
      requireAll(op, ch, 0, SortKind::Real);
      return Sort::real();
    case Op::RealDiv:
      requireArity(op, ch, 2, 2);
      requireAll(op, ch, 0, SortKind::Real);
      return Sort::real();
    case Op::RealNeg:
      requireArity(op, ch, 1, 1);
      requireAll(op, ch, 0, SortKind::Real);
      return Sort::real();
    case Op::RealLeq:
    case Op::RealLt:
    case Op::RealGeq:
    case Op::RealGt:
      requireArity(op, ch, 2, 2);
      requireAll(op, ch, 0, SortKind::Real);
      return Sort::boolean();
  }
  mismatch(op, "unknown operator");
}

Term makeNode(Symbol sym, Label label, std::vector<Term> children)
{
  auto n = std::make_shared<Node>();
  n->symbol = std::move(sym);
  n->label = std::move(label);
  n->children = std::move(children);
  return n;
}

bool symbolsEqual(const Symbol& a, const Symbol& b)
{
  if (a.op != b.op || a.sort != b.sort || a.indices != b.indices) return false;
  if (a.op == Op::Var) return a.name == b.name;
  if (a.op == Op::Const) return a.value == b.value;
  return true;
}

Term relabel(const Term& t, const std::string& path)
{
  if (t->isVariable()) return t;
  std::vector<Term> children;
  children.reserve(t->children.size());
  for (std::size_t i = 0; i < t->children.size(); ++i)
    children.push_back(relabel(t->children[i], path + "." + std::to_string(i)));
  return makeNode(t->symbol, Label{path, false}, std::move(children));
}

}  // namespace

std::string_view opName(Op op)
{
  switch (op)
  {
    case Op::Var: return "<var>";
    case Op::Const: return "<const>";
    case Op::Not: return "not";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Xor: return "xor";
    case Op::Eq: return "=";
    case Op::FpAdd: return "fp.add";
    case Op::FpSub: return "fp.sub";
    case Op::FpMul: return "fp.mul";
    case Op::FpDiv: return "fp.div";
    case Op::FpFma: return "fp.fma";
    case Op::FpNeg: return "fp.neg";
    case Op::FpAbs: return "fp.abs";
    case Op::FpToFp: return "to_fp";
    case Op::FpEq: return "fp.eq";
    case Op::FpLeq: return "fp.leq";
    case Op::FpLt: return "fp.lt";
    case Op::FpGeq: return "fp.geq";
    case Op::FpGt: return "fp.gt";
    case Op::FpIsNaN: return "fp.isNaN";
    case Op::FpIsInfinite: return "fp.isInfinite";
    case Op::FpIsZero: return "fp.isZero";
    case Op::FpIsNormal: return "fp.isNormal";
    case Op::FpIsSubnormal: return "fp.isSubnormal";
    case Op::FpIsNegative: return "fp.isNegative";
    case Op::FpIsPositive: return "fp.isPositive";
    case Op::BvAdd: return "bvadd";
    case Op::BvSub: return "bvsub";
    case Op::BvMul: return "bvmul";
    case Op::BvNeg: return "bvneg";
    case Op::BvSdiv: return "bvsdiv";
    case Op::BvShl: return "bvshl";
    case Op::BvAshr: return "bvashr";
    case Op::BvXor: return "bvxor";
    case Op::BvSignExtend: return "sign_extend";
    case Op::BvExtract: return "extract";
    case Op::BvSle: return "bvsle";
    case Op::BvSlt: return "bvslt";
    case Op::BvSge: return "bvsge";
    case Op::BvSgt: return "bvsgt";
    case Op::RealAdd: return "+";
    case Op::RealSub: return "-";
    case Op::RealMul: return "*";
    case Op::RealDiv: return "/";
    case Op::RealNeg: return "-";
    case Op::RealLeq: return "<=";
    case Op::RealLt: return "<";
    case Op::RealGeq: return ">=";
    case Op::RealGt: return ">";
  }
  return "?";
}

SymbolKind Symbol::kind() const
{
  switch (op)
  {
    case Op::Var: return SymbolKind::Variable;
    case Op::Const:
      switch (sort.kind())
      {
        case SortKind::Bool: return SymbolKind::BoolLiteral;
        case SortKind::RoundingMode: return SymbolKind::RoundingModeLiteral;
        case SortKind::FloatingPoint: return SymbolKind::FpLiteral;
        case SortKind::BitVector: return SymbolKind::BvLiteral;
        case SortKind::Real: return SymbolKind::RealLiteral;
      }
      break;
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Xor: return SymbolKind::BooleanConnective;
    case Op::Eq: return SymbolKind::Equality;
    case Op::FpAdd:
    case Op::FpSub:
    case Op::FpMul:
    case Op::FpDiv:
    case Op::FpFma:
    case Op::FpNeg:
    case Op::FpAbs:
    case Op::FpToFp: return SymbolKind::FpOperation;
    case Op::FpEq:
    case Op::FpLeq:
    case Op::FpLt:
    case Op::FpGeq:
    case Op::FpGt:
    case Op::FpIsNaN:
    case Op::FpIsInfinite:
    case Op::FpIsZero:
    case Op::FpIsNormal:
    case Op::FpIsSubnormal:
    case Op::FpIsNegative:
    case Op::FpIsPositive: return SymbolKind::FpPredicate;
    case Op::RealAdd:
    case Op::RealSub:
    case Op::RealMul:
    case Op::RealDiv:
    case Op::RealNeg:
    case Op::RealLeq:
    case Op::RealLt:
    case Op::RealGeq:
    case Op::RealGt: return SymbolKind::RealOperation;
    default: break;
  }
  return SymbolKind::BvOperation;
}

Label variableLabel(std::string_view name) { return Label{"$" + std::string(name), false}; }

Term mkVar(std::string name, Sort sort)
{
  Symbol sym;
  sym.op = Op::Var;
  sym.sort = sort;
  Label label = variableLabel(name);
  sym.name = std::move(name);
  return makeNode(std::move(sym), std::move(label), {});
}

Term mkConst(Value v, Label label)
{
  Symbol sym;
  sym.op = Op::Const;
  sym.sort = sortOf(v);
  sym.name = toSmtLib(v);
  sym.value = std::move(v);
  return makeNode(std::move(sym), std::move(label), {});
}

Term mkApp(Op op, std::vector<Term> children, Label label, std::array<int, 2> indices)
{
  Symbol sym;
  sym.op = op;
  sym.name = std::string(opName(op));
  sym.indices = indices;
  sym.sort = inferSort(op, children, indices);
  for (const Term& c : children) sym.argSorts.push_back(c->sort());
  return makeNode(std::move(sym), std::move(label), std::move(children));
}

Term rebuild(const Node& node, Label label, std::vector<Term> children)
{
  if (node.isVariable() || node.isLiteral())
  {
    Symbol sym = node.symbol;
    return makeNode(std::move(sym), std::move(label), {});
  }
  return mkApp(node.op(), std::move(children), std::move(label), node.symbol.indices);
}

bool isFpFunction(const Node& n)
{
  return n.sort().isFloatingPoint() && !n.isLiteral() && !n.isVariable();
}

bool isBooleanConnective(const Node& n)
{
  switch (n.op())
  {
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Xor: return true;
    case Op::Eq: return n.children[0]->sort().isBool();
    default: return false;
  }
}

bool isTheoryAtom(const Node& n)
{
  return n.sort().isBool() && !n.isLiteral() && !isBooleanConnective(n);
}

const VarDecl* Formula::findVar(std::string_view name) const
{
  for (const VarDecl& v : vars)
  {
    if (v.name == name) return &v;
  }
  return nullptr;
}

Term labelTree(const Term& t, const std::string& rootLabel) { return relabel(t, rootLabel); }

void labelFormula(Formula& f)
{
  for (std::size_t i = 0; i < f.assertions.size(); ++i)
    f.assertions[i] = relabel(f.assertions[i], std::to_string(i));
}

void postOrder(const Term& t, const std::function<void(const Term&)>& visit)
{
  for (const Term& c : t->children) postOrder(c, visit);
  visit(t);
}

std::vector<VarDecl> collectVariables(const std::vector<Term>& terms)
{
  std::vector<VarDecl> out;
  std::set<std::string> seen;
  for (const Term& root : terms)
  {
    postOrder(root, [&](const Term& n) {
      if (n->isVariable() && seen.insert(n->symbol.name).second)
        out.push_back(VarDecl{n->symbol.name, n->sort()});
    });
  }
  return out;
}

bool structurallyEqual(const Term& a, const Term& b)
{
  if (a.get() == b.get()) return true;
  if (!symbolsEqual(a->symbol, b->symbol) || a->label != b->label || a->children.size() != b->children.size())
    return false;
  for (std::size_t i = 0; i < a->children.size(); ++i)
  {
    if (!structurallyEqual(a->children[i], b->children[i])) return false;
  }
  return true;
}

bool structurallyEqual(const Formula& a, const Formula& b)
{
  if (a.logic != b.logic || a.vars != b.vars || a.assertions.size() != b.assertions.size()) return false;
  for (std::size_t i = 0; i < a.assertions.size(); ++i)
  {
    if (!structurallyEqual(a.assertions[i], b.assertions[i])) return false;
  }
  return true;
}

std::size_t countNodes(const Term& t)
{
  std::size_t n = 1;
  for (const Term& c : t->children) n += countNodes(c);
  return n;
}

}  // namespace approxsmt
