#include "approxsmt/real.hpp"

#include <map>

#include "approxsmt/errors.hpp"
#include "approxsmt/eval.hpp"

namespace approxsmt {

namespace {

Term encode(const Term& t);

std::vector<Term> encodeAll(const std::vector<Term>& c, std::size_t from = 0)
{
  std::vector<Term> out;
  for (std::size_t i = from; i < c.size(); ++i) out.push_back(encode(c[i]));
  return out;
}

Term encode(const Term& t)
{
  const Label& l = t->label;
  if (t->isLiteral())
  {
    const Value& v = *t->symbol.value;
    if (std::holds_alternative<bool>(v)) return t;
    if (!std::holds_alternative<FpLiteral>(v)) throw UnsupportedOp("literal " + toSmtLib(v) + " in real encoding");
    std::optional<Rational> q = toRational(std::get<FpLiteral>(v));
    if (!q) throw UnsupportedValue("special value " + toSmtLib(v) + " has no real encoding");
    return mkConst(*q, l);
  }
  if (t->isVariable())
  {
    if (t->sort().isFloatingPoint()) return mkVar(t->symbol.name, Sort::real());
    if (t->sort().isBool()) return t;
    throw UnsupportedOp("real encoding of variable " + t->symbol.name + " of sort " + t->sort().toString());
  }

  const std::vector<Term>& c = t->children;
  switch (t->op())
  {
    case Op::Not:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Xor: return rebuild(*t, l, encodeAll(c));
    case Op::Eq:
      if (c[0]->sort().isRoundingMode()) throw UnsupportedOp("rounding-mode equality in real encoding");
      return mkApp(Op::Eq, encodeAll(c), l);
    case Op::FpEq: return mkApp(Op::Eq, encodeAll(c), l);
    case Op::FpLeq: return mkApp(Op::RealLeq, encodeAll(c), l);
    case Op::FpLt: return mkApp(Op::RealLt, encodeAll(c), l);
    case Op::FpGeq: return mkApp(Op::RealGeq, encodeAll(c), l);
    case Op::FpGt: return mkApp(Op::RealGt, encodeAll(c), l);
    case Op::FpAdd: return mkApp(Op::RealAdd, encodeAll(c, 1), l);
    case Op::FpSub: return mkApp(Op::RealSub, encodeAll(c, 1), l);
    case Op::FpMul: return mkApp(Op::RealMul, encodeAll(c, 1), l);
    case Op::FpDiv: return mkApp(Op::RealDiv, encodeAll(c, 1), l);
    case Op::FpNeg: return mkApp(Op::RealNeg, encodeAll(c), l);
    case Op::FpFma:
    {
      Term prod = mkApp(Op::RealMul, {encode(c[1]), encode(c[2])}, Label{l.id + "#m", true});
      return mkApp(Op::RealAdd, {prod, encode(c[3])}, l);
    }
    case Op::FpToFp: return encode(c[1]);
    default: throw UnsupportedOp(std::string(opName(t->op())) + " in real encoding");
  }
}

}  // namespace

Formula encodeRealFormula(const Formula& f)
{
  Formula out;
  out.logic = "QF_NRA";
  for (const VarDecl& v : f.vars)
  {
    if (v.sort.isFloatingPoint())
      out.vars.push_back({v.name, Sort::real()});
    else if (v.sort.isBool())
      out.vars.push_back(v);
    else if (!v.sort.isRoundingMode())
      throw UnsupportedOp("real encoding of variable " + v.name + " of sort " + v.sort.toString());
  }
  for (const Term& a : f.assertions) out.assertions.push_back(encode(a));
  return out;
}

Model decodeRealModel(const Formula& original, const Formula& encoded, const Model& realModel)
{
  std::map<std::string, Sort> sorts;
  for (const VarDecl& v : original.vars) sorts.emplace(v.label().id, v.sort);
  for (const Term& a : original.assertions)
  {
    postOrder(a, [&](const Term& n) { sorts.emplace(n->label.id, n->sort()); });
  }

  Model values = evaluateAll(encoded.assertions, realModel);
  for (const auto& [id, v] : realModel.entries()) values.set(Label{id, false}, v);

  Model out;
  for (const auto& [id, v] : values.entries())
  {
    auto it = sorts.find(id);
    if (it == sorts.end()) continue;
    if (it->second.isFloatingPoint() && std::holds_alternative<Rational>(v))
      out.set(Label{id, false}, fromRational(std::get<Rational>(v), it->second.fpFormat(), RoundingMode::RNE));
    else if (std::holds_alternative<bool>(v))
      out.set(Label{id, false}, v);
  }
  for (const VarDecl& v : original.vars)
  {
    if (v.sort.isRoundingMode()) out.set(v.label(), RoundingMode::RNE);
  }
  return out;
}

RealApproximation::RealApproximation() : d_order(PrecisionOrder::binary()) {}

PrecisionMap RealApproximation::initialPrecision(const Formula&) const { return PrecisionMap::uniform(d_order.min()); }

Formula RealApproximation::encode(const Formula& f, const PrecisionMap&) const { return encodeRealFormula(f); }

Model RealApproximation::decode(const Formula& original, const Formula& encoded, const Model& approxModel,
                                const PrecisionMap&) const
{
  return decodeRealModel(original, encoded, approxModel);
}

PrecisionMap RealApproximation::refineWithModel(const Formula&, const Model&, const Model&, const PrecisionMap&) const
{
  return PrecisionMap::uniform(Precision::top());
}

PrecisionMap RealApproximation::refineWithProof(const Formula&, std::span<const Term>, const PrecisionMap&) const
{
  return PrecisionMap::uniform(Precision::top());
}

}  // namespace approxsmt
