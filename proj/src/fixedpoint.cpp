#include "approxsmt/fixedpoint.hpp"

#include <algorithm>
#include <map>

#include "approxsmt/errors.hpp"
#include "approxsmt/eval.hpp"

namespace approxsmt {

namespace {

mpz_class pow2(int k)
{
  mpz_class r(1);
  r <<= static_cast<mp_bitcnt_t>(k);
  return r;
}

class Encoder
{
 public:
  explicit Encoder(FixedPointFormat fmt) : d_fmt(fmt) {}

  Term encode(const Term& t)
  {
    const Label& l = t->label;
    if (t->isLiteral()) return encodeLiteral(t);
    if (t->isVariable())
    {
      if (t->sort().isFloatingPoint()) return mkVar(t->symbol.name, Sort::bitVector(d_fmt.width()));
      if (t->sort().isBool()) return t;
      throw UnsupportedOp("fixed-point encoding of variable " + t->symbol.name + " of sort " + t->sort().toString());
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
        if (c[0]->sort().isRoundingMode()) throw UnsupportedOp("rounding-mode equality in fixed-point encoding");
        return mkApp(Op::Eq, encodeAll(c), l);
      case Op::FpEq: return binaryPredicate(Op::Eq, *t);
      case Op::FpLeq: return binaryPredicate(Op::BvSle, *t);
      case Op::FpLt: return binaryPredicate(Op::BvSlt, *t);
      case Op::FpGeq: return binaryPredicate(Op::BvSge, *t);
      case Op::FpGt: return binaryPredicate(Op::BvSgt, *t);
      case Op::FpAdd: return mkApp(Op::BvAdd, {encode(c[1]), encode(c[2])}, l);
      case Op::FpSub: return mkApp(Op::BvSub, {encode(c[1]), encode(c[2])}, l);
      case Op::FpNeg: return mkApp(Op::BvNeg, {encode(c[0])}, l);
      case Op::FpAbs: return abs(encode(c[0]), l);
      case Op::FpMul: return mul(encode(c[1]), encode(c[2]), l);
      case Op::FpDiv: return div(encode(c[1]), encode(c[2]), l);
      case Op::FpFma:
      {
        Term prod = mul(encode(c[1]), encode(c[2]), fresh(l));
        return mkApp(Op::BvAdd, {prod, encode(c[3])}, l);
      }
      // Every FP sort maps to the same carrier, so conversions vanish.
      case Op::FpToFp: return encode(c[1]);
      default: throw UnsupportedOp(std::string(opName(t->op())) + " in fixed-point encoding");
    }
  }

 private:
  Label fresh(const Label& parent) { return Label{parent.id + "#b" + std::to_string(d_next[parent.id]++), true}; }

  std::vector<Term> encodeAll(const std::vector<Term>& c)
  {
    std::vector<Term> out;
    out.reserve(c.size());
    for (const Term& x : c) out.push_back(encode(x));
    return out;
  }

  Term encodeLiteral(const Term& t)
  {
    const Value& v = *t->symbol.value;
    if (std::holds_alternative<FpLiteral>(v))
      return mkConst(encodeFixedPoint(std::get<FpLiteral>(v), d_fmt), t->label);
    if (std::holds_alternative<bool>(v)) return t;
    throw UnsupportedOp("literal " + toSmtLib(v) + " in fixed-point encoding");
  }

  Term binaryPredicate(Op op, const Node& n)
  {
    if (n.children.size() != 2) throw UnsupportedOp("chained comparison in fixed-point encoding");
    return mkApp(op, {encode(n.children[0]), encode(n.children[1])}, n.label);
  }

  Term constant(int width, long v, const Label& parent)
  {
    return mkConst(BvValue::fromSigned(width, mpz_class(v)), fresh(parent));
  }

  Term abs(const Term& a, const Label& l)
  {
    const int w = d_fmt.width();
    Term sign = mkApp(Op::BvAshr, {a, constant(w, w - 1, l)}, fresh(l));
    Term flipped = mkApp(Op::BvXor, {a, sign}, fresh(l));
    return mkApp(Op::BvSub, {flipped, sign}, l);
  }

  Term mul(const Term& a, const Term& b, const Label& l)
  {
    const int w = d_fmt.width();
    Term wa = mkApp(Op::BvSignExtend, {a}, fresh(l), {w, 0});
    Term wb = mkApp(Op::BvSignExtend, {b}, fresh(l), {w, 0});
    Term prod = mkApp(Op::BvMul, {wa, wb}, fresh(l));
    Term shifted = mkApp(Op::BvAshr, {prod, constant(2 * w, d_fmt.fracBits, l)}, fresh(l));
    return mkApp(Op::BvExtract, {shifted}, l, {w - 1, 0});
  }

  Term div(const Term& a, const Term& b, const Label& l)
  {
    const int w = d_fmt.width();
    const int f = d_fmt.fracBits;
    Term wa = mkApp(Op::BvSignExtend, {a}, fresh(l), {f, 0});
    Term num = mkApp(Op::BvShl, {wa, constant(w + f, f, l)}, fresh(l));
    Term den = mkApp(Op::BvSignExtend, {b}, fresh(l), {f, 0});
    Term quot = mkApp(Op::BvSdiv, {num, den}, fresh(l));
    return mkApp(Op::BvExtract, {quot}, l, {w - 1, 0});
  }

  FixedPointFormat d_fmt;
  std::map<std::string, int> d_next;
};

}  // namespace

BvValue encodeFixedPoint(const FpLiteral& v, FixedPointFormat fmt)
{
  const int w = fmt.width();
  const mpz_class hi = pow2(w - 1) - 1;
  const mpz_class lo = -pow2(w - 1);
  if (v.isNaN()) throw UnsupportedValue("NaN has no fixed-point encoding");
  if (v.isInfinite()) return BvValue::fromSigned(w, v.sign() ? lo : hi);

  Rational scaled = *toRational(v) * Rational(pow2(fmt.fracBits));
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  Rational rest = scaled - Rational(n);
  Rational half(1, 2);
  if (rest > half || (rest == half && mpz_odd_p(n.get_mpz_t()))) n += 1;
  if (n > hi) n = hi;
  if (n < lo) n = lo;
  return BvValue::fromSigned(w, n);
}

Rational decodeFixedPoint(const BvValue& v, FixedPointFormat fmt)
{
  Rational q(v.toSigned(), pow2(fmt.fracBits));
  q.canonicalize();
  return q;
}

Formula encodeFixedPointFormula(const Formula& f, FixedPointFormat fmt)
{
  Formula out;
  out.logic = "QF_BV";
  for (const VarDecl& v : f.vars)
  {
    if (v.sort.isFloatingPoint())
      out.vars.push_back({v.name, Sort::bitVector(fmt.width())});
    else if (v.sort.isBool())
      out.vars.push_back(v);
    else if (!v.sort.isRoundingMode())
      throw UnsupportedOp("fixed-point encoding of variable " + v.name + " of sort " + v.sort.toString());
  }
  Encoder enc(fmt);
  for (const Term& a : f.assertions) out.assertions.push_back(enc.encode(a));
  return out;
}

Model decodeFixedPointModel(const Formula& original, const Formula& encoded, const Model& bvModel,
                            FixedPointFormat fmt)
{
  std::map<std::string, Sort> sorts;
  for (const VarDecl& v : original.vars) sorts.emplace(v.label().id, v.sort);
  for (const Term& a : original.assertions)
  {
    postOrder(a, [&](const Term& n) { sorts.emplace(n->label.id, n->sort()); });
  }

  Model values = evaluateAll(encoded.assertions, bvModel);
  for (const auto& [id, v] : bvModel.entries()) values.set(Label{id, false}, v);

  Model out;
  for (const auto& [id, v] : values.entries())
  {
    auto it = sorts.find(id);
    if (it == sorts.end()) continue;
    if (it->second.isFloatingPoint() && std::holds_alternative<BvValue>(v))
      out.set(Label{id, false},
              fromRational(decodeFixedPoint(std::get<BvValue>(v), fmt), it->second.fpFormat(), RoundingMode::RNE));
    else if (std::holds_alternative<bool>(v))
      out.set(Label{id, false}, v);
  }
  for (const VarDecl& v : original.vars)
  {
    if (v.sort.isRoundingMode()) out.set(v.label(), RoundingMode::RNE);
  }
  return out;
}

Precision refineFixedPoint(const Precision& p)
{
  return Precision::pair(std::min(p.intPart() + kFixedPointStep, kFixedPointMaxBits),
                         std::min(p.fracPart() + kFixedPointStep, kFixedPointMaxBits));
}

FixedPointApproximation::FixedPointApproximation()
  : d_order(PrecisionOrder::pair(kFixedPointMinBits, kFixedPointMinBits, kFixedPointMaxBits, kFixedPointMaxBits))
{
}

PrecisionMap FixedPointApproximation::initialPrecision(const Formula&) const
{
  return PrecisionMap::uniform(d_order.min());
}

Formula FixedPointApproximation::encode(const Formula& f, const PrecisionMap& p) const
{
  const Precision& x = p.uniformValue();
  return encodeFixedPointFormula(f, {x.intPart(), x.fracPart()});
}

Model FixedPointApproximation::decode(const Formula& original, const Formula& encoded, const Model& approxModel,
                                      const PrecisionMap& p) const
{
  const Precision& x = p.uniformValue();
  return decodeFixedPointModel(original, encoded, approxModel, {x.intPart(), x.fracPart()});
}

PrecisionMap FixedPointApproximation::refineWithModel(const Formula&, const Model&, const Model&,
                                                      const PrecisionMap& p) const
{
  return PrecisionMap::uniform(refineFixedPoint(p.uniformValue()));
}

PrecisionMap FixedPointApproximation::refineWithProof(const Formula&, std::span<const Term>,
                                                      const PrecisionMap& p) const
{
  return PrecisionMap::uniform(refineFixedPoint(p.uniformValue()));
}

}  // namespace approxsmt
