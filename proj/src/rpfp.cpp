#include "approxsmt/rpfp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "approxsmt/errors.hpp"
#include "approxsmt/eval.hpp"
#include "approxsmt/reconstruction.hpp"

namespace approxsmt {

namespace {

bool isFpPredicate(const Node& n)
{
  if (n.op() == Op::Eq) return n.children[0]->sort().isFloatingPoint();
  return n.symbol.kind() == SymbolKind::FpPredicate;
}

Term castTo(const Term& child, FpFormat fmt, const Label& parent, int index)
{
  Label rmLabel{parent.id + "#r" + std::to_string(index), true};
  Label castLabel{parent.id + "#c" + std::to_string(index), true};
  return mkApp(Op::FpToFp, {mkConst(RoundingMode::RNE, rmLabel), child}, castLabel, {fmt.ebits, fmt.sbits});
}

std::vector<Term> castChildren(const std::vector<Term>& kids, FpFormat fmt, const Label& parent)
{
  std::vector<Term> out;
  out.reserve(kids.size());
  for (std::size_t i = 0; i < kids.size(); ++i)
  {
    const Term& k = kids[i];
    if (k->sort().isFloatingPoint() && !(k->sort().fpFormat() == fmt))
      out.push_back(castTo(k, fmt, parent, static_cast<int>(i)));
    else
      out.push_back(k);
  }
  return out;
}

Term encodeNode(const Term& t, const PrecisionMap& p)
{
  if (t->isLiteral()) return t;
  if (t->isVariable())
  {
    if (!t->sort().isFloatingPoint()) return t;
    return mkVar(t->symbol.name, Sort::floatingPoint(scaleFormat(t->sort().fpFormat(), p.get(t->label).value())));
  }

  std::vector<Term> kids;
  kids.reserve(t->children.size());
  for (const Term& c : t->children) kids.push_back(encodeNode(c, p));

  if (t->op() == Op::FpToFp)
  {
    FpFormat target = scaleFormat(t->sort().fpFormat(), p.get(t->label).value());
    return mkApp(Op::FpToFp, std::move(kids), t->label, {target.ebits, target.sbits});
  }
  if (isFpFunction(*t))
  {
    FpFormat target = scaleFormat(t->sort().fpFormat(), p.get(t->label).value());
    return mkApp(t->op(), castChildren(kids, target, t->label), t->label, t->symbol.indices);
  }
  if (isFpPredicate(*t))
  {
    std::optional<FpFormat> fmt;
    for (const Term& k : kids)
    {
      if (k->isLiteral() || !k->sort().isFloatingPoint()) continue;
      fmt = fmt ? maxFormat(*fmt, k->sort().fpFormat()) : k->sort().fpFormat();
    }
    if (!fmt)
    {
      for (const Term& k : kids)
      {
        if (!k->sort().isFloatingPoint()) continue;
        fmt = fmt ? maxFormat(*fmt, k->sort().fpFormat()) : k->sort().fpFormat();
      }
    }
    return mkApp(t->op(), castChildren(kids, *fmt, t->label), t->label, t->symbol.indices);
  }
  return rebuild(*t, t->label, std::move(kids));
}

Rational minSubnormal(FpFormat fmt)
{
  Rational q(1);
  long exponent = 1 - static_cast<long>(bias(fmt.ebits)) - (fmt.sbits - 1);
  mpz_class den(1);
  den <<= static_cast<mp_bitcnt_t>(-exponent);
  return q / den;
}

std::optional<FpLiteral> fpValue(const Term& t, const Model& m)
{
  if (t->isLiteral()) return std::get<FpLiteral>(*t->symbol.value);
  const Value* v = m.find(t->label);
  if (!v || !std::holds_alternative<FpLiteral>(*v)) return std::nullopt;
  return std::get<FpLiteral>(*v);
}

}  // namespace

FpFormat scaleFormat(FpFormat full, int p)
{
  int e = 3 + ((full.ebits - 3) * p) / kRpfpMaxPrecision;
  int s = 3 + ((full.sbits - 3) * p) / kRpfpMaxPrecision;
  return FpFormat{std::min(e, full.ebits), std::min(s, full.sbits)};
}

std::vector<Label> rpfpLabels(const Formula& f)
{
  std::set<Label> seen;
  std::vector<Label> out;
  auto add = [&](const Label& l) {
    if (seen.insert(l).second) out.push_back(l);
  };
  for (const VarDecl& v : f.vars)
  {
    if (v.sort.isFloatingPoint()) add(v.label());
  }
  for (const Term& a : f.assertions)
  {
    postOrder(a, [&](const Term& n) {
      if (n->isVariable() ? n->sort().isFloatingPoint() : isFpFunction(*n)) add(n->label);
    });
  }
  return out;
}

Formula encodeRpfp(const Formula& f, const PrecisionMap& p)
{
  Formula out;
  out.logic = "QF_FP";
  for (const VarDecl& v : f.vars)
  {
    if (v.sort.isFloatingPoint())
      out.vars.push_back({v.name, Sort::floatingPoint(scaleFormat(v.sort.fpFormat(), p.get(v.label()).value()))});
    else
      out.vars.push_back(v);
  }
  for (const Term& a : f.assertions) out.assertions.push_back(encodeNode(a, p));
  return out;
}

FpLiteral decodeFpValue(FpFormat target, const FpLiteral& small)
{
  FpFormat src = small.format();
  if (target.ebits < src.ebits || target.sbits < src.sbits)
    throw RangeError("cannot widen " + small.toSmtLib() + " into a narrower format");
  if (small.isNaN()) return FpLiteral::nan(target);
  if (small.isInfinite()) return FpLiteral::infinity(target, small.sign());
  if (small.isZero()) return FpLiteral::zero(target, small.sign());

  const int padding = target.sbits - src.sbits;
  std::int64_t unbiased = 0;
  std::uint64_t fraction = 0;
  if (small.exponent() == 0)
  {
    // Subnormal: shift the leading one out and lower the exponent to match.
    std::uint64_t f = small.significand();
    int top = 63 - __builtin_clzll(f);
    int underflow = (src.sbits - 1) - top;
    unbiased = 1 - bias(src.ebits) - underflow;
    std::uint64_t rest = f & ~(std::uint64_t{1} << top);
    fraction = rest << (target.sbits - 1 - top);
  }
  else
  {
    unbiased = static_cast<std::int64_t>(small.exponent()) - bias(src.ebits);
    fraction = small.significand() << padding;
  }

  std::int64_t biased = unbiased + bias(target.ebits);
  std::int64_t maxBiased = (std::int64_t{1} << target.ebits) - 2;
  if (biased < 1 || biased > maxBiased)
    return fromRational(*toRational(small), target, RoundingMode::RNE);
  return FpLiteral(target, small.sign(), static_cast<std::uint64_t>(biased), fraction);
}

Model decodeRpfp(const Formula& original, const Formula& encoded, const Model& approxModel)
{
  std::map<std::string, Term> byLabel;
  for (const Term& a : original.assertions)
  {
    postOrder(a, [&](const Term& n) { byLabel.emplace(n->label.id, n); });
  }
  std::map<std::string, Sort> varSorts;
  for (const VarDecl& v : original.vars) varSorts.emplace(v.label().id, v.sort);

  Model values = evaluateAll(encoded.assertions, approxModel);
  for (const auto& [id, v] : approxModel.entries()) values.set(Label{id, false}, v);

  Model out;
  for (const auto& [id, v] : values.entries())
  {
    std::optional<Sort> sort;
    if (auto it = byLabel.find(id); it != byLabel.end())
      sort = it->second->sort();
    else if (auto jt = varSorts.find(id); jt != varSorts.end())
      sort = jt->second;
    if (!sort) continue;
    if (sort->isFloatingPoint() && std::holds_alternative<FpLiteral>(v))
      out.set(Label{id, false}, decodeFpValue(sort->fpFormat(), std::get<FpLiteral>(v)));
    else
      out.set(Label{id, false}, v);
  }
  return out;
}

double relativeError(const FpLiteral& a, const FpLiteral& b)
{
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (a.isNaN() || b.isNaN()) return a.isNaN() && b.isNaN() ? 0.0 : inf;
  if (a.isInfinite() || b.isInfinite()) return a == b ? 0.0 : inf;
  Rational qa = *toRational(a);
  Rational qb = *toRational(b);
  Rational den = abs(qb);
  Rational floor = minSubnormal(b.format());
  if (den < floor) den = floor;
  Rational err = abs(qa - qb) / den;
  return err.get_d();
}

std::optional<double> nodeError(const Model& decoded, const Model& failed, const Node& node)
{
  if (!isFpFunction(node)) return std::nullopt;
  const Value* d = decoded.find(node.label);
  const Value* f = failed.find(node.label);
  if (!d || !f || !std::holds_alternative<FpLiteral>(*d) || !std::holds_alternative<FpLiteral>(*f))
    return std::nullopt;
  double outErr = relativeError(std::get<FpLiteral>(*d), std::get<FpLiteral>(*f));

  double sum = 0;
  int count = 0;
  for (const Term& c : node.children)
  {
    if (!c->sort().isFloatingPoint()) continue;
    std::optional<FpLiteral> dc = fpValue(c, decoded);
    std::optional<FpLiteral> fc = fpValue(c, failed);
    if (!dc || !fc) continue;
    sum += relativeError(*dc, *fc);
    ++count;
  }
  double avgInErr = count ? sum / count : 0.0;

  if (std::isinf(outErr)) return outErr;
  if (std::isinf(avgInErr)) return 0.0;
  return outErr / (1.0 + avgInErr);
}

PrecisionMap refineRpfpUniform(const PrecisionMap& p)
{
  auto bump = [](const Precision& x) { return Precision::scalar(std::min(x.value() + 1, kRpfpMaxPrecision)); };
  if (p.isUniform()) return PrecisionMap::uniform(bump(p.uniformValue()));
  PrecisionMap out = p;
  for (const auto& [id, x] : p.entries()) out.set(Label{id, false}, bump(x));
  return out;
}

PrecisionMap refineRpfpWithModel(const Formula& original, const Model& decoded, const Model& failed,
                                 const PrecisionMap& p)
{
  Model failedNodes = evaluateAll(original.assertions, failed);

  struct Scored
  {
    double score;
    Term node;
  };
  std::vector<Scored> scored;
  std::set<std::string> seen;
  for (const CriticalAtom& a : extractCriticalAtoms(original.assertions, decoded))
  {
    if (!a.polarity) continue;
    const Value* fv = failedNodes.find(a.atom->label);
    if (!fv || std::get<bool>(*fv)) continue;
    postOrder(a.atom, [&](const Term& n) {
      if (!seen.insert(n->label.id).second) return;
      if (std::optional<double> s = nodeError(decoded, failedNodes, *n)) scored.push_back({*s, n});
    });
  }

  std::sort(scored.begin(), scored.end(), [](const Scored& x, const Scored& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.node->label.id < y.node->label.id;
  });
  std::size_t k = (scored.size() * 3 + 9) / 10;

  std::set<Label> chosen;
  for (std::size_t i = 0; i < k; ++i)
  {
    postOrder(scored[i].node, [&](const Term& n) {
      if (n.get() == scored[i].node.get() || n->isVariable()) chosen.insert(n->label);
    });
  }
  PrecisionMap out = p;
  for (const Label& l : chosen)
  {
    if (!out.contains(l)) continue;
    out.set(l, Precision::scalar(std::min(out.get(l).value() + 1, kRpfpMaxPrecision)));
  }
  if (out == p) return refineRpfpUniform(p);
  return out;
}

RpfpApproximation::RpfpApproximation() : d_order(PrecisionOrder::scalar(0, kRpfpMaxPrecision)) {}

PrecisionMap RpfpApproximation::initialPrecision(const Formula& f) const
{
  return approxsmt::initialPrecision(d_order, rpfpLabels(f), false);
}

Formula RpfpApproximation::encode(const Formula& f, const PrecisionMap& p) const { return encodeRpfp(f, p); }

Model RpfpApproximation::decode(const Formula& original, const Formula& encoded, const Model& approxModel,
                                const PrecisionMap&) const
{
  return decodeRpfp(original, encoded, approxModel);
}

PrecisionMap RpfpApproximation::refineWithModel(const Formula& original, const Model& decoded,
                                                const Model& failed, const PrecisionMap& p) const
{
  return refineRpfpWithModel(original, decoded, failed, p);
}

PrecisionMap RpfpApproximation::refineWithProof(const Formula&, std::span<const Term>, const PrecisionMap& p) const
{
  return refineRpfpUniform(p);
}

}  // namespace approxsmt
