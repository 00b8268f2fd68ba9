#include "approxsmt/eval.hpp"

#include <cassert>
#include <unordered_map>

#include "approxsmt/errors.hpp"

namespace approxsmt {

namespace {

constexpr int kCacheMaxBits = 16;

struct CacheKey
{
  std::uint64_t meta;
  std::uint64_t operands;
  bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash
{
  std::size_t operator()(const CacheKey& k) const
  {
    return std::hash<std::uint64_t>{}(k.meta * 0x9E3779B97F4A7C15ULL ^ k.operands);
  }
};

mpz_class pow2(int k)
{
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, static_cast<unsigned long>(k));
  return r;
}

const FpLiteral& fpArg(std::span<const Value> args, std::size_t i) { return std::get<FpLiteral>(args[i]); }
const BvValue& bvArg(std::span<const Value> args, std::size_t i) { return std::get<BvValue>(args[i]); }
const Rational& realArg(std::span<const Value> args, std::size_t i) { return std::get<Rational>(args[i]); }

FpOp toFpOp(Op op)
{
  switch (op)
  {
    case Op::FpAdd: return FpOp::Add;
    case Op::FpSub: return FpOp::Sub;
    case Op::FpMul: return FpOp::Mul;
    case Op::FpDiv: return FpOp::Div;
    case Op::FpFma: return FpOp::Fma;
    case Op::FpNeg: return FpOp::Neg;
    case Op::FpAbs: return FpOp::Abs;
    default: return FpOp::Convert;
  }
}

FpPred toFpPred(Op op)
{
  switch (op)
  {
    case Op::FpEq: return FpPred::Eq;
    case Op::FpLeq: return FpPred::Leq;
    case Op::FpLt: return FpPred::Lt;
    case Op::FpGeq: return FpPred::Geq;
    case Op::FpGt: return FpPred::Gt;
    case Op::FpIsNaN: return FpPred::IsNaN;
    case Op::FpIsInfinite: return FpPred::IsInfinite;
    case Op::FpIsZero: return FpPred::IsZero;
    case Op::FpIsNormal: return FpPred::IsNormal;
    case Op::FpIsSubnormal: return FpPred::IsSubnormal;
    case Op::FpIsNegative: return FpPred::IsNegative;
    default: return FpPred::IsPositive;
  }
}

/// Unsigned division with the SMT-LIB convention x / 0 = all ones.
mpz_class udiv(const mpz_class& a, const mpz_class& b, int width)
{
  if (b == 0) return pow2(width) - 1;
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

BvValue bvSdiv(const BvValue& s, const BvValue& t)
{
  const int w = s.width;
  const mpz_class mod = pow2(w);
  const bool sNeg = s.toSigned() < 0;
  const bool tNeg = t.toSigned() < 0;
  auto neg = [&](const mpz_class& v) { return mpz_class((mod - v) % mod); };
  const mpz_class sa = sNeg ? neg(s.bits) : s.bits;
  const mpz_class ta = tNeg ? neg(t.bits) : t.bits;
  const mpz_class q = udiv(sa, ta, w);
  return BvValue(w, sNeg != tNeg ? neg(q) : q);
}

BvValue bvShl(const BvValue& s, const BvValue& t)
{
  if (t.bits >= s.width) return BvValue(s.width, 0);
  mpz_class r;
  mpz_mul_2exp(r.get_mpz_t(), s.bits.get_mpz_t(), t.bits.get_ui());
  return BvValue(s.width, r % pow2(s.width));
}

BvValue bvAshr(const BvValue& s, const BvValue& t)
{
  const mpz_class v = s.toSigned();
  if (t.bits >= s.width) return BvValue::fromSigned(s.width, v < 0 ? mpz_class(-1) : mpz_class(0));
  mpz_class r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), v.get_mpz_t(), t.bits.get_ui());
  return BvValue::fromSigned(s.width, r);
}

std::optional<Value> applyBv(const Symbol& sym, std::span<const Value> args)
{
  const BvValue& a = bvArg(args, 0);
  const int w = a.width;
  switch (sym.op)
  {
    case Op::BvAdd: return BvValue::fromSigned(w, a.bits + bvArg(args, 1).bits);
    case Op::BvSub: return BvValue::fromSigned(w, a.bits - bvArg(args, 1).bits);
    case Op::BvMul: return BvValue::fromSigned(w, a.bits * bvArg(args, 1).bits);
    case Op::BvNeg: return BvValue::fromSigned(w, -a.bits);
    case Op::BvSdiv: return bvSdiv(a, bvArg(args, 1));
    case Op::BvShl: return bvShl(a, bvArg(args, 1));
    case Op::BvAshr: return bvAshr(a, bvArg(args, 1));
    case Op::BvXor: return BvValue(w, a.bits ^ bvArg(args, 1).bits);
    case Op::BvSignExtend: return BvValue::fromSigned(w + sym.indices[0], a.toSigned());
    case Op::BvExtract:
    {
      mpz_class shifted;
      mpz_fdiv_q_2exp(shifted.get_mpz_t(), a.bits.get_mpz_t(), static_cast<mp_bitcnt_t>(sym.indices[1]));
      const int width = sym.indices[0] - sym.indices[1] + 1;
      return BvValue(width, shifted % pow2(width));
    }
    case Op::BvSle: return a.toSigned() <= bvArg(args, 1).toSigned();
    case Op::BvSlt: return a.toSigned() < bvArg(args, 1).toSigned();
    case Op::BvSge: return a.toSigned() >= bvArg(args, 1).toSigned();
    case Op::BvSgt: return a.toSigned() > bvArg(args, 1).toSigned();
    default: break;
  }
  throw Error("not a bit-vector operator: " + sym.name);
}

std::optional<Value> applyReal(const Symbol& sym, std::span<const Value> args)
{
  switch (sym.op)
  {
    case Op::RealNeg: return Rational(-realArg(args, 0));
    case Op::RealLeq: return realArg(args, 0) <= realArg(args, 1);
    case Op::RealLt: return realArg(args, 0) < realArg(args, 1);
    case Op::RealGeq: return realArg(args, 0) >= realArg(args, 1);
    case Op::RealGt: return realArg(args, 0) > realArg(args, 1);
    case Op::RealDiv:
      if (realArg(args, 1) == 0) return std::nullopt;
      return Rational(realArg(args, 0) / realArg(args, 1));
    default: break;
  }
  Rational acc = realArg(args, 0);
  for (std::size_t i = 1; i < args.size(); ++i)
  {
    switch (sym.op)
    {
      case Op::RealAdd: acc += realArg(args, i); break;
      case Op::RealSub: acc -= realArg(args, i); break;
      case Op::RealMul: acc *= realArg(args, i); break;
      default: throw Error("not a real operator: " + sym.name);
    }
  }
  return acc;
}

/// Boolean connective over possibly-undefined children.
std::optional<bool> combine(Op op, const std::vector<std::optional<bool>>& ch)
{
  switch (op)
  {
    case Op::Not:
      if (!ch[0]) return std::nullopt;
      return !*ch[0];
    case Op::And:
    {
      bool undefined = false;
      for (const auto& c : ch)
      {
        if (!c) undefined = true;
        else if (!*c) return false;
      }
      if (undefined) return std::nullopt;
      return true;
    }
    case Op::Or:
    {
      bool undefined = false;
      for (const auto& c : ch)
      {
        if (!c) undefined = true;
        else if (*c) return true;
      }
      if (undefined) return std::nullopt;
      return false;
    }
    case Op::Implies:
    {
      // Right associative: a => (b => c).
      std::optional<bool> acc = ch.back();
      for (std::size_t i = ch.size() - 1; i-- > 0;)
      {
        const auto& a = ch[i];
        if ((a && !*a) || (acc && *acc)) acc = true;
        else if (!a || !acc) acc = std::nullopt;
        else acc = false;
      }
      return acc;
    }
    case Op::Xor:
    {
      bool acc = false;
      for (const auto& c : ch)
      {
        if (!c) return std::nullopt;
        acc = acc != *c;
      }
      return acc;
    }
    case Op::Eq:
      if (!ch[0] || !ch[1]) return std::nullopt;
      return *ch[0] == *ch[1];
    default: break;
  }
  return std::nullopt;
}

std::optional<Value> evalRec(const Term& t, const VarLookup& lookup, FpOpCache* cache, Model* record)
{
  const Node& n = *t;
  std::optional<Value> result;
  if (n.isLiteral())
  {
    return n.symbol.value;
  }
  if (n.isVariable())
  {
    if (const Value* v = lookup(n)) result = *v;
  }
  else if (isBooleanConnective(n))
  {
    std::vector<std::optional<bool>> ch;
    ch.reserve(n.children.size());
    for (const Term& c : n.children)
    {
      auto v = evalRec(c, lookup, cache, record);
      ch.push_back(v ? std::optional<bool>(std::get<bool>(*v)) : std::nullopt);
      // Without recording, stop at the first decisive child.
      if (!record && ch.back())
      {
        if ((n.op() == Op::And && !*ch.back()) || (n.op() == Op::Or && *ch.back())) break;
      }
    }
    if (ch.size() < n.children.size())
    {
      result = n.op() == Op::Or;
    }
    else if (auto b = combine(n.op(), ch))
    {
      result = *b;
    }
  }
  else
  {
    std::vector<Value> args;
    args.reserve(n.children.size());
    bool undefined = false;
    for (const Term& c : n.children)
    {
      auto v = evalRec(c, lookup, cache, record);
      if (!v)
      {
        undefined = true;
        if (!record) break;
      }
      else
      {
        args.push_back(std::move(*v));
      }
    }
    if (!undefined) result = applyOp(n.symbol, args, cache);
  }
  if (record && result && !n.label.id.empty()) record->set(n.label, *result);
  return result;
}

}  // namespace

struct FpOpCache::Impl
{
  std::unordered_map<CacheKey, FpLiteral, CacheKeyHash> table;
};

FpOpCache::FpOpCache() : d_impl(std::make_unique<Impl>()) {}
FpOpCache::~FpOpCache() = default;

std::size_t FpOpCache::size() const { return d_impl->table.size(); }

FpLiteral FpOpCache::eval(FpOp op, RoundingMode rm, std::span<const FpLiteral> args,
                          std::optional<FpFormat> target)
{
  const FpFormat fmt = args[0].format();
  const FpFormat out = target.value_or(fmt);
  if (fmt.totalBits() > kCacheMaxBits || args.size() > 3 || out.ebits > 255 || out.sbits > 255)
    return fpEval(op, rm, args, target);
  std::uint64_t packed = 0;
  for (std::size_t i = 0; i < args.size(); ++i)
  {
    if (args[i].format() != fmt) return fpEval(op, rm, args, target);
    packed |= args[i].bits() << (16 * i);
  }
  const std::uint64_t meta = static_cast<std::uint64_t>(op) | (static_cast<std::uint64_t>(rm) << 8)
                             | (static_cast<std::uint64_t>(fmt.ebits) << 16)
                             | (static_cast<std::uint64_t>(fmt.sbits) << 24)
                             | (static_cast<std::uint64_t>(out.ebits) << 32)
                             | (static_cast<std::uint64_t>(out.sbits) << 40)
                             | (static_cast<std::uint64_t>(args.size()) << 48);
  const CacheKey key{meta, packed};
  auto it = d_impl->table.find(key);
  if (it != d_impl->table.end()) return it->second;
  FpLiteral r = fpEval(op, rm, args, target);
  d_impl->table.emplace(key, r);
  return r;
}

std::optional<Value> applyOp(const Symbol& sym, std::span<const Value> args, FpOpCache* cache)
{
  switch (sym.kind())
  {
    case SymbolKind::FpOperation:
    {
      const bool rounded = sym.op != Op::FpNeg && sym.op != Op::FpAbs;
      const RoundingMode rm = rounded ? std::get<RoundingMode>(args[0]) : RoundingMode::RNE;
      std::vector<FpLiteral> operands;
      for (std::size_t i = rounded ? 1 : 0; i < args.size(); ++i) operands.push_back(fpArg(args, i));
      std::optional<FpFormat> target;
      if (sym.op == Op::FpToFp) target = FpFormat{sym.indices[0], sym.indices[1]};
      const FpOp op = toFpOp(sym.op);
      return cache ? cache->eval(op, rm, operands, target) : fpEval(op, rm, operands, target);
    }
    case SymbolKind::FpPredicate:
    {
      std::vector<FpLiteral> operands;
      for (std::size_t i = 0; i < args.size(); ++i) operands.push_back(fpArg(args, i));
      return fpCompare(toFpPred(sym.op), operands);
    }
    case SymbolKind::Equality: return args[0] == args[1];
    case SymbolKind::BvOperation: return applyBv(sym, args);
    case SymbolKind::RealOperation: return applyReal(sym, args);
    case SymbolKind::BooleanConnective:
    {
      std::vector<std::optional<bool>> ch;
      for (const Value& v : args) ch.emplace_back(std::get<bool>(v));
      if (auto b = combine(sym.op, ch)) return *b;
      return std::nullopt;
    }
    default: break;
  }
  throw Error("cannot apply symbol " + sym.name);
}

std::optional<Value> evaluate(const Term& t, const VarLookup& lookup, FpOpCache* cache)
{
  return evalRec(t, lookup, cache, nullptr);
}

std::optional<Value> evaluate(const Term& t, const Model& model, FpOpCache* cache)
{
  return evalRec(t, [&](const Node& var) { return model.find(var.label); }, cache, nullptr);
}

std::optional<bool> evalBool(const Term& t, const Model& model)
{
  assert(t->sort().isBool());
  auto v = evaluate(t, model);
  if (!v) return std::nullopt;
  return std::get<bool>(*v);
}

Model evaluateAll(const std::vector<Term>& terms, const Model& vars, FpOpCache* cache)
{
  Model out;
  const VarLookup lookup = [&](const Node& var) { return vars.find(var.label); };
  for (const Term& t : terms) evalRec(t, lookup, cache, &out);
  return out;
}

bool satisfiesAll(const std::vector<Term>& assertions, const Model& model)
{
  for (const Term& a : assertions)
  {
    auto v = evalBool(a, model);
    if (!v || !*v) return false;
  }
  return true;
}

}  // namespace approxsmt
