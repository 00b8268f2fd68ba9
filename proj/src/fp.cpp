#include "approxsmt/fp.hpp"

#include <algorithm>
#include <array>
#include <cassert>

#include "approxsmt/errors.hpp"

namespace approxsmt {

namespace {

std::uint64_t lowMask(int bits)
{
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

std::string binary(std::uint64_t value, int width)
{
  std::string out(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i)
  {
    if ((value >> i) & 1U) out[static_cast<std::size_t>(width - 1 - i)] = '1';
  }
  return out;
}

mpz_class pow2(unsigned long k)
{
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 2, k);
  return r;
}

/// a * 2^k for possibly negative k.
Rational scaleByPow2(const Rational& a, long k)
{
  Rational r(a);
  if (k >= 0)
    mpq_mul_2exp(r.get_mpq_t(), a.get_mpq_t(), static_cast<unsigned long>(k));
  else
    mpq_div_2exp(r.get_mpq_t(), a.get_mpq_t(), static_cast<unsigned long>(-k));
  return r;
}

/// floor(log2(a)) for a > 0.
long floorLog2(const Rational& a)
{
  long e = static_cast<long>(mpz_sizeinbase(a.get_num_mpz_t(), 2))
           - static_cast<long>(mpz_sizeinbase(a.get_den_mpz_t(), 2));
  // a is now within a factor of two of 2^e.
  if (scaleByPow2(a, -e) < 1) --e;
  return e;
}

FpLiteral overflowResult(FpFormat fmt, bool negative, RoundingMode rm)
{
  switch (rm)
  {
    case RoundingMode::RNE:
    case RoundingMode::RNA: return FpLiteral::infinity(fmt, negative);
    case RoundingMode::RTZ: return FpLiteral::maxFinite(fmt, negative);
    case RoundingMode::RTP:
      return negative ? FpLiteral::maxFinite(fmt, true) : FpLiteral::infinity(fmt, false);
    case RoundingMode::RTN:
      return negative ? FpLiteral::infinity(fmt, true) : FpLiteral::maxFinite(fmt, false);
  }
  return FpLiteral::nan(fmt);
}

/// Sign of an exact zero sum whose operands are not both zeros of equal sign.
FpLiteral exactZero(FpFormat fmt, RoundingMode rm)
{
  return FpLiteral::zero(fmt, rm == RoundingMode::RTN);
}

FpLiteral add(const FpLiteral& a, const FpLiteral& b, RoundingMode rm)
{
  const FpFormat fmt = a.format();
  if (a.isNaN() || b.isNaN()) return FpLiteral::nan(fmt);
  if (a.isInfinite() && b.isInfinite())
    return a.sign() == b.sign() ? a : FpLiteral::nan(fmt);
  if (a.isInfinite()) return a;
  if (b.isInfinite()) return b;
  if (a.isZero() && b.isZero() && a.sign() == b.sign()) return a;
  const Rational q = *toRational(a) + *toRational(b);
  if (q == 0) return exactZero(fmt, rm);
  return fromRational(q, fmt, rm);
}

FpLiteral negate(const FpLiteral& a)
{
  if (a.isNaN()) return FpLiteral::nan(a.format());
  return FpLiteral(a.format(), !a.sign(), a.exponent(), a.significand());
}

FpLiteral mul(const FpLiteral& a, const FpLiteral& b, RoundingMode rm)
{
  const FpFormat fmt = a.format();
  const bool sign = a.sign() != b.sign();
  if (a.isNaN() || b.isNaN()) return FpLiteral::nan(fmt);
  if ((a.isInfinite() && b.isZero()) || (a.isZero() && b.isInfinite())) return FpLiteral::nan(fmt);
  if (a.isInfinite() || b.isInfinite()) return FpLiteral::infinity(fmt, sign);
  if (a.isZero() || b.isZero()) return FpLiteral::zero(fmt, sign);
  return fromRational(*toRational(a) * *toRational(b), fmt, rm);
}

FpLiteral div(const FpLiteral& a, const FpLiteral& b, RoundingMode rm)
{
  const FpFormat fmt = a.format();
  const bool sign = a.sign() != b.sign();
  if (a.isNaN() || b.isNaN()) return FpLiteral::nan(fmt);
  if (a.isInfinite() && b.isInfinite()) return FpLiteral::nan(fmt);
  if (a.isZero() && b.isZero()) return FpLiteral::nan(fmt);
  if (a.isInfinite()) return FpLiteral::infinity(fmt, sign);
  if (b.isInfinite()) return FpLiteral::zero(fmt, sign);
  if (b.isZero()) return FpLiteral::infinity(fmt, sign);
  if (a.isZero()) return FpLiteral::zero(fmt, sign);
  return fromRational(*toRational(a) / *toRational(b), fmt, rm);
}

FpLiteral fma(const FpLiteral& a, const FpLiteral& b, const FpLiteral& c, RoundingMode rm)
{
  const FpFormat fmt = a.format();
  if (a.isNaN() || b.isNaN() || c.isNaN()) return FpLiteral::nan(fmt);
  if ((a.isInfinite() && b.isZero()) || (a.isZero() && b.isInfinite())) return FpLiteral::nan(fmt);
  const bool productSign = a.sign() != b.sign();
  if (a.isInfinite() || b.isInfinite())
  {
    if (c.isInfinite() && c.sign() != productSign) return FpLiteral::nan(fmt);
    return FpLiteral::infinity(fmt, productSign);
  }
  if (c.isInfinite()) return c;
  const Rational product = *toRational(a) * *toRational(b);
  const Rational q = product + *toRational(c);
  if (q == 0)
  {
    if (product == 0 && c.isZero() && productSign == c.sign()) return FpLiteral::zero(fmt, productSign);
    return exactZero(fmt, rm);
  }
  return fromRational(q, fmt, rm);
}

FpLiteral convert(const FpLiteral& a, FpFormat target, RoundingMode rm)
{
  switch (a.classify())
  {
    case FpClass::NaN: return FpLiteral::nan(target);
    case FpClass::Infinity: return FpLiteral::infinity(target, a.sign());
    case FpClass::Zero: return FpLiteral::zero(target, a.sign());
    default: return fromRational(*toRational(a), target, rm);
  }
}

/// Three-way comparison of two non-NaN values.
int compareOrdered(const FpLiteral& a, const FpLiteral& b)
{
  auto rank = [](const FpLiteral& v) {
    if (v.isInfinite()) return v.sign() ? -1 : 1;
    return 0;
  };
  const int ra = rank(a), rb = rank(b);
  if (ra != 0 || rb != 0) return ra < rb ? -1 : (ra > rb ? 1 : 0);
  return cmp(*toRational(a), *toRational(b));
}

}  // namespace

bool isValidFormat(const FpFormat& fmt)
{
  return fmt.ebits >= 2 && fmt.sbits >= 2 && fmt.ebits <= kMaxExponentBits
         && fmt.sbits <= kMaxSignificandBits;
}

FpFormat maxFormat(const FpFormat& a, const FpFormat& b)
{
  return {std::max(a.ebits, b.ebits), std::max(a.sbits, b.sbits)};
}

std::string_view toString(RoundingMode rm)
{
  switch (rm)
  {
    case RoundingMode::RNE: return "RNE";
    case RoundingMode::RNA: return "RNA";
    case RoundingMode::RTP: return "RTP";
    case RoundingMode::RTN: return "RTN";
    case RoundingMode::RTZ: return "RTZ";
  }
  return "?";
}

std::optional<RoundingMode> parseRoundingMode(std::string_view name)
{
  static constexpr std::array<std::pair<std::string_view, RoundingMode>, 10> kNames{{
      {"RNE", RoundingMode::RNE},
      {"roundNearestTiesToEven", RoundingMode::RNE},
      {"RNA", RoundingMode::RNA},
      {"roundNearestTiesToAway", RoundingMode::RNA},
      {"RTP", RoundingMode::RTP},
      {"roundTowardPositive", RoundingMode::RTP},
      {"RTN", RoundingMode::RTN},
      {"roundTowardNegative", RoundingMode::RTN},
      {"RTZ", RoundingMode::RTZ},
      {"roundTowardZero", RoundingMode::RTZ},
  }};
  for (const auto& [spelling, rm] : kNames)
  {
    if (spelling == name) return rm;
  }
  return std::nullopt;
}

std::int64_t bias(int ebits)
{
  assert(ebits >= 2);
  return (std::int64_t{1} << (ebits - 1)) - 1;
}

FpLiteral::FpLiteral(FpFormat fmt, bool sign, std::uint64_t exponent, std::uint64_t significand)
    : d_fmt(fmt), d_sign(sign), d_exp(exponent), d_sig(significand)
{
  if (!isValidFormat(fmt))
    throw RangeError("invalid floating-point format (" + std::to_string(fmt.ebits) + ","
                     + std::to_string(fmt.sbits) + ")");
  if ((exponent & ~lowMask(fmt.ebits)) != 0 || (significand & ~lowMask(fmt.sbits - 1)) != 0)
    throw RangeError("floating-point field wider than its format");
}

FpLiteral FpLiteral::zero(FpFormat fmt, bool negative) { return {fmt, negative, 0, 0}; }

FpLiteral FpLiteral::infinity(FpFormat fmt, bool negative)
{
  return {fmt, negative, lowMask(fmt.ebits), 0};
}

FpLiteral FpLiteral::nan(FpFormat fmt)
{
  return {fmt, false, lowMask(fmt.ebits), std::uint64_t{1} << (fmt.sbits - 2)};
}

FpLiteral FpLiteral::maxFinite(FpFormat fmt, bool negative)
{
  return {fmt, negative, lowMask(fmt.ebits) - 1, lowMask(fmt.sbits - 1)};
}

FpLiteral FpLiteral::fromBits(FpFormat fmt, std::uint64_t bits)
{
  const int sigBits = fmt.sbits - 1;
  const std::uint64_t sig = bits & lowMask(sigBits);
  const std::uint64_t exp = (bits >> sigBits) & lowMask(fmt.ebits);
  const bool sign = ((bits >> (sigBits + fmt.ebits)) & 1U) != 0;
  return {fmt, sign, exp, sig};
}

std::uint64_t FpLiteral::bits() const
{
  assert(d_fmt.totalBits() <= 64);
  const int sigBits = d_fmt.sbits - 1;
  std::uint64_t out = d_sig | (d_exp << sigBits);
  if (d_sign) out |= std::uint64_t{1} << (sigBits + d_fmt.ebits);
  return out;
}

FpClass FpLiteral::classify() const
{
  if (d_exp == 0) return d_sig == 0 ? FpClass::Zero : FpClass::Subnormal;
  if (d_exp == lowMask(d_fmt.ebits)) return d_sig == 0 ? FpClass::Infinity : FpClass::NaN;
  return FpClass::Normal;
}

bool FpLiteral::isFinite() const
{
  const FpClass c = classify();
  return c != FpClass::Infinity && c != FpClass::NaN;
}

bool FpLiteral::operator==(const FpLiteral& other) const
{
  if (d_fmt != other.d_fmt) return false;
  if (isNaN() || other.isNaN()) return isNaN() && other.isNaN();
  return d_sign == other.d_sign && d_exp == other.d_exp && d_sig == other.d_sig;
}

std::string FpLiteral::toSmtLib() const
{
  if (isNaN())
    return "(_ NaN " + std::to_string(d_fmt.ebits) + " " + std::to_string(d_fmt.sbits) + ")";
  return "(fp #b" + std::string(d_sign ? "1" : "0") + " #b" + binary(d_exp, d_fmt.ebits) + " #b"
         + binary(d_sig, d_fmt.sbits - 1) + ")";
}

std::optional<Rational> toRational(const FpLiteral& v)
{
  const FpClass c = v.classify();
  if (c == FpClass::Infinity || c == FpClass::NaN) return std::nullopt;
  if (c == FpClass::Zero) return Rational(0);
  const FpFormat fmt = v.format();
  const int sigBits = fmt.sbits - 1;
  mpz_class mant(static_cast<unsigned long>(v.significand()));
  long exp;
  if (c == FpClass::Subnormal)
  {
    exp = 1 - static_cast<long>(bias(fmt.ebits));
  }
  else
  {
    mant += pow2(static_cast<unsigned long>(sigBits));
    exp = static_cast<long>(v.exponent()) - static_cast<long>(bias(fmt.ebits));
  }
  Rational r = scaleByPow2(Rational(mant), exp - sigBits);
  if (v.sign()) r = -r;
  return r;
}

FpLiteral fromRational(const Rational& q, FpFormat fmt, RoundingMode rm)
{
  if (q == 0) return FpLiteral::zero(fmt);
  const bool negative = q < 0;
  const Rational a = abs(q);
  const long sigBits = fmt.sbits - 1;
  const long emax = static_cast<long>(bias(fmt.ebits));
  const long emin = 1 - emax;

  long e = std::max(floorLog2(a), emin);
  if (e > emax) return overflowResult(fmt, negative, rm);

  // a = (n + frac) * 2^(e - sigBits) with n integral and 0 <= frac < 1.
  const Rational scaled = scaleByPow2(a, sigBits - e);
  mpz_class n;
  mpz_fdiv_q(n.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  const Rational frac = scaled - Rational(n);

  bool up = false;
  if (frac != 0)
  {
    const int half = cmp(frac, Rational(1, 2));
    switch (rm)
    {
      case RoundingMode::RNE: up = half > 0 || (half == 0 && mpz_odd_p(n.get_mpz_t())); break;
      case RoundingMode::RNA: up = half >= 0; break;
      case RoundingMode::RTP: up = !negative; break;
      case RoundingMode::RTN: up = negative; break;
      case RoundingMode::RTZ: up = false; break;
    }
  }
  if (up) ++n;

  const mpz_class hidden = pow2(static_cast<unsigned long>(sigBits));
  if (n == 2 * hidden)
  {
    n = hidden;
    ++e;
    if (e > emax) return overflowResult(fmt, negative, rm);
  }
  if (n == 0) return FpLiteral::zero(fmt, negative);
  if (n < hidden)
  {
    // Only reachable at e == emin: a subnormal.
    return {fmt, negative, 0, n.get_ui()};
  }
  const mpz_class stored = n - hidden;
  return {fmt, negative, static_cast<std::uint64_t>(e + emax), stored.get_ui()};
}

FpLiteral fpEval(FpOp op, RoundingMode rm, std::span<const FpLiteral> args,
                 std::optional<FpFormat> target)
{
  auto arg = [&](std::size_t i) -> const FpLiteral& {
    assert(i < args.size());
    return args[i];
  };
  switch (op)
  {
    case FpOp::Add: return add(arg(0), arg(1), rm);
    case FpOp::Sub: return add(arg(0), negate(arg(1)), rm);
    case FpOp::Mul: return mul(arg(0), arg(1), rm);
    case FpOp::Div: return div(arg(0), arg(1), rm);
    case FpOp::Fma: return fma(arg(0), arg(1), arg(2), rm);
    case FpOp::Neg: return negate(arg(0));
    case FpOp::Abs:
      if (arg(0).isNaN()) return FpLiteral::nan(arg(0).format());
      return {arg(0).format(), false, arg(0).exponent(), arg(0).significand()};
    case FpOp::Convert: return convert(arg(0), target.value_or(arg(0).format()), rm);
  }
  return FpLiteral::nan(arg(0).format());
}

bool fpCompare(FpPred pred, std::span<const FpLiteral> args)
{
  const FpLiteral& a = args[0];
  switch (pred)
  {
    case FpPred::IsNaN: return a.isNaN();
    case FpPred::IsInfinite: return a.isInfinite();
    case FpPred::IsZero: return a.isZero();
    case FpPred::IsNormal: return a.classify() == FpClass::Normal;
    case FpPred::IsSubnormal: return a.classify() == FpClass::Subnormal;
    case FpPred::IsNegative: return !a.isNaN() && a.sign();
    case FpPred::IsPositive: return !a.isNaN() && !a.sign();
    default: break;
  }
  const FpLiteral& b = args[1];
  if (a.isNaN() || b.isNaN()) return false;
  const int c = compareOrdered(a, b);
  switch (pred)
  {
    case FpPred::Eq: return c == 0;
    case FpPred::Leq: return c <= 0;
    case FpPred::Lt: return c < 0;
    case FpPred::Geq: return c >= 0;
    case FpPred::Gt: return c > 0;
    default: return false;
  }
}

std::vector<FpLiteral> enumerateSort(FpFormat fmt, std::uint64_t bound)
{
  if (fmt.totalBits() >= 64 || (std::uint64_t{1} << fmt.totalBits()) > bound)
    throw SortTooLarge("cannot enumerate (" + std::to_string(fmt.ebits) + ","
                       + std::to_string(fmt.sbits) + "): more than " + std::to_string(bound)
                       + " values");
  const std::uint64_t count = std::uint64_t{1} << fmt.totalBits();
  std::vector<FpLiteral> out;
  out.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits) out.push_back(FpLiteral::fromBits(fmt, bits));
  return out;
}

std::string toString(const Rational& q) { return q.get_str(); }

}  // namespace approxsmt
