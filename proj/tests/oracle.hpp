// Reference implementations for tests. They work on raw bit patterns and
// brute-force search so they share no code with the library's rounding.

#ifndef APPROXSMT_TESTS_ORACLE_HPP
#define APPROXSMT_TESTS_ORACLE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "approxsmt/fp.hpp"

namespace oracle {

using approxsmt::FpFormat;
using approxsmt::RoundingMode;

inline mpq_class pow2(long k)
{
  mpz_class p(1);
  if (k >= 0)
  {
    p <<= static_cast<mp_bitcnt_t>(k);
    return mpq_class(p);
  }
  p <<= static_cast<mp_bitcnt_t>(-k);
  return mpq_class(1) / mpq_class(p);
}

struct Fields
{
  bool sign;
  std::uint64_t exp;
  std::uint64_t frac;
};

inline Fields split(FpFormat f, std::uint64_t bits)
{
  std::uint64_t fracMask = (std::uint64_t{1} << (f.sbits - 1)) - 1;
  std::uint64_t expMask = (std::uint64_t{1} << f.ebits) - 1;
  return {((bits >> (f.ebits + f.sbits - 1)) & 1) != 0, (bits >> (f.sbits - 1)) & expMask, bits & fracMask};
}

inline std::uint64_t join(FpFormat f, bool sign, std::uint64_t exp, std::uint64_t frac)
{
  return (std::uint64_t{sign} << (f.ebits + f.sbits - 1)) | (exp << (f.sbits - 1)) | frac;
}

inline long biasOf(FpFormat f) { return (1L << (f.ebits - 1)) - 1; }
inline std::uint64_t allOnes(FpFormat f) { return (std::uint64_t{1} << f.ebits) - 1; }

inline bool isNaN(FpFormat f, std::uint64_t b)
{
  Fields x = split(f, b);
  return x.exp == allOnes(f) && x.frac != 0;
}
inline bool isInf(FpFormat f, std::uint64_t b)
{
  Fields x = split(f, b);
  return x.exp == allOnes(f) && x.frac == 0;
}
inline bool isZero(FpFormat f, std::uint64_t b)
{
  Fields x = split(f, b);
  return x.exp == 0 && x.frac == 0;
}

/// (-1)^s * m * 2^e read straight off the fields.
inline std::optional<mpq_class> value(FpFormat f, std::uint64_t b)
{
  Fields x = split(f, b);
  if (x.exp == allOnes(f)) return std::nullopt;
  mpq_class frac = mpq_class(mpz_class(static_cast<unsigned long>(x.frac))) * pow2(-(f.sbits - 1));
  mpq_class v = x.exp == 0 ? mpq_class(frac * pow2(1 - biasOf(f)))
                            : mpq_class((1 + frac) * pow2(static_cast<long>(x.exp) - biasOf(f)));
  return x.sign ? mpq_class(-v) : v;
}

inline std::uint64_t infBits(FpFormat f, bool neg) { return join(f, neg, allOnes(f), 0); }
inline std::uint64_t nanBits(FpFormat f) { return join(f, false, allOnes(f), std::uint64_t{1} << (f.sbits - 2)); }
inline std::uint64_t maxBits(FpFormat f, bool neg)
{
  return join(f, neg, allOnes(f) - 1, (std::uint64_t{1} << (f.sbits - 1)) - 1);
}

/**
 * Rounds a nonzero rational by scanning every finite value of the format.
 * Nearest modes see one extra candidate just above the largest finite value
 * (the next power of two, with an even significand) that stands for infinity.
 */
struct Candidate
{
  mpq_class v;
  std::uint64_t bits;
  bool even;
};

/// Every finite value of the format, computed once per format.
inline const std::vector<Candidate>& finiteValues(FpFormat f)
{
  static std::map<std::pair<int, int>, std::vector<Candidate>> cache;
  auto [it, fresh] = cache.try_emplace({f.ebits, f.sbits});
  if (fresh)
  {
    const std::uint64_t count = std::uint64_t{1} << (f.ebits + f.sbits);
    for (std::uint64_t b = 0; b < count; ++b)
    {
      if (std::optional<mpq_class> v = value(f, b)) it->second.push_back({*v, b, (b & 1) == 0});
    }
  }
  return it->second;
}

inline std::uint64_t round(const mpq_class& q, FpFormat f, RoundingMode rm)
{
  const bool neg = q < 0;
  using Cand = Candidate;
  std::vector<const Cand*> cands;
  for (const Cand& c : finiteValues(f))
  {
    // Zeros carry the sign of the rounded quantity.
    if (isZero(f, c.bits) && split(f, c.bits).sign != neg) continue;
    cands.push_back(&c);
  }
  mpq_class beyond = pow2(static_cast<long>(allOnes(f) - 1) - biasOf(f) + 1);
  mpq_class maxFinite = *value(f, maxBits(f, false));

  if (rm == RoundingMode::RNE || rm == RoundingMode::RNA)
  {
    const Cand up{beyond, infBits(f, false), true};
    const Cand down{mpq_class(-beyond), infBits(f, true), true};
    cands.push_back(&up);
    cands.push_back(&down);
    const Cand* best = nullptr;
    mpq_class bestDist;
    for (const Cand* cp : cands)
    {
      const Cand& c = *cp;
      mpq_class d = abs(c.v - q);
      if (!best || d < bestDist)
      {
        best = &c;
        bestDist = d;
        continue;
      }
      if (d == bestDist)
      {
        bool prefer = rm == RoundingMode::RNE ? c.even && !best->even : abs(c.v) > abs(best->v);
        if (prefer) best = &c;
      }
    }
    return best->bits;
  }

  bool up = rm == RoundingMode::RTP || (rm == RoundingMode::RTZ && neg);
  if (q > maxFinite) return up ? infBits(f, false) : maxBits(f, false);
  if (q < -maxFinite) return up ? maxBits(f, true) : infBits(f, true);
  const Cand* best = nullptr;
  for (const Cand* cp : cands)
  {
    const Cand& c = *cp;
    if (up ? c.v < q : c.v > q) continue;
    if (!best || (up ? c.v < best->v : c.v > best->v)) best = &c;
  }
  return best->bits;
}

enum class Arith { Add, Sub, Mul, Div };

/// IEEE-754 result of a binary operation, as a bit pattern.
inline std::uint64_t arith(Arith op, RoundingMode rm, FpFormat f, std::uint64_t a, std::uint64_t b)
{
  if (isNaN(f, a) || isNaN(f, b)) return nanBits(f);
  bool sa = split(f, a).sign;
  bool sb = split(f, b).sign;
  if (op == Arith::Sub)
  {
    b ^= std::uint64_t{1} << (f.ebits + f.sbits - 1);
    sb = !sb;
    op = Arith::Add;
  }
  switch (op)
  {
    case Arith::Add:
    {
      if (isInf(f, a) && isInf(f, b)) return sa == sb ? a : nanBits(f);
      if (isInf(f, a)) return a;
      if (isInf(f, b)) return b;
      mpq_class r = *value(f, a) + *value(f, b);
      if (r == 0)
      {
        // Two zeros of one sign keep it; every other exact zero is +0, or -0 when rounding down.
        bool neg = isZero(f, a) && isZero(f, b) && sa == sb ? sa : rm == RoundingMode::RTN;
        return join(f, neg, 0, 0);
      }
      return round(r, f, rm);
    }
    case Arith::Mul:
    {
      bool s = sa != sb;
      if ((isInf(f, a) && isZero(f, b)) || (isZero(f, a) && isInf(f, b))) return nanBits(f);
      if (isInf(f, a) || isInf(f, b)) return infBits(f, s);
      mpq_class r = *value(f, a) * *value(f, b);
      if (r == 0) return join(f, s, 0, 0);
      return round(r, f, rm);
    }
    case Arith::Div:
    {
      bool s = sa != sb;
      if ((isInf(f, a) && isInf(f, b)) || (isZero(f, a) && isZero(f, b))) return nanBits(f);
      if (isInf(f, a)) return infBits(f, s);
      if (isInf(f, b)) return join(f, s, 0, 0);
      if (isZero(f, b)) return infBits(f, s);
      mpq_class r = *value(f, a) / *value(f, b);
      if (r == 0) return join(f, s, 0, 0);
      return round(r, f, rm);
    }
    default: break;
  }
  return nanBits(f);
}

}  // namespace oracle

#endif
