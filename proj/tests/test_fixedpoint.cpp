#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>

#include "approxsmt/errors.hpp"
#include "approxsmt/eval.hpp"
#include "approxsmt/fixedpoint.hpp"
#include "approxsmt/harness.hpp"
#include "approxsmt/smtlib.hpp"

using namespace approxsmt;

namespace {

const FpFormat kSingle{8, 24};
const FixedPointFormat k55{5, 5};
const FixedPointFormat k33{3, 3};

Formula exampleOne() { return readFormulaFile(std::string(APPROXSMT_TEST_DATA) + "/ex1.smt2"); }

FpLiteral f32(const Rational& q) { return fromRational(q, kSingle, RoundingMode::RNE); }

BvValue bits(const char* s)
{
  return BvValue(static_cast<int>(std::string(s).size()), mpz_class(s, 2));
}

// Host-integer model of a w-bit two's-complement carrier.
std::int64_t wrapSigned(std::int64_t v, int w)
{
  const std::int64_t m = std::int64_t{1} << w;
  v = ((v % m) + m) % m;
  return v >= m / 2 ? v - m : v;
}

std::int64_t floorDiv(std::int64_t a, std::int64_t b)
{
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// The encoding of `op` over Float16 variables x and y at the (3,3) carrier.
Term encodedBinary(const char* op)
{
  Formula f = parseScript(std::string("(declare-fun x () Float16)(declare-fun y () Float16)(declare-fun r () Float16)"
                                      "(assert (= r ")
                          + op + "))");
  return encodeFixedPointFormula(f, k33).assertions[0]->children[1];
}

std::int64_t evalScaled(const Term& t, std::int64_t a, std::int64_t b)
{
  Model m;
  m.set(variableLabel("x"), BvValue::fromSigned(6, a));
  m.set(variableLabel("y"), BvValue::fromSigned(6, b));
  return std::get<BvValue>(*evaluate(t, m)).toSigned().get_si();
}

}  // namespace

TEST(FixedPointLiteral, ExampleOneConstants)
{
  EXPECT_EQ(encodeFixedPoint(f32(Rational(7, 4)), k55), bits("0000111000"));
  EXPECT_EQ(encodeFixedPoint(f32(2), k55), bits("0001000000"));
  EXPECT_EQ(encodeFixedPoint(f32(-4), k55), bits("1110000000"));
  EXPECT_EQ(encodeFixedPoint(FpLiteral::zero(kSingle), k55), bits("0000000000"));
  EXPECT_EQ(encodeFixedPoint(FpLiteral::zero(kSingle, true), FixedPointFormat{9, 9}), BvValue(18, 0));
}

TEST(FixedPointLiteral, SaturationAndInfinities)
{
  EXPECT_EQ(encodeFixedPoint(f32(Rational(1 << 30)), k55), bits("0111111111"));
  EXPECT_EQ(encodeFixedPoint(f32(-Rational(1 << 30)), k55), bits("1000000000"));
  EXPECT_EQ(encodeFixedPoint(FpLiteral::infinity(kSingle), k55), bits("0111111111"));
  EXPECT_EQ(encodeFixedPoint(FpLiteral::infinity(kSingle, true), k55), bits("1000000000"));
  EXPECT_THROW(encodeFixedPoint(FpLiteral::nan(kSingle), k55), UnsupportedValue);
}

TEST(FixedPointLiteral, NearestGridPointByEnumeration)
{
  // Every Float16 value against a scan over all 1024 (5,5) grid points.
  for (const FpLiteral& v : enumerateSort(FpFormat{5, 11}))
  {
    if (!v.isFinite()) continue;
    // Float16 values and grid points are short dyadic numbers: doubles hold
    // them and their distances exactly.
    const double q = toRational(v)->get_d();
    long best = 0;
    double bestDist = -1;
    for (long n = -512; n < 512; ++n)
    {
      double d = std::fabs(static_cast<double>(n) / 32 - q);
      bool tieToEven = d == bestDist && (n % 2 == 0);
      if (bestDist < 0 || d < bestDist || tieToEven)
      {
        best = n;
        bestDist = d;
      }
    }
    ASSERT_EQ(encodeFixedPoint(v, k55).toSigned(), best) << q;
  }
}

TEST(FixedPointDecode, Examples)
{
  EXPECT_EQ(decodeFixedPoint(bits("0001111000"), k55), Rational(15, 4));
  EXPECT_EQ(decodeFixedPoint(bits("1110000000"), k55), -4);
  EXPECT_EQ(decodeFixedPoint(bits("0000000000"), k55), 0);
  EXPECT_EQ(decodeFixedPoint(bits("0111111111"), k55), Rational(511, 32));
  EXPECT_EQ(decodeFixedPoint(bits("1000000000"), k55), -16);
}

TEST(FixedPointDecode, GridLiteralsRoundTrip)
{
  for (long n = -512; n < 512; ++n)
  {
    Rational q(n, 32);
    q.canonicalize();
    FpLiteral v = f32(q);
    EXPECT_EQ(fromRational(decodeFixedPoint(encodeFixedPoint(v, k55), k55), kSingle, RoundingMode::RNE), v);
  }
}

TEST(FixedPointFormula, ExampleOneAtFiveFive)
{
  Formula f = exampleOne();
  Formula e = encodeFixedPointFormula(f, k55);
  EXPECT_EQ(e.logic, "QF_BV");
  std::string text = printScript(e);
  EXPECT_NE(text.find("(assert (= y (bvadd x #b0000111000)))"), std::string::npos) << text;
  EXPECT_NE(text.find("(assert (bvsge y #b0000000000))"), std::string::npos) << text;
  EXPECT_NE(text.find("(assert (or (= x #b0001000000) (= x #b1110000000)))"), std::string::npos) << text;

  Model m;
  m.set(variableLabel("x"), bits("0001000000"));
  m.set(variableLabel("y"), bits("0001111000"));
  EXPECT_TRUE(satisfiesAll(e.assertions, m));
  Model d = decodeFixedPointModel(f, e, m, k55);
  EXPECT_EQ(d.get(variableLabel("x")), std::optional<Value>(f32(2)));
  EXPECT_EQ(d.get(variableLabel("y")), std::optional<Value>(f32(Rational(15, 4))));
  EXPECT_EQ(d.get(Label{"0.1"}), std::optional<Value>(f32(Rational(15, 4))));
}

TEST(FixedPointFormula, AddAndCompareAreExact)
{
  Term add = encodedBinary("(fp.add RNE x y)");
  Term sub = encodedBinary("(fp.sub RNE x y)");
  Formula cmp = encodeFixedPointFormula(
      parseScript("(declare-fun x () Float16)(declare-fun y () Float16)(assert (fp.geq x y))"), k33);
  for (std::int64_t a = -32; a < 32; ++a)
    for (std::int64_t b = -32; b < 32; ++b)
    {
      if (a + b >= -32 && a + b < 32) EXPECT_EQ(evalScaled(add, a, b), a + b);
      EXPECT_EQ(evalScaled(add, a, b), wrapSigned(a + b, 6));
      EXPECT_EQ(evalScaled(sub, a, b), wrapSigned(a - b, 6));
      Model m;
      m.set(variableLabel("x"), BvValue::fromSigned(6, a));
      m.set(variableLabel("y"), BvValue::fromSigned(6, b));
      EXPECT_EQ(evalBool(cmp.assertions[0], m), a >= b);
    }
}

TEST(FixedPointFormula, MulTruncatesTowardMinusInfinity)
{
  Term mul = encodedBinary("(fp.mul RNE x y)");
  for (std::int64_t a = -32; a < 32; ++a)
    for (std::int64_t b = -32; b < 32; ++b)
      EXPECT_EQ(evalScaled(mul, a, b), wrapSigned(floorDiv(a * b, 8), 6)) << a << '*' << b;
}

TEST(FixedPointFormula, DivTruncatesTowardZero)
{
  Term div = encodedBinary("(fp.div RNE x y)");
  for (std::int64_t a = -32; a < 32; ++a)
    for (std::int64_t b = -32; b < 32; ++b)
    {
      std::int64_t expected = b == 0 ? (a < 0 ? 1 : -1) : wrapSigned((a * 8) / b, 6);
      EXPECT_EQ(evalScaled(div, a, b), expected) << a << '/' << b;
    }
}

TEST(FixedPointFormula, NegAbsFmaAndConversion)
{
  Formula f = parseScript("(declare-fun x () Float16)(declare-fun y () Float16)(declare-fun r () Float16)"
                          "(assert (= r (fp.neg x)))(assert (= r (fp.abs x)))"
                          "(assert (= r (fp.fma RNE x y x)))"
                          "(assert (fp.lt ((_ to_fp 8 24) RNE x) ((_ to_fp 8 24) RNE y)))");
  Formula e = encodeFixedPointFormula(f, k33);
  Term neg = e.assertions[0]->children[1];
  Term abs = e.assertions[1]->children[1];
  Term fma = e.assertions[2]->children[1];
  EXPECT_EQ(e.assertions[3]->children[0]->op(), Op::Var);
  for (std::int64_t a = -32; a < 32; ++a)
  {
    EXPECT_EQ(evalScaled(neg, a, 0), wrapSigned(-a, 6));
    EXPECT_EQ(evalScaled(abs, a, 0), wrapSigned(std::llabs(a), 6));
    for (std::int64_t b = -32; b < 32; ++b)
      EXPECT_EQ(evalScaled(fma, a, b), wrapSigned(floorDiv(a * b, 8) + a, 6));
  }
}

TEST(FixedPointFormula, Unsupported)
{
  const char* d = "(declare-fun x () Float16)(declare-fun r () RoundingMode)";
  EXPECT_THROW(encodeFixedPointFormula(parseScript(std::string(d) + "(assert (fp.isNaN x))"), k55), UnsupportedOp);
  EXPECT_THROW(encodeFixedPointFormula(parseScript(std::string(d) + "(assert (= r RNE))"), k55), UnsupportedOp);
  EXPECT_THROW(encodeFixedPointFormula(parseScript(std::string(d) + "(assert (fp.lt x (_ NaN 5 11)))"), k55),
               UnsupportedValue);
}

TEST(FixedPointFormula, RoundingModeVariablesDecodeToRne)
{
  Formula f = parseScript("(declare-fun x () Float16)(declare-fun r () RoundingMode)"
                          "(assert (fp.lt (fp.add r x x) x))");
  Formula e = encodeFixedPointFormula(f, k55);
  ASSERT_EQ(e.vars.size(), 1u);
  Model m;
  m.set(variableLabel("x"), BvValue::fromSigned(10, -32));
  Model d = decodeFixedPointModel(f, e, m, k55);
  EXPECT_EQ(d.get(variableLabel("r")), std::optional<Value>(RoundingMode::RNE));
  EXPECT_EQ(d.get(variableLabel("x")), std::optional<Value>(fromRational(-1, {5, 11}, RoundingMode::RNE)));
}

TEST(FixedPointRefine, ChainReachesTopInFiveSteps)
{
  EXPECT_EQ(refineFixedPoint(Precision::pair(5, 5)), Precision::pair(9, 9));
  EXPECT_EQ(refineFixedPoint(Precision::pair(21, 21)), Precision::pair(25, 25));
  EXPECT_EQ(refineFixedPoint(Precision::pair(25, 25)), Precision::pair(25, 25));

  FixedPointApproximation a;
  Formula f = exampleOne();
  PrecisionMap p = a.initialPrecision(f);
  EXPECT_EQ(p.uniformValue(), Precision::pair(5, 5));
  int steps = 0;
  while (!p.allTop(a.order()))
  {
    p = a.refineWithProof(f, {}, p);
    ++steps;
  }
  EXPECT_EQ(steps, 5);
  EXPECT_EQ(a.refineWithModel(f, Model{}, Model{}, p), p);
}
