#include <gtest/gtest.h>

#include "approxsmt/errors.hpp"
#include "approxsmt/eval.hpp"
#include "approxsmt/harness.hpp"
#include "approxsmt/real.hpp"
#include "approxsmt/smtlib.hpp"
#include "gen.hpp"

using namespace approxsmt;

namespace {

const FpFormat kSingle{8, 24};

Formula exampleOne() { return readFormulaFile(std::string(APPROXSMT_TEST_DATA) + "/ex1.smt2"); }

FpLiteral f32(const Rational& q) { return fromRational(q, kSingle, RoundingMode::RNE); }

std::size_t nodesWithoutRoundingModes(const Term& t)
{
  std::size_t n = 0;
  postOrder(t, [&](const Term& x) {
    if (!x->sort().isRoundingMode()) ++n;
  });
  return n;
}

bool hasOp(const Term& t, Op op)
{
  bool found = false;
  postOrder(t, [&](const Term& x) { found = found || x->op() == op; });
  return found;
}

}  // namespace

TEST(RealEncoding, ExampleOne)
{
  Formula e = encodeRealFormula(exampleOne());
  EXPECT_EQ(e.logic, "QF_NRA");
  EXPECT_EQ(e.vars[0].sort, Sort::real());
  ASSERT_EQ(e.assertions.size(), 3u);
  EXPECT_EQ(printTerm(e.assertions[0]), "(= y (+ x (/ 7.0 4.0)))");
  EXPECT_EQ(printTerm(e.assertions[1]), "(>= y 0.0)");
  EXPECT_EQ(printTerm(e.assertions[2]), "(or (= x 2.0) (= x (- 4.0)))");
  EXPECT_EQ(e.assertions[0]->children[1]->label.id, "0.1");
}

TEST(RealEncoding, WorkedModelSatisfiesIt)
{
  Formula f = exampleOne();
  Formula e = encodeRealFormula(f);
  Model m;
  m.set(variableLabel("x"), Rational(2));
  m.set(variableLabel("y"), Rational(15, 4));
  EXPECT_TRUE(satisfiesAll(e.assertions, m));
  Model d = decodeRealModel(f, e, m);
  EXPECT_EQ(d.get(variableLabel("x")), std::optional<Value>(f32(2)));
  EXPECT_EQ(d.get(variableLabel("y")), std::optional<Value>(f32(Rational(15, 4))));
  EXPECT_TRUE(satisfiesAll(f.assertions, d));
}

TEST(RealEncoding, SpecialValuesAndUnsupportedOperations)
{
  const char* d = "(declare-fun x () Float16)";
  EXPECT_THROW(encodeRealFormula(parseScript(std::string(d) + "(assert (fp.lt x (_ +oo 5 11)))")), UnsupportedValue);
  EXPECT_THROW(encodeRealFormula(parseScript(std::string(d) + "(assert (fp.lt x (_ NaN 5 11)))")), UnsupportedValue);
  EXPECT_THROW(encodeRealFormula(parseScript(std::string(d) + "(assert (fp.isZero x))")), UnsupportedOp);
  EXPECT_THROW(encodeRealFormula(parseScript(std::string(d) + "(assert (fp.lt x (fp.abs x)))")), UnsupportedOp);
  // Signed zeros are just zero.
  Formula z = encodeRealFormula(parseScript(std::string(d) + "(assert (fp.lt x (_ -zero 5 11)))"));
  EXPECT_EQ(printTerm(z.assertions[0]), "(< x 0.0)");
}

TEST(RealEncoding, ShapeIsPreservedApartFromRoundingModes)
{
  gen::FormulaGen g(31, FpFormat{5, 11});
  int checked = 0;
  for (int i = 0; i < 400; ++i)
  {
    Formula f = g.formula();
    Formula e;
    try
    {
      e = encodeRealFormula(f);
    }
    catch (const UnsupportedValue&)
    {
      continue;
    }
    catch (const UnsupportedOp&)
    {
      continue;
    }
    for (std::size_t k = 0; k < f.assertions.size(); ++k)
    {
      if (hasOp(f.assertions[k], Op::FpFma)) continue;
      EXPECT_EQ(countNodes(e.assertions[k]), nodesWithoutRoundingModes(f.assertions[k])) << printScript(f);
      ++checked;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(RealDecoding, NearestSingleToOneThird)
{
  Formula f = parseScript("(declare-fun x () Float32)(assert (fp.gt x (_ +zero 8 24)))");
  Formula e = encodeRealFormula(f);
  Model m;
  m.set(variableLabel("x"), Rational(1, 3));
  FpLiteral got = std::get<FpLiteral>(*decodeRealModel(f, e, m).get(variableLabel("x")));
  // 1/3 lies in [2^-2, 2^-1), where the spacing is 2^-25. Its neighbours are
  // floor(2^25/3) and that plus one, over 2^25; pick the closer.
  mpz_class scale(1);
  scale <<= 25;
  mpz_class lo = scale / 3;
  Rational below(lo, scale), above(lo + 1, scale);
  Rational third(1, 3);
  Rational nearest = (third - below) < (above - third) ? below : above;
  nearest.canonicalize();
  EXPECT_EQ(*toRational(got), nearest);
  EXPECT_EQ(nearest, Rational(11184811, 33554432));
}

TEST(RealDecoding, EmptyModelAndRoundingModes)
{
  Formula f = parseScript("(declare-fun x () Float16)(declare-fun r () RoundingMode)"
                          "(assert (fp.lt (fp.mul r x x) x))");
  Formula e = encodeRealFormula(f);
  Model d = decodeRealModel(f, e, Model{});
  EXPECT_FALSE(d.contains(variableLabel("x")));
  EXPECT_EQ(d.get(variableLabel("r")), std::optional<Value>(RoundingMode::RNE));
}

TEST(RealDecoding, RepresentableValuesRoundTrip)
{
  for (const FpLiteral& v : enumerateSort(FpFormat{4, 5}))
  {
    if (!v.isFinite() || (v.isZero() && v.sign())) continue;
    EXPECT_EQ(fromRational(*toRational(v), v.format(), RoundingMode::RNE), v);
  }
}

TEST(RealRefine, BottomToTopInOneStep)
{
  RealApproximation a;
  Formula f = exampleOne();
  PrecisionMap p = a.initialPrecision(f);
  EXPECT_EQ(p.uniformValue(), Precision::bottom());
  PrecisionMap q = a.refineWithProof(f, {}, p);
  EXPECT_TRUE(q.allTop(a.order()));
  EXPECT_EQ(a.refineWithModel(f, Model{}, Model{}, q), q);
  EXPECT_EQ(a.order().height(), 1);
}
