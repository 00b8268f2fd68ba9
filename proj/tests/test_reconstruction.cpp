#include <gtest/gtest.h>

#include "approxsmt/eval.hpp"
#include "approxsmt/reconstruction.hpp"
#include "approxsmt/smtlib.hpp"
#include "gen.hpp"

using namespace approxsmt;

namespace {

const FpFormat kSingle{8, 24};

FpLiteral f32(const Rational& q) { return fromRational(q, kSingle, RoundingMode::RNE); }

Formula exampleOne()
{
  return parseScript("(declare-fun x () Float32)(declare-fun y () Float32)"
                     "(assert (= y (fp.add RNE x ((_ to_fp 8 24) RNE 1.75))))"
                     "(assert (fp.geq y ((_ to_fp 8 24) RNE 0.0)))"
                     "(assert (or (= x ((_ to_fp 8 24) RNE 2.0)) (= x ((_ to_fp 8 24) RNE (- 4.0)))))");
}

// What the (3,3) model {x -> 2, y -> 4} decodes to: the sum 2 + 1.75 rounds up to 4.
Model exampleOneDecoded()
{
  Model m;
  m.set(variableLabel("x"), f32(2));
  m.set(variableLabel("y"), f32(4));
  m.set(Label{"0.1"}, f32(4));
  return m;
}

Rational valueOf(const Model& m, const char* var)
{
  return *toRational(std::get<FpLiteral>(*m.get(variableLabel(var))));
}

std::vector<std::string> printed(const std::vector<CriticalAtom>& atoms)
{
  std::vector<std::string> out;
  for (const CriticalAtom& a : atoms) out.push_back(printTerm(a.atom));
  return out;
}

/// Random values for every variable of `f`.
Model randomVars(const Formula& f, gen::FormulaGen& g)
{
  Model m;
  for (const VarDecl& v : f.vars)
  {
    std::vector<FpLiteral> all = enumerateSort(v.sort.fpFormat());
    m.set(v.label(), all[static_cast<std::size_t>(g.pick(static_cast<int>(all.size())))]);
  }
  return m;
}

}  // namespace

TEST(CriticalAtoms, ExampleOne)
{
  Formula f = exampleOne();
  std::vector<CriticalAtom> atoms = extractCriticalAtoms(f.assertions, exampleOneDecoded());
  ASSERT_EQ(atoms.size(), 4u);
  EXPECT_EQ(atoms[0].atom.get(), f.assertions[0].get());
  EXPECT_TRUE(atoms[0].polarity && atoms[0].binding);
  EXPECT_TRUE(atoms[1].polarity && atoms[1].binding);
  EXPECT_TRUE(atoms[2].polarity && atoms[2].binding);
  EXPECT_FALSE(atoms[3].polarity);
  EXPECT_FALSE(atoms[3].binding);
}

TEST(CriticalAtoms, TrivialShapes)
{
  Formula t = parseScript("(assert true)");
  EXPECT_TRUE(extractCriticalAtoms(t.assertions, Model{}).empty());

  Formula f = parseScript("(declare-fun a () Bool)(declare-fun b () Bool)(assert (and a (not b)))");
  Model m;
  m.set(variableLabel("a"), true);
  m.set(variableLabel("b"), false);
  std::vector<CriticalAtom> atoms = extractCriticalAtoms(f.assertions, m);
  ASSERT_EQ(atoms.size(), 2u);
  EXPECT_TRUE(atoms[0].polarity && atoms[0].binding);
  EXPECT_TRUE(!atoms[1].polarity && atoms[1].binding);
}

TEST(CriticalAtoms, RecordedValueBeatsRecomputation)
{
  Formula f = exampleOne();
  Model m = exampleOneDecoded();
  m.set(Label{"0"}, false);
  EXPECT_EQ(decodedTruth(f.assertions[0], m), false);
  m.erase(Label{"0"});
  EXPECT_EQ(decodedTruth(f.assertions[0], m), true);
}

TEST(CriticalAtoms, UndefinedAtomsAreSkipped)
{
  Formula f = parseScript("(declare-fun x () Float16)(assert (fp.isNaN x))");
  EXPECT_TRUE(extractCriticalAtoms(f.assertions, Model{}).empty());
}

TEST(OrderAtoms, DefinitionFollowsItsDependencies)
{
  Formula f = exampleOne();
  std::vector<CriticalAtom> ordered = orderAtoms(extractCriticalAtoms(f.assertions, exampleOneDecoded()));
  std::vector<std::string> text = printed(ordered);
  ASSERT_EQ(text.size(), 4u);
  EXPECT_EQ(text[0], printTerm(f.assertions[2]->children[0]));  // x = 2.0
  EXPECT_EQ(text[1], printTerm(f.assertions[0]));                // y = x + 1.75
  EXPECT_EQ(text[2], printTerm(f.assertions[1]));                // y >= 0
  EXPECT_EQ(text[3], printTerm(f.assertions[2]->children[1]));   // x = -4.0, non-binding
}

TEST(OrderAtoms, WithoutDefinitionsInputOrderIsKept)
{
  Formula f = parseScript("(declare-fun x () Float16)(declare-fun y () Float16)"
                          "(assert (fp.lt x y))(assert (fp.isNormal y))(assert (fp.gt x y))");
  Model m;
  m.set(variableLabel("x"), fromRational(1, {5, 11}, RoundingMode::RNE));
  m.set(variableLabel("y"), fromRational(2, {5, 11}, RoundingMode::RNE));
  std::vector<CriticalAtom> atoms = extractCriticalAtoms(f.assertions, m);
  EXPECT_EQ(printed(orderAtoms(atoms)), printed(atoms));
}

TEST(OrderAtoms, CyclesBreakByLabel)
{
  Formula f = parseScript("(declare-fun y () Float16)(declare-fun x () Float16)"
                          "(assert (= y x))(assert (= x y))");
  Model m;
  m.set(variableLabel("x"), fromRational(1, {5, 11}, RoundingMode::RNE));
  m.set(variableLabel("y"), fromRational(1, {5, 11}, RoundingMode::RNE));
  std::vector<CriticalAtom> ordered = orderAtoms(extractCriticalAtoms(f.assertions, m));
  ASSERT_EQ(ordered.size(), 2u);
  EXPECT_EQ(ordered[0].atom->label.id, "0");
  EXPECT_EQ(ordered[1].atom->label.id, "1");
  EXPECT_EQ(valueOf(reconstructModel(f, m), "x"), 1);
}

TEST(OrderAtoms, ChainInReverseInputOrder)
{
  Formula f = parseScript("(declare-fun x () Float16)(declare-fun y () Float16)(declare-fun z () Float16)"
                          "(assert (= z (fp.neg y)))(assert (= y (fp.neg x)))(assert (= x (fp #b0 #b01111 #b0000000000)))");
  Model m;
  for (const char* v : {"x", "y", "z"}) m.set(variableLabel(v), FpLiteral::zero({5, 11}));
  m.set(Label{"0"}, true);
  m.set(Label{"1"}, true);
  m.set(Label{"2"}, true);
  std::vector<CriticalAtom> ordered = orderAtoms(extractCriticalAtoms(f.assertions, m));
  ASSERT_EQ(ordered.size(), 3u);
  EXPECT_EQ(ordered[0].atom->label.id, "2");
  EXPECT_EQ(ordered[1].atom->label.id, "1");
  EXPECT_EQ(ordered[2].atom->label.id, "0");
}

TEST(EqualityAsAssignment, Conditions)
{
  Formula f = exampleOne();
  const Node& eq = *f.assertions[0];
  Model decoded = exampleOneDecoded();

  Model candidate;
  candidate.set(variableLabel("x"), f32(2));
  candidate.set(Label{"0.1"}, f32(Rational(15, 4)));
  EXPECT_TRUE(equalityAsAssignment(eq, decoded, candidate));
  EXPECT_EQ(valueOf(candidate, "y"), Rational(15, 4));

  // Both sides assigned.
  EXPECT_FALSE(equalityAsAssignment(eq, decoded, candidate));

  // Decoded false.
  Model falseDecoded = decoded;
  falseDecoded.set(Label{"0"}, false);
  Model fresh;
  fresh.set(Label{"0.1"}, f32(1));
  EXPECT_FALSE(equalityAsAssignment(eq, falseDecoded, fresh));
  EXPECT_FALSE(fresh.contains(variableLabel("y")));

  // Other side undefined in the candidate.
  Model empty;
  EXPECT_FALSE(equalityAsAssignment(eq, decoded, empty));
  EXPECT_TRUE(empty.empty());
}

TEST(EqualityAsAssignment, BothSidesUnassignedTakesRightFromDecoded)
{
  Formula f = parseScript("(declare-fun x () Float16)(declare-fun y () Float16)(assert (= x y))");
  Model decoded;
  decoded.set(variableLabel("x"), fromRational(3, {5, 11}, RoundingMode::RNE));
  decoded.set(variableLabel("y"), fromRational(5, {5, 11}, RoundingMode::RNE));
  decoded.set(Label{"0"}, true);
  Model candidate;
  EXPECT_TRUE(equalityAsAssignment(*f.assertions[0], decoded, candidate));
  EXPECT_EQ(valueOf(candidate, "x"), 5);
  EXPECT_EQ(valueOf(candidate, "y"), 5);
}

TEST(Reconstruct, ExampleOneRemovesTheRoundingError)
{
  Formula f = exampleOne();
  Model m = reconstructModel(f, exampleOneDecoded());
  EXPECT_EQ(valueOf(m, "x"), 2);
  EXPECT_EQ(valueOf(m, "y"), Rational(15, 4));
  EXPECT_TRUE(satisfiesAll(f.assertions, m));
  EXPECT_EQ(m.size(), 2u);
}

TEST(Reconstruct, InequalitiesCopyDecodedValues)
{
  Formula f = parseScript("(declare-fun x () Float32)(assert (fp.geq x ((_ to_fp 8 24) RNE 1.0)))");
  Model d;
  d.set(variableLabel("x"), f32(2));
  EXPECT_EQ(reconstructModel(f, d), d);
}

TEST(Reconstruct, NonBindingEqualitiesDoNotAssign)
{
  // The conjunction is false, so its true conjunct cannot matter.
  Formula f = parseScript("(declare-fun x () Float32)(declare-fun y () Float32)"
                          "(assert (and (= y ((_ to_fp 8 24) RNE 1.0)) (fp.isNaN x)))");
  Model d;
  d.set(variableLabel("x"), f32(1));
  d.set(variableLabel("y"), f32(2));
  d.set(Label{"0.0"}, true);
  Model m = reconstructModel(f, d);
  EXPECT_EQ(valueOf(m, "y"), 2);

  Formula g = parseScript("(declare-fun x () Float32)(declare-fun y () Float32)"
                          "(assert (or (= y ((_ to_fp 8 24) RNE 1.0)) (fp.isNaN x)))");
  EXPECT_EQ(valueOf(reconstructModel(g, d), "y"), 1);
}

TEST(Reconstruct, FirstBindingWins)
{
  Formula f = parseScript("(declare-fun x () Float32)"
                          "(assert (= x ((_ to_fp 8 24) RNE 1.0)))(assert (= x ((_ to_fp 8 24) RNE 2.0)))");
  Model d;
  d.set(variableLabel("x"), f32(1));
  d.set(Label{"0"}, true);
  d.set(Label{"1"}, true);
  EXPECT_EQ(valueOf(reconstructModel(f, d), "x"), 1);
}

TEST(ReconstructProperty, Deterministic)
{
  gen::FormulaGen g(11);
  for (int i = 0; i < 300; ++i)
  {
    g.setFormat(i % 2 ? FpFormat{3, 4} : FpFormat{3, 3});
    std::string text = g.script();
    Formula f = parseScript(text);
    Model d = evaluateAll(f.assertions, randomVars(f, g));
    // Scramble a node value so that the decoded model is inconsistent.
    for (const auto& [id, v] : d.entries())
    {
      if (std::holds_alternative<bool>(v) && g.coin(30)) d.set(Label{id}, !std::get<bool>(v));
    }
    Model first = reconstructModel(f, d);
    EXPECT_EQ(first, reconstructModel(parseScript(text), d)) << text;
  }
}

TEST(ReconstructProperty, SatisfyingDecodedModelsStaySatisfied)
{
  gen::FormulaGen g(12);
  int cases = 0;
  for (int i = 0; i < 3000 && cases < 300; ++i)
  {
    g.setFormat(i % 2 ? FpFormat{3, 4} : FpFormat{3, 3});
    Formula f = g.formula();
    for (int attempt = 0; attempt < 40; ++attempt)
    {
      Model vars = randomVars(f, g);
      if (!satisfiesAll(f.assertions, vars)) continue;
      ++cases;
      Model m = reconstructModel(f, evaluateAll(f.assertions, vars));
      EXPECT_TRUE(satisfiesAll(f.assertions, m)) << printScript(f);
      break;
    }
  }
  EXPECT_EQ(cases, 300);
}

TEST(ReconstructProperty, DefinitionalChainsHoldExactly)
{
  gen::FormulaGen g(13);
  for (int i = 0; i < 300; ++i)
  {
    g.setFormat(i % 2 ? FpFormat{3, 4} : FpFormat{3, 3});
    Formula f = g.chain(2 + g.pick(2));
    Model d = evaluateAll(f.assertions, randomVars(f, g));
    std::vector<Term> chain;
    for (const Term& a : f.assertions)
    {
      if (a->op() != Op::Eq) continue;
      d.set(a->label, true);
      chain.push_back(a);
    }
    Model m = reconstructModel(f, d);
    for (const Term& eq : chain) EXPECT_EQ(evalBool(eq, m), true) << printScript(f);
  }
}
