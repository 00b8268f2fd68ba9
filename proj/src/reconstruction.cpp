#include "approxsmt/reconstruction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "approxsmt/approximation.hpp"
#include "approxsmt/eval.hpp"

namespace approxsmt {

namespace {

std::optional<Value> decodedValue(const Term& t, const Model& decoded)
{
  if (const Value* v = decoded.find(t->label)) return *v;
  if (t->isLiteral()) return t->symbol.value;
  if (t->isVariable()) return std::nullopt;

  std::vector<std::optional<Value>> kids;
  kids.reserve(t->children.size());
  for (const Term& c : t->children) kids.push_back(decodedValue(c, decoded));

  if (t->op() == Op::And || t->op() == Op::Or)
  {
    bool decisive = t->op() == Op::Or;
    bool undefined = false;
    for (const auto& k : kids)
    {
      if (!k) undefined = true;
      else if (std::get<bool>(*k) == decisive) return decisive;
    }
    if (undefined) return std::nullopt;
    return !decisive;
  }

  std::vector<Value> args;
  args.reserve(kids.size());
  for (auto& k : kids)
  {
    if (!k) return std::nullopt;
    args.push_back(std::move(*k));
  }
  return applyOp(t->symbol, args);
}

void collectAtoms(const Term& t, bool binding, const Model& decoded, std::vector<CriticalAtom>& out)
{
  if (t->isLiteral()) return;
  if (!isBooleanConnective(*t))
  {
    std::optional<bool> v = decodedTruth(t, decoded);
    if (v) out.push_back({t, *v, binding});
    return;
  }

  auto truth = [&](const Term& c) { return decodedTruth(c, decoded); };
  std::optional<bool> self = binding ? truth(t) : std::nullopt;
  switch (t->op())
  {
    case Op::And:
    case Op::Or:
    {
      // A child is only binding if it agrees with the parent's value, unless
      // the parent's value needs every child (true and, false or).
      bool allNeeded = self && (*self == (t->op() == Op::And));
      for (const Term& c : t->children)
      {
        bool b = binding && self && (allNeeded || truth(c) == self);
        collectAtoms(c, b, decoded, out);
      }
      return;
    }
    case Op::Implies:
    {
      // a => b behaves like (or (not a) b).
      const Term& a = t->children[0];
      const Term& b = t->children[1];
      if (self && *self)
      {
        collectAtoms(a, binding && truth(a) == false, decoded, out);
        collectAtoms(b, binding && truth(b) == true, decoded, out);
      }
      else
      {
        collectAtoms(a, binding && self.has_value(), decoded, out);
        collectAtoms(b, binding && self.has_value(), decoded, out);
      }
      return;
    }
    default:
      for (const Term& c : t->children) collectAtoms(c, binding, decoded, out);
      return;
  }
}

bool isTheoryEquality(const Node& n) { return n.op() == Op::Eq && !isBooleanConnective(n); }

void collectVarNames(const Term& t, std::set<std::string>& out)
{
  postOrder(t, [&](const Term& n) {
    if (n->isVariable()) out.insert(n->label.id);
  });
}

std::optional<Value> currentValue(const Term& t, const Model& decoded, Model& candidate)
{
  if (t->isLiteral()) return t->symbol.value;
  if (const Value* v = candidate.find(t->label)) return *v;
  if (const Value* v = decoded.find(t->label))
  {
    candidate.set(t->label, *v);
    return *v;
  }
  return std::nullopt;
}

/// `assign` is false for non-binding atoms, which are only evaluated.
void reconstructNode(const Term& t, const Model& decoded, Model& candidate, bool assign)
{
  if (t->children.empty()) return;
  for (const Term& c : t->children) reconstructNode(c, decoded, candidate, assign);
  if (assign && isTheoryEquality(*t) && equalityAsAssignment(*t, decoded, candidate)) return;

  std::vector<Value> args;
  args.reserve(t->children.size());
  for (const Term& c : t->children)
  {
    std::optional<Value> v = currentValue(c, decoded, candidate);
    if (!v) return;
    args.push_back(std::move(*v));
  }
  if (std::optional<Value> r = applyOp(t->symbol, args)) candidate.set(t->label, std::move(*r));
}

}  // namespace

std::optional<bool> decodedTruth(const Term& t, const Model& decoded)
{
  std::optional<Value> v = decodedValue(t, decoded);
  if (!v) return std::nullopt;
  return std::get<bool>(*v);
}

std::vector<CriticalAtom> extractCriticalAtoms(const std::vector<Term>& assertions, const Model& decoded)
{
  std::vector<CriticalAtom> out;
  for (const Term& a : assertions) collectAtoms(a, true, decoded, out);
  return out;
}

std::optional<std::string> definedVariable(const CriticalAtom& a)
{
  if (!a.binding || !a.polarity || !isTheoryEquality(*a.atom)) return std::nullopt;
  const Term& lhs = a.atom->children[0];
  const Term& rhs = a.atom->children[1];
  if (lhs->isVariable()) return lhs->label.id;
  if (rhs->isVariable()) return rhs->label.id;
  return std::nullopt;
}

std::vector<CriticalAtom> orderAtoms(const std::vector<CriticalAtom>& atoms)
{
  std::vector<CriticalAtom> defs, otherEqs, otherBinding, rest;
  for (const CriticalAtom& a : atoms)
  {
    if (definedVariable(a)) defs.push_back(a);
    else if (a.binding && isTheoryEquality(*a.atom)) otherEqs.push_back(a);
    else if (a.binding) otherBinding.push_back(a);
    else rest.push_back(a);
  }

  // Dependency graph over variables mentioned by the definitions; an edge
  // u -> v means the definition of v reads u.
  std::map<std::string, std::multiset<std::string>> preds;
  for (const CriticalAtom& a : defs)
  {
    const Term& lhs = a.atom->children[0];
    const Term& rhs = a.atom->children[1];
    std::set<std::string> all;
    collectVarNames(a.atom, all);
    for (const std::string& v : all) preds[v];
    if (lhs->isVariable() && rhs->isVariable())
    {
      preds[rhs->label.id].insert(lhs->label.id);
      preds[lhs->label.id].insert(rhs->label.id);
      continue;
    }
    const Term& var = lhs->isVariable() ? lhs : rhs;
    const Term& body = lhs->isVariable() ? rhs : lhs;
    std::set<std::string> reads;
    collectVarNames(body, reads);
    for (const std::string& u : reads) preds[var->label.id].insert(u);
  }

  std::map<std::string, int> rank;
  std::set<std::string> remaining;
  for (const auto& entry : preds) remaining.insert(entry.first);
  while (!remaining.empty())
  {
    std::string best;
    std::size_t bestDegree = 0;
    for (const std::string& v : remaining)
    {
      std::size_t degree = 0;
      for (const std::string& u : preds[v]) degree += remaining.count(u);
      if (best.empty() || degree < bestDegree)
      {
        best = v;
        bestDegree = degree;
      }
    }
    rank[best] = static_cast<int>(rank.size());
    remaining.erase(best);
  }

  // x = y may define either side; it waits for whichever comes later.
  auto key = [&](const CriticalAtom& a) {
    const Term& lhs = a.atom->children[0];
    const Term& rhs = a.atom->children[1];
    if (lhs->isVariable() && rhs->isVariable()) return std::max(rank[lhs->label.id], rank[rhs->label.id]);
    return rank[*definedVariable(a)];
  };
  std::stable_sort(defs.begin(), defs.end(),
                   [&](const CriticalAtom& a, const CriticalAtom& b) { return key(a) < key(b); });

  std::vector<CriticalAtom> out = std::move(defs);
  out.insert(out.end(), otherEqs.begin(), otherEqs.end());
  out.insert(out.end(), otherBinding.begin(), otherBinding.end());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

bool equalityAsAssignment(const Node& eq, const Model& decoded, Model& candidate)
{
  if (!isTheoryEquality(eq)) return false;
  const Value* truth = decoded.find(eq.label);
  std::optional<bool> isTrue;
  if (truth)
    isTrue = std::get<bool>(*truth);
  else
    isTrue = decodedTruth(std::make_shared<const Node>(eq), decoded);
  if (!isTrue || !*isTrue) return false;

  const Term& lhs = eq.children[0];
  const Term& rhs = eq.children[1];
  auto defined = [&](const Term& side) -> std::optional<Value> {
    if (side->isLiteral()) return side->symbol.value;
    if (const Value* v = candidate.find(side->label)) return *v;
    return std::nullopt;
  };
  auto unassignedVar = [&](const Term& side) { return side->isVariable() && !candidate.contains(side->label); };

  if (unassignedVar(lhs))
  {
    if (std::optional<Value> v = defined(rhs))
    {
      candidate.set(lhs->label, *v);
      candidate.set(eq.label, true);
      return true;
    }
  }
  if (unassignedVar(rhs))
  {
    if (std::optional<Value> v = defined(lhs))
    {
      candidate.set(rhs->label, *v);
      candidate.set(eq.label, true);
      return true;
    }
  }
  if (unassignedVar(lhs) && unassignedVar(rhs))
  {
    const Value* v = decoded.find(rhs->label);
    if (!v) return false;
    candidate.set(rhs->label, *v);
    candidate.set(lhs->label, *v);
    candidate.set(eq.label, true);
    return true;
  }
  return false;
}

Model reconstructModel(const Formula& original, const Model& decoded)
{
  Model candidate;
  for (const CriticalAtom& a : orderAtoms(extractCriticalAtoms(original.assertions, decoded)))
    reconstructNode(a.atom, decoded, candidate, a.binding);

  Model out;
  std::vector<VarDecl> vars = original.vars;
  for (const VarDecl& v : collectVariables(original.assertions))
  {
    if (!original.findVar(v.name)) vars.push_back(v);
  }
  for (const VarDecl& v : vars)
  {
    if (const Value* value = candidate.find(v.label()))
      out.set(v.label(), *value);
    else if (const Value* value = decoded.find(v.label()))
      out.set(v.label(), *value);
  }
  return out;
}

Model Approximation::reconstruct(const Formula& original, const Model& decoded) const
{
  return reconstructModel(original, decoded);
}

}  // namespace approxsmt
