// Model reconstruction: turn decoded (possibly inconsistent) node values into
// an assignment of the original variables that is more likely to satisfy the
// original formula.

#ifndef APPROXSMT_RECONSTRUCTION_HPP
#define APPROXSMT_RECONSTRUCTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "approxsmt/term.hpp"

namespace approxsmt {

struct CriticalAtom
{
  Term atom;
  /// Truth value under the decoded model.
  bool polarity = true;
  /// False when the atom's value cannot change the truth of its assertion.
  bool binding = true;
};

/**
 * Truth value of a Bool node as seen by the decoded model: a recorded value
 * for its label wins, otherwise it is computed from its children.
 */
std::optional<bool> decodedTruth(const Term& t, const Model& decoded);

/**
 * Theory atoms and Boolean variables reachable through the connective
 * skeleton of the assertions, in input order. Boolean constants are skipped,
 * as are atoms whose decoded value is undefined.
 */
std::vector<CriticalAtom> extractCriticalAtoms(const std::vector<Term>& assertions, const Model& decoded);

/// Variable fixed by a true binding `=` with a variable side, if any.
std::optional<std::string> definedVariable(const CriticalAtom& a);

/**
 * Processing order: true binding equalities that define a variable, sorted so
 * that a definition comes after the definitions of the variables it reads,
 * then other binding equalities, then other binding atoms, then non-binding
 * atoms. Cycles are broken by lowest remaining in-degree, then by label.
 */
std::vector<CriticalAtom> orderAtoms(const std::vector<CriticalAtom>& atoms);

/**
 * Tries to use a decoded-true equality as an assignment of one of its variable
 * sides. Returns true when `candidate` was extended.
 */
bool equalityAsAssignment(const Node& eq, const Model& decoded, Model& candidate);

/// Candidate assignment for every variable of `original`.
Model reconstructModel(const Formula& original, const Model& decoded);

}  // namespace approxsmt

#endif
