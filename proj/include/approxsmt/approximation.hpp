#ifndef APPROXSMT_APPROXIMATION_HPP
#define APPROXSMT_APPROXIMATION_HPP

#include <span>
#include <string>

#include "approxsmt/precision.hpp"
#include "approxsmt/term.hpp"

namespace approxsmt {

/**
 * One approximation theory: how to encode a labeled FP formula at a given
 * precision, how to read an approximate model back into FP values, and how
 * to raise precision after a failed round.
 */
class Approximation
{
 public:
  virtual ~Approximation() = default;

  virtual std::string name() const = 0;
  /// Logic tag of encoded formulas, e.g. "QF_BV".
  virtual std::string outputLogic() const = 0;
  virtual const PrecisionOrder& order() const = 0;
  virtual PrecisionMap initialPrecision(const Formula& f) const = 0;

  /// Throws UnsupportedValue / UnsupportedOp for inputs the theory cannot express.
  virtual Formula encode(const Formula& f, const PrecisionMap& p) const = 0;

  /**
   * Values of the original formula's labels (variables and operation nodes)
   * under `approxModel`, converted back to the original sorts.
   */
  virtual Model decode(const Formula& original, const Formula& encoded, const Model& approxModel,
                       const PrecisionMap& p) const = 0;

  /// Candidate model over the original variables. The default is equality-as-assignment.
  virtual Model reconstruct(const Formula& original, const Model& decoded) const;

  virtual PrecisionMap refineWithModel(const Formula& original, const Model& decoded, const Model& failed,
                                       const PrecisionMap& p) const = 0;
  /// `core` may be empty when the backend gives no unsat core.
  virtual PrecisionMap refineWithProof(const Formula& original, std::span<const Term> core,
                                       const PrecisionMap& p) const = 0;
};

}  // namespace approxsmt

#endif
