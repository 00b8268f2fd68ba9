// Real-arithmetic approximation: FP operations become exact real operations.
// Precision is either bottom (approximate) or top (give up and fall back).

#ifndef APPROXSMT_REAL_HPP
#define APPROXSMT_REAL_HPP

#include "approxsmt/approximation.hpp"

namespace approxsmt {

/// Throws UnsupportedValue for infinite/NaN literals and UnsupportedOp for fp.abs and classification predicates.
Formula encodeRealFormula(const Formula& f);
Model decodeRealModel(const Formula& original, const Formula& encoded, const Model& realModel);

class RealApproximation : public Approximation
{
 public:
  RealApproximation();

  std::string name() const override { return "ra"; }
  std::string outputLogic() const override { return "QF_NRA"; }
  const PrecisionOrder& order() const override { return d_order; }
  PrecisionMap initialPrecision(const Formula& f) const override;
  Formula encode(const Formula& f, const PrecisionMap& p) const override;
  Model decode(const Formula& original, const Formula& encoded, const Model& approxModel,
               const PrecisionMap& p) const override;
  PrecisionMap refineWithModel(const Formula& original, const Model& decoded, const Model& failed,
                               const PrecisionMap& p) const override;
  PrecisionMap refineWithProof(const Formula& original, std::span<const Term> core,
                               const PrecisionMap& p) const override;

 private:
  PrecisionOrder d_order;
};

}  // namespace approxsmt

#endif
