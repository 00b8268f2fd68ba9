// Fixed-point approximation over bit-vectors. One (integral, fractional)
// format is used for the whole formula.

#ifndef APPROXSMT_FIXEDPOINT_HPP
#define APPROXSMT_FIXEDPOINT_HPP

#include "approxsmt/approximation.hpp"

namespace approxsmt {

struct FixedPointFormat
{
  int intBits = 5;
  int fracBits = 5;

  int width() const { return intBits + fracBits; }
  bool operator==(const FixedPointFormat&) const = default;
};

inline constexpr int kFixedPointMinBits = 5;
inline constexpr int kFixedPointMaxBits = 25;
inline constexpr int kFixedPointStep = 4;

/// Nearest grid value (ties to even), saturating; infinities map to max/min. Throws UnsupportedValue for NaN.
BvValue encodeFixedPoint(const FpLiteral& v, FixedPointFormat fmt);
/// Signed reading scaled by 2^-fracBits.
Rational decodeFixedPoint(const BvValue& v, FixedPointFormat fmt);

/// Throws UnsupportedValue (NaN literal) or UnsupportedOp (classification predicates, abs of RM terms, ...).
Formula encodeFixedPointFormula(const Formula& f, FixedPointFormat fmt);
Model decodeFixedPointModel(const Formula& original, const Formula& encoded, const Model& bvModel,
                            FixedPointFormat fmt);

Precision refineFixedPoint(const Precision& p);

class FixedPointApproximation : public Approximation
{
 public:
  FixedPointApproximation();

  std::string name() const override { return "bv"; }
  std::string outputLogic() const override { return "QF_BV"; }
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
