// Reduced-precision floating-point approximation: every FP variable and
// operation runs in a smaller format chosen by its precision, casts glue
// nodes of different formats together.

#ifndef APPROXSMT_RPFP_HPP
#define APPROXSMT_RPFP_HPP

#include <optional>
#include <vector>

#include "approxsmt/approximation.hpp"

namespace approxsmt {

inline constexpr int kRpfpMaxPrecision = 5;

/// (3 + (E-3)p/5, 3 + (S-3)p/5), never wider than `full`.
FpFormat scaleFormat(FpFormat full, int p);

/// Labels that carry a precision: FP variables and FP operation nodes.
std::vector<Label> rpfpLabels(const Formula& f);

Formula encodeRpfp(const Formula& f, const PrecisionMap& p);

/// Widens `small` into `target` without changing its value. Throws RangeError if `target` is narrower.
FpLiteral decodeFpValue(FpFormat target, const FpLiteral& small);

Model decodeRpfp(const Formula& original, const Formula& encoded, const Model& approxModel);

/**
 * |a-b| / max(|b|, smallest subnormal of b's format). Matching specials give
 * 0, any other mismatch involving NaN or an infinity gives +inf.
 */
double relativeError(const FpLiteral& a, const FpLiteral& b);

/// outErr / (1 + avgInErr) for an FP operation node; nullopt when the node is skipped.
std::optional<double> nodeError(const Model& decoded, const Model& failed, const Node& node);

PrecisionMap refineRpfpWithModel(const Formula& original, const Model& decoded, const Model& failed,
                                 const PrecisionMap& p);
PrecisionMap refineRpfpUniform(const PrecisionMap& p);

class RpfpApproximation : public Approximation
{
 public:
  RpfpApproximation();

  std::string name() const override { return "rpfp"; }
  std::string outputLogic() const override { return "QF_FP"; }
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
