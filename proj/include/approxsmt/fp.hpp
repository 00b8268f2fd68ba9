// Bit-exact IEEE-754 style arithmetic over arbitrary (e,s) formats.
//
// Every operation computes the exact rational result and rounds once. Host
// floating point is never used.

#ifndef APPROXSMT_FP_HPP
#define APPROXSMT_FP_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace approxsmt {

using Rational = mpq_class;

/** Floating-point format: exponent width and significand width (hidden bit included). */
struct FpFormat
{
  int ebits = 0;
  int sbits = 0;

  bool operator==(const FpFormat&) const = default;
  auto operator<=>(const FpFormat&) const = default;

  /// Both fields at least as wide as `other`.
  bool covers(const FpFormat& other) const
  {
    return ebits >= other.ebits && sbits >= other.sbits;
  }
  int totalBits() const { return ebits + sbits; }
};

/// Largest widths the literal representation can hold.
inline constexpr int kMaxExponentBits = 30;
inline constexpr int kMaxSignificandBits = 64;

bool isValidFormat(const FpFormat& fmt);

/// Pointwise maximum of two formats.
FpFormat maxFormat(const FpFormat& a, const FpFormat& b);

enum class RoundingMode { RNE, RNA, RTP, RTN, RTZ };

std::string_view toString(RoundingMode rm);
/// Accepts both the short (RNE) and long (roundNearestTiesToEven) spellings.
std::optional<RoundingMode> parseRoundingMode(std::string_view name);

enum class FpClass { Zero, Subnormal, Normal, Infinity, NaN };

/// The exponent bias 2^(e-1) - 1.
std::int64_t bias(int ebits);

/**
 * A floating-point literal as a sign / biased exponent / stored significand
 * triple. The hidden bit is not stored.
 *
 * Several bit patterns denote NaN; they all compare equal under operator==
 * because SMT-LIB has a single NaN value. Arithmetic only ever produces the
 * canonical pattern (sign 0, significand MSB set).
 */
class FpLiteral
{
 public:
  FpLiteral() = default;
  FpLiteral(FpFormat fmt, bool sign, std::uint64_t exponent, std::uint64_t significand);

  static FpLiteral zero(FpFormat fmt, bool negative = false);
  static FpLiteral infinity(FpFormat fmt, bool negative = false);
  static FpLiteral nan(FpFormat fmt);
  /// Largest finite magnitude with the given sign.
  static FpLiteral maxFinite(FpFormat fmt, bool negative = false);
  /// Decodes a packed sign|exponent|significand bit pattern.
  static FpLiteral fromBits(FpFormat fmt, std::uint64_t bits);

  const FpFormat& format() const { return d_fmt; }
  bool sign() const { return d_sign; }
  std::uint64_t exponent() const { return d_exp; }
  std::uint64_t significand() const { return d_sig; }
  /// Packed sign|exponent|significand; requires totalBits() <= 64.
  std::uint64_t bits() const;

  FpClass classify() const;
  bool isNaN() const { return classify() == FpClass::NaN; }
  bool isInfinite() const { return classify() == FpClass::Infinity; }
  bool isZero() const { return classify() == FpClass::Zero; }
  bool isFinite() const;

  /// Structural identity, with all NaNs identified.
  bool operator==(const FpLiteral& other) const;

  /// "(fp #b0 #b100 #b00)" style rendering; NaN renders as (_ NaN e s).
  std::string toSmtLib() const;

 private:
  FpFormat d_fmt{};
  bool d_sign = false;
  std::uint64_t d_exp = 0;
  std::uint64_t d_sig = 0;
};

/// Exact value of a finite literal; nullopt for infinities and NaN.
std::optional<Rational> toRational(const FpLiteral& v);

/// Nearest representable value of `q` in `fmt` under `rm`. Zero maps to +0.
FpLiteral fromRational(const Rational& q, FpFormat fmt, RoundingMode rm);

enum class FpOp { Add, Sub, Mul, Div, Fma, Neg, Abs, Convert };

/**
 * Evaluates an FP operation. `args` excludes the rounding mode. For
 * FpOp::Convert the result lands in `target`; every other operation
 * produces a value in its arguments' format and ignores `target`.
 */
FpLiteral fpEval(FpOp op, RoundingMode rm, std::span<const FpLiteral> args,
                 std::optional<FpFormat> target = std::nullopt);

enum class FpPred { Eq, Leq, Lt, Geq, Gt, IsNaN, IsInfinite, IsZero, IsNormal, IsSubnormal, IsNegative, IsPositive };

/// IEEE comparison and classification: NaN is unordered and +0 equals -0.
bool fpCompare(FpPred pred, std::span<const FpLiteral> args);

/// Default cap on the number of bit patterns enumerateSort will produce.
inline constexpr std::uint64_t kDefaultEnumerationBound = std::uint64_t{1} << 16;

/// Every bit pattern of `fmt` in increasing bit order. Throws SortTooLarge.
std::vector<FpLiteral> enumerateSort(FpFormat fmt, std::uint64_t bound = kDefaultEnumerationBound);

/// Rational rendering used in diagnostics, e.g. "-7/4".
std::string toString(const Rational& q);

}  // namespace approxsmt

#endif
