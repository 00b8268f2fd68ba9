#ifndef APPROXSMT_SORT_HPP
#define APPROXSMT_SORT_HPP

#include <compare>
#include <string>

#include "approxsmt/fp.hpp"

namespace approxsmt {

enum class SortKind { Bool, RoundingMode, FloatingPoint, BitVector, Real };

/** An SMT-LIB sort from the QF_FP / QF_BV / QF_NRA fragment. */
class Sort
{
 public:
  Sort() = default;

  static Sort boolean() { return Sort(SortKind::Bool, 0, 0); }
  static Sort roundingMode() { return Sort(SortKind::RoundingMode, 0, 0); }
  static Sort real() { return Sort(SortKind::Real, 0, 0); }
  /// Throws RangeError unless eBits >= 2 and sBits >= 2.
  static Sort floatingPoint(int ebits, int sbits);
  static Sort floatingPoint(FpFormat fmt) { return floatingPoint(fmt.ebits, fmt.sbits); }
  /// Throws RangeError unless width >= 1.
  static Sort bitVector(int width);

  SortKind kind() const { return d_kind; }
  bool isBool() const { return d_kind == SortKind::Bool; }
  bool isRoundingMode() const { return d_kind == SortKind::RoundingMode; }
  bool isFloatingPoint() const { return d_kind == SortKind::FloatingPoint; }
  bool isBitVector() const { return d_kind == SortKind::BitVector; }
  bool isReal() const { return d_kind == SortKind::Real; }

  FpFormat fpFormat() const { return {d_first, d_second}; }
  int bvWidth() const { return d_first; }

  bool operator==(const Sort&) const = default;
  auto operator<=>(const Sort&) const = default;

  /// SMT-LIB rendering, e.g. "(_ FloatingPoint 8 24)".
  std::string toString() const;

 private:
  Sort(SortKind kind, int first, int second) : d_kind(kind), d_first(first), d_second(second) {}

  SortKind d_kind = SortKind::Bool;
  int d_first = 0;
  int d_second = 0;
};

}  // namespace approxsmt

#endif
