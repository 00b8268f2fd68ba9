// Precision domains and per-label precision maps.

#ifndef APPROXSMT_PRECISION_HPP
#define APPROXSMT_PRECISION_HPP

#include <map>
#include <string>
#include <vector>

#include "approxsmt/value.hpp"

namespace approxsmt {

enum class PrecisionKind { Scalar, Pair, Binary };

/** One precision value: an integer, an (integral, fractional) pair, or bottom/top. */
class Precision
{
 public:
  Precision() = default;
  static Precision scalar(int v) { return Precision(PrecisionKind::Scalar, v, 0); }
  static Precision pair(int intPart, int fracPart) { return Precision(PrecisionKind::Pair, intPart, fracPart); }
  static Precision bottom() { return Precision(PrecisionKind::Binary, 0, 0); }
  static Precision top() { return Precision(PrecisionKind::Binary, 1, 0); }

  PrecisionKind kind() const { return d_kind; }
  int value() const { return d_first; }
  int intPart() const { return d_first; }
  int fracPart() const { return d_second; }
  bool isTopBinary() const { return d_kind == PrecisionKind::Binary && d_first == 1; }

  bool operator==(const Precision&) const = default;
  /// "3", "5,5", "bot" / "top".
  std::string toString() const;

 private:
  Precision(PrecisionKind k, int a, int b) : d_kind(k), d_first(a), d_second(b) {}

  PrecisionKind d_kind = PrecisionKind::Scalar;
  int d_first = 0;
  int d_second = 0;
};

/**
 * A bounded precision domain. Scalars and pairs are ordered componentwise
 * inside [min, max]; the binary domain is bottom < top. Every domain is
 * finite, so ascending chains are finite and end at max().
 */
class PrecisionOrder
{
 public:
  static PrecisionOrder scalar(int lo, int hi);
  static PrecisionOrder pair(int loInt, int loFrac, int hiInt, int hiFrac);
  static PrecisionOrder binary();

  PrecisionKind kind() const { return d_min.kind(); }
  const Precision& min() const { return d_min; }
  const Precision& top() const { return d_max; }

  bool contains(const Precision& p) const;
  bool leq(const Precision& a, const Precision& b) const;
  bool isTop(const Precision& p) const { return p == d_max; }
  /// Componentwise clamp into [min, top].
  Precision clamp(const Precision& p) const;
  /// Number of elements on the longest strictly ascending chain, minus one.
  int height() const;

 private:
  PrecisionOrder(Precision lo, Precision hi) : d_min(lo), d_max(hi) {}

  Precision d_min;
  Precision d_max;
};

/**
 * Precision per node label. A uniform map holds one value for the whole
 * formula; a compositional map holds one value per variable/operation label.
 */
class PrecisionMap
{
 public:
  PrecisionMap() = default;
  static PrecisionMap uniform(Precision p);
  static PrecisionMap compositional(const std::vector<Label>& labels, Precision p);

  bool isUniform() const { return d_uniform; }
  /// Value for `l`; uniform maps answer for every label. Throws Error for unknown labels.
  const Precision& get(const Label& l) const;
  bool contains(const Label& l) const;
  void set(const Label& l, Precision p);
  const Precision& uniformValue() const { return d_value; }
  const std::map<std::string, Precision>& entries() const { return d_values; }

  bool allTop(const PrecisionOrder& order) const;
  /// Pointwise <= over the same domain.
  bool leq(const PrecisionMap& other, const PrecisionOrder& order) const;
  /// Pointwise >= and strictly greater somewhere.
  bool strictlyAbove(const PrecisionMap& other, const PrecisionOrder& order) const;
  /// Copy with every entry replaced by top.
  PrecisionMap raisedToTop(const PrecisionOrder& order) const;

  bool operator==(const PrecisionMap&) const = default;
  std::string toString() const;

 private:
  bool d_uniform = true;
  Precision d_value;
  std::map<std::string, Precision> d_values;
};

/// Every label at the order's minimum (or the uniform minimum).
PrecisionMap initialPrecision(const PrecisionOrder& order, const std::vector<Label>& labels, bool uniform);

}  // namespace approxsmt

#endif
