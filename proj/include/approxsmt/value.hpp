#ifndef APPROXSMT_VALUE_HPP
#define APPROXSMT_VALUE_HPP

#include <map>
#include <optional>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "approxsmt/fp.hpp"
#include "approxsmt/sort.hpp"

namespace approxsmt {

/** A fixed-width bit-vector constant; `bits` holds the unsigned reading. */
struct BvValue
{
  int width = 1;
  mpz_class bits;

  BvValue() = default;
  BvValue(int w, mpz_class b);
  /// Wraps a signed integer into `w` bits (two's complement).
  static BvValue fromSigned(int w, const mpz_class& v);

  mpz_class toSigned() const;
  bool operator==(const BvValue& other) const { return width == other.width && bits == other.bits; }
  /// "#b0101" rendering.
  std::string toSmtLib() const;
};

using Value = std::variant<bool, RoundingMode, FpLiteral, BvValue, Rational>;

Sort sortOf(const Value& v);
bool valuesEqual(const Value& a, const Value& b);
/// SMT-LIB term text for a constant.
std::string toSmtLib(const Value& v);
/// SMT-LIB real constant: "2.0", "(- 4.0)", "(/ 7.0 4.0)".
std::string realToSmtLib(const Rational& q);

/** Node label; synthetic labels mark nodes that exist only in an encoding. */
struct Label
{
  std::string id;
  bool synthetic = false;

  bool operator==(const Label&) const = default;
  auto operator<=>(const Label&) const = default;
};

/** A partial assignment from labels to values. */
class Model
{
 public:
  using Map = std::map<std::string, Value>;

  bool contains(const Label& l) const { return d_values.count(l.id) != 0; }
  const Value* find(const Label& l) const;
  std::optional<Value> get(const Label& l) const;
  void set(const Label& l, Value v) { d_values.insert_or_assign(l.id, std::move(v)); }
  void erase(const Label& l) { d_values.erase(l.id); }

  std::size_t size() const { return d_values.size(); }
  bool empty() const { return d_values.empty(); }
  const Map& entries() const { return d_values; }

  bool operator==(const Model& other) const;

 private:
  Map d_values;
};

}  // namespace approxsmt

#endif
