#include "approxsmt/value.hpp"

#include "approxsmt/errors.hpp"

namespace approxsmt {

Sort Sort::floatingPoint(int ebits, int sbits)
{
  if (!isValidFormat({ebits, sbits}))
    throw RangeError("unsupported floating-point sort (" + std::to_string(ebits) + ","
                     + std::to_string(sbits) + ")");
  return Sort(SortKind::FloatingPoint, ebits, sbits);
}

Sort Sort::bitVector(int width)
{
  if (width < 1) throw RangeError("bit-vector width must be positive");
  return Sort(SortKind::BitVector, width, 0);
}

std::string Sort::toString() const
{
  switch (d_kind)
  {
    case SortKind::Bool: return "Bool";
    case SortKind::RoundingMode: return "RoundingMode";
    case SortKind::Real: return "Real";
    case SortKind::FloatingPoint:
      return "(_ FloatingPoint " + std::to_string(d_first) + " " + std::to_string(d_second) + ")";
    case SortKind::BitVector: return "(_ BitVec " + std::to_string(d_first) + ")";
  }
  return "?";
}

namespace {

mpz_class modulus(int width)
{
  mpz_class m;
  mpz_ui_pow_ui(m.get_mpz_t(), 2, static_cast<unsigned long>(width));
  return m;
}

}  // namespace

BvValue::BvValue(int w, mpz_class b) : width(w), bits(std::move(b))
{
  if (w < 1) throw RangeError("bit-vector width must be positive");
  if (bits < 0 || bits >= modulus(w)) throw RangeError("bit-vector constant out of range");
}

BvValue BvValue::fromSigned(int w, const mpz_class& v)
{
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus(w).get_mpz_t());
  return BvValue(w, r);
}

mpz_class BvValue::toSigned() const
{
  if (mpz_tstbit(bits.get_mpz_t(), static_cast<mp_bitcnt_t>(width - 1))) return bits - modulus(width);
  return bits;
}

std::string BvValue::toSmtLib() const
{
  std::string digits = bits.get_str(2);
  return "#b" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

Sort sortOf(const Value& v)
{
  struct Visitor
  {
    Sort operator()(bool) const { return Sort::boolean(); }
    Sort operator()(RoundingMode) const { return Sort::roundingMode(); }
    Sort operator()(const FpLiteral& f) const { return Sort::floatingPoint(f.format()); }
    Sort operator()(const BvValue& b) const { return Sort::bitVector(b.width); }
    Sort operator()(const Rational&) const { return Sort::real(); }
  };
  return std::visit(Visitor{}, v);
}

bool valuesEqual(const Value& a, const Value& b) { return a == b; }

std::string realToSmtLib(const Rational& q)
{
  auto magnitude = [](const mpz_class& z) { return mpz_class(abs(z)).get_str() + ".0"; };
  std::string body;
  if (q.get_den() == 1)
    body = magnitude(q.get_num());
  else
    body = "(/ " + magnitude(q.get_num()) + " " + q.get_den().get_str() + ".0)";
  return q < 0 ? "(- " + body + ")" : body;
}

std::string toSmtLib(const Value& v)
{
  struct Visitor
  {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(RoundingMode rm) const { return std::string(toString(rm)); }
    std::string operator()(const FpLiteral& f) const { return f.toSmtLib(); }
    std::string operator()(const BvValue& b) const { return b.toSmtLib(); }
    std::string operator()(const Rational& q) const { return realToSmtLib(q); }
  };
  return std::visit(Visitor{}, v);
}

const Value* Model::find(const Label& l) const
{
  auto it = d_values.find(l.id);
  return it == d_values.end() ? nullptr : &it->second;
}

std::optional<Value> Model::get(const Label& l) const
{
  if (const Value* v = find(l)) return *v;
  return std::nullopt;
}

bool Model::operator==(const Model& other) const { return d_values == other.d_values; }

}  // namespace approxsmt
