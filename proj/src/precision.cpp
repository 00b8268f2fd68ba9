#include "approxsmt/precision.hpp"

#include <algorithm>

#include "approxsmt/errors.hpp"

namespace approxsmt {

std::string Precision::toString() const
{
  switch (d_kind)
  {
    case PrecisionKind::Scalar: return std::to_string(d_first);
    case PrecisionKind::Pair: return std::to_string(d_first) + "," + std::to_string(d_second);
    case PrecisionKind::Binary: return d_first ? "top" : "bot";
  }
  return "?";
}

PrecisionOrder PrecisionOrder::scalar(int lo, int hi)
{
  if (lo > hi) throw Error("empty precision range");
  return PrecisionOrder(Precision::scalar(lo), Precision::scalar(hi));
}

PrecisionOrder PrecisionOrder::pair(int loInt, int loFrac, int hiInt, int hiFrac)
{
  if (loInt > hiInt || loFrac > hiFrac) throw Error("empty precision range");
  return PrecisionOrder(Precision::pair(loInt, loFrac), Precision::pair(hiInt, hiFrac));
}

PrecisionOrder PrecisionOrder::binary() { return PrecisionOrder(Precision::bottom(), Precision::top()); }

bool PrecisionOrder::contains(const Precision& p) const
{
  return p.kind() == kind() && leq(d_min, p) && leq(p, d_max);
}

bool PrecisionOrder::leq(const Precision& a, const Precision& b) const
{
  if (a.kind() != b.kind()) throw Error("comparing precisions of different kinds");
  if (a.kind() == PrecisionKind::Pair) return a.intPart() <= b.intPart() && a.fracPart() <= b.fracPart();
  return a.value() <= b.value();
}

Precision PrecisionOrder::clamp(const Precision& p) const
{
  switch (kind())
  {
    case PrecisionKind::Scalar: return Precision::scalar(std::clamp(p.value(), d_min.value(), d_max.value()));
    case PrecisionKind::Pair:
      return Precision::pair(std::clamp(p.intPart(), d_min.intPart(), d_max.intPart()),
                             std::clamp(p.fracPart(), d_min.fracPart(), d_max.fracPart()));
    case PrecisionKind::Binary: return p;
  }
  return p;
}

int PrecisionOrder::height() const
{
  if (kind() == PrecisionKind::Pair)
    return (d_max.intPart() - d_min.intPart()) + (d_max.fracPart() - d_min.fracPart());
  return d_max.value() - d_min.value();
}

PrecisionMap PrecisionMap::uniform(Precision p)
{
  PrecisionMap m;
  m.d_uniform = true;
  m.d_value = p;
  return m;
}

PrecisionMap PrecisionMap::compositional(const std::vector<Label>& labels, Precision p)
{
  PrecisionMap m;
  m.d_uniform = false;
  m.d_value = p;
  for (const Label& l : labels) m.d_values.emplace(l.id, p);
  return m;
}

const Precision& PrecisionMap::get(const Label& l) const
{
  if (d_uniform) return d_value;
  auto it = d_values.find(l.id);
  if (it == d_values.end()) throw Error("no precision for label " + l.id);
  return it->second;
}

bool PrecisionMap::contains(const Label& l) const { return d_uniform || d_values.count(l.id) != 0; }

void PrecisionMap::set(const Label& l, Precision p)
{
  if (d_uniform)
    d_value = p;
  else
    d_values.insert_or_assign(l.id, p);
}

bool PrecisionMap::allTop(const PrecisionOrder& order) const
{
  if (d_uniform) return order.isTop(d_value);
  return std::all_of(d_values.begin(), d_values.end(), [&](const auto& e) { return order.isTop(e.second); });
}

bool PrecisionMap::leq(const PrecisionMap& other, const PrecisionOrder& order) const
{
  if (d_uniform != other.d_uniform) return false;
  if (d_uniform) return order.leq(d_value, other.d_value);
  if (d_values.size() != other.d_values.size()) return false;
  for (const auto& [label, p] : d_values)
  {
    auto it = other.d_values.find(label);
    if (it == other.d_values.end() || !order.leq(p, it->second)) return false;
  }
  return true;
}

bool PrecisionMap::strictlyAbove(const PrecisionMap& other, const PrecisionOrder& order) const
{
  return other.leq(*this, order) && !(*this == other);
}

PrecisionMap PrecisionMap::raisedToTop(const PrecisionOrder& order) const
{
  PrecisionMap m = *this;
  m.d_value = order.top();
  for (auto& entry : m.d_values) entry.second = order.top();
  return m;
}

std::string PrecisionMap::toString() const
{
  if (d_uniform) return d_value.toString();
  std::string out = "{";
  bool first = true;
  for (const auto& [label, p] : d_values)
  {
    if (!first) out += ' ';
    first = false;
    out += label + ":" + p.toString();
  }
  return out + "}";
}

PrecisionMap initialPrecision(const PrecisionOrder& order, const std::vector<Label>& labels, bool uniform)
{
  if (uniform) return PrecisionMap::uniform(order.min());
  return PrecisionMap::compositional(labels, order.min());
}

}  // namespace approxsmt
