#include "approxsmt/backend.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "approxsmt/errors.hpp"
#include "approxsmt/eval.hpp"
#include "approxsmt/process.hpp"
#include "approxsmt/smtlib.hpp"

namespace approxsmt {

std::string_view toString(Verdict v)
{
  switch (v)
  {
    case Verdict::Sat: return "sat";
    case Verdict::Unsat: return "unsat";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

Value defaultValue(const Sort& s)
{
  switch (s.kind())
  {
    case SortKind::Bool: return false;
    case SortKind::RoundingMode: return RoundingMode::RNE;
    case SortKind::FloatingPoint: return FpLiteral::zero(s.fpFormat());
    case SortKind::BitVector: return BvValue(s.bvWidth(), 0);
    case SortKind::Real: return Rational(0);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enumeration

EnumerationBackend::EnumerationBackend(std::uint64_t budget, FpFormat realGrid)
  : d_budget(budget), d_realGrid(realGrid)
{
}

std::vector<Value> EnumerationBackend::domain(const Sort& s) const
{
  std::vector<Value> out;
  switch (s.kind())
  {
    case SortKind::Bool: return {false, true};
    case SortKind::RoundingMode:
      return {RoundingMode::RNE, RoundingMode::RNA, RoundingMode::RTP, RoundingMode::RTN, RoundingMode::RTZ};
    case SortKind::FloatingPoint:
    {
      bool haveNaN = false;
      for (const FpLiteral& v : enumerateSort(s.fpFormat(), d_budget))
      {
        if (v.isNaN())
        {
          if (haveNaN) continue;
          haveNaN = true;
          out.push_back(FpLiteral::nan(v.format()));
          continue;
        }
        out.push_back(v);
      }
      return out;
    }
    case SortKind::BitVector:
    {
      const int w = s.bvWidth();
      if (w >= 63 || (std::uint64_t{1} << w) > d_budget)
        throw SortTooLarge("cannot enumerate (_ BitVec " + std::to_string(w) + ")");
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << w); ++b) out.push_back(BvValue(w, mpz_class(b)));
      return out;
    }
    case SortKind::Real:
    {
      for (const FpLiteral& v : enumerateSort(d_realGrid, d_budget))
      {
        if (!v.isFinite() || (v.isZero() && v.sign())) continue;
        out.push_back(*toRational(v));
      }
      return out;
    }
  }
  return out;
}

namespace {

std::uint64_t widthMask(int w) { return w >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1; }

std::int64_t asSigned(std::uint64_t v, int w)
{
  if (w < 64 && (v >> (w - 1)) & 1) v |= ~widthMask(w);
  return static_cast<std::int64_t>(v);
}

/**
 * A Boolean/bit-vector assertion flattened into machine-word instructions.
 * Only built when every variable is assigned, so the logic is two-valued.
 * Agrees with evaluate() on everything it accepts.
 */
class BitProgram
{
 public:
  /// nullopt when some node is not a Bool or a bit-vector of at most 64 bits.
  static std::optional<BitProgram> compile(const Term& t, const std::unordered_map<std::string, std::size_t>& index)
  {
    BitProgram p;
    std::unordered_map<const Node*, int> seen;
    if (!p.emit(t, index, seen)) return std::nullopt;
    p.d_slots.resize(p.d_code.size());
    return p;
  }

  /// `raw[i][pos[i]]` is the value of variable i.
  bool run(const std::vector<std::vector<std::uint64_t>>& raw, const std::vector<std::size_t>& pos)
  {
    std::uint64_t* s = d_slots.data();
    for (std::size_t i = 0; i < d_code.size(); ++i)
    {
      const Instr& in = d_code[i];
      const int w = in.width;
      const std::uint64_t m = widthMask(w);
      auto arg = [&](std::size_t k) { return s[in.args[k]]; };
      std::uint64_t r = 0;
      switch (in.op)
      {
        case Op::Var: r = raw[in.imm][pos[in.imm]]; break;
        case Op::Const: r = in.imm; break;
        case Op::Not: r = !arg(0); break;
        case Op::And:
          r = 1;
          for (int a : in.args) r = r && s[a];
          break;
        case Op::Or:
          for (int a : in.args) r = r || s[a];
          break;
        case Op::Implies:
          // a => b => c is !a || !b || c.
          r = arg(in.args.size() - 1);
          for (std::size_t k = 0; k + 1 < in.args.size(); ++k) r = r || !arg(k);
          break;
        case Op::Xor:
          for (int a : in.args) r ^= s[a];
          break;
        case Op::Eq: r = arg(0) == arg(1); break;
        case Op::BvAdd: r = (arg(0) + arg(1)) & m; break;
        case Op::BvSub: r = (arg(0) - arg(1)) & m; break;
        case Op::BvMul: r = (arg(0) * arg(1)) & m; break;
        case Op::BvNeg: r = (0 - arg(0)) & m; break;
        case Op::BvXor: r = arg(0) ^ arg(1); break;
        case Op::BvSdiv:
        {
          const bool sn = asSigned(arg(0), w) < 0, tn = asSigned(arg(1), w) < 0;
          const std::uint64_t sa = sn ? (0 - arg(0)) & m : arg(0);
          const std::uint64_t ta = tn ? (0 - arg(1)) & m : arg(1);
          const std::uint64_t q = ta == 0 ? m : sa / ta;
          r = sn != tn ? (0 - q) & m : q;
          break;
        }
        case Op::BvShl: r = arg(1) >= static_cast<std::uint64_t>(w) ? 0 : (arg(0) << arg(1)) & m; break;
        case Op::BvAshr:
        {
          const std::int64_t v = asSigned(arg(0), w);
          const std::uint64_t k = std::min<std::uint64_t>(arg(1), static_cast<std::uint64_t>(w - 1));
          r = static_cast<std::uint64_t>(v >> k) & m;
          break;
        }
        case Op::BvSignExtend: r = static_cast<std::uint64_t>(asSigned(arg(0), d_code[in.args[0]].width)) & m; break;
        case Op::BvExtract: r = (arg(0) >> in.imm) & m; break;
        case Op::BvSle: r = asSigned(arg(0), d_code[in.args[0]].width) <= asSigned(arg(1), d_code[in.args[1]].width); break;
        case Op::BvSlt: r = asSigned(arg(0), d_code[in.args[0]].width) < asSigned(arg(1), d_code[in.args[1]].width); break;
        case Op::BvSge: r = asSigned(arg(0), d_code[in.args[0]].width) >= asSigned(arg(1), d_code[in.args[1]].width); break;
        case Op::BvSgt: r = asSigned(arg(0), d_code[in.args[0]].width) > asSigned(arg(1), d_code[in.args[1]].width); break;
        default: break;
      }
      s[i] = r;
    }
    return s[d_code.size() - 1] != 0;
  }

 private:
  struct Instr
  {
    Op op;
    int width;  // 1 for Bool
    std::uint64_t imm = 0;
    std::vector<int> args;
  };

  int emit(const Term& t, const std::unordered_map<std::string, std::size_t>& index,
           std::unordered_map<const Node*, int>& seen)
  {
    if (auto it = seen.find(t.get()); it != seen.end()) return it->second;
    const Node& n = *t;
    int width = 1;
    if (n.sort().isBitVector())
      width = n.sort().bvWidth();
    else if (!n.sort().isBool())
      return 0;
    if (width > 64) return 0;

    Instr in{n.op(), width, 0, {}};
    if (n.isLiteral())
    {
      in.op = Op::Const;
      const Value& v = *n.symbol.value;
      in.imm = std::holds_alternative<bool>(v) ? std::get<bool>(v) : std::get<BvValue>(v).bits.get_ui();
    }
    else if (n.isVariable())
    {
      auto it = index.find(n.label.id);
      if (it == index.end()) return 0;
      in.imm = it->second;
    }
    else
    {
      switch (n.op())
      {
        case Op::Not: case Op::And: case Op::Or: case Op::Implies: case Op::Xor: case Op::Eq:
        case Op::BvAdd: case Op::BvSub: case Op::BvMul: case Op::BvNeg: case Op::BvSdiv: case Op::BvShl:
        case Op::BvAshr: case Op::BvXor: case Op::BvSignExtend: case Op::BvExtract:
        case Op::BvSle: case Op::BvSlt: case Op::BvSge: case Op::BvSgt: break;
        default: return 0;
      }
      if (n.op() == Op::Eq && n.children.size() != 2) return 0;
      if (n.op() == Op::BvExtract) in.imm = static_cast<std::uint64_t>(n.symbol.indices[1]);
      for (const Term& c : n.children)
      {
        int slot = emit(c, index, seen);
        if (slot == 0) return 0;
        in.args.push_back(slot - 1);
      }
    }
    d_code.push_back(std::move(in));
    const int slot = static_cast<int>(d_code.size());
    seen.emplace(t.get(), slot);
    return slot;
  }

  std::vector<Instr> d_code;
  std::vector<std::uint64_t> d_slots;
};

class Search
{
 public:
  Search(const Formula& f, std::vector<VarDecl> vars, std::vector<std::vector<Value>> domains, Timeout timeout)
    : d_vars(std::move(vars)), d_domains(std::move(domains)), d_assigned(d_vars.size(), nullptr)
  {
    for (std::size_t i = 0; i < d_vars.size(); ++i) d_index.emplace(d_vars[i].label().id, i);
    if (timeout) d_deadline = std::chrono::steady_clock::now() + *timeout;

    d_byDepth.resize(d_vars.size());
    for (const Term& a : f.assertions)
    {
      std::set<std::size_t> mentioned;
      postOrder(a, [&](const Term& n) {
        if (n->isVariable()) mentioned.insert(d_index.at(n->label.id));
      });
      if (mentioned.empty())
      {
        d_ground.push_back(a);
        continue;
      }
      std::size_t last = *mentioned.rbegin();
      for (std::size_t k : mentioned)
      {
        Check c{a, k == last, std::nullopt};
        if (c.complete) c.program = BitProgram::compile(a, d_index);
        d_byDepth[k].push_back(std::move(c));
      }
    }
    d_pos.assign(d_vars.size(), 0);
    d_raw.resize(d_vars.size());
    for (std::size_t i = 0; i < d_vars.size(); ++i)
      for (const Value& v : d_domains[i])
      {
        if (const auto* b = std::get_if<bool>(&v))
          d_raw[i].push_back(*b);
        else if (const auto* bv = std::get_if<BvValue>(&v); bv && bv->width <= 64)
          d_raw[i].push_back(bv->bits.get_ui());
        else
        {
          d_raw[i].clear();
          break;
        }
      }
    // Programs may only read variables with a word-sized domain.
    for (auto& checks : d_byDepth)
      for (Check& c : checks)
        if (c.program)
          postOrder(c.assertion, [&](const Term& n) {
            if (n->isVariable() && d_raw[d_index.at(n->label.id)].empty()) c.program.reset();
          });
    d_lookup = [this](const Node& n) -> const Value* {
      auto it = d_index.find(n.label.id);
      return it == d_index.end() ? nullptr : d_assigned[it->second];
    };
  }

  /// True when a model was found; false when the space is exhausted.
  bool run()
  {
    for (const Term& a : d_ground)
    {
      std::optional<Value> v = evaluate(a, d_lookup, &d_cache);
      if (!v || !std::get<bool>(*v)) return false;
    }
    return descend(0);
  }

  bool timedOut() const { return d_timedOut; }

  Model model() const
  {
    Model m;
    for (std::size_t i = 0; i < d_vars.size(); ++i) m.set(d_vars[i].label(), *d_assigned[i]);
    return m;
  }

 private:
  struct Check
  {
    Term assertion;
    /// All variables of the assertion are assigned at this depth.
    bool complete;
    std::optional<BitProgram> program;
  };

  bool descend(std::size_t depth)
  {
    if (depth == d_vars.size()) return true;
    for (std::size_t i = 0; i < d_domains[depth].size(); ++i)
    {
      const Value& v = d_domains[depth][i];
      d_pos[depth] = i;
      if (++d_steps % 4096 == 0 && d_deadline && std::chrono::steady_clock::now() > *d_deadline)
      {
        d_timedOut = true;
        return false;
      }
      d_assigned[depth] = &v;
      if (consistent(depth) && descend(depth + 1)) return true;
      if (d_timedOut) return false;
    }
    d_assigned[depth] = nullptr;
    return false;
  }

  bool consistent(std::size_t depth)
  {
    for (Check& c : d_byDepth[depth])
    {
      if (c.program)
      {
        if (!c.program->run(d_raw, d_pos)) return false;
        continue;
      }
      std::optional<Value> v = evaluate(c.assertion, d_lookup, &d_cache);
      if (c.complete ? !(v && std::get<bool>(*v)) : (v && !std::get<bool>(*v))) return false;
    }
    return true;
  }

  std::vector<VarDecl> d_vars;
  std::vector<std::vector<Value>> d_domains;
  std::vector<const Value*> d_assigned;
  std::vector<std::size_t> d_pos;
  std::vector<std::vector<std::uint64_t>> d_raw;
  std::unordered_map<std::string, std::size_t> d_index;
  std::vector<std::vector<Check>> d_byDepth;
  std::vector<Term> d_ground;
  VarLookup d_lookup;
  FpOpCache d_cache;
  std::optional<std::chrono::steady_clock::time_point> d_deadline;
  std::uint64_t d_steps = 0;
  bool d_timedOut = false;
};

}  // namespace

BackendVerdict EnumerationBackend::checkSat(const Formula& f, Timeout timeout)
{
  BackendVerdict result;
  std::vector<VarDecl> vars = f.vars;
  for (const VarDecl& v : collectVariables(f.assertions))
  {
    if (!f.findVar(v.name)) vars.push_back(v);
  }

  std::vector<std::vector<Value>> domains;
  bool usesReals = false;
  try
  {
    long double space = 1;
    for (const VarDecl& v : vars)
    {
      domains.push_back(domain(v.sort));
      usesReals = usesReals || v.sort.isReal();
      space *= static_cast<long double>(domains.back().size());
      if (space > static_cast<long double>(d_budget))
        throw SortTooLarge("search space exceeds " + std::to_string(d_budget) + " assignments");
    }
  }
  catch (const SortTooLarge& e)
  {
    result.reason = e.what();
    return result;
  }

  Search search(f, vars, std::move(domains), timeout);
  if (search.run())
  {
    result.status = Verdict::Sat;
    result.model = search.model();
  }
  else if (search.timedOut())
    result.reason = "timeout";
  else if (usesReals)
    result.reason = "no model among the enumerated real values";
  else
    result.status = Verdict::Unsat;
  return result;
}

// ---------------------------------------------------------------------------
// External processes

ProcessBackend::ProcessBackend(std::string name, std::vector<std::string> command, std::vector<std::string> logics)
  : d_name(std::move(name)), d_command(std::move(command)), d_logics(std::move(logics))
{
}

bool ProcessBackend::accepts(std::string_view logic) const
{
  return std::find(d_logics.begin(), d_logics.end(), logic) != d_logics.end();
}

BackendVerdict ProcessBackend::checkSat(const Formula& f, Timeout timeout)
{
  BackendVerdict result;
  PrintOptions opts;
  opts.produceModels = true;
  d_lastScript = printScript(f, opts);

  ProcessResult run;
  try
  {
    run = runProcess(d_command, d_lastScript, timeout);
  }
  catch (const BackendFailure& e)
  {
    result.reason = e.what();
    return result;
  }
  if (run.timedOut)
  {
    result.reason = "timeout";
    return result;
  }

  std::size_t pos = run.out.find_first_not_of(" \t\r\n");
  std::size_t eol = run.out.find('\n', pos == std::string::npos ? run.out.size() : pos);
  std::string first = pos == std::string::npos ? "" : run.out.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
  while (!first.empty() && (first.back() == '\r' || first.back() == ' ')) first.pop_back();

  if (first == "unsat")
  {
    result.status = Verdict::Unsat;
    return result;
  }
  if (first == "unknown")
  {
    result.reason = d_name + " answered unknown";
    return result;
  }
  if (first != "sat")
  {
    std::string detail = first.empty() ? run.err.substr(0, run.err.find('\n')) : first;
    result.reason = d_name + " failed (status " + std::to_string(run.status) + "): " + detail;
    return result;
  }

  result.rawModel = eol == std::string::npos ? "" : run.out.substr(eol + 1);
  try
  {
    result.model = parseModel(result.rawModel, f.vars);
  }
  catch (const ModelParseError& e)
  {
    result.reason = e.what();
    return result;
  }
  for (const VarDecl& v : f.vars)
  {
    if (!result.model.contains(v.label())) result.model.set(v.label(), defaultValue(v.sort));
  }
  result.status = Verdict::Sat;
  return result;
}

// ---------------------------------------------------------------------------
// Models

Model parseModel(std::string_view text, const std::vector<VarDecl>& vars)
{
  std::vector<SExpr> top;
  try
  {
    top = readSExprs(text);
  }
  catch (const ParseError& e)
  {
    throw ModelParseError(e.what(), text.size());
  }

  auto isDefineFun = [](const SExpr& e) {
    return e.isList && !e.items.empty() && e.items[0].isAtom("define-fun");
  };
  std::vector<const SExpr*> bindings;
  if (top.size() == 1 && top[0].isList && !isDefineFun(top[0]))
  {
    for (const SExpr& item : top[0].items)
    {
      if (item.isAtom("model")) continue;
      bindings.push_back(&item);
    }
  }
  else
  {
    for (const SExpr& item : top) bindings.push_back(&item);
  }

  Model m;
  for (const SExpr* b : bindings)
  {
    if (!isDefineFun(*b) || b->items.size() != 5 || b->items[1].isList || !b->items[2].isList)
      throw ModelParseError("expected (define-fun <name> () <sort> <value>)", b->offset);
    if (!b->items[2].items.empty()) throw ModelParseError("function values are not supported", b->offset);
    const std::string& name = b->items[1].atom;
    auto it = std::find_if(vars.begin(), vars.end(), [&](const VarDecl& v) { return v.name == name; });
    if (it == vars.end()) continue;
    try
    {
      Sort declared = parseSort(b->items[3]);
      if (!(declared == it->sort))
        throw ModelParseError("sort of " + name + " differs from its declaration", b->items[3].offset);
      m.set(it->label(), parseConstant(b->items[4], it->sort));
    }
    catch (const ParseError& e)
    {
      throw ModelParseError(e.what(), b->items[4].offset);
    }
    catch (const UnsupportedConstruct& e)
    {
      throw ModelParseError(e.what(), b->items[3].offset);
    }
  }
  return m;
}

std::string printModel(const Model& m, const std::vector<VarDecl>& vars)
{
  std::ostringstream out;
  out << "(\n";
  for (const VarDecl& v : vars)
  {
    const Value* value = m.find(v.label());
    if (!value) continue;
    out << "  (define-fun " << v.name << " () " << v.sort.toString() << ' ' << toSmtLib(*value) << ")\n";
  }
  out << ")\n";
  return out.str();
}

}  // namespace approxsmt
