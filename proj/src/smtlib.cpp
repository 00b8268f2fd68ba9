#include "approxsmt/smtlib.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "approxsmt/errors.hpp"

namespace approxsmt {

namespace {

bool isNumeral(std::string_view s)
{
  if (s.empty()) return false;
  for (char c : s)
  {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool isDecimal(std::string_view s)
{
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return false;
  return isNumeral(s.substr(0, dot)) && isNumeral(s.substr(dot + 1));
}

Rational parseDecimal(std::string_view s)
{
  const auto dot = s.find('.');
  if (dot == std::string_view::npos) return Rational(mpz_class(std::string(s)));
  const std::string digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(s.size() - dot - 1));
  Rational q(mpz_class(digits), den);
  q.canonicalize();
  return q;
}

int parseIndex(const SExpr& e)
{
  if (e.isList || !isNumeral(e.atom) || e.atom.size() > 9) throw ParseError("expected a numeral index at offset " + std::to_string(e.offset));
  return std::stoi(e.atom);
}

bool isBitLiteral(std::string_view s) { return s.size() > 2 && s[0] == '#' && (s[1] == 'b' || s[1] == 'x'); }

BvValue parseBitLiteral(std::string_view s, std::size_t offset)
{
  const bool bin = s[1] == 'b';
  const std::string digits(s.substr(2));
  for (char c : digits)
  {
    if (bin ? (c != '0' && c != '1') : !std::isxdigit(static_cast<unsigned char>(c)))
      throw ParseError("malformed bit-vector literal " + std::string(s) + " at offset " + std::to_string(offset));
  }
  const int width = static_cast<int>(digits.size()) * (bin ? 1 : 4);
  return BvValue(width, mpz_class(digits, bin ? 2 : 16));
}

FpLiteral fpFromTriple(const BvValue& sign, const BvValue& exp, const BvValue& sig, std::size_t offset)
{
  if (sign.width != 1 || exp.width > kMaxExponentBits || sig.width >= kMaxSignificandBits)
    throw ParseError("malformed fp literal at offset " + std::to_string(offset));
  return FpLiteral({exp.width, sig.width + 1}, sign.bits != 0, exp.bits.get_ui(), sig.bits.get_ui());
}

/// (_ +oo e s) and friends; nullopt if `e` is not such an expression.
std::optional<FpLiteral> parseSpecialFp(const SExpr& e)
{
  if (!e.isList || e.items.size() != 4 || !e.items[0].isAtom("_")) return std::nullopt;
  const std::string& name = e.items[1].atom;
  if (name != "+oo" && name != "-oo" && name != "+zero" && name != "-zero" && name != "NaN") return std::nullopt;
  const FpFormat fmt{parseIndex(e.items[2]), parseIndex(e.items[3])};
  if (!isValidFormat(fmt)) throw UnsupportedConstruct("floating-point sort (" + std::to_string(fmt.ebits) + "," + std::to_string(fmt.sbits) + ")");
  if (name == "+oo") return FpLiteral::infinity(fmt, false);
  if (name == "-oo") return FpLiteral::infinity(fmt, true);
  if (name == "+zero") return FpLiteral::zero(fmt, false);
  if (name == "-zero") return FpLiteral::zero(fmt, true);
  return FpLiteral::nan(fmt);
}

/// Real constants: numerals, decimals, (- c), (/ c c).
std::optional<Rational> parseRealConstant(const SExpr& e)
{
  if (!e.isList)
  {
    if (isNumeral(e.atom) || isDecimal(e.atom)) return parseDecimal(e.atom);
    return std::nullopt;
  }
  if (e.items.size() == 2 && e.items[0].isAtom("-"))
  {
    if (auto q = parseRealConstant(e.items[1])) return Rational(-*q);
    return std::nullopt;
  }
  if (e.items.size() == 3 && e.items[0].isAtom("/"))
  {
    auto n = parseRealConstant(e.items[1]);
    auto d = parseRealConstant(e.items[2]);
    if (n && d && *d != 0) return Rational(*n / *d);
  }
  return std::nullopt;
}

const std::map<std::string, Op, std::less<>>& operatorTable()
{
  static const std::map<std::string, Op, std::less<>> table{
      {"not", Op::Not},
      {"and", Op::And},
      {"or", Op::Or},
      {"=>", Op::Implies},
      {"xor", Op::Xor},
      {"=", Op::Eq},
      {"fp.add", Op::FpAdd},
      {"fp.sub", Op::FpSub},
      {"fp.mul", Op::FpMul},
      {"fp.div", Op::FpDiv},
      {"fp.fma", Op::FpFma},
      {"fp.neg", Op::FpNeg},
      {"fp.abs", Op::FpAbs},
      {"fp.eq", Op::FpEq},
      {"fp.leq", Op::FpLeq},
      {"fp.lt", Op::FpLt},
      {"fp.geq", Op::FpGeq},
      {"fp.gt", Op::FpGt},
      {"fp.isNaN", Op::FpIsNaN},
      {"fp.isInfinite", Op::FpIsInfinite},
      {"fp.isZero", Op::FpIsZero},
      {"fp.isNormal", Op::FpIsNormal},
      {"fp.isSubnormal", Op::FpIsSubnormal},
      {"fp.isNegative", Op::FpIsNegative},
      {"fp.isPositive", Op::FpIsPositive},
      {"bvadd", Op::BvAdd},
      {"bvsub", Op::BvSub},
      {"bvmul", Op::BvMul},
      {"bvneg", Op::BvNeg},
      {"bvsdiv", Op::BvSdiv},
      {"bvshl", Op::BvShl},
      {"bvashr", Op::BvAshr},
      {"bvxor", Op::BvXor},
      {"bvsle", Op::BvSle},
      {"bvslt", Op::BvSlt},
      {"bvsge", Op::BvSge},
      {"bvsgt", Op::BvSgt},
      {"+", Op::RealAdd},
      {"-", Op::RealSub},
      {"*", Op::RealMul},
      {"/", Op::RealDiv},
      {"<=", Op::RealLeq},
      {"<", Op::RealLt},
      {">=", Op::RealGeq},
      {">", Op::RealGt},
  };
  return table;
}

class ScriptParser
{
 public:
  Formula run(std::string_view text)
  {
    for (const SExpr& cmd : readSExprs(text)) command(cmd);
    labelFormula(d_formula);
    return std::move(d_formula);
  }

 private:
  void command(const SExpr& cmd)
  {
    if (!cmd.isList || cmd.items.empty() || cmd.items[0].isList)
      throw ParseError("expected a command at offset " + std::to_string(cmd.offset));
    const std::string& name = cmd.items[0].atom;
    if (name == "set-logic")
    {
      requireArgs(cmd, 1);
      d_formula.logic = cmd.items[1].atom;
    }
    else if (name == "set-option" || name == "set-info" || name == "check-sat" || name == "get-model"
             || name == "exit")
    {
    }
    else if (name == "declare-fun")
    {
      requireArgs(cmd, 3);
      if (!cmd.items[2].isList || !cmd.items[2].items.empty()) throw UnsupportedConstruct("declare-fun with arguments");
      declare(cmd.items[1], parseSortChecked(cmd.items[3]));
    }
    else if (name == "declare-const")
    {
      requireArgs(cmd, 2);
      declare(cmd.items[1], parseSortChecked(cmd.items[2]));
    }
    else if (name == "define-fun")
    {
      requireArgs(cmd, 4);
      if (!cmd.items[2].isList || !cmd.items[2].items.empty()) throw UnsupportedConstruct("define-fun with arguments");
      const Sort sort = parseSortChecked(cmd.items[3]);
      Term body = term(cmd.items[4]);
      if (body->sort() != sort) throw SortMismatch("define-fun body does not have the declared sort");
      Term var = declare(cmd.items[1], sort);
      d_formula.assertions.push_back(mkApp(Op::Eq, {var, body}));
    }
    else if (name == "assert")
    {
      requireArgs(cmd, 1);
      Term t = term(cmd.items[1]);
      if (!t->sort().isBool()) throw SortMismatch("assertion is not Boolean");
      d_formula.assertions.push_back(t);
    }
    else
    {
      throw UnsupportedConstruct(name);
    }
  }

  static void requireArgs(const SExpr& cmd, std::size_t n)
  {
    if (cmd.items.size() != n + 1)
      throw ParseError(cmd.items[0].atom + " expects " + std::to_string(n) + " arguments (offset "
                       + std::to_string(cmd.offset) + ")");
  }

  static Sort parseSortChecked(const SExpr& e) { return parseSort(e); }

  Term declare(const SExpr& nameExpr, const Sort& sort)
  {
    if (nameExpr.isList) throw ParseError("expected a symbol at offset " + std::to_string(nameExpr.offset));
    const std::string& name = nameExpr.atom;
    if (d_vars.count(name)) throw ParseError("redeclared symbol " + name);
    Term v = mkVar(name, sort);
    d_vars.emplace(name, v);
    d_formula.vars.push_back(VarDecl{name, sort});
    return v;
  }

  Term lookupSymbol(const SExpr& e)
  {
    for (auto it = d_lets.rbegin(); it != d_lets.rend(); ++it)
    {
      auto found = it->find(e.atom);
      if (found != it->end()) return found->second;
    }
    auto v = d_vars.find(e.atom);
    if (v != d_vars.end()) return v->second;
    if (e.atom == "true") return mkConst(true);
    if (e.atom == "false") return mkConst(false);
    if (auto rm = parseRoundingMode(e.atom)) return mkConst(*rm);
    if (isNumeral(e.atom) || isDecimal(e.atom)) return mkConst(parseDecimal(e.atom));
    if (isBitLiteral(e.atom)) return mkConst(parseBitLiteral(e.atom, e.offset));
    if (operatorTable().count(e.atom) || e.atom == "ite" || e.atom.rfind("fp.", 0) == 0)
      throw UnsupportedConstruct(e.atom);
    throw ParseError("undeclared symbol " + e.atom + " at offset " + std::to_string(e.offset));
  }

  Term term(const SExpr& e)
  {
    if (!e.isList) return lookupSymbol(e);
    if (e.items.empty()) throw ParseError("empty application at offset " + std::to_string(e.offset));
    if (auto special = parseSpecialFp(e)) return mkConst(*special);
    const SExpr& head = e.items[0];
    if (head.isAtom("_"))
    {
      // (_ bvN w)
      if (e.items.size() == 3 && head.isAtom("_") && e.items[1].atom.rfind("bv", 0) == 0
          && isNumeral(e.items[1].atom.substr(2)))
        return mkConst(BvValue(parseIndex(e.items[2]), mpz_class(e.items[1].atom.substr(2))));
      throw UnsupportedConstruct(e.toString());
    }
    if (head.isList) return indexedApplication(e);
    const std::string& name = head.atom;
    if (name == "let") return let(e);
    if (name == "fp")
    {
      if (e.items.size() != 4) throw ParseError("fp expects three arguments");
      auto bits = [&](std::size_t i) {
        const SExpr& a = e.items[i];
        if (a.isList || !isBitLiteral(a.atom)) throw ParseError("fp expects bit-vector literals at offset " + std::to_string(a.offset));
        return parseBitLiteral(a.atom, a.offset);
      };
      return mkConst(fpFromTriple(bits(1), bits(2), bits(3), e.offset));
    }
    if (auto q = parseRealConstant(e)) return mkConst(*q);
    auto op = operatorTable().find(name);
    if (op == operatorTable().end()) throw UnsupportedConstruct(name);
    std::vector<Term> args;
    for (std::size_t i = 1; i < e.items.size(); ++i) args.push_back(term(e.items[i]));
    Op kind = op->second;
    if (kind == Op::RealSub && args.size() == 1) kind = Op::RealNeg;
    return mkApp(kind, std::move(args));
  }

  Term indexedApplication(const SExpr& e)
  {
    const SExpr& head = e.items[0];
    if (head.items.size() < 2 || !head.items[0].isAtom("_")) throw UnsupportedConstruct(head.toString());
    const std::string& name = head.items[1].atom;
    std::vector<Term> args;
    if (name == "to_fp" && head.items.size() == 4)
    {
      const FpFormat fmt{parseIndex(head.items[2]), parseIndex(head.items[3])};
      if (!isValidFormat(fmt)) throw UnsupportedConstruct("floating-point sort " + head.toString());
      if (e.items.size() == 2)
      {
        // Bit-pattern reinterpretation of a literal.
        Term bv = term(e.items[1]);
        if (!bv->isLiteral() || !bv->sort().isBitVector() || bv->sort().bvWidth() != fmt.totalBits())
          throw UnsupportedConstruct("to_fp from a non-literal bit-vector");
        return mkConst(FpLiteral::fromBits(fmt, std::get<BvValue>(*bv->symbol.value).bits.get_ui()));
      }
      if (e.items.size() != 3) throw SortMismatch("to_fp: wrong number of arguments");
      Term rm = term(e.items[1]);
      Term src = term(e.items[2]);
      if (!rm->sort().isRoundingMode()) throw SortMismatch("to_fp: first argument must be a rounding mode");
      if (src->sort().isReal())
      {
        if (!src->isLiteral() || !rm->isLiteral()) throw UnsupportedConstruct("to_fp from a non-constant real");
        return mkConst(fromRational(std::get<Rational>(*src->symbol.value), fmt,
                                    std::get<RoundingMode>(*rm->symbol.value)));
      }
      return mkApp(Op::FpToFp, {rm, src}, {}, {fmt.ebits, fmt.sbits});
    }
    if (name == "sign_extend" && head.items.size() == 3)
    {
      if (e.items.size() != 2) throw SortMismatch("sign_extend: wrong number of arguments");
      return mkApp(Op::BvSignExtend, {term(e.items[1])}, {}, {parseIndex(head.items[2]), 0});
    }
    if (name == "extract" && head.items.size() == 4)
    {
      if (e.items.size() != 2) throw SortMismatch("extract: wrong number of arguments");
      return mkApp(Op::BvExtract, {term(e.items[1])}, {}, {parseIndex(head.items[2]), parseIndex(head.items[3])});
    }
    throw UnsupportedConstruct(head.toString());
  }

  Term let(const SExpr& e)
  {
    if (e.items.size() != 3 || !e.items[1].isList) throw ParseError("malformed let at offset " + std::to_string(e.offset));
    std::map<std::string, Term> scope;
    for (const SExpr& binding : e.items[1].items)
    {
      if (!binding.isList || binding.items.size() != 2 || binding.items[0].isList)
        throw ParseError("malformed let binding at offset " + std::to_string(binding.offset));
      scope[binding.items[0].atom] = term(binding.items[1]);
    }
    d_lets.push_back(std::move(scope));
    Term body = term(e.items[2]);
    d_lets.pop_back();
    return body;
  }

  Formula d_formula;
  std::map<std::string, Term> d_vars;
  std::vector<std::map<std::string, Term>> d_lets;
};

void printRec(const Term& t, std::ostream& out)
{
  const Node& n = *t;
  if (n.isVariable())
  {
    out << n.symbol.name;
    return;
  }
  if (n.isLiteral())
  {
    out << toSmtLib(*n.symbol.value);
    return;
  }
  out << '(';
  switch (n.op())
  {
    case Op::FpToFp: out << "(_ to_fp " << n.symbol.indices[0] << ' ' << n.symbol.indices[1] << ')'; break;
    case Op::BvSignExtend: out << "(_ sign_extend " << n.symbol.indices[0] << ')'; break;
    case Op::BvExtract: out << "(_ extract " << n.symbol.indices[0] << ' ' << n.symbol.indices[1] << ')'; break;
    default: out << opName(n.op()); break;
  }
  for (const Term& c : n.children)
  {
    out << ' ';
    printRec(c, out);
  }
  out << ')';
}

}  // namespace

std::string SExpr::toString() const
{
  if (!isList) return atom;
  std::string out = "(";
  for (std::size_t i = 0; i < items.size(); ++i)
  {
    if (i) out += ' ';
    out += items[i].toString();
  }
  return out + ")";
}

std::vector<SExpr> readSExprs(std::string_view text)
{
  std::vector<SExpr> top;
  std::vector<SExpr> stack;
  std::size_t i = 0;
  auto emit = [&](SExpr e) {
    if (stack.empty()) top.push_back(std::move(e));
    else stack.back().items.push_back(std::move(e));
  };
  while (i < text.size())
  {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c)))
    {
      ++i;
    }
    else if (c == ';')
    {
      while (i < text.size() && text[i] != '\n') ++i;
    }
    else if (c == '(')
    {
      SExpr e;
      e.isList = true;
      e.offset = i++;
      stack.push_back(std::move(e));
    }
    else if (c == ')')
    {
      if (stack.empty()) throw ParseError("unbalanced ')' at offset " + std::to_string(i));
      SExpr e = std::move(stack.back());
      stack.pop_back();
      emit(std::move(e));
      ++i;
    }
    else if (c == '"' || c == '|')
    {
      const std::size_t start = i++;
      while (i < text.size() && text[i] != c) ++i;
      if (i >= text.size()) throw ParseError("unterminated literal at offset " + std::to_string(start));
      ++i;
      SExpr e;
      // Quoted symbols lose their bars; strings keep their quotes.
      e.atom = c == '|' ? std::string(text.substr(start + 1, i - start - 2)) : std::string(text.substr(start, i - start));
      e.offset = start;
      emit(std::move(e));
    }
    else
    {
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '('
             && text[i] != ')' && text[i] != ';')
        ++i;
      SExpr e;
      e.atom = std::string(text.substr(start, i - start));
      e.offset = start;
      emit(std::move(e));
    }
  }
  if (!stack.empty()) throw ParseError("unbalanced '(' at offset " + std::to_string(stack.back().offset));
  return top;
}

Sort parseSort(const SExpr& e)
{
  if (!e.isList)
  {
    if (e.atom == "Bool") return Sort::boolean();
    if (e.atom == "Real") return Sort::real();
    if (e.atom == "RoundingMode") return Sort::roundingMode();
    if (e.atom == "Float16") return Sort::floatingPoint(5, 11);
    if (e.atom == "Float32") return Sort::floatingPoint(8, 24);
    if (e.atom == "Float64") return Sort::floatingPoint(11, 53);
    throw UnsupportedConstruct("sort " + e.atom);
  }
  if (e.items.size() == 4 && e.items[0].isAtom("_") && e.items[1].isAtom("FloatingPoint"))
  {
    const FpFormat fmt{parseIndex(e.items[2]), parseIndex(e.items[3])};
    if (!isValidFormat(fmt)) throw UnsupportedConstruct("sort " + e.toString());
    return Sort::floatingPoint(fmt);
  }
  if (e.items.size() == 3 && e.items[0].isAtom("_") && e.items[1].isAtom("BitVec"))
  {
    const int w = parseIndex(e.items[2]);
    if (w < 1) throw UnsupportedConstruct("sort " + e.toString());
    return Sort::bitVector(w);
  }
  throw UnsupportedConstruct("sort " + e.toString());
}

Value parseConstant(const SExpr& e, const Sort& expected)
{
  auto fail = [&]() -> Value {
    throw ParseError("expected a constant of sort " + expected.toString() + " at offset " + std::to_string(e.offset)
                     + ", got " + e.toString());
  };
  switch (expected.kind())
  {
    case SortKind::Bool:
      if (e.isAtom("true")) return true;
      if (e.isAtom("false")) return false;
      return fail();
    case SortKind::RoundingMode:
      if (!e.isList)
      {
        if (auto rm = parseRoundingMode(e.atom)) return *rm;
      }
      return fail();
    case SortKind::Real:
      if (auto q = parseRealConstant(e)) return *q;
      return fail();
    case SortKind::BitVector:
    {
      std::optional<BvValue> bv;
      if (!e.isList && isBitLiteral(e.atom)) bv = parseBitLiteral(e.atom, e.offset);
      if (e.isList && e.items.size() == 3 && e.items[0].isAtom("_") && e.items[1].atom.rfind("bv", 0) == 0
          && isNumeral(e.items[1].atom.substr(2)))
        bv = BvValue(parseIndex(e.items[2]), mpz_class(e.items[1].atom.substr(2)));
      if (!bv || bv->width != expected.bvWidth()) return fail();
      return *bv;
    }
    case SortKind::FloatingPoint:
    {
      std::optional<FpLiteral> fp = parseSpecialFp(e);
      if (!fp && e.isList && e.items.size() == 4 && e.items[0].isAtom("fp"))
      {
        std::vector<BvValue> parts;
        for (std::size_t i = 1; i < 4; ++i)
        {
          if (e.items[i].isList || !isBitLiteral(e.items[i].atom)) return fail();
          parts.push_back(parseBitLiteral(e.items[i].atom, e.items[i].offset));
        }
        fp = fpFromTriple(parts[0], parts[1], parts[2], e.offset);
      }
      if (!fp || fp->format() != expected.fpFormat()) return fail();
      return *fp;
    }
  }
  return fail();
}

Formula parseScript(std::string_view text) { return ScriptParser{}.run(text); }

std::string printTerm(const Term& t)
{
  std::ostringstream out;
  printRec(t, out);
  return out.str();
}

std::string printScript(const Formula& f, const PrintOptions& opts)
{
  std::ostringstream out;
  if (opts.produceModels) out << "(set-option :produce-models true)\n";
  if (!f.logic.empty()) out << "(set-logic " << f.logic << ")\n";
  for (const VarDecl& v : f.vars) out << "(declare-fun " << v.name << " () " << v.sort.toString() << ")\n";
  for (const Term& a : f.assertions)
  {
    out << "(assert ";
    printRec(a, out);
    out << ")\n";
  }
  out << "(check-sat)\n";
  if (opts.getModel && !f.assertions.empty()) out << "(get-model)\n";
  return out.str();
}

}  // namespace approxsmt
