#include <gtest/gtest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "approxsmt/errors.hpp"
#include "approxsmt/harness.hpp"
#include "approxsmt/smtlib.hpp"

using namespace approxsmt;
namespace fs = std::filesystem;

namespace {

const std::string kData = APPROXSMT_TEST_DATA;

class TempDir
{
 public:
  TempDir()
  {
    std::string tmpl = (fs::temp_directory_path() / "approxsmt-XXXXXX").string();
    d_path = mkdtemp(tmpl.data());
  }
  ~TempDir() { fs::remove_all(d_path); }
  const fs::path& path() const { return d_path; }

  fs::path write(const std::string& name, const std::string& text) const
  {
    fs::path p = d_path / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
    return p;
  }

 private:
  fs::path d_path;
};

struct CliRun
{
  int status;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args)
{
  std::ostringstream out, err;
  int status = runCli(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text)
{
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line)
{
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i)
  {
    char c = line[i];
    if (quoted && c == '"' && i + 1 < line.size() && line[i + 1] == '"')
    {
      cur += '"';
      ++i;
    }
    else if (c == '"')
      quoted = !quoted;
    else if (c == ',' && !quoted)
    {
      out.push_back(cur);
      cur.clear();
    }
    else
      cur += c;
  }
  out.push_back(cur);
  return out;
}

const char* kTinySat = "(declare-fun x () (_ FloatingPoint 3 3))(assert (fp.gt x (fp #b0 #b011 #b00)))";
const char* kTinyUnsat = "(declare-fun x () (_ FloatingPoint 3 3))(assert (fp.isNaN x))(assert (fp.isZero x))";

}  // namespace

TEST(Factories, NamesAndErrors)
{
  EXPECT_EQ(makeApproximation("rpfp")->name(), "rpfp");
  EXPECT_EQ(makeApproximation("bv")->name(), "bv");
  EXPECT_EQ(makeApproximation("ra")->name(), "ra");
  EXPECT_EQ(makeApproximation("none"), nullptr);
  EXPECT_THROW(makeApproximation("fixed"), UsageError);
  EXPECT_EQ(makeBackend("enum")->name(), "enum");
  EXPECT_THROW(makeBackend("nosuchsolver"), UsageError);
}

TEST(ParsePrecision, EachApproximation)
{
  EXPECT_EQ(parsePrecision("rpfp", "3"), Precision::scalar(3));
  EXPECT_EQ(parsePrecision("bv", "5,5"), Precision::pair(5, 5));
  EXPECT_EQ(parsePrecision("bv", "25,25"), Precision::pair(25, 25));
  EXPECT_EQ(parsePrecision("ra", "bot"), Precision::bottom());
  EXPECT_EQ(parsePrecision("ra", "top"), Precision::top());
  for (auto [a, t] : {std::pair{"rpfp", "6"}, {"rpfp", "-1"}, {"rpfp", "2x"}, {"rpfp", ""}, {"bv", "5"},
                      {"bv", "5,"}, {"bv", "5,5,5"}, {"ra", "1"}, {"none", "0"}})
    EXPECT_THROW(parsePrecision(a, t), UsageError) << a << ' ' << t;
}

TEST(RunFile, VerdictsAndErrors)
{
  TempDir d;
  RunConfig c;
  RunRecord sat = runFile(d.write("sat.smt2", kTinySat), c);
  EXPECT_EQ(sat.verdict, Verdict::Sat);
  EXPECT_FALSE(sat.error);
  EXPECT_EQ(sat.vars.size(), 1u);
  EXPECT_EQ(runFile(d.write("unsat.smt2", kTinyUnsat), c).verdict, Verdict::Unsat);

  RunRecord bad = runFile(d.write("bad.smt2", "(assert (fp.add x))"), c);
  ASSERT_TRUE(bad.error);
  EXPECT_EQ(bad.verdict, Verdict::Unknown);
  EXPECT_TRUE(runFile(d.path() / "missing.smt2", c).error);

  c.approx = "none";
  RunRecord direct = runFile(d.path() / "sat.smt2", c);
  EXPECT_EQ(direct.verdict, Verdict::Sat);
  EXPECT_EQ(direct.stats.iterations, 1);
}

TEST(Bench, CsvRowsSortedByFile)
{
  TempDir d;
  d.write("b/unsat.smt2", kTinyUnsat);
  d.write("a,sat.smt2", kTinySat);
  d.write("c.smt2", "(assert");
  d.write("notes.txt", "ignored");
  RunConfig c;
  std::vector<RunRecord> one = runBench(d.path(), c, 1);
  std::vector<RunRecord> many = runBench(d.path(), c, 3);
  ASSERT_EQ(one.size(), 3u);
  ASSERT_EQ(many.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i)
  {
    EXPECT_EQ(one[i].file, many[i].file);
    EXPECT_EQ(one[i].verdict, many[i].verdict);
  }

  std::ostringstream csv;
  writeCsv(csv, many);
  std::vector<std::string> rows = lines(csv.str());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0],
            "file,verdict,iterations,max_precision_reached,fallback_used,time_total_ms,time_encode_ms,"
            "time_backend_ms,time_decode_ms,time_reconstruct_ms,time_refine_ms");
  std::vector<std::vector<std::string>> cols;
  for (std::size_t i = 1; i < rows.size(); ++i) cols.push_back(fields(rows[i]));
  for (const auto& r : cols) ASSERT_EQ(r.size(), 11u) << r[0];
  EXPECT_EQ(cols[0][0], (d.path() / "a,sat.smt2").string());
  EXPECT_EQ(cols[0][1], "sat");
  EXPECT_EQ(cols[0][2], "1");
  EXPECT_EQ(cols[1][0], (d.path() / "b/unsat.smt2").string());
  EXPECT_EQ(cols[1][1], "unsat");
  // All (3,3) precisions encode alike, then the fallback decides.
  EXPECT_EQ(cols[1][2], "6");
  EXPECT_EQ(cols[1][3], "1");
  EXPECT_EQ(cols[1][4], "1");
  EXPECT_EQ(cols[2][1], "error");
  EXPECT_NO_THROW(std::stod(cols[0][5]));
}

TEST(Bench, EmptyAndMissingDirectories)
{
  TempDir d;
  EXPECT_TRUE(runBench(d.path(), RunConfig{}).empty());
  std::ostringstream csv;
  writeCsv(csv, {});
  EXPECT_EQ(lines(csv.str()).size(), 1u);
  EXPECT_THROW(runBench(d.path() / "nope", RunConfig{}), UsageError);
}

TEST(Cli, Solve)
{
  CliRun r = cli({"solve", kData + "/ex1.smt2"});
  EXPECT_EQ(r.status, 0) << r.err;
  std::vector<std::string> out = lines(r.out);
  ASSERT_GE(out.size(), 1u);
  EXPECT_EQ(out[0], "sat");
  // The model reads back as SMT-LIB constants.
  EXPECT_NE(r.out.find("(define-fun x () (_ FloatingPoint 8 24) (fp #b0 #b10000000 #b00000000000000000000000))"),
            std::string::npos)
      << r.out;
  EXPECT_NE(r.out.find("(define-fun y () (_ FloatingPoint 8 24) (fp #b0 #b10000000 #b11100000000000000000000))"),
            std::string::npos)
      << r.out;

  CliRun s = cli({"solve", kData + "/ex1.smt2", "--approx", "bv", "--stats"});
  EXPECT_EQ(s.status, 0);
  EXPECT_NE(s.out.find("; iterations 1, fallback no"), std::string::npos) << s.out;
  EXPECT_NE(s.out.find("; round 1 precision 5,5"), std::string::npos) << s.out;
}

TEST(Cli, Encode)
{
  CliRun r = cli({"encode", kData + "/ex1.smt2", "--approx", "bv", "--precision", "5,5"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out, encodeScript(readFormulaFile(kData + "/ex1.smt2"), "bv", Precision::pair(5, 5)));
  EXPECT_NE(r.out.find("(set-logic QF_BV)"), std::string::npos);

  CliRun p = cli({"encode", kData + "/ex1.smt2", "--precision", "0"});
  EXPECT_NE(p.out.find("(_ FloatingPoint 3 3)"), std::string::npos) << p.out;
  CliRun top = cli({"encode", kData + "/ex1.smt2", "--approx", "ra", "--precision", "top"});
  EXPECT_TRUE(structurallyEqual(parseScript(top.out), readFormulaFile(kData + "/ex1.smt2")));
  CliRun bvTop = cli({"encode", kData + "/ex1.smt2", "--approx", "bv", "--precision", "25,25"});
  EXPECT_NE(bvTop.out.find("(set-logic QF_FP)"), std::string::npos);
  CliRun bot = cli({"encode", kData + "/ex1.smt2", "--approx", "ra", "--precision", "bot"});
  EXPECT_NE(bot.out.find("(assert (= y (+ x (/ 7.0 4.0))))"), std::string::npos) << bot.out;
}

TEST(Cli, Bench)
{
  TempDir d;
  d.write("in/x.smt2", kTinySat);
  fs::path csv = d.path() / "out.csv";
  CliRun r = cli({"bench", (d.path() / "in").string(), "--csv", csv.string(), "--jobs", "2"});
  EXPECT_EQ(r.status, 0) << r.err;
  std::ifstream in(csv);
  std::stringstream text;
  text << in.rdbuf();
  ASSERT_EQ(lines(text.str()).size(), 2u);
  EXPECT_EQ(fields(lines(text.str())[1])[1], "sat");
}

TEST(Cli, ExitStatuses)
{
  EXPECT_EQ(cli({}).status, 1);
  EXPECT_EQ(cli({"frobnicate"}).status, 1);
  EXPECT_EQ(cli({"solve"}).status, 1);
  EXPECT_EQ(cli({"solve", kData + "/ex1.smt2", "--approx", "fixed"}).status, 1);
  EXPECT_EQ(cli({"solve", kData + "/ex1.smt2", "--backend", "nosuchsolver"}).status, 1);
  EXPECT_EQ(cli({"encode", kData + "/ex1.smt2", "--approx", "bv", "--precision", "5"}).status, 1);
  EXPECT_EQ(cli({"bench", "/nonexistent/dir", "--csv", "/tmp/x.csv"}).status, 1);

  CliRun missing = cli({"solve", "/nonexistent.smt2"});
  EXPECT_EQ(missing.status, 2);
  EXPECT_NE(missing.err.find("cannot read"), std::string::npos);

  CliRun help = cli({"--help"});
  EXPECT_EQ(help.status, 0);
  EXPECT_NE(help.out.find("encode"), std::string::npos);
}
