#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "chow/dsl.hpp"

using namespace chow;
using namespace chow::dsl;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SourcePos error_pos(const std::string& src) {
  try {
    parse(src);
  } catch (const SyntaxError& e) {
    return e.pos();
  }
  return {0, 0};
}

std::string random_expr(std::mt19937_64& rng, int depth) {
  static const std::vector<std::string> atoms{"c1", "c2", "b1", "f3", "S", "B", "7", "x"};
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 6 : 0);
  switch (pick(rng)) {
    case 0: return atoms[rng() % atoms.size()];
    case 1: return random_expr(rng, depth - 1) + " + " + random_expr(rng, depth - 1);
    case 2: return random_expr(rng, depth - 1) + " - " + random_expr(rng, depth - 1);
    case 3: return "(" + random_expr(rng, depth - 1) + ") * " + random_expr(rng, depth - 1);
    case 4: return "-" + random_expr(rng, depth - 1);
    case 5: return "(" + random_expr(rng, depth - 1) + ")^" + std::to_string(rng() % 4 + 1);
    default: return "chern(" + random_expr(rng, depth - 1) + ", " + std::to_string(rng() % 3) + ")";
  }
}

const char* kPrelude =
    "let S = bundle(4, c);\n"
    "let G = grass(S, 2, b);\n"
    "let B = sub(G);\n";

}  // namespace

// ---- parsing --------------------------------------------------------------

TEST(Parse, StatementsAndPositions) {
  const Script s = parse("let S = bundle(4, c);\ncheck chern(S, 1) == c1;\n");
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].kind, Stmt::Kind::Let);
  EXPECT_EQ(s[0].name, "S");
  EXPECT_EQ(s[1].kind, Stmt::Kind::Check);
  EXPECT_EQ(s[1].pos, (SourcePos{2, 1}));
  EXPECT_EQ(s[1].lhs->kind, Expr::Kind::Call);
  EXPECT_EQ(s[1].rhs->kind, Expr::Kind::Ref);
}

TEST(Parse, PrecedenceAndAssociativity) {
  EXPECT_EQ(to_source(*parse_expression("a - b - c")), "a - b - c");
  EXPECT_EQ(to_source(*parse_expression("a - (b - c)")), "a - (b - c)");
  EXPECT_EQ(to_source(*parse_expression("(a + b) * c")), "(a + b) * c");
  EXPECT_EQ(to_source(*parse_expression("-a^2")), "-a^2");
  EXPECT_EQ(to_source(*parse_expression("(-a)^2")), "(-a)^2");
  EXPECT_EQ(to_source(*parse_expression("((c1))")), "c1");
}

TEST(Parse, CommentsAreIgnored) {
  EXPECT_EQ(parse("# only a comment\nlet a = 1; # trailing\n").size(), 1u);
}

TEST(Parse, UnclosedCallReportsColumn) {
  const SourcePos p = error_pos("let W = wedge2(;");
  EXPECT_EQ(p.line, 1);
  EXPECT_EQ(p.column, 16);
  EXPECT_EQ(error_pos("let a = 1;\nlet b = ;"), (SourcePos{2, 9}));
  EXPECT_EQ(error_pos("let a = 1"), (SourcePos{1, 10}));
}

TEST(Parse, UnknownFunctionAndArity) {
  EXPECT_THROW(parse("let a = frobnicate(1);"), SyntaxError);
  EXPECT_THROW(parse("let a = grass(S, 2);"), SyntaxError);
  EXPECT_THROW(parse("let a = dual(S, T);"), SyntaxError);
  EXPECT_NO_THROW(parse("let a = schur(1, 2, 3);"));
  EXPECT_THROW(parse("let a = schur();"), SyntaxError);
}

TEST(Parse, ErrorsCarryAFileLocation) {
  try {
    parse("let a = 1 +;");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.located("x.chow").rfind("x.chow:1:12: ", 0), 0u) << e.located("x.chow");
  }
}

TEST(Parse, RoundTripOnRandomScripts) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    std::string src;
    for (int k = 0; k < 3; ++k) src += "let v" + std::to_string(k) + " = " + random_expr(rng, 3) + ";\n";
    src += "check " + random_expr(rng, 3) + " == " + random_expr(rng, 2) + ";\n";
    const Script a = parse(src);
    const std::string printed = to_source(a);
    EXPECT_EQ(parse(printed), a) << src;
    EXPECT_EQ(normalize(printed), printed);
  }
}

TEST(Parse, RoundTripOnTheShippedScript) {
  const std::string src = read_file("scripts/so4.chow");
  ASSERT_FALSE(src.empty());
  const Script a = parse(src);
  EXPECT_EQ(parse(to_source(a)), a);
}

// ---- binding --------------------------------------------------------------

TEST(Bind, UnknownIdentifier) {
  try {
    bind_check(parse("let S = bundle(4, c);\ncheck chern(S, 1) == d1;"));
    FAIL();
  } catch (const ScriptError& e) {
    EXPECT_EQ(e.pos(), (SourcePos{2, 22}));
    EXPECT_NE(std::string(e.what()).find("d1"), std::string::npos);
  }
}

TEST(Bind, RingVariablesNeedAnEarlierPrefix) {
  EXPECT_NO_THROW(bind_check(parse("let S = bundle(4, c);\ncheck c1 == c1;")));
  EXPECT_THROW(bind_check(parse("check c1 == c1;\nlet S = bundle(4, c);")), ScriptError);
  EXPECT_THROW(bind_check(parse("let S = bundle(4, c);\ncheck c == c;")), ScriptError);
}

TEST(Bind, RebindingAndShadowing) {
  EXPECT_THROW(bind_check(parse("let a = 1;\nlet a = 2;")), ScriptError);
  EXPECT_THROW(bind_check(parse("let S = bundle(4, c);\nlet c2 = 1;")), ScriptError);
  EXPECT_THROW(bind_check(parse("let true = 1;")), ScriptError);
}

// ---- evaluation -----------------------------------------------------------

TEST(Eval, DeterminantOfTheSubBundle) {
  Session s;
  s.run(std::string(kPrelude) + "let D = det(B);\ncheck chern(D, 1) == b1;\ncheck rank(D) == 1;");
  EXPECT_TRUE(s.all_checks_passed());
  EXPECT_EQ(s.checks().size(), 2u);
}

TEST(Eval, GysinOfTopSchurClass) {
  Session s;
  s.run(std::string(kPrelude) + "check gysin(G, b2^2) == 1;\ncheck gysin(G, b1^4) == 2;\ncheck gysin(G, b1) == 0;");
  EXPECT_TRUE(s.all_checks_passed());
}

TEST(Eval, MembershipInTheTorsionIdeal) {
  Session s;
  s.run(
      "let R = bundle(4, c);\n"
      "let I = ideal(2*c3, c1);\n"
      "check member(2*c3, I) == true;\n"
      "check member(c3, I) == false;\n"
      "check member(c1*c2 + 4*c3, I) == true;\n"
      "let A = structure(I, 3);\n"
      "let A4 = structure(I, 4);\n");
  EXPECT_TRUE(s.all_checks_passed());
  EXPECT_EQ(render(s.lookup("A")), "Z/2");
  EXPECT_EQ(render(s.lookup("A4")), "Z^2");
}

TEST(Eval, FailedChecksAreRecordedNotThrown) {
  Session s;
  s.run("let S = bundle(2, c);\ncheck chern(S, 1) == c2;\ncheck rank(S) == 2;");
  ASSERT_EQ(s.checks().size(), 2u);
  EXPECT_FALSE(s.checks()[0].passed);
  EXPECT_EQ(s.checks()[0].lhs, "c1");
  EXPECT_EQ(s.checks()[0].rhs, "c2");
  EXPECT_TRUE(s.checks()[1].passed);
  EXPECT_FALSE(s.all_checks_passed());
}

TEST(Eval, TypeMismatchIsReportedAtTheCall) {
  Session s;
  try {
    s.run("let S = bundle(4, c);\nlet x = rank(c1);");
    FAIL();
  } catch (const ScriptError& e) {
    EXPECT_EQ(e.pos().line, 2);
    EXPECT_NE(std::string(e.what()).find("bundle"), std::string::npos) << e.what();
  }
  EXPECT_THROW(Session().run("let S = bundle(4, c);\nlet y = S + 1;"), ScriptError);
}

TEST(Eval, DegreeOverflowIsAnError) {
  Session s(4);
  EXPECT_THROW(s.run("let S = bundle(4, c);\nlet x = c2^3;"), ScriptError);
  Session t(4);
  EXPECT_THROW(t.run("let S = bundle(4, c);\nlet x = c2 * c3;"), ScriptError);
  Session u(4);
  EXPECT_NO_THROW(u.run("let S = bundle(4, c);\nlet x = c2^2;"));
}

TEST(Eval, BindingsRenderInOrder) {
  Session s;
  s.run("let S = bundle(2, c);\nlet n = rank(S);\nlet t = chern(S, 1) + 1;");
  ASSERT_EQ(s.bindings().size(), 3u);
  EXPECT_EQ(s.bindings()[1], (std::pair<std::string, std::string>{"n", "2"}));
  EXPECT_EQ(s.bindings()[2].second, "c1 + 1");
}

TEST(Eval, ShippedScriptComputesTheDocumentedValues) {
  Session s;
  s.run(read_file("scripts/so4.chow"));
  for (const auto& c : s.checks()) EXPECT_TRUE(c.passed) << c.pos.line << ": " << c.source << "  lhs = " << c.lhs << "  rhs = " << c.rhs;
}
