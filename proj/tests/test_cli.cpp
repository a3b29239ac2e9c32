#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "chow/so4pipeline.hpp"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(CHOWCALC_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& body) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << body;
  return path;
}

nlohmann::json strip_elapsed(nlohmann::json j) {
  for (auto& c : j["checks"]) c.erase("elapsed_ms");
  return j;
}

}  // namespace

TEST(Cli, Version) {
  const Result r = run("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "chowcalc 0.1.0\n");
}

TEST(Cli, LowDegreeBoundPassesWithSkips) {
  const Result r = run("verify-so4 --degree-bound 3");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("[skipped]"), std::string::npos);
  EXPECT_NE(r.out.find("overall: pass"), std::string::npos);
}

TEST(Cli, JsonReportValidatesAndExitCodeMatchesOverall) {
  for (const char* bound : {"4", "10"}) {
    const Result r = run(std::string("verify-so4 --format json --degree-bound ") + bound);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(chow::so4::validate_report_json(j), "") << bound;
    EXPECT_EQ(r.code, j["overall"] == "pass" ? 0 : 1) << bound;
  }
}

TEST(Cli, ReportIsDeterministicApartFromTimings) {
  const Result a = run("verify-so4 --format json --degree-bound 6 --seed 3");
  const Result b = run("verify-so4 --format json --degree-bound 6 --seed 3");
  EXPECT_EQ(strip_elapsed(nlohmann::json::parse(a.out)).dump(), strip_elapsed(nlohmann::json::parse(b.out)).dump());
}

TEST(Cli, OutWritesTheReportToAFile) {
  const std::string path = ::testing::TempDir() + "report.json";
  std::remove(path.c_str());
  const Result r = run("verify-so4 --format json --degree-bound 3 --out " + path);
  EXPECT_EQ(r.code, 0);
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  EXPECT_EQ(chow::so4::validate_report_json(nlohmann::json::parse(in)), "");
}

TEST(Cli, EnvironmentSetsTheDefaultBound) {
  const Result r = run("verify-so4 --format json");
  const std::string cmd = "env CHOW_DEGREE_BOUND=2 ";
  FILE* pipe = popen((cmd + CHOWCALC_PATH + " verify-so4 --format json 2>/dev/null").c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  pclose(pipe);
  EXPECT_EQ(nlohmann::json::parse(out)["config"]["degree_bound"], 2);
  EXPECT_EQ(nlohmann::json::parse(r.out)["config"]["degree_bound"], 10);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("verify-so4 --bogus").code, 2);
  EXPECT_EQ(run("verify-so4 --degree-bound 0").code, 2);
  EXPECT_EQ(run("verify-so4 --format yaml").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("eval").code, 2);
}

TEST(Cli, EvalErrorsExitTwo) {
  EXPECT_EQ(run("eval /nonexistent/file.chow").code, 2);
  EXPECT_EQ(run("eval " + write_temp("syntax.chow", "let a = ;\n")).code, 2);
  EXPECT_EQ(run("eval " + write_temp("unbound.chow", "check x == 1;\n")).code, 2);
  EXPECT_EQ(run("eval " + write_temp("type.chow", "let S = bundle(2, c);\nlet r = rank(c1);\n")).code, 2);
}

TEST(Cli, EvalExitCodeFollowsChecks) {
  const std::string good = write_temp("good.chow", "let S = bundle(2, c);\ncheck rank(S) == 2;\n");
  const std::string bad = write_temp("bad.chow", "let S = bundle(2, c);\ncheck rank(S) == 3;\n");
  EXPECT_EQ(run("eval " + good).code, 0);
  EXPECT_EQ(run("eval " + bad).code, 1);
}

TEST(Cli, EvalJsonShape) {
  const std::string path = write_temp("shape.chow", "let S = bundle(2, c);\ncheck chern(S, 1) == c1;\ncheck rank(S) == 3;\n");
  const Result r = run("eval --format json " + path);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["script"], path);
  ASSERT_EQ(j["bindings"].size(), 1u);
  ASSERT_EQ(j["checks"].size(), 2u);
  EXPECT_EQ(j["checks"][0]["line"], 2);
  EXPECT_EQ(j["checks"][0]["status"], "pass");
  EXPECT_EQ(j["checks"][1]["status"], "fail");
  EXPECT_EQ(j["checks"][1]["lhs"], "2");
  EXPECT_EQ(j["overall"], "fail");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(run("eval --format json " + path).out, r.out);
}
