// chowcalc: SO(4) verification report and a script evaluator.
//
//   chowcalc verify-so4 [--degree-bound N] [--seed S] [--format text|json] [--out FILE]
//   chowcalc eval FILE [--degree-bound N] [--format text|json]
//
// Exit codes: 0 success, 1 a check failed, 2 usage, parse or evaluation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "chow/chow.hpp"
#include "json.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

int default_degree_bound() {
  const char* env = std::getenv("CHOW_DEGREE_BOUND");
  if (!env || !*env) return chow::kDefaultDegreeBound;
  try {
    std::size_t used = 0;
    const int v = std::stoi(env, &used);
    if (used == std::string(env).size() && v >= 1) return v;
  } catch (const std::exception&) {
  }
  std::cerr << "warning: ignoring invalid CHOW_DEGREE_BOUND='" << env << "'\n";
  return chow::kDefaultDegreeBound;
}

bool write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

int verify_so4(int bound, std::uint64_t seed, const std::string& format, const std::string& out) {
  chow::so4::Config cfg;
  cfg.degree_bound = bound;
  cfg.seed = seed;
  const chow::so4::Report report = chow::so4::run_all(cfg);
  const std::string text = format == "json" ? report.to_json().dump(2) + "\n" : report.to_text();
  if (!write_output(text, out)) return kExitUsage;
  return report.passed() ? 0 : kExitFail;
}

int eval_script(const std::string& path, int bound, const std::string& format) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  chow::dsl::Session session(bound);
  std::ostringstream log;
  try {
    session.run(buf.str(), format == "json" ? nullptr : &log);
  } catch (const chow::dsl::ScriptError& e) {
    std::cout << log.str();
    std::cerr << e.located(path) << "\n";
    return kExitUsage;
  }
  if (format == "json") {
    nlohmann::ordered_json j;
    j["script"] = path;
    j["bindings"] = nlohmann::ordered_json::array();
    for (const auto& [name, value] : session.bindings()) j["bindings"].push_back({{"name", name}, {"value", value}});
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : session.checks())
      j["checks"].push_back({{"line", c.pos.line}, {"check", c.source}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"status", c.passed ? "pass" : "fail"}});
    j["overall"] = session.all_checks_passed() ? "pass" : "fail";
    std::cout << j.dump(2) << "\n";
  } else {
    std::size_t passed = 0;
    for (const auto& c : session.checks()) passed += c.passed;
    std::cout << log.str() << passed << "/" << session.checks().size() << " checks passed\n";
  }
  return session.all_checks_passed() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact intersection theory on Grassmann bundle towers"};
  app.set_version_flag("--version", std::string("chowcalc ") + chow::kVersion);
  app.require_subcommand(1);

  int bound = default_degree_bound();
  std::uint64_t seed = 1;
  std::string format = "text";
  std::string out;
  std::string script;

  auto* verify = app.add_subcommand("verify-so4", "Recompute the Chow ring of BSO(4) and report every check");
  verify->add_option("--degree-bound", bound, "Truncation degree (default 10 or $CHOW_DEGREE_BOUND)")->check(CLI::Range(1, 40));
  verify->add_option("--seed", seed, "Seed for randomized cross-checks");
  verify->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out, "Write the report to FILE instead of stdout");

  auto* eval = app.add_subcommand("eval", "Evaluate a .chow script");
  eval->add_option("file", script, "Script file")->required();
  eval->add_option("--degree-bound", bound, "Truncation degree (default 10 or $CHOW_DEGREE_BOUND)")->check(CLI::Range(1, 40));
  eval->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return verify_so4(bound, seed, format, out);
    return eval_script(script, bound, format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
