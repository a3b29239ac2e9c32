#include <array>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <nlohmann/json.hpp>

#include "chow/chow.hpp"
#include "oracles.hpp"

using namespace chow;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

const so4::Report& report() {
  static const so4::Report r = so4::run_all(so4::Config{});
  return r;
}

void require_checks(Outcome& o, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    const so4::Check* c = report().find(n);
    if (!c) {
      o.require(false, n + " missing");
      continue;
    }
    o.require(c->status == so4::Status::Pass, n + ": expected " + c->expected + ", computed " + c->computed);
  }
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  Run r;
  FILE* pipe = popen((std::string(CHOWCALC_PATH) + " " + args + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

Bundle random_bundle(const TablePtr& t, int rank, std::mt19937_64& rng) {
  std::vector<Poly> c{Poly::constant(t, 1)};
  for (int i = 1; i <= rank; ++i) c.push_back(oracle::random_homogeneous(t, i, rng, 3, 4));
  return Bundle(rank, std::move(c));
}

TowerLevel over_free(int n, int k) {
  TablePtr t = make_table(chern_variables("c", n));
  return TowerLevel::extend(Ring(t), Bundle::from_variables(t, "c", n), k, "b");
}

int gysin_disagreements(const TowerLevel& g, bool free_base, std::mt19937_64& rng, int min_degree) {
  int bad = 0;
  for (int i = 0; i < 20; ++i) {
    const Poly p = oracle::random_homogeneous(g.table(), min_degree + i % 4, rng);
    const Poly pushed = g.gysin(p);
    for (int s = 0; s < 10; ++s) {
      const auto roots = oracle::distinct_roots(rng, static_cast<std::size_t>(g.n()));
      oracle::Values fixed;
      if (free_base) oracle::assign_chern(fixed, "c", roots);
      if (oracle::evaluate(pushed, fixed) != oracle::symmetrize(p, roots, g.k(), "b", fixed)) ++bad;
    }
  }
  return bad;
}

Outcome properties() {
  Outcome o;
  std::mt19937_64 rng(2024);

  std::vector<Variable> v = chern_variables("a", 3);
  for (const auto& w : chern_variables("u", 2)) v.push_back(w);
  const TablePtr t = make_table(std::move(v), 8);
  int whitney = 0;
  for (int i = 0; i < 20; ++i) {
    const Bundle sub = random_bundle(t, 1 + i % 3, rng);
    const Bundle quo = random_bundle(t, 1 + (i / 3) % 3, rng);
    const Bundle total(sub.rank() + quo.rank(), graded_parts(sub.total() * quo.total()));
    const Poly ell = oracle::random_homogeneous(t, 1, rng, 3, 4);
    if (!(whitney_quotient(total, sub) == quo)) ++whitney;
    if (!(tensor_line(tensor_line(quo, ell), -ell) == quo)) ++whitney;
    if (!(dual(dual(quo)) == quo)) ++whitney;
  }
  o.require(whitney == 0, std::to_string(whitney) + " whitney/twist/dual identities failed");

  const TablePtr pt = make_table({});
  const TowerLevel g24 = TowerLevel::extend(Ring(pt), Bundle::trivial(pt, 4), 2, "b");
  const TowerLevel g2s = over_free(4, 2);
  const int bad24 = gysin_disagreements(g24, false, rng, 1);
  const int bad2s = gysin_disagreements(g2s, true, rng, 4);
  o.require(bad24 == 0, std::to_string(bad24) + " gysin disagreements on G(2,4)");
  o.require(bad2s == 0, std::to_string(bad2s) + " gysin disagreements on G(2,S)");

  int projection = 0;
  for (int i = 0; i < 20; ++i) {
    const Poly a = oracle::random_homogeneous(g2s.base().table(), 1 + i % 3, rng, 3, 4);
    const Poly p = oracle::random_homogeneous(g2s.table(), 4 + (i / 3) % 4, rng);
    if (!(g2s.gysin(g2s.pullback(a) * p) == a * g2s.gysin(p))) ++projection;
  }
  o.require(projection == 0, std::to_string(projection) + " projection formula failures");

  o.require(g24.gysin(Poly::parse(g24.table(), "b2^2")) == Poly::constant(pt, 1), "integral of b2^2 is not 1");
  o.require(g24.gysin(Poly::parse(g24.table(), "b1^4")) == Poly::constant(pt, 2), "integral of b1^4 is not 2");

  const TablePtr cf = make_table({{"c1", 1}, {"c2", 2}, {"c3", 3}, {"c4", 4}, {"f1", 1}, {"f2", 2}, {"f3", 3}});
  const GradedIdeal I(cf, {Poly::parse(cf, "c1"), Poly::parse(cf, "f1"), Poly::parse(cf, "2*c3"), Poly::parse(cf, "c3 - f3"),
                           Poly::parse(cf, "(c2 - f2)^2 - 4*c4"), Poly::parse(cf, "(c2 - f2)*c3")});
  int certificates = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 6;
    Poly p(cf);
    for (const auto& g : I.generators())
      if (g.degree() <= d) p += g * oracle::random_homogeneous(cf, d - g.degree(), rng, 3, 4);
    const Membership m = I.member(p);
    if (!m.member || !(I.evaluate(m.certificate) == p)) ++certificates;
  }
  o.require(certificates == 0, std::to_string(certificates) + " membership certificates failed to re-multiply");
  return o;
}

Outcome cli() {
  Outcome o;
  const Run verify = run_cli("verify-so4 --format json");
  o.require(verify.code == 0, "verify-so4 exited " + std::to_string(verify.code));
  try {
    const std::string err = so4::validate_report_json(nlohmann::json::parse(verify.out));
    o.require(err.empty(), "report schema: " + err);
  } catch (const std::exception& e) {
    o.require(false, std::string("report is not JSON: ") + e.what());
  }
  const Run eval = run_cli("eval scripts/so4.chow --format json");
  o.require(eval.code == 0, "eval exited " + std::to_string(eval.code));
  try {
    const auto j = nlohmann::json::parse(eval.out);
    for (const auto& c : j["checks"])
      if (c["status"] != "pass")
        o.require(false, "script line " + std::to_string(c["line"].get<int>()) + ": " + c["lhs"].get<std::string>() + " vs " + c["rhs"].get<std::string>());
  } catch (const std::exception& e) {
    o.require(false, std::string("eval output is not JSON: ") + e.what());
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"class reproduction", [] { Outcome o; require_checks(o, {"class_Y", "class_G2E.factor"}); return o; }},
      {"six pushforwards", [] {
         Outcome o;
         require_checks(o, {"pushforward.1", "pushforward.b1", "pushforward.b1^2", "pushforward.b2", "pushforward.b1*b2", "pushforward.b1^2*b2"});
         return o;
       }},
      {"tower relations", [] {
         Outcome o;
         require_checks(o, {"relation.t4", "relation.t5", "relation.t6", "relation.t4.member", "relation.t5.member", "relation.t6.member"});
         return o;
       }},
      {"ideal identity", [] { Outcome o; require_checks(o, {"ideal.equality"}); return o; }},
      {"divisor lattice", [] {
         Outcome o;
         require_checks(o, {"lemma4.primitive", "lemma4.forced_f1", "lemma4.image_index", "lemma4.N_generates"});
         return o;
       }},
      {"presentation structure", [] {
         Outcome o;
         std::vector<std::string> names{"theorem1.relations"};
         for (int d = 0; d <= 6; ++d) names.push_back("theorem1.A" + std::to_string(d));
         require_checks(o, names);
         return o;
       }},
      {"ruling symmetry", [] { Outcome o; require_checks(o, {"ruling.f2_tilde", "ruling.c2_minus_f2_tilde"}); return o; }},
      {"property suites", properties},
      {"command line", cli},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " " << criteria[i].first;
    if (!o.pass) std::cout << ": " << o.detail;
    std::cout << "\n";
  }
  std::cout << (failed ? "FAILED " + std::to_string(failed) + " of " : "PASSED all ") << criteria.size() << " criteria\n";
  return failed ? 1 : 0;
}
