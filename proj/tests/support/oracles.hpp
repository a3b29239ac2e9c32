#ifndef CHOW_TESTS_ORACLES_HPP
#define CHOW_TESTS_ORACLES_HPP

// Independent reference computations used only by the tests. Nothing here
// calls the lattice, Schur or Gysin code under test.

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chow/polyring.hpp"

namespace oracle {

using Values = std::map<std::string, mpq_class>;

/// Evaluates p at a rational point given by variable name.
inline mpq_class evaluate(const chow::Poly& p, const Values& at) {
  mpq_class sum = 0;
  const auto& t = *p.table();
  for (const auto& [m, c] : p.terms()) {
    mpq_class term(c);
    for (std::size_t i = 0; i < m.exps.size(); ++i) {
      if (!m.exps[i]) continue;
      auto it = at.find(t.var(i).name);
      if (it == at.end()) throw std::invalid_argument("oracle: no value for " + t.var(i).name);
      for (int e = 0; e < m.exps[i]; ++e) term *= it->second;
    }
    sum += term;
  }
  return sum;
}

/// e_0..e_n of the given numbers.
inline std::vector<mpq_class> elementary(const std::vector<mpq_class>& xs) {
  std::vector<mpq_class> e(xs.size() + 1, 0);
  e[0] = 1;
  for (const auto& x : xs)
    for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += e[j - 1] * x;
  return e;
}

inline void assign_chern(Values& v, const std::string& prefix, const std::vector<mpq_class>& roots) {
  const auto e = elementary(roots);
  for (std::size_t i = 1; i < e.size(); ++i) v[prefix + std::to_string(i)] = e[i];
}

/// Distinct random integers in [-range, range].
inline std::vector<mpq_class> distinct_roots(std::mt19937_64& rng, std::size_t n, int range = 40) {
  std::uniform_int_distribution<int> d(-range, range);
  std::set<int> seen;
  std::vector<mpq_class> out;
  while (out.size() < n) {
    const int x = d(rng);
    if (seen.insert(x).second) out.emplace_back(x);
  }
  return out;
}

/// Pushforward from G(k, E) by subset symmetrization:
///   sum over |I| = k of g(x_I) / prod_{i in I, j not in I} (x_j - x_i),
/// where the sub-bundle classes prefix1..prefixk are e_i(x_I) and `fixed`
/// supplies every other variable.
inline mpq_class symmetrize(const chow::Poly& p, const std::vector<mpq_class>& roots, int k,
                            const std::string& prefix, const Values& fixed) {
  const std::size_t n = roots.size();
  std::vector<bool> pick(n, false);
  std::fill(pick.end() - k, pick.end(), true);
  mpq_class total = 0;
  do {
    std::vector<mpq_class> in;
    mpq_class denom = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pick[i]) continue;
      in.push_back(roots[i]);
      for (std::size_t j = 0; j < n; ++j)
        if (!pick[j]) denom *= roots[j] - roots[i];
    }
    Values at = fixed;
    assign_chern(at, prefix, in);
    total += evaluate(p, at) / denom;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return total;
}

/// Random homogeneous polynomial of degree d with small coefficients.
inline chow::Poly random_homogeneous(const chow::TablePtr& t, int d, std::mt19937_64& rng, int max_terms = 6, int coeff = 5) {
  chow::Poly p(t);
  auto monos = chow::monomials_of_degree(*t, d);
  if (monos.empty()) return p;
  std::uniform_int_distribution<std::size_t> pickm(0, monos.size() - 1);
  std::uniform_int_distribution<int> pickc(-coeff, coeff);
  for (int i = 0; i < max_terms; ++i) p.add_term(monos[pickm(rng)], chow::Int(pickc(rng)));
  return p;
}

/// Group structure of Z[c2,c3,c4,x]/(2c3, xc3, x^2-4c4) in degree d, by listing
/// the standard monomials: free c2^a c4^b x^e (e <= 1), 2-torsion c2^a c3^j c4^b (j >= 1).
struct Enumerated {
  int free_rank = 0;
  int two_torsion = 0;
};

inline Enumerated enumerate_so4(int d) {
  Enumerated r;
  for (int a = 0; 2 * a <= d; ++a)
    for (int b = 0; 2 * a + 4 * b <= d; ++b) {
      for (int e = 0; e <= 1; ++e)
        if (2 * a + 4 * b + 2 * e == d) ++r.free_rank;
      for (int j = 1; 2 * a + 4 * b + 3 * j <= d; ++j)
        if (2 * a + 4 * b + 3 * j == d) ++r.two_torsion;
    }
  return r;
}

}  // namespace oracle

#endif  // CHOW_TESTS_ORACLES_HPP
