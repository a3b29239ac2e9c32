#ifndef CHOW_POLYRING_HPP
#define CHOW_POLYRING_HPP

// Sparse multivariate polynomials with exact integer coefficients over a
// weighted-graded variable table, truncated at a global degree bound.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "chow/integer.hpp"

namespace chow {

inline constexpr int kDefaultDegreeBound = 10;

struct Variable {
  std::string name;
  int degree = 1;

  bool operator==(const Variable&) const = default;
};

/// Ordered list of graded generators. The order fixes the term order
/// (graded lexicographic, earlier variables heavier) and never changes.
class VarTable {
 public:
  explicit VarTable(std::vector<Variable> vars, int degree_bound = kDefaultDegreeBound)
      : vars_(std::move(vars)), degree_bound_(degree_bound) {
    if (degree_bound_ < 1) throw std::invalid_argument("degree bound must be positive");
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (vars_[i].degree < 1)
        throw std::invalid_argument("variable '" + vars_[i].name + "' must have positive degree");
      if (vars_[i].name.empty()) throw std::invalid_argument("empty variable name");
      if (!index_.emplace(vars_[i].name, i).second)
        throw std::invalid_argument("duplicate variable '" + vars_[i].name + "'");
    }
  }

  std::size_t size() const { return vars_.size(); }
  const Variable& var(std::size_t i) const { return vars_.at(i); }
  const std::vector<Variable>& vars() const { return vars_; }
  int degree_bound() const { return degree_bound_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t require(std::string_view name) const {
    auto i = index_of(name);
    if (!i) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
    return *i;
  }

  bool operator==(const VarTable& o) const {
    return vars_ == o.vars_ && degree_bound_ == o.degree_bound_;
  }

 private:
  std::vector<Variable> vars_;
  int degree_bound_;
  std::unordered_map<std::string, std::size_t> index_;
};

using TablePtr = std::shared_ptr<const VarTable>;

inline TablePtr make_table(std::vector<Variable> vars, int degree_bound = kDefaultDegreeBound) {
  return std::make_shared<const VarTable>(std::move(vars), degree_bound);
}

inline bool same_table(const TablePtr& a, const TablePtr& b) {
  return a.get() == b.get() || (a && b && *a == *b);
}

/// Variables named prefix1..prefixn with degrees 1..n (Chern-class style).
inline std::vector<Variable> chern_variables(const std::string& prefix, int n) {
  std::vector<Variable> v;
  for (int i = 1; i <= n; ++i) v.push_back({prefix + std::to_string(i), i});
  return v;
}

/// Table containing a's variables followed by b's variables not already in a.
inline TablePtr merge_tables(const TablePtr& a, const TablePtr& b) {
  if (same_table(a, b)) return a;
  if (a->degree_bound() != b->degree_bound())
    throw std::invalid_argument("cannot merge tables with different degree bounds");
  std::vector<Variable> vars = a->vars();
  bool grew = false;
  for (const auto& v : b->vars()) {
    if (auto i = a->index_of(v.name)) {
      if (a->var(*i).degree != v.degree)
        throw std::invalid_argument("variable '" + v.name + "' declared with two degrees");
    } else {
      vars.push_back(v);
      grew = true;
    }
  }
  return grew ? make_table(std::move(vars), a->degree_bound()) : a;
}

/// Exponent vector together with its weighted degree. Ordering is graded
/// lexicographic: higher degree first, then the first differing exponent.
struct Monomial {
  int degree = 0;
  std::vector<int> exps;

  std::strong_ordering operator<=>(const Monomial& o) const {
    if (auto c = degree <=> o.degree; c != 0) return c;
    return exps <=> o.exps;
  }
  bool operator==(const Monomial&) const = default;
};

inline Monomial monomial_product(const Monomial& a, const Monomial& b) {
  Monomial m;
  m.degree = a.degree + b.degree;
  m.exps.resize(a.exps.size());
  for (std::size_t i = 0; i < a.exps.size(); ++i) m.exps[i] = a.exps[i] + b.exps[i];
  return m;
}

inline Monomial make_monomial(const VarTable& t, std::vector<int> exps) {
  Monomial m;
  m.exps = std::move(exps);
  if (m.exps.size() != t.size()) throw std::invalid_argument("exponent vector has wrong length");
  for (std::size_t i = 0; i < m.exps.size(); ++i) {
    if (m.exps[i] < 0) throw std::invalid_argument("negative exponent");
    m.degree += m.exps[i] * t.var(i).degree;
  }
  return m;
}

/// All monomials of weighted degree exactly d, in descending term order.
inline std::vector<Monomial> monomials_of_degree(const VarTable& t, int d) {
  std::vector<Monomial> out;
  if (d < 0) return out;
  std::vector<int> exps(t.size(), 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i == t.size()) {
      if (left == 0) out.push_back(Monomial{d, exps});
      return;
    }
    const int w = t.var(i).degree;
    for (int e = left / w; e >= 0; --e) {
      exps[i] = e;
      self(self, i + 1, left - e * w);
    }
    exps[i] = 0;
  };
  rec(rec, 0, d);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline std::string monomial_string(const VarTable& t, const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.exps.size(); ++i) {
    if (m.exps[i] == 0) continue;
    if (!s.empty()) s += '*';
    s += t.var(i).name;
    if (m.exps[i] > 1) s += '^' + std::to_string(m.exps[i]);
  }
  return s;
}

class Poly {
 public:
  using Terms = std::map<Monomial, Int, std::greater<>>;

  Poly() = default;
  explicit Poly(TablePtr table) : table_(std::move(table)) {}

  static Poly constant(TablePtr table, const Int& c) {
    Poly p(std::move(table));
    if (c != 0) p.terms_[Monomial{0, std::vector<int>(p.table_->size(), 0)}] = c;
    return p;
  }
  static Poly variable(TablePtr table, std::size_t index) {
    Poly p(std::move(table));
    std::vector<int> e(p.table_->size(), 0);
    e.at(index) = 1;
    p.add_term(make_monomial(*p.table_, std::move(e)), 1);
    return p;
  }
  static Poly variable(TablePtr table, std::string_view name) {
    const std::size_t i = table->require(name);
    return variable(std::move(table), i);
  }
  static Poly from_monomial(TablePtr table, const Monomial& m, const Int& c = 1) {
    Poly p(std::move(table));
    p.add_term(m, c);
    return p;
  }

  /// Parses expressions such as "c2^2 - 2*c2*f2 - 4*c4" (also parentheses).
  static Poly parse(TablePtr table, std::string_view text);

  const TablePtr& table() const { return table_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Highest weighted degree present; -1 for zero.
  int degree() const { return terms_.empty() ? -1 : terms_.begin()->first.degree; }
  int low_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree; }
  bool is_homogeneous() const { return terms_.empty() || degree() == low_degree(); }

  Int coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Int(0) : it->second;
  }
  Int constant_term() const {
    if (terms_.empty() || terms_.rbegin()->first.degree != 0) return 0;
    return terms_.rbegin()->second;
  }

  /// Adds c*m, dropping the term if it exceeds the degree bound.
  void add_term(const Monomial& m, const Int& c) {
    if (c == 0 || m.degree > table_->degree_bound()) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly graded_part(int d) const {
    if (d < 0 || d > table_->degree_bound())
      throw std::out_of_range("graded_part: degree " + std::to_string(d) + " out of range");
    Poly r(table_);
    for (const auto& [m, c] : terms_)
      if (m.degree == d) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
  }

  /// Terms of degree <= d.
  Poly truncated(int d) const {
    Poly r(table_);
    for (const auto& [m, c] : terms_)
      if (m.degree <= d) r.terms_.emplace_hint(r.terms_.end(), m, c);
    return r;
  }

  Poly& operator+=(const Poly& o) {
    check_table(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    check_table(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Poly& operator*=(const Int& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  Poly operator-() const {
    Poly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, const Int& s) { return a *= s; }
  friend Poly operator*(const Int& s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_table(b);
    Poly r(a.table_);
    const int bound = a.table_->degree_bound();
    Int prod;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        if (ma.degree + mb.degree > bound) continue;
        prod = ca * cb;
        r.add_term(monomial_product(ma, mb), prod);
      }
    }
    return r;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  Poly pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative power");
    Poly r = constant(table_, 1), base = *this;
    while (n > 0) {
      if (n & 1) r *= base;
      n >>= 1;
      if (n) base *= base;
    }
    return r;
  }

  bool operator==(const Poly& o) const { return same_table(table_, o.table_) && terms_ == o.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      const bool neg = c < 0;
      const Int a = neg ? Int(-c) : c;
      if (first)
        s += neg ? "-" : "";
      else
        s += neg ? " - " : " + ";
      const std::string mono = monomial_string(*table_, m);
      if (mono.empty())
        s += chow::to_string(a);
      else if (a == 1)
        s += mono;
      else
        s += chow::to_string(a) + "*" + mono;
      first = false;
    }
    return s;
  }

 private:
  void check_table(const Poly& o) const {
    if (!same_table(table_, o.table_)) throw std::invalid_argument("mismatched VarTable");
  }

  TablePtr table_;
  Terms terms_;
};

inline Poly operator*(Poly a, long s) { return a *= Int(s); }
inline Poly operator*(long s, Poly a) { return a *= Int(s); }

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

// ---------------------------------------------------------------------------
// Polynomial text parser (canonical strings and golden values).

namespace detail {

class PolyTextParser {
 public:
  PolyTextParser(TablePtr table, std::string_view text) : table_(std::move(table)), s_(text) {}

  Poly run() {
    Poly p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("parse error at column " + std::to_string(pos_ + 1) + ": " + msg +
                                " in \"" + std::string(s_) + "\"");
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Poly expr() {
    Poly acc(table_);
    bool neg = eat('-');
    if (!neg) eat('+');
    Poly t = term();
    acc = neg ? -t : t;
    for (;;) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        return acc;
    }
  }
  Poly term() {
    Poly acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }
  Poly factor() {
    Poly base = atom();
    if (eat('^')) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(std::stoi(std::string(s_.substr(start, pos_ - start))));
    }
    return base;
  }
  Poly atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (c == '-') {
      ++pos_;
      return -atom();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Poly::constant(table_, Int(std::string(s_.substr(start, pos_ - start))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      auto idx = table_->index_of(name);
      if (!idx) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Poly::variable(table_, *idx);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  TablePtr table_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly Poly::parse(TablePtr table, std::string_view text) {
  return detail::PolyTextParser(std::move(table), text).run();
}

// ---------------------------------------------------------------------------
// Ring maps.

/// Sends variable i of p's table to images[i] (a Poly over `target`). Each
/// image must be zero or homogeneous of the variable's degree.
inline Poly ring_map(const Poly& p, const TablePtr& target, std::span<const Poly> images) {
  const VarTable& src = *p.table();
  if (images.size() != src.size()) throw std::invalid_argument("ring_map: wrong number of images");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!same_table(images[i].table(), target))
      throw std::invalid_argument("ring_map: image of '" + src.var(i).name + "' has wrong table");
    const Poly& im = images[i];
    if (!im.is_zero() && (!im.is_homogeneous() || im.degree() != src.var(i).degree))
      throw std::invalid_argument("inhomogeneous image for variable '" + src.var(i).name + "'");
  }
  // Cache of powers per variable.
  std::vector<std::vector<Poly>> powers(images.size());
  auto power = [&](std::size_t v, int e) -> const Poly& {
    auto& pw = powers[v];
    if (pw.empty()) pw.push_back(Poly::constant(target, 1));
    while (static_cast<int>(pw.size()) <= e) pw.push_back(pw.back() * images[v]);
    return pw[e];
  };
  Poly out(target);
  for (const auto& [m, c] : p.terms()) {
    Poly t = Poly::constant(target, c);
    for (std::size_t v = 0; v < m.exps.size() && !t.is_zero(); ++v)
      if (m.exps[v] > 0) t = t * power(v, m.exps[v]);
    out += t;
  }
  return out;
}

/// Re-expresses p over `target`, matching variables by name.
inline Poly embed(const Poly& p, const TablePtr& target) {
  if (same_table(p.table(), target)) return Poly(p);
  const VarTable& src = *p.table();
  if (src.degree_bound() > target->degree_bound())
    throw std::invalid_argument("embed: target degree bound is smaller");
  std::vector<int> where(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto j = target->index_of(src.var(i).name);
    if (!j) throw std::invalid_argument("embed: variable '" + src.var(i).name + "' missing in target");
    if (target->var(*j).degree != src.var(i).degree)
      throw std::invalid_argument("embed: degree mismatch for '" + src.var(i).name + "'");
    where[i] = static_cast<int>(*j);
  }
  Poly out(target);
  for (const auto& [m, c] : p.terms()) {
    Monomial n;
    n.degree = m.degree;
    n.exps.assign(target->size(), 0);
    for (std::size_t i = 0; i < m.exps.size(); ++i) n.exps[where[i]] = m.exps[i];
    out.add_term(n, c);
  }
  return out;
}

/// Simultaneous substitution of some variables by Polys over the same table.
inline Poly substitute(const Poly& p, const std::map<std::string, Poly>& assignments) {
  const TablePtr& t = p.table();
  std::vector<Poly> images;
  images.reserve(t->size());
  for (std::size_t i = 0; i < t->size(); ++i) images.push_back(Poly::variable(t, i));
  for (const auto& [name, value] : assignments) {
    if (!same_table(value.table(), t)) throw std::invalid_argument("substitute: mismatched VarTable");
    images[t->require(name)] = value;
  }
  return ring_map(p, t, images);
}

/// Sets every listed variable to zero (reduction modulo an ideal of variables).
inline Poly kill_variables(const Poly& p, std::initializer_list<std::string_view> names) {
  std::map<std::string, Poly> a;
  for (auto n : names) a.emplace(std::string(n), Poly(p.table()));
  return substitute(p, a);
}

// ---------------------------------------------------------------------------
// Total classes.

/// Truncated multiplicative inverse of a total class with constant term 1.
inline Poly series_invert(const Poly& c) {
  const TablePtr& t = c.table();
  if (c.constant_term() != 1 || (c.low_degree() == 0 && c.graded_part(0) != Poly::constant(t, 1)))
    throw std::invalid_argument("series_invert: constant term must be 1");
  const int bound = t->degree_bound();
  const int top = std::min(c.degree(), bound);
  std::vector<Poly> parts;
  for (int d = 0; d <= top; ++d) parts.push_back(c.graded_part(d));
  std::vector<Poly> inv{Poly::constant(t, 1)};
  for (int d = 1; d <= bound; ++d) {
    Poly acc(t);
    for (int i = 1; i <= std::min(d, top); ++i) acc -= parts[i] * inv[d - i];
    inv.push_back(std::move(acc));
  }
  Poly out(t);
  for (const auto& p : inv) out += p;
  return out;
}

// ---------------------------------------------------------------------------
// Splitting principle: formal Chern roots and symmetric reduction.

/// Degree-1 roots x_1..x_n appended to a base table.
class RootSet {
 public:
  RootSet(TablePtr base, int n, const std::string& prefix = "_x") : base_(std::move(base)), n_(n) {
    if (n < 1) throw std::invalid_argument("RootSet needs at least one root");
    std::vector<Variable> vars = base_->vars();
    for (int i = 1; i <= n; ++i) vars.push_back({prefix + std::to_string(i), 1});
    table_ = make_table(std::move(vars), base_->degree_bound());
  }

  const TablePtr& base() const { return base_; }
  const TablePtr& table() const { return table_; }
  int size() const { return n_; }

  Poly root(int i) const { return Poly::variable(table_, base_->size() + static_cast<std::size_t>(i - 1)); }

  /// e_i(x_1..x_n) over the extended table.
  Poly elementary(int i) const {
    if (i == 0) return Poly::constant(table_, 1);
    if (i < 0 || i > n_ || i > table_->degree_bound()) return Poly(table_);
    Poly total = Poly::constant(table_, 1);
    for (int r = 1; r <= n_; ++r) total = total * (Poly::constant(table_, 1) + root(r));
    return total.graded_part(i);
  }

  /// Lifts a base polynomial to the extended table.
  Poly lift(const Poly& p) const { return embed(p, table_); }

  /// Substitutes e_i(x) for the base variables targets[i-1] (the inverse of symmetric_reduce).
  Poly expand(const Poly& p, std::span<const std::size_t> targets) const {
    if (!same_table(p.table(), base_)) throw std::invalid_argument("expand: mismatched VarTable");
    std::vector<Poly> images;
    for (std::size_t i = 0; i < base_->size(); ++i) images.push_back(Poly::variable(table_, i));
    for (std::size_t i = 0; i < targets.size(); ++i) images.at(targets[i]) = elementary(static_cast<int>(i + 1));
    return ring_map(p, table_, images);
  }

  bool is_symmetric(const Poly& p) const {
    // Invariance under (x1 x2) and the cycle x1->x2->...->xn->x1 generates S_n.
    if (n_ == 1) return true;
    const std::size_t off = base_->size();
    auto permuted = [&](auto&& perm) {
      Poly q(table_);
      for (const auto& [m, c] : p.terms()) {
        Monomial mm = m;
        for (int i = 0; i < n_; ++i) mm.exps[off + perm(i)] = m.exps[off + i];
        q.add_term(mm, c);
      }
      return q;
    };
    auto swap01 = [&](int i) { return i == 0 ? 1 : (i == 1 ? 0 : i); };
    auto cycle = [&](int i) { return (i + 1) % n_; };
    return permuted(swap01) == p && permuted(cycle) == p;
  }

 private:
  TablePtr base_;
  TablePtr table_;
  int n_;
};

/// Rewrites a root-symmetric p (over roots.table()) as a polynomial in the
/// base table where targets[i-1] plays e_i. Classical leading-term
/// subtraction; throws if p is not symmetric in the roots.
inline Poly symmetric_reduce(const RootSet& roots, const Poly& p, std::span<const std::size_t> targets) {
  if (!same_table(p.table(), roots.table())) throw std::invalid_argument("symmetric_reduce: mismatched VarTable");
  const int n = roots.size();
  if (static_cast<int>(targets.size()) != n) throw std::invalid_argument("symmetric_reduce: need one target per root");
  const TablePtr& base = roots.base();
  for (int i = 0; i < n; ++i)
    if (base->var(targets[i]).degree != i + 1)
      throw std::invalid_argument("symmetric_reduce: target for e" + std::to_string(i + 1) + " has wrong degree");
  if (!roots.is_symmetric(p)) throw std::invalid_argument("symmetric_reduce: polynomial is not symmetric in the roots");

  const std::size_t off = base->size();
  // Split into root-exponent -> base coefficient.
  struct LexGreater {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const { return a > b; }
  };
  using Split = std::map<std::vector<int>, Poly, LexGreater>;
  auto split = [&](const Poly& q) {
    Split s;
    for (const auto& [m, c] : q.terms()) {
      std::vector<int> re(m.exps.begin() + static_cast<long>(off), m.exps.end());
      Monomial bm;
      bm.exps.assign(m.exps.begin(), m.exps.begin() + static_cast<long>(off));
      for (std::size_t i = 0; i < off; ++i) bm.degree += bm.exps[i] * base->var(i).degree;
      auto [it, ins] = s.try_emplace(re, Poly(base));
      it->second.add_term(bm, c);
      if (it->second.is_zero()) s.erase(it);
    }
    return s;
  };

  // Pure root polynomials of elementary monomials, cached by e-exponent.
  std::vector<Poly> elem;
  for (int i = 0; i <= n; ++i) elem.push_back(roots.elementary(i));
  std::map<std::vector<int>, Poly> emono_cache;
  auto emono = [&](const std::vector<int>& ee) -> const Poly& {
    auto it = emono_cache.find(ee);
    if (it != emono_cache.end()) return it->second;
    Poly r = Poly::constant(roots.table(), 1);
    for (int i = 0; i < n; ++i)
      if (ee[i] > 0) r = r * elem[i + 1].pow(ee[i]);
    return emono_cache.emplace(ee, std::move(r)).first->second;
  };

  Split rest = split(p);
  Poly out(base);
  std::vector<Poly> target_vars;
  for (auto t : targets) target_vars.push_back(Poly::variable(base, t));
  while (!rest.empty()) {
    auto it = rest.begin();
    const std::vector<int> lead = it->first;
    const Poly coeff = it->second;
    for (int i = 0; i + 1 < n; ++i)
      if (lead[i] < lead[i + 1]) throw std::logic_error("symmetric_reduce: leading exponent not a partition");
    std::vector<int> ee(n);
    for (int i = 0; i < n; ++i) ee[i] = lead[i] - (i + 1 < n ? lead[i + 1] : 0);
    Poly tgt = coeff;
    for (int i = 0; i < n; ++i)
      if (ee[i] > 0) tgt = tgt * target_vars[i].pow(ee[i]);
    out += tgt;
    // Subtract coeff * e^ee expanded in roots.
    const Poly& eroots = emono(ee);
    for (const auto& [m, c] : eroots.terms()) {
      std::vector<int> re(m.exps.begin() + static_cast<long>(off), m.exps.end());
      Poly delta = coeff * Int(-c);
      auto [jt, ins] = rest.try_emplace(re, Poly(base));
      jt->second += delta;
      if (jt->second.is_zero()) rest.erase(jt);
    }
  }
  return out;
}

}  // namespace chow

#endif  // CHOW_POLYRING_HPP
