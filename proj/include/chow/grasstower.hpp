#ifndef CHOW_GRASSTOWER_HPP
#define CHOW_GRASSTOWER_HPP

// Towers of Grassmannian bundles G(k, E) -> base with presented Chow rings,
// Schur classes, normal forms and Gysin pushforwards.

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chow/chern.hpp"
#include "chow/zgraded.hpp"

namespace chow {

/// Graded ring Z[table] / (relations), with per-degree lattices cached.
class Ring {
 public:
  explicit Ring(TablePtr table, std::vector<Poly> relations = {})
      : ideal_(table, drop_zero(std::move(relations))), cache_(std::make_shared<Cache>()) {}

  const TablePtr& table() const { return ideal_.table(); }
  const GradedIdeal& relations() const { return ideal_; }
  bool is_free() const { return ideal_.generators().empty(); }

  /// Canonical representative modulo the relations (graded-lex-least monomials retained).
  Poly normal_form(const Poly& p) const {
    if (!same_table(p.table(), table())) throw std::invalid_argument("normal_form: mismatched VarTable");
    if (p.degree() > table()->degree_bound()) throw std::out_of_range("normal_form: degree above bound");
    if (is_free()) return p;
    Poly out(table());
    for (int d = std::max(0, p.low_degree()); d <= p.degree(); ++d) {
      Poly part = p.graded_part(d);
      if (part.is_zero()) continue;
      const auto& dd = degree_data(d);
      out += dd.basis.poly(table(), dd.lattice.reduce(dd.basis.coords(part)).residual);
    }
    return out;
  }

  bool same_as(const Ring& o) const {
    return same_table(table(), o.table()) && ideal_.generators() == o.ideal_.generators();
  }

  struct DegreeData {
    DegreeBasis basis;
    Lattice lattice;
  };
  const DegreeData& degree_data(int d) const {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->by_degree.find(d);
    if (it != cache_->by_degree.end()) return *it->second;
    DegreeBasis basis(*table(), d);
    Lattice lat = ideal_.span_lattice(d, false, basis);
    auto ptr = std::make_unique<DegreeData>(DegreeData{std::move(basis), std::move(lat)});
    return *cache_->by_degree.emplace(d, std::move(ptr)).first->second;
  }

 private:
  static std::vector<Poly> drop_zero(std::vector<Poly> v) {
    std::erase_if(v, [](const Poly& p) { return p.is_zero(); });
    return v;
  }
  struct Cache {
    std::mutex mu;
    std::map<int, std::unique_ptr<DegreeData>> by_degree;
  };

  GradedIdeal ideal_;
  std::shared_ptr<Cache> cache_;
};

// ---------------------------------------------------------------------------
// Partitions.

using Partition = std::vector<int>;

/// Drops trailing zeros; throws unless weakly decreasing and nonnegative.
inline Partition normalized(Partition p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0) throw std::invalid_argument("partition has a negative part");
    if (i && p[i] > p[i - 1]) throw std::invalid_argument("partition is not weakly decreasing");
  }
  while (!p.empty() && p.back() == 0) p.pop_back();
  return p;
}

inline Partition conjugate(const Partition& p) {
  Partition c;
  if (p.empty()) return c;
  for (int j = 1; j <= p.front(); ++j) {
    int n = 0;
    for (int x : p)
      if (x >= j) ++n;
    c.push_back(n);
  }
  return c;
}

inline int weight(const Partition& p) {
  int s = 0;
  for (int x : p) s += x;
  return s;
}

/// All partitions with at most `rows` parts, each at most `cols`.
inline std::vector<Partition> partitions_in_box(int rows, int cols) {
  std::vector<Partition> out;
  Partition cur;
  auto rec = [&](auto&& self, int max_part) -> void {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == rows) return;
    for (int x = 1; x <= max_part; ++x) {
      cur.push_back(x);
      self(self, x);
      cur.pop_back();
    }
  };
  rec(rec, cols);
  std::sort(out.begin(), out.end(), [](const Partition& a, const Partition& b) {
    return weight(a) != weight(b) ? weight(a) < weight(b) : a > b;
  });
  return out;
}

enum class Tautological { Sub, Quot };

// ---------------------------------------------------------------------------

/// G(k, E) over a presented base ring.
class TowerLevel {
 public:
  /// Adds sub-bundle variables prefix1..prefixk; relations are the degree
  /// n-k+1..n parts of c(E)/c(B).
  static TowerLevel extend(const Ring& base, const Bundle& e, int k, const std::string& prefix) {
    const int n = e.rank();
    if (k < 1 || k >= n) throw std::out_of_range("extend: sub rank k=" + std::to_string(k) + " must satisfy 1 <= k < " + std::to_string(n));
    if (!same_table(e.table(), base.table())) throw std::invalid_argument("extend: bundle does not live on the base");
    std::vector<Variable> vars = base.table()->vars();
    for (auto& v : chern_variables(prefix, k)) {
      if (base.table()->index_of(v.name)) throw std::invalid_argument("extend: variable '" + v.name + "' already in base");
      vars.push_back(std::move(v));
    }
    TablePtr t = make_table(std::move(vars), base.table()->degree_bound());
    TowerLevel lvl;
    lvl.base_ = std::make_shared<const Ring>(base);
    lvl.k_ = k;
    lvl.prefix_ = prefix;
    lvl.bundle_ = std::make_shared<const Bundle>(e.embedded(t));
    lvl.sub_ = std::make_shared<const Bundle>(Bundle::from_variables(t, prefix, k));
    const Poly q = whitney_division(*lvl.bundle_, *lvl.sub_);
    std::vector<Poly> relations;
    for (const auto& r : base.relations().generators()) relations.push_back(embed(r, t));
    for (int d = n - k + 1; d <= std::min(n, t->degree_bound()); ++d) {
      lvl.new_relations_.push_back(q.graded_part(d));
      relations.push_back(q.graded_part(d));
    }
    std::vector<Poly> qc;
    for (int d = 0; d <= std::min(n - k, t->degree_bound()); ++d) qc.push_back(q.graded_part(d));
    lvl.quot_ = std::make_shared<const Bundle>(n - k, std::move(qc));
    lvl.ring_ = std::make_shared<const Ring>(t, std::move(relations));
    lvl.gysin_cache_ = std::make_shared<GysinCache>();
    return lvl;
  }

  const Ring& base() const { return *base_; }
  const Ring& ring() const { return *ring_; }
  const TablePtr& table() const { return ring_->table(); }
  const Bundle& bundle() const { return *bundle_; }
  const Bundle& sub() const { return *sub_; }
  const Bundle& quot() const { return *quot_; }
  int k() const { return k_; }
  int n() const { return bundle_->rank(); }
  int relative_dimension() const { return k_ * (n() - k_); }
  const std::string& prefix() const { return prefix_; }
  /// Relation generators added by this level (degrees n-k+1..n).
  const std::vector<Poly>& new_relations() const { return new_relations_; }
  std::vector<std::string> sub_variable_names() const {
    std::vector<std::string> v;
    for (int i = 1; i <= k_; ++i) v.push_back(prefix_ + std::to_string(i));
    return v;
  }

  Poly pullback(const Poly& base_class) const { return embed(base_class, table()); }

  Poly normal_form(const Poly& p) const { return ring_->normal_form(p); }

  std::pair<int, int> box(Tautological which) const {
    return which == Tautological::Sub ? std::pair{k_, n() - k_} : std::pair{n() - k_, k_};
  }

  /// Schur class s_lambda of the Chern roots of the chosen tautological bundle.
  Poly schur(const Partition& lambda, Tautological which = Tautological::Sub) const {
    const Partition l = normalized(lambda);
    const auto [rows, cols] = box(which);
    if (static_cast<int>(l.size()) > rows || (!l.empty() && l.front() > cols))
      throw std::out_of_range("schur: partition does not fit the " + std::to_string(rows) + "x" + std::to_string(cols) + " box");
    const Bundle& b = which == Tautological::Sub ? *sub_ : *quot_;
    return schur_determinant(graded_parts(b.total()), conjugate(l), table());
  }

  /// Pushforward to the base. Variables of p outside this level's table are
  /// treated as classes pulled back from the target (base-linear).
  /// Normalization: c_k(B*)^{n-k} -> 1.
  Poly gysin(const Poly& p) const {
    if (!p.is_homogeneous()) throw std::invalid_argument("gysin: input is not homogeneous");
    if (same_table(p.table(), table())) return gysin_direct(p);
    return gysin_split(p);
  }

  /// Freeness of degree d: base monomials times Schur classes form a Z-basis modulo the relations.
  bool schur_basis_is_free(int d) const {
    if (!base_->is_free()) throw std::logic_error("freeness check needs a free base");
    const auto& g = gysin_data(d);
    const std::size_t relation_rank = ring_->degree_data(d).lattice.rank();
    if (g.basis_size + relation_rank != g.columns) return false;
    if (g.lattice.rank() != g.columns) return false;
    for (const auto& [c, row] : g.lattice.rows())
      if (row.v.begin()->second != 1) return false;
    return true;
  }

 private:
  struct GysinData {
    Lattice lattice;  ///< relations (untracked) plus tracked basis rows
    std::vector<std::pair<Monomial, Partition>> basis;  ///< base monomial, partition
    std::size_t basis_size = 0;
    std::size_t columns = 0;
  };
  struct GysinCache {
    std::mutex mu;
    std::map<int, std::unique_ptr<GysinData>> by_degree;
  };

  const GysinData& gysin_data(int d) const {
    std::lock_guard lock(gysin_cache_->mu);
    auto it = gysin_cache_->by_degree.find(d);
    if (it != gysin_cache_->by_degree.end()) return *it->second;
    auto g = std::make_unique<GysinData>();
    const auto& rd = ring_->degree_data(d);
    g->lattice = rd.lattice;
    g->columns = rd.basis.size();
    std::vector<std::pair<Partition, Poly>> schurs;
    for (auto& l : partitions_in_box(k_, n() - k_)) schurs.emplace_back(l, schur(l));
    const TablePtr& bt = base_->table();
    std::size_t id = 0;
    for (const auto& [l, s] : schurs) {
      const int rest = d - weight(l);
      if (rest < 0) continue;
      for (const auto& m : monomials_of_degree(*bt, rest)) {
        Poly elem = pullback(Poly::from_monomial(bt, m)) * s;
        SparseVec combo;
        combo.emplace(id++, 1);
        g->lattice.insert(rd.basis.coords(elem), std::move(combo));
        g->basis.emplace_back(m, l);
      }
    }
    g->basis_size = id;
    return *gysin_cache_->by_degree.emplace(d, std::move(g)).first->second;
  }

  Poly gysin_direct(const Poly& p) const {
    const TablePtr& bt = base_->table();
    if (p.is_zero() || p.degree() < relative_dimension()) return Poly(bt);
    const int d = p.degree();
    if (d > table()->degree_bound()) throw std::out_of_range("gysin: degree above bound");
    const auto& g = gysin_data(d);
    const auto& rd = ring_->degree_data(d);
    auto red = g.lattice.reduce(rd.basis.coords(p));
    if (!red.residual.empty())
      throw std::logic_error("gysin: class not in the span of the Schur basis (freeness violated)");
    const Partition top(static_cast<std::size_t>(k_), n() - k_);
    Poly out(bt);
    for (const auto& [id, c] : red.combo) {
      const auto& [m, l] = g.basis.at(id);
      if (l == top) out.add_term(m, c);
    }
    if (relative_dimension() % 2) out = -out;
    return base_->is_free() ? out : base_->normal_form(out);
  }

  Poly gysin_split(const Poly& p) const {
    const TablePtr& src = p.table();
    // Result table: p's table without this level's sub variables.
    std::vector<Variable> rv;
    for (const auto& v : src->vars())
      if (!is_sub_variable(v.name)) rv.push_back(v);
    TablePtr result_table = make_table(std::move(rv), src->degree_bound());
    // Which variables of src belong to this level's table?
    std::vector<bool> inside(src->size());
    for (std::size_t i = 0; i < src->size(); ++i) {
      auto j = table()->index_of(src->var(i).name);
      inside[i] = j.has_value();
      if (j && table()->var(*j).degree != src->var(i).degree) throw std::invalid_argument("gysin: degree mismatch");
    }
    for (std::size_t j = 0; j < table()->size(); ++j)
      if (!src->index_of(table()->var(j).name) && is_sub_variable(table()->var(j).name))
        throw std::invalid_argument("gysin: input table lacks sub-bundle variable " + table()->var(j).name);
    // Group by the exponents of outside variables.
    std::map<std::vector<int>, Poly> groups;
    for (const auto& [m, c] : p.terms()) {
      std::vector<int> outside_exps;
      std::vector<int> in_exps(table()->size(), 0);
      for (std::size_t i = 0; i < src->size(); ++i) {
        if (inside[i])
          in_exps[*table()->index_of(src->var(i).name)] = m.exps[i];
        else
          outside_exps.push_back(m.exps[i]);
      }
      auto [it, ins] = groups.try_emplace(outside_exps, Poly(table()));
      it->second.add_term(make_monomial(*table(), in_exps), c);
    }
    Poly out(result_table);
    for (const auto& [oe, q] : groups) {
      Poly pushed = embed(gysin_direct(q), result_table);
      std::vector<int> exps(result_table->size(), 0);
      std::size_t k = 0;
      for (std::size_t i = 0; i < src->size(); ++i)
        if (!inside[i]) exps[*result_table->index_of(src->var(i).name)] = oe[k++];
      out += pushed * Poly::from_monomial(result_table, make_monomial(*result_table, exps));
    }
    return out;
  }

  bool is_sub_variable(const std::string& name) const {
    for (int i = 1; i <= k_; ++i)
      if (name == prefix_ + std::to_string(i)) return true;
    return false;
  }

  std::shared_ptr<const Ring> base_;
  std::shared_ptr<const Ring> ring_;
  std::shared_ptr<const Bundle> bundle_, sub_, quot_;
  std::vector<Poly> new_relations_;
  int k_ = 0;
  std::string prefix_;
  std::shared_ptr<GysinCache> gysin_cache_;
};

/// Two Grassmann bundles over one base, joined: A x_base B.
class FiberProduct {
 public:
  FiberProduct(TowerLevel first, TowerLevel second) : first_(std::move(first)), second_(std::move(second)) {
    if (!first_.base().same_as(second_.base())) throw std::invalid_argument("fiber_product: levels have different bases");
    TablePtr t = merge_tables(first_.table(), second_.table());
    if (t->size() != first_.table()->size() + second_.k())
      throw std::invalid_argument("fiber_product: sub-bundle variables are not disjoint");
    std::vector<Poly> rels;
    for (const auto& r : first_.base().relations().generators()) rels.push_back(embed(r, t));
    for (const auto& r : first_.new_relations()) rels.push_back(embed(r, t));
    for (const auto& r : second_.new_relations()) rels.push_back(embed(r, t));
    ring_ = std::make_shared<const Ring>(t, std::move(rels));
  }

  const TowerLevel& first() const { return first_; }
  const TowerLevel& second() const { return second_; }
  const Ring& ring() const { return *ring_; }
  const TablePtr& table() const { return ring_->table(); }

  /// Pushforward along the second factor, landing in the first level's ring.
  Poly gysin_to_first(const Poly& p) const {
    return embed(second_.gysin(embed(p, table())), first_.table());
  }
  /// Pushforward along the first factor, landing in the second level's ring.
  Poly gysin_to_second(const Poly& p) const {
    return embed(first_.gysin(embed(p, table())), second_.table());
  }

 private:
  TowerLevel first_, second_;
  std::shared_ptr<const Ring> ring_;
};

inline FiberProduct fiber_product(const TowerLevel& a, const TowerLevel& b) { return FiberProduct(a, b); }

}  // namespace chow

#endif  // CHOW_GRASSTOWER_HPP
