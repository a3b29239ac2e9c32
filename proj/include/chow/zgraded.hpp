#ifndef CHOW_ZGRADED_HPP
#define CHOW_ZGRADED_HPP

// Graded ideals over the integers, decided one degree at a time by integer
// lattice normal forms (echelon/Hermite and Smith).

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chow/polyring.hpp"

namespace chow {

// ---------------------------------------------------------------------------
// Dense integer matrices.

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  IntMatrix(std::initializer_list<std::initializer_list<long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    for (const auto& r : init) {
      if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (long v : r) a_.emplace_back(v);
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Int& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  IntMatrix transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matrix dimension mismatch");
    IntMatrix r(x.rows_, y.cols_);
    for (std::size_t i = 0; i < x.rows_; ++i)
      for (std::size_t k = 0; k < x.cols_; ++k) {
        if (x(i, k) == 0) continue;
        for (std::size_t j = 0; j < y.cols_; ++j) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }

  bool operator==(const IntMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  bool is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Int& v) { return v == 0; });
  }

  // Elementary operations used by the canonical-form routines.
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
  }
  /// row i += f * row j
  void add_row(std::size_t i, std::size_t j, const Int& f) {
    if (f == 0) return;
    for (std::size_t k = 0; k < cols_; ++k)
      if ((*this)(j, k) != 0) (*this)(i, k) += f * (*this)(j, k);
  }
  void add_col(std::size_t i, std::size_t j, const Int& f) {
    if (f == 0) return;
    for (std::size_t k = 0; k < rows_; ++k)
      if ((*this)(k, j) != 0) (*this)(k, i) += f * (*this)(k, j);
  }
  void negate_row(std::size_t i) {
    for (std::size_t k = 0; k < cols_; ++k) (*this)(i, k) = -(*this)(i, k);
  }
  void negate_col(std::size_t j) {
    for (std::size_t k = 0; k < rows_; ++k) (*this)(k, j) = -(*this)(k, j);
  }
  /// (row i, row j) <- (s*ri + t*rj, u*ri + v*rj)
  void combine_rows(std::size_t i, std::size_t j, const Int& s, const Int& t, const Int& u, const Int& v) {
    for (std::size_t k = 0; k < cols_; ++k) {
      Int ri = (*this)(i, k), rj = (*this)(j, k);
      (*this)(i, k) = s * ri + t * rj;
      (*this)(j, k) = u * ri + v * rj;
    }
  }
  void combine_cols(std::size_t i, std::size_t j, const Int& s, const Int& t, const Int& u, const Int& v) {
    for (std::size_t k = 0; k < rows_; ++k) {
      Int ci = (*this)(k, i), cj = (*this)(k, j);
      (*this)(k, i) = s * ci + t * cj;
      (*this)(k, j) = u * ci + v * cj;
    }
  }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
      s += i ? ", [" : "[";
      for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).get_str();
      s += "]";
    }
    return s + "]";
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

struct RowHermite {
  IntMatrix h;  ///< row echelon, positive pivots, entries above pivots in [0, pivot)
  IntMatrix u;  ///< unimodular, u * m == h
  std::vector<std::size_t> pivot_cols;
};

inline RowHermite row_hermite(const IntMatrix& m) {
  RowHermite r{m, IntMatrix::identity(m.rows()), {}};
  IntMatrix& h = r.h;
  IntMatrix& u = r.u;
  std::size_t row = 0;
  for (std::size_t col = 0; col < h.cols() && row < h.rows(); ++col) {
    // gcd-combine all entries below into (row, col)
    std::size_t first = row;
    while (first < h.rows() && h(first, col) == 0) ++first;
    if (first == h.rows()) continue;
    h.swap_rows(row, first);
    u.swap_rows(row, first);
    for (std::size_t i = row + 1; i < h.rows(); ++i) {
      if (h(i, col) == 0) continue;
      const Int a = h(row, col), b = h(i, col);
      auto [g, s, t] = gcdext(a, b);
      const Int ag = a / g, bg = b / g;
      h.combine_rows(row, i, s, t, -bg, ag);
      u.combine_rows(row, i, s, t, -bg, ag);
    }
    if (h(row, col) < 0) {
      h.negate_row(row);
      u.negate_row(row);
    }
    const Int p = h(row, col);
    for (std::size_t i = 0; i < row; ++i) {
      const Int q = floor_div(h(i, col), p);
      h.add_row(i, row, -q);
      u.add_row(i, row, -q);
    }
    r.pivot_cols.push_back(col);
    ++row;
  }
  return r;
}

struct Hermite {
  IntMatrix h;  ///< column echelon form of m
  IntMatrix v;  ///< unimodular, m * v == h
};

/// Column-style Hermite normal form: nonnegative pivots, entries left of each
/// pivot reduced into [0, pivot).
inline Hermite hermite(const IntMatrix& m) {
  RowHermite r = row_hermite(m.transposed());
  return {r.h.transposed(), r.u.transposed()};
}

struct Smith {
  IntMatrix d;  ///< diagonal d1 | d2 | ..., nonnegative
  IntMatrix u, v;  ///< unimodular; u * m * v == d (empty when transforms not requested)
};

/// Smith normal form by repeated gcd pivoting.
inline Smith smith(const IntMatrix& m, bool with_transforms = true) {
  Smith s{m, with_transforms ? IntMatrix::identity(m.rows()) : IntMatrix(),
          with_transforms ? IntMatrix::identity(m.cols()) : IntMatrix()};
  IntMatrix& d = s.d;
  const std::size_t R = d.rows(), C = d.cols();
  const std::size_t n = std::min(R, C);
  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // smallest nonzero |entry| in the trailing block
      std::optional<std::pair<std::size_t, std::size_t>> best;
      for (std::size_t i = t; i < R; ++i)
        for (std::size_t j = t; j < C; ++j)
          if (d(i, j) != 0 && (!best || abs(d(i, j)) < abs(d(best->first, best->second)))) best = {{i, j}};
      if (!best) return s;
      d.swap_rows(t, best->first);
      d.swap_cols(t, best->second);
      if (with_transforms) {
        s.u.swap_rows(t, best->first);
        s.v.swap_cols(t, best->second);
      }
      bool clean = true;
      const Int p = d(t, t);
      for (std::size_t i = t + 1; i < R; ++i) {
        if (d(i, t) == 0) continue;
        const Int q = floor_div(d(i, t), p);
        d.add_row(i, t, -q);
        if (with_transforms) s.u.add_row(i, t, -q);
        if (d(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (d(t, j) == 0) continue;
        const Int q = floor_div(d(t, j), p);
        d.add_col(j, t, -q);
        if (with_transforms) s.v.add_col(j, t, -q);
        if (d(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // enforce divisibility of the rest of the block by the pivot
      std::optional<std::size_t> bad;
      for (std::size_t i = t + 1; i < R && !bad; ++i)
        for (std::size_t j = t + 1; j < C; ++j)
          if (d(i, j) % p != 0) {
            bad = i;
            break;
          }
      if (!bad) break;
      d.add_row(t, *bad, 1);
      if (with_transforms) s.u.add_row(t, *bad, 1);
    }
    if (d(t, t) < 0) {
      d.negate_row(t);
      if (with_transforms) s.u.negate_row(t);
    }
  }
  return s;
}

/// True iff the entries have gcd 1.
inline bool primitive(std::span<const Int> v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g == 0) throw std::invalid_argument("primitive: zero vector");
  return g == 1;
}

// ---------------------------------------------------------------------------
// Sparse lattices in echelon form.

/// Sparse integer vector; keys are column indices (lower index = leading).
using SparseVec = std::map<std::size_t, Int>;

inline void axpy(SparseVec& y, const Int& a, const SparseVec& x) {
  if (a == 0) return;
  for (const auto& [k, v] : x) {
    auto [it, ins] = y.try_emplace(k, 0);
    it->second += a * v;
    if (it->second == 0) y.erase(it);
  }
}

inline SparseVec scaled(const SparseVec& x, const Int& a) {
  SparseVec r;
  if (a == 0) return r;
  for (const auto& [k, v] : x) r.emplace(k, a * v);
  return r;
}

/// Echelon basis of the row lattice spanned by inserted vectors. Each basis
/// row optionally tracks its expression in the inserted generators.
class Lattice {
 public:
  struct Row {
    SparseVec v;
    SparseVec combo;
  };
  struct Reduction {
    SparseVec residual;
    SparseVec combo;  ///< input == residual + sum combo[g] * generator[g]
  };

  void insert(SparseVec v, SparseVec combo = {}) {
    // Pre-reducing keeps entries small; without it coefficients explode.
    {
      Reduction r = reduce(std::move(v));
      v = std::move(r.residual);
      axpy(combo, -1, r.combo);
    }
    while (!v.empty()) {
      const std::size_t j = v.begin()->first;
      auto it = pivots_.find(j);
      if (it == pivots_.end()) {
        if (v.begin()->second < 0) {
          v = scaled(v, -1);
          combo = scaled(combo, -1);
        }
        auto placed = pivots_.emplace(j, Row{std::move(v), std::move(combo)}).first;
        reduce_tail(placed->second);
        return;
      }
      Row& p = it->second;
      const Int pv = p.v.begin()->second;
      const Int a = v.begin()->second;
      if (a % pv == 0) {
        const Int q = -(a / pv);
        axpy(v, q, p.v);
        axpy(combo, q, p.combo);
        continue;
      }
      auto [g, s, t] = gcdext(pv, a);
      SparseVec nv = scaled(p.v, s), nc = scaled(p.combo, s);
      axpy(nv, t, v);
      axpy(nc, t, combo);
      SparseVec rv = scaled(p.v, a / g), rc = scaled(p.combo, a / g);
      axpy(rv, -(pv / g), v);
      axpy(rc, -(pv / g), combo);
      p.v = std::move(nv);
      p.combo = std::move(nc);
      reduce_tail(p);
      v = std::move(rv);
      combo = std::move(rc);
    }
  }

  /// Canonical reduction: pivot coordinates brought into [0, pivot).
  Reduction reduce(SparseVec v) const {
    Reduction r;
    std::size_t from = 0;
    for (;;) {
      auto it = v.lower_bound(from);
      while (it != v.end() && !pivots_.count(it->first)) ++it;
      if (it == v.end()) break;
      const Row& p = pivots_.at(it->first);
      const Int q = floor_div(it->second, p.v.begin()->second);
      from = it->first + 1;
      if (q != 0) {
        axpy(v, -q, p.v);
        axpy(r.combo, q, p.combo);
      }
    }
    r.residual = std::move(v);
    return r;
  }

  std::size_t rank() const { return pivots_.size(); }
  const std::map<std::size_t, Row>& rows() const { return pivots_; }

 private:
  /// Brings the entries of `r` after its pivot into canonical range.
  void reduce_tail(Row& r) const {
    std::size_t from = r.v.begin()->first + 1;
    for (;;) {
      auto it = r.v.lower_bound(from);
      while (it != r.v.end() && !pivots_.count(it->first)) ++it;
      if (it == r.v.end()) break;
      const Row& p = pivots_.at(it->first);
      const Int q = floor_div(it->second, p.v.begin()->second);
      from = it->first + 1;
      if (q != 0) {
        axpy(r.v, -q, p.v);
        axpy(r.combo, -q, p.combo);
      }
    }
  }

  std::map<std::size_t, Row> pivots_;
};

// ---------------------------------------------------------------------------
// Graded ideals.

/// Column coordinates for the monomials of one degree.
class DegreeBasis {
 public:
  DegreeBasis(const VarTable& t, int d) : degree_(d), monos_(monomials_of_degree(t, d)) {
    for (std::size_t i = 0; i < monos_.size(); ++i) index_.emplace(monos_[i], i);
  }
  int degree() const { return degree_; }
  std::size_t size() const { return monos_.size(); }
  const Monomial& monomial(std::size_t i) const { return monos_[i]; }
  const std::vector<Monomial>& monomials() const { return monos_; }

  SparseVec coords(const Poly& p) const {
    SparseVec v;
    for (const auto& [m, c] : p.terms()) {
      if (m.degree != degree_) throw std::invalid_argument("DegreeBasis: term of wrong degree");
      v.emplace(index_.at(m), c);
    }
    return v;
  }
  Poly poly(const TablePtr& t, const SparseVec& v) const {
    Poly p(t);
    for (const auto& [k, c] : v) p.add_term(monos_[k], c);
    return p;
  }

 private:
  int degree_;
  std::vector<Monomial> monos_;
  std::map<Monomial, std::size_t> index_;
};

struct CertificateTerm {
  std::size_t generator;
  Poly cofactor;
};
using Certificate = std::vector<CertificateTerm>;

struct Membership {
  bool member = false;
  Certificate certificate;  ///< sum cofactor * generator == query, when member
  Poly residual;            ///< canonical remainder of the query modulo the degree-d span
};

/// Free rank plus torsion invariants d1 | d2 | ... (entries > 1 only).
struct GroupStructure {
  int degree = 0;
  std::size_t free_rank = 0;
  std::vector<Int> torsion;

  bool operator==(const GroupStructure& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }
  std::string to_string() const {
    std::string s;
    if (free_rank > 0) s = free_rank == 1 ? "Z" : "Z^" + std::to_string(free_rank);
    for (const auto& t : torsion) s += (s.empty() ? "" : " + ") + ("Z/" + t.get_str());
    return s.empty() ? "0" : s;
  }
};

struct ContainmentResult {
  bool holds = true;
  int checked_up_to = 0;
  std::optional<std::size_t> failing_generator;  ///< index into the candidate sub-ideal
  int failing_degree = -1;
  std::vector<Certificate> certificates;  ///< one per checked generator
};

class GradedIdeal {
 public:
  GradedIdeal(TablePtr table, std::vector<Poly> generators) : table_(std::move(table)) {
    for (auto& g : generators) {
      if (!same_table(g.table(), table_)) throw std::invalid_argument("GradedIdeal: mismatched VarTable");
      if (!g.is_homogeneous()) throw std::invalid_argument("GradedIdeal: generator " + g.to_string() + " is not homogeneous");
      gens_.push_back(std::move(g));
    }
  }

  const TablePtr& table() const { return table_; }
  const std::vector<Poly>& generators() const { return gens_; }

  /// Degree-d span {g*m} as a lattice; combos index into span_terms(d).
  Lattice span_lattice(int d, bool track, const DegreeBasis& basis) const {
    Lattice lat;
    std::size_t id = 0;
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
      const Poly& g = gens_[gi];
      if (g.is_zero() || g.degree() > d) continue;
      for (const auto& m : monomials_of_degree(*table_, d - g.degree())) {
        Poly row = g * Poly::from_monomial(table_, m);
        SparseVec combo;
        if (track) combo.emplace(id, 1);
        lat.insert(basis.coords(row), std::move(combo));
        ++id;
      }
    }
    return lat;
  }

  Membership member(const Poly& p) const {
    if (!same_table(p.table(), table_)) throw std::invalid_argument("member: mismatched VarTable");
    if (!p.is_homogeneous()) throw std::invalid_argument("member: query is not homogeneous");
    Membership out;
    if (p.is_zero()) {
      out.member = true;
      out.residual = Poly(table_);
      return out;
    }
    const int d = p.degree();
    DegreeBasis basis(*table_, d);
    Lattice lat = span_lattice(d, true, basis);
    auto red = lat.reduce(basis.coords(p));
    out.residual = basis.poly(table_, red.residual);
    out.member = red.residual.empty();
    if (out.member) out.certificate = decode(d, red.combo);
    return out;
  }

  /// Re-multiplies a certificate.
  Poly evaluate(const Certificate& cert) const {
    Poly s(table_);
    for (const auto& t : cert) s += t.cofactor * gens_.at(t.generator);
    return s;
  }

  /// Canonical representative of p modulo the ideal, degree by degree.
  Poly normal_form(const Poly& p) const {
    Poly out(table_);
    for (int d = std::max(0, p.low_degree()); d <= p.degree(); ++d) {
      Poly part = p.graded_part(d);
      if (part.is_zero()) continue;
      DegreeBasis basis(*table_, d);
      Lattice lat = span_lattice(d, false, basis);
      out += basis.poly(table_, lat.reduce(basis.coords(part)).residual);
    }
    return out;
  }

  GroupStructure quotient_structure(int d) const {
    if (d < 0 || d > table_->degree_bound()) throw std::out_of_range("quotient_structure: degree out of range");
    DegreeBasis basis(*table_, d);
    Lattice lat = span_lattice(d, false, basis);
    GroupStructure gs;
    gs.degree = d;
    gs.free_rank = basis.size() - lat.rank();
    if (lat.rank() == 0) return gs;
    // Unit pivots split off: clear their columns from the other rows, then
    // run Smith on the remaining rows restricted to non-unit-pivot columns.
    std::vector<SparseVec> hard;
    for (const auto& [col, row] : lat.rows()) {
      if (row.v.begin()->second == 1) continue;
      SparseVec v = row.v;
      std::size_t from = 0;
      for (;;) {
        auto it = v.lower_bound(from);
        while (it != v.end()) {
          auto p = lat.rows().find(it->first);
          if (p != lat.rows().end() && p->second.v.begin()->second == 1) break;
          ++it;
        }
        if (it == v.end()) break;
        from = it->first + 1;
        const Int q = it->second;
        axpy(v, -q, lat.rows().at(it->first).v);
      }
      hard.push_back(std::move(v));
    }
    if (hard.empty()) return gs;
    std::map<std::size_t, std::size_t> where;
    for (const auto& v : hard)
      for (const auto& [k, x] : v) where.emplace(k, 0);
    std::size_t next = 0;
    for (auto& [k, idx] : where) idx = next++;
    IntMatrix m(hard.size(), where.size());
    for (std::size_t i = 0; i < hard.size(); ++i)
      for (const auto& [k, x] : hard[i]) m(i, where.at(k)) = x;
    Smith s = smith(m, false);
    for (std::size_t i = 0; i < std::min(s.d.rows(), s.d.cols()); ++i)
      if (s.d(i, i) > 1) gs.torsion.push_back(s.d(i, i));
    return gs;
  }

  /// Does this ideal contain every generator of `other` of degree <= up_to?
  ContainmentResult contains(const GradedIdeal& other, int up_to) const {
    if (!same_table(other.table_, table_)) throw std::invalid_argument("contains: mismatched VarTable");
    ContainmentResult r;
    r.checked_up_to = up_to;
    for (std::size_t i = 0; i < other.gens_.size(); ++i) {
      const Poly& g = other.gens_[i];
      if (g.degree() > up_to) continue;
      Membership m = member(g);
      if (!m.member) {
        r.holds = false;
        r.failing_generator = i;
        r.failing_degree = g.degree();
        return r;
      }
      r.certificates.push_back(std::move(m.certificate));
    }
    return r;
  }

 private:
  Certificate decode(int d, const SparseVec& combo) const {
    // Rebuild the (generator, monomial) enumeration used by span_lattice.
    std::vector<std::pair<std::size_t, Monomial>> ids;
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
      const Poly& g = gens_[gi];
      if (g.is_zero() || g.degree() > d) continue;
      for (auto& m : monomials_of_degree(*table_, d - g.degree())) ids.emplace_back(gi, std::move(m));
    }
    std::map<std::size_t, Poly> cof;
    for (const auto& [id, c] : combo) {
      const auto& [gi, m] = ids.at(id);
      auto [it, ins] = cof.try_emplace(gi, Poly(table_));
      it->second.add_term(m, c);
    }
    Certificate cert;
    for (auto& [gi, p] : cof)
      if (!p.is_zero()) cert.push_back({gi, std::move(p)});
    return cert;
  }

  TablePtr table_;
  std::vector<Poly> gens_;
};

/// Two-way containment up to a degree.
struct EqualityResult {
  bool equal = false;
  ContainmentResult forward;   ///< b subset of a
  ContainmentResult backward;  ///< a subset of b
};

inline EqualityResult ideal_equal(const GradedIdeal& a, const GradedIdeal& b, int up_to) {
  EqualityResult r;
  r.forward = a.contains(b, up_to);
  r.backward = b.contains(a, up_to);
  r.equal = r.forward.holds && r.backward.holds;
  return r;
}

}  // namespace chow

#endif  // CHOW_ZGRADED_HPP
