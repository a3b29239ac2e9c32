#ifndef CHOW_CHERN_HPP
#define CHOW_CHERN_HPP

// Formal vector bundles: rank plus total Chern class, with the operations
// needed for Grassmannian-bundle towers and degeneracy loci.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chow/polyring.hpp"

namespace chow {

/// Thrown when a Whitney quotient has nonzero classes above its rank.
class InconsistentSequence : public std::runtime_error {
 public:
  InconsistentSequence(const std::string& what, int degree, Poly obstruction)
      : std::runtime_error(what), degree_(degree), obstruction_(std::move(obstruction)) {}
  int degree() const { return degree_; }
  const Poly& obstruction() const { return obstruction_; }

 private:
  int degree_;
  Poly obstruction_;
};

/// Maps a class to a canonical representative (tower normal form), or the identity.
using Reducer = std::function<Poly(const Poly&)>;

class Bundle {
 public:
  /// classes[i] = c_i for i = 0..rank; c_0 must be 1 and c_i homogeneous of degree i.
  Bundle(int rank, std::vector<Poly> classes) : rank_(rank), classes_(std::move(classes)) {
    if (rank_ < 0) throw std::invalid_argument("bundle rank must be nonnegative");
    if (classes_.empty()) throw std::invalid_argument("bundle needs c_0");
    table_ = classes_[0].table();
    if (static_cast<int>(classes_.size()) > rank_ + 1) {
      for (std::size_t i = rank_ + 1; i < classes_.size(); ++i)
        if (!classes_[i].is_zero())
          throw std::invalid_argument("c_" + std::to_string(i) + " nonzero above rank " + std::to_string(rank_));
      classes_.resize(rank_ + 1);
    }
    while (static_cast<int>(classes_.size()) < rank_ + 1) classes_.emplace_back(table_);
    if (classes_[0] != Poly::constant(table_, 1)) throw std::invalid_argument("c_0 must be 1");
    for (int i = 1; i <= rank_; ++i) {
      const Poly& c = classes_[i];
      if (!same_table(c.table(), table_)) throw std::invalid_argument("mismatched VarTable in bundle classes");
      if (!c.is_zero() && (!c.is_homogeneous() || c.degree() != i))
        throw std::invalid_argument("c_" + std::to_string(i) + " is not homogeneous of degree " + std::to_string(i));
    }
  }

  /// Rank-n bundle whose Chern classes are the variables prefix1..prefixn of `table`.
  static Bundle from_variables(const TablePtr& table, const std::string& prefix, int rank) {
    std::vector<Poly> c{Poly::constant(table, 1)};
    for (int i = 1; i <= rank; ++i) c.push_back(Poly::variable(table, prefix + std::to_string(i)));
    return Bundle(rank, std::move(c));
  }
  static Bundle trivial(const TablePtr& table, int rank) {
    return Bundle(rank, {Poly::constant(table, 1)});
  }
  static Bundle line(const Poly& c1) {
    return Bundle(1, {Poly::constant(c1.table(), 1), c1});
  }

  int rank() const { return rank_; }
  const TablePtr& table() const { return table_; }
  /// c_i, zero outside 0..rank.
  Poly c(int i) const {
    if (i < 0 || i > rank_) return Poly(table_);
    return classes_[i];
  }
  const std::vector<Poly>& classes() const { return classes_; }
  Poly total() const {
    Poly t(table_);
    for (const auto& c : classes_) t += c;
    return t;
  }

  Bundle embedded(const TablePtr& target) const {
    std::vector<Poly> c;
    for (const auto& p : classes_) c.push_back(embed(p, target));
    return Bundle(rank_, std::move(c));
  }

  bool operator==(const Bundle& o) const { return rank_ == o.rank_ && classes_ == o.classes_; }

  std::string to_string() const {
    std::string s = "rank " + std::to_string(rank_) + ": 1";
    for (int i = 1; i <= rank_; ++i) s += ", " + classes_[i].to_string();
    return s;
  }

 private:
  int rank_;
  TablePtr table_;
  std::vector<Poly> classes_;
};

/// Splits a total class into its graded pieces 0..degree_bound.
inline std::vector<Poly> graded_parts(const Poly& total) {
  std::vector<Poly> parts;
  for (int d = 0; d <= total.table()->degree_bound(); ++d) parts.push_back(total.graded_part(d));
  return parts;
}

inline Bundle dual(const Bundle& e) {
  std::vector<Poly> c = e.classes();
  for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
  return Bundle(e.rank(), std::move(c));
}

/// Top exterior power.
inline Bundle determinant(const Bundle& e) { return Bundle::line(e.c(1)); }

/// E tensor a line bundle with first Chern class `ell`.
inline Bundle tensor_line(const Bundle& e, const Poly& ell) {
  if (!same_table(ell.table(), e.table())) throw std::invalid_argument("tensor_line: mismatched VarTable");
  if (!ell.is_zero() && (!ell.is_homogeneous() || ell.degree() != 1))
    throw std::invalid_argument("tensor_line: line class must be homogeneous of degree 1");
  const int r = e.rank();
  std::vector<Poly> powers{Poly::constant(e.table(), 1)};
  for (int i = 1; i <= r; ++i) powers.push_back(powers.back() * ell);
  std::vector<Poly> c{Poly::constant(e.table(), 1)};
  for (int i = 1; i <= r; ++i) {
    Poly ci(e.table());
    for (int j = 0; j <= i; ++j) ci += e.c(j) * powers[i - j] * binomial(r - j, i - j);
    c.push_back(std::move(ci));
  }
  return Bundle(r, std::move(c));
}

/// Universal Chern classes of the exterior square of a rank-n bundle as
/// polynomials in e1..en (over a scratch table), via Chern roots.
inline std::vector<Poly> universal_exterior_square(int n, int degree_bound) {
  TablePtr et = make_table(chern_variables("e", n), degree_bound);
  RootSet roots(et, n);
  Poly total = Poly::constant(roots.table(), 1);
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) total = total * (Poly::constant(roots.table(), 1) + roots.root(i) + roots.root(j));
  std::vector<std::size_t> targets;
  for (int i = 0; i < n; ++i) targets.push_back(static_cast<std::size_t>(i));
  std::vector<Poly> out{Poly::constant(et, 1)};
  const int rank = n * (n - 1) / 2;
  for (int d = 1; d <= std::min(rank, degree_bound); ++d)
    out.push_back(symmetric_reduce(roots, total.graded_part(d), targets));
  return out;
}

inline Bundle exterior_square(const Bundle& e) {
  const int n = e.rank();
  if (n < 2) throw std::invalid_argument("exterior_square: rank must be at least 2");
  const auto universal = universal_exterior_square(n, e.table()->degree_bound());
  std::vector<Poly> images;
  for (int i = 1; i <= n; ++i) images.push_back(e.c(i));
  std::vector<Poly> c;
  for (const auto& u : universal) c.push_back(ring_map(u, e.table(), images));
  return Bundle(n * (n - 1) / 2, std::move(c));
}

/// c(total) / c(sub) as a truncated total class.
inline Poly whitney_division(const Bundle& total, const Bundle& sub) {
  if (!same_table(total.table(), sub.table())) throw std::invalid_argument("whitney: mismatched VarTable");
  return total.total() * series_invert(sub.total());
}

/// Quotient (or, symmetrically, kernel) in 0 -> sub -> total -> quotient -> 0.
/// Classes above the quotient rank must vanish after `reduce`, else throws.
inline Bundle whitney_quotient(const Bundle& total, const Bundle& sub, const Reducer& reduce = {}) {
  if (sub.rank() > total.rank()) throw std::invalid_argument("whitney_quotient: sub rank exceeds total rank");
  const int r = total.rank() - sub.rank();
  const Poly q = whitney_division(total, sub);
  const int bound = total.table()->degree_bound();
  for (int d = r + 1; d <= bound; ++d) {
    Poly part = q.graded_part(d);
    if (reduce) part = reduce(part);
    if (!part.is_zero())
      throw InconsistentSequence("inconsistent exact sequence: quotient class c_" + std::to_string(d) +
                                     " = " + part.to_string() + " nonzero above rank " + std::to_string(r),
                                 d, part);
  }
  std::vector<Poly> c;
  for (int d = 0; d <= std::min(r, bound); ++d) c.push_back(q.graded_part(d));
  return Bundle(r, std::move(c));
}

/// Determinant of a small square matrix of polynomials (Laplace expansion).
inline Poly poly_determinant(const std::vector<std::vector<Poly>>& m, const TablePtr& table) {
  const std::size_t n = m.size();
  if (n == 0) return Poly::constant(table, 1);
  if (n == 1) return m[0][0];
  Poly out(table);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Poly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Poly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    Poly term = m[0][j] * poly_determinant(minor, table);
    if (j % 2) out -= term;
    else out += term;
  }
  return out;
}

/// det(c_{lambda_i - i + j}) for a total class given by graded parts.
inline Poly schur_determinant(const std::vector<Poly>& parts, const std::vector<int>& lambda, const TablePtr& table) {
  const int n = static_cast<int>(lambda.size());
  auto part = [&](int d) -> Poly {
    if (d < 0 || d >= static_cast<int>(parts.size())) return Poly(table);
    return parts[d];
  };
  std::vector<std::vector<Poly>> m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i].push_back(part(lambda[i] - i + j));
  return poly_determinant(m, table);
}

/// Class of the locus where a map E -> F has rank <= r:
/// det(c_{f-r+j-i}(F - E)) of size e - r.
inline Poly porteous(const Bundle& e, const Bundle& f, int r) {
  if (!same_table(e.table(), f.table())) throw std::invalid_argument("porteous: mismatched VarTable");
  if (r < 0 || r > std::min(e.rank(), f.rank()))
    throw std::out_of_range("porteous: rank " + std::to_string(r) + " out of range");
  const auto parts = graded_parts(f.total() * series_invert(e.total()));
  std::vector<int> rect(static_cast<std::size_t>(e.rank() - r), f.rank() - r);
  return schur_determinant(parts, rect, e.table());
}

}  // namespace chow

#endif  // CHOW_CHERN_HPP
