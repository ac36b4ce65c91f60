#pragma once
/**
 * Graded pieces of quotients of polynomial rings by homogeneous ideals,
 * used as zero-differential comparison targets (O_Y = R/(s), and
 * pi_* O_Z = Sym E/(W)). A slice keeps the relations in reduced echelon
 * form; monomials that are not pivots form the quotient basis.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "linalg.hpp"
#include "window.hpp"

namespace koszul {

template <class Field>
class QuotientSlice {
 public:
  using V = typename Field::value_type;
  using Exponents = std::vector<int>;

  QuotientSlice(const Field& F, std::vector<Exponents> monomials, const std::vector<std::map<Exponents, Coeff>>& relations)
      : F_(F), monomials_(std::move(monomials)) {
    for (std::size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
    for (const auto& rel : relations) {
      std::map<std::size_t, V> v;
      for (const auto& [m, c] : rel) {
        auto it = index_.find(m);
        if (it == index_.end()) throw InternalError("relation leaves its graded piece");
        v[it->second] = F_.add(v.count(it->second) ? v[it->second] : F_.zero(), F_.from_int(c));
      }
      SparseVector<V> sv;
      for (auto& [i, x] : v)
        if (!F_.is_zero(x)) sv.emplace_back(i, x);
      add_relation(std::move(sv));
    }
    for (std::size_t i = 0; i < monomials_.size(); ++i)
      if (!pivots_.count(i)) {
        coordinate_.emplace(i, basis_.size());
        basis_.push_back(i);
      }
  }

  std::size_t dim() const { return basis_.size(); }
  const std::vector<Exponents>& monomials() const { return monomials_; }
  std::optional<std::size_t> monomial_index(const Exponents& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Coordinates of the class of `v` (indexed by monomial) in the quotient basis.
  SparseVector<V> reduce(SparseVector<V> v) const {
    for (;;) {
      std::optional<std::size_t> top;
      V coeff{};
      for (auto it = v.rbegin(); it != v.rend(); ++it)
        if (pivots_.count(it->first)) {
          top = it->first;
          coeff = it->second;
          break;
        }
      if (!top) break;
      v = axpy(F_, v, F_.neg(coeff), pivots_.at(*top));
    }
    SparseVector<V> out;
    for (auto& [i, x] : v) out.emplace_back(coordinate_.at(i), x);
    return out;
  }

 private:
  void add_relation(SparseVector<V> v) {
    while (!v.empty()) {
      auto it = pivots_.find(v.back().first);
      if (it == pivots_.end()) break;
      v = axpy(F_, v, F_.neg(v.back().second), it->second);
    }
    if (v.empty()) return;
    scale_in_place(F_, v, F_.inv(v.back().second));
    pivots_.emplace(v.back().first, std::move(v));
  }

  const Field& F_;
  std::vector<Exponents> monomials_;
  std::map<Exponents, std::size_t> index_;
  std::map<std::size_t, SparseVector<V>> pivots_;  // low index -> relation with low entry 1
  std::vector<std::size_t> basis_;
  std::map<std::size_t, std::size_t> coordinate_;
};

/// Degree-d piece of R/(s_1..s_r): monomials x^a, relations x^b s_i.
template <class Field>
QuotientSlice<Field> quotient_ring_slice(const Field& F, const std::vector<int>& weights,
                                         const std::vector<std::map<std::vector<int>, Coeff>>& s,
                                         const std::vector<int>& e, int d) {
  std::vector<std::map<std::vector<int>, Coeff>> rels;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (const auto& b : x_monomials(weights, d - e[i])) {
      std::map<std::vector<int>, Coeff> rel;
      for (const auto& [x, c] : s[i]) {
        auto m = x;
        for (std::size_t k = 0; k < m.size(); ++k) m[k] += b[k];
        rel[m] = checked_add(rel[m], c);
      }
      rels.push_back(std::move(rel));
    }
  return QuotientSlice<Field>(F, x_monomials(weights, d), rels);
}

/// Monomials x^a y^b with |b| = w and weighted degree d, deg y_i = D - e_i; exponents x ++ y.
inline std::vector<std::vector<int>> sym_monomials(const std::vector<int>& weights, const std::vector<int>& e, int D,
                                                   int w, int d) {
  std::vector<std::vector<int>> out;
  if (w < 0) return out;
  std::vector<int> ydeg;
  for (int ei : e) ydeg.push_back(D - ei);
  std::vector<int> y(e.size(), 0);
  std::function<void(std::size_t, int, int)> rec = [&](std::size_t i, int left, int dy) {
    if (i == e.size()) {
      if (left != 0) return;
      for (const auto& x : x_monomials(weights, d - dy)) {
        auto m = x;
        m.insert(m.end(), y.begin(), y.end());
        out.push_back(std::move(m));
      }
      return;
    }
    for (int k = left; k >= 0; --k) {
      y[i] = k;
      rec(i + 1, left - k, dy + k * ydeg[i]);
    }
    y[i] = 0;
  };
  rec(0, w, 0);
  return out;
}

/// Piece (w, d) of Sym E/(W), W = sum s_i y_i, relations W * (monomials of (w-1, d-D)).
template <class Field>
QuotientSlice<Field> sym_quotient_slice(const Field& F, const std::vector<int>& weights,
                                        const std::vector<std::map<std::vector<int>, Coeff>>& s,
                                        const std::vector<int>& e, int D, int w, int d) {
  const std::size_t n = weights.size();
  std::vector<std::map<std::vector<int>, Coeff>> rels;
  for (const auto& b : sym_monomials(weights, e, D, w - 1, d - D)) {
    std::map<std::vector<int>, Coeff> rel;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (const auto& [x, c] : s[i]) {
        auto m = b;
        for (std::size_t k = 0; k < n; ++k) m[k] += x[k];
        m[n + i] += 1;
        rel[m] = checked_add(rel[m], c);
      }
    rels.push_back(std::move(rel));
  }
  return QuotientSlice<Field>(F, sym_monomials(weights, e, D, w, d), rels);
}

/**
 * Checks that a map from a module onto a zero-differential target is a
 * quasi-isomorphism at tridegree tau, given the map on the slice at tau as a
 * matrix into target coordinates and the target dimension there:
 * the map kills boundaries, is onto from cocycles, and dim H = target dim.
 */
template <class Field>
bool quasi_iso_onto_at(const Field& F, const Materialization& m, Tridegree tau,
                       const SparseMatrix<typename Field::value_type>& projection, std::size_t target_dim) {
  const Tridegree one{1, 0, 0};
  auto out = to_field(F, m.differential_matrix(tau));
  auto in = to_field(F, m.differential_matrix(tau - one));
  auto rk = rank_and_kernel(F, out);
  std::size_t boundary_rank = rank(F, in);
  std::size_t h = m.slice(tau).size() - rk.rank - boundary_rank;
  if (!is_zero_matrix(mat_mul(F, projection, in))) return false;
  std::vector<SparseVector<typename Field::value_type>> images;
  for (const auto& z : rk.kernel) images.push_back(mat_vec(F, projection, z));
  return span_rank(F, images) == target_dim && h == target_dim;
}

}  // namespace koszul
