#pragma once
/**
 * Exact sparse linear algebra over a field policy (RationalField or
 * PrimeField). Matrices are column-major and sparse; rank and kernel come
 * from a column reduction that tracks the column operations, so kernel
 * vectors fall out as the combinations that reduce a column to zero.
 */

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "field.hpp"

namespace koszul {

template <class V>
using SparseVector = std::vector<std::pair<std::size_t, V>>;  // sorted by index, no zeros

template <class V>
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<SparseVector<V>> columns;

  SparseMatrix() = default;
  SparseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), columns(c) {}

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : columns) n += c.size();
    return n;
  }
};

/// v <- v + f * u
template <class Field>
SparseVector<typename Field::value_type> axpy(const Field& F, const SparseVector<typename Field::value_type>& v,
                                              const typename Field::value_type& f,
                                              const SparseVector<typename Field::value_type>& u) {
  SparseVector<typename Field::value_type> out;
  out.reserve(v.size() + u.size());
  std::size_t i = 0, j = 0;
  while (i < v.size() || j < u.size()) {
    if (j == u.size() || (i < v.size() && v[i].first < u[j].first)) {
      out.push_back(v[i++]);
    } else if (i == v.size() || u[j].first < v[i].first) {
      auto val = F.mul(f, u[j].second);
      if (!F.is_zero(val)) out.emplace_back(u[j].first, std::move(val));
      ++j;
    } else {
      auto val = F.add(v[i].second, F.mul(f, u[j].second));
      if (!F.is_zero(val)) out.emplace_back(v[i].first, std::move(val));
      ++i;
      ++j;
    }
  }
  return out;
}

template <class Field>
void scale_in_place(const Field& F, SparseVector<typename Field::value_type>& v, const typename Field::value_type& f) {
  for (auto& [i, x] : v) x = F.mul(x, f);
}

template <class Field>
SparseVector<typename Field::value_type> mat_vec(const Field& F, const SparseMatrix<typename Field::value_type>& M,
                                                 const SparseVector<typename Field::value_type>& x) {
  using V = typename Field::value_type;
  std::unordered_map<std::size_t, V> acc;
  for (const auto& [j, xj] : x) {
    if (j >= M.cols) throw std::out_of_range("mat_vec: vector index exceeds column count");
    for (const auto& [i, mij] : M.columns[j]) {
      auto it = acc.find(i);
      if (it == acc.end())
        acc.emplace(i, F.mul(mij, xj));
      else
        it->second = F.add(it->second, F.mul(mij, xj));
    }
  }
  SparseVector<V> out;
  out.reserve(acc.size());
  for (auto& [i, v] : acc)
    if (!F.is_zero(v)) out.emplace_back(i, std::move(v));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

template <class Field>
SparseMatrix<typename Field::value_type> mat_mul(const Field& F, const SparseMatrix<typename Field::value_type>& A,
                                                 const SparseMatrix<typename Field::value_type>& B) {
  if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
  SparseMatrix<typename Field::value_type> C(A.rows, B.cols);
  for (std::size_t j = 0; j < B.cols; ++j) C.columns[j] = mat_vec(F, A, B.columns[j]);
  return C;
}

template <class V>
bool is_zero_matrix(const SparseMatrix<V>& M) {
  for (const auto& c : M.columns)
    if (!c.empty()) return false;
  return true;
}

/**
 * Incremental echelon basis of a subspace. Each stored vector has a distinct
 * lowest nonzero ("low") index, normalized to 1. Optionally tracks, for every
 * stored vector, the combination of inserted vectors that produced it.
 */
template <class Field>
class EchelonBasis {
 public:
  using V = typename Field::value_type;

  explicit EchelonBasis(const Field& F, bool track = false) : F_(F), track_(track) {}

  /// Reduces v against the basis. Returns the combination (over inserted
  /// vectors, with `self` standing for v) if v lies in the span, otherwise
  /// adds the reduced v and returns an empty optional-like flag via `added`.
  bool insert(SparseVector<V> v, std::size_t self_id, SparseVector<V>* kernel_combo = nullptr) {
    SparseVector<V> combo;
    if (track_) combo.emplace_back(self_id, F_.one());
    while (!v.empty()) {
      std::size_t low = v.back().first;
      auto it = pivot_.find(low);
      if (it == pivot_.end()) break;
      const auto& u = vectors_[it->second];
      V f = F_.neg(v.back().second);  // u has low entry 1
      v = axpy(F_, v, f, u);
      if (track_) combo = axpy(F_, combo, f, combos_[it->second]);
    }
    if (v.empty()) {
      if (kernel_combo) *kernel_combo = std::move(combo);
      return false;
    }
    V inv = F_.inv(v.back().second);
    scale_in_place(F_, v, inv);
    if (track_) scale_in_place(F_, combo, inv);
    pivot_.emplace(v.back().first, vectors_.size());
    vectors_.push_back(std::move(v));
    if (track_) combos_.push_back(std::move(combo));
    return true;
  }

  bool contains(SparseVector<V> v) const {
    while (!v.empty()) {
      auto it = pivot_.find(v.back().first);
      if (it == pivot_.end()) return false;
      v = axpy(F_, v, F_.neg(v.back().second), vectors_[it->second]);
    }
    return true;
  }

  std::size_t rank() const { return vectors_.size(); }

 private:
  const Field& F_;
  bool track_;
  std::vector<SparseVector<V>> vectors_;
  std::vector<SparseVector<V>> combos_;
  std::unordered_map<std::size_t, std::size_t> pivot_;
};

template <class V>
struct RankKernel {
  std::size_t rank = 0;
  std::vector<SparseVector<V>> kernel;  // basis of the null space, vectors indexed by column
};

/// Exact rank of M.
template <class Field>
std::size_t rank(const Field& F, const SparseMatrix<typename Field::value_type>& M) {
  EchelonBasis<Field> basis(F, false);
  for (std::size_t j = 0; j < M.cols; ++j) basis.insert(M.columns[j], j);
  return basis.rank();
}

/// Rank of the span of a family of vectors.
template <class Field>
std::size_t span_rank(const Field& F, const std::vector<SparseVector<typename Field::value_type>>& vs) {
  EchelonBasis<Field> basis(F, false);
  for (std::size_t j = 0; j < vs.size(); ++j) basis.insert(vs[j], j);
  return basis.rank();
}

/**
 * Exact rank and a kernel basis. Every kernel vector is checked against M
 * before returning; a nonzero product is an internal error.
 */
template <class Field>
RankKernel<typename Field::value_type> rank_and_kernel(const Field& F,
                                                       const SparseMatrix<typename Field::value_type>& M) {
  RankKernel<typename Field::value_type> out;
  EchelonBasis<Field> basis(F, true);
  for (std::size_t j = 0; j < M.cols; ++j) {
    SparseVector<typename Field::value_type> combo;
    if (!basis.insert(M.columns[j], j, &combo)) {
      std::sort(combo.begin(), combo.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      out.kernel.push_back(std::move(combo));
    }
  }
  out.rank = basis.rank();
  for (const auto& z : out.kernel)
    if (!mat_vec(F, M, z).empty()) throw std::logic_error("rank_and_kernel: kernel vector not annihilated");
  return out;
}

/// Converts an integer-entry matrix to field entries.
template <class Field>
SparseMatrix<typename Field::value_type> to_field(const Field& F, const SparseMatrix<Coeff>& M) {
  SparseMatrix<typename Field::value_type> out(M.rows, M.cols);
  for (std::size_t j = 0; j < M.cols; ++j)
    for (const auto& [i, c] : M.columns[j]) {
      auto v = F.from_int(c);
      if (!F.is_zero(v)) out.columns[j].emplace_back(i, std::move(v));
    }
  return out;
}

/// Builds a sparse matrix from dense rows (test convenience).
template <class Field>
SparseMatrix<typename Field::value_type> from_dense(const Field& F, const std::vector<std::vector<Coeff>>& rows) {
  std::size_t r = rows.size();
  std::size_t c = r ? rows[0].size() : 0;
  SparseMatrix<typename Field::value_type> M(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i)
      if (rows[i][j] != 0) M.columns[j].emplace_back(i, F.from_int(rows[i][j]));
  return M;
}

}  // namespace koszul
