#pragma once
/**
 * Brute-force dimension oracles for the quotient rings R/(s) and Sym E/(W).
 * Deliberately shares nothing with the dg engine: its own monomial
 * enumeration, integer matrices, and a dense fraction-free (Bareiss) rank
 * over arbitrary-precision integers.
 */

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <vector>

namespace koszul::oracle {

using Exps = std::vector<int>;
using Poly = std::map<Exps, long>;

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank of a dense integer matrix by fraction-free elimination.
inline std::size_t bareiss_rank(std::vector<std::vector<mpz_class>> a) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a[0].size();
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class v = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a[i][j] = v;
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

/// All exponent vectors of the given weights summing to `degree`.
inline std::vector<Exps> monomials(const std::vector<int>& weights, int degree) {
  std::vector<Exps> out;
  if (degree < 0) return out;
  std::vector<Exps> partial{Exps{}};
  for (std::size_t i = 0; i < weights.size(); ++i) {
    std::vector<Exps> next;
    for (const auto& p : partial) {
      int used = 0;
      for (std::size_t k = 0; k < p.size(); ++k) used += p[k] * weights[k];
      for (int e = 0; used + e * weights[i] <= degree; ++e) {
        auto q = p;
        q.push_back(e);
        next.push_back(std::move(q));
      }
    }
    partial = std::move(next);
  }
  for (auto& p : partial) {
    int deg = 0;
    for (std::size_t k = 0; k < p.size(); ++k) deg += p[k] * weights[k];
    if (deg == degree) out.push_back(std::move(p));
  }
  return out;
}

/// |space| minus the rank of the products, written in the monomial basis of space.
inline std::size_t quotient_dim(const std::vector<Exps>& space, const std::vector<Poly>& products,
                                std::size_t cap) {
  if (space.size() > cap || products.size() > cap) throw CapExceeded("oracle: graded piece exceeds the cap");
  std::map<Exps, std::size_t> index;
  for (std::size_t i = 0; i < space.size(); ++i) index[space[i]] = i;
  std::vector<std::vector<mpz_class>> rows;
  for (const auto& p : products) {
    std::vector<mpz_class> row(space.size(), 0);
    for (const auto& [m, c] : p) row.at(index.at(m)) += c;
    rows.push_back(std::move(row));
  }
  return space.size() - bareiss_rank(std::move(rows));
}

inline Poly shifted(const Poly& p, const Exps& by) {
  Poly out;
  for (const auto& [m, c] : p) {
    Exps k = m;
    for (std::size_t i = 0; i < by.size(); ++i) k[i] += by[i];
    out[k] += c;
  }
  return out;
}

inline int poly_degree(const Poly& p, const std::vector<int>& weights) {
  if (p.empty()) return 1;
  int d = 0;
  const auto& m = p.begin()->first;
  for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * weights[i];
  return d;
}

/// dim R_d.
inline std::size_t ring_dim(const std::vector<int>& weights, int d) { return monomials(weights, d).size(); }

/// dim (R/(s_1..s_r))_d.
inline std::size_t OY_dim(const std::vector<int>& weights, const std::vector<Poly>& s, int d,
                          std::size_t cap = 200000) {
  std::vector<Poly> products;
  for (const auto& si : s) {
    if (si.empty()) continue;
    for (const auto& m : monomials(weights, d - poly_degree(si, weights))) products.push_back(shifted(si, m));
  }
  return quotient_dim(monomials(weights, d), products, cap);
}

/**
 * dim (Sym E/(W))_{(w,d)} with W = sum s_i y_i, deg y_i = D - e_i, weight 1.
 * Variables are x_1..x_n, y_1..y_r; weight w means total y-degree w.
 */
inline std::size_t OZ_dim(const std::vector<int>& weights, const std::vector<Poly>& s, int w, int d,
                          std::size_t cap = 200000) {
  if (w < 0) return 0;
  const std::size_t n = weights.size(), r = s.size();
  int D = 0;
  for (const auto& si : s) D = std::max(D, poly_degree(si, weights));
  auto space_of = [&](int ww, int dd) {
    std::vector<Exps> out;
    if (ww < 0) return out;
    // y-exponent vectors of total ww, then x-monomials for the remaining degree
    std::vector<int> ones(r, 1);
    for (const auto& y : monomials(ones, ww)) {
      int dy = 0;
      for (std::size_t i = 0; i < r; ++i) dy += y[i] * (D - poly_degree(s[i], weights));
      for (const auto& x : monomials(weights, dd - dy)) {
        Exps m = x;
        m.insert(m.end(), y.begin(), y.end());
        out.push_back(std::move(m));
      }
    }
    return out;
  };
  Poly W;
  for (std::size_t i = 0; i < r; ++i)
    for (const auto& [m, c] : s[i]) {
      Exps k = m;
      k.resize(n + r, 0);
      k[n + i] += 1;
      W[k] += c;
    }
  std::vector<Poly> products;
  if (!W.empty())
    for (const auto& m : space_of(w - 1, d - D)) products.push_back(shifted(W, m));
  return quotient_dim(space_of(w, d), products, cap);
}

}  // namespace koszul::oracle
