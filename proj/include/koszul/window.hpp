#pragma once
/**
 * Windowed materialization of dg modules and exact cohomology tables.
 *
 * A Materialization turns a DgModule into finite k-vector spaces, one per
 * tridegree: the basis at (h, w, d) is every x^a * symbol with symbol in
 * symbols(h, w) and deg(x^a) = d - d(symbol). Since the differential and the
 * algebra action are R-linear and homogeneous, each slice maps into a single
 * slice, so cohomology at a tridegree is computed exactly from three slices.
 */

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "linalg.hpp"
#include "module.hpp"

namespace koszul {

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultBasisCap = 200000;

struct Range {
  int lo = 0;
  int hi = -1;
  bool empty() const { return hi < lo; }
  bool contains(int v) const { return lo <= v && v <= hi; }
  int width() const { return empty() ? 0 : hi - lo + 1; }
  friend bool operator==(const Range&, const Range&) = default;
};

struct Window {
  Range h;
  Range w;
  Range d;

  bool empty() const { return h.empty() || w.empty() || d.empty(); }
  bool contains(Tridegree t) const { return h.contains(t.h) && w.contains(t.w) && d.contains(t.d); }
  /// Cohomological degrees whose neighbours h-1 and h+1 are inside the window.
  Range safe_h() const { return {h.lo + 1, h.hi - 1}; }
  bool safe(Tridegree t) const { return safe_h().contains(t.h) && w.contains(t.w) && d.contains(t.d); }

  std::vector<Tridegree> safe_interior() const {
    std::vector<Tridegree> out;
    Range sh = safe_h();
    for (int a = sh.lo; a <= sh.hi; ++a)
      for (int b = w.lo; b <= w.hi; ++b)
        for (int c = d.lo; c <= d.hi; ++c) out.push_back({a, b, c});
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "h:" << h.lo << ".." << h.hi << ",w:" << w.lo << ".." << w.hi << ",d:" << d.lo << ".." << d.hi;
    return os.str();
  }
  friend bool operator==(const Window&, const Window&) = default;
};

/// Runs fn(0..n-1) on up to `threads` worker threads. Exceptions are rethrown (first by index).
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned k = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  for (unsigned i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Exponent vectors a with sum a_i * weights_i == d, in lexicographic order.
inline std::vector<XExponents> x_monomials(const std::vector<int>& weights, int d) {
  std::vector<XExponents> out;
  if (d < 0) return out;
  XExponents cur(weights.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rem) {
    if (i == weights.size()) {
      if (rem == 0) out.push_back(cur);
      return;
    }
    for (int e = rem / weights[i]; e >= 0; --e) {
      cur[i] = e;
      rec(i + 1, rem - e * weights[i]);
    }
    cur[i] = 0;
  };
  rec(0, d);
  return out;
}

/// Number of monomials of R in each x-degree (the table of a free rank-one R-module).
inline std::size_t count_x_monomials(const std::vector<int>& weights, int d) { return x_monomials(weights, d).size(); }

struct BasisElement {
  std::size_t symbol;  // index into Slice::symbols
  XExponents x;
};

/// The k-basis of a module in one tridegree.
struct Slice {
  Tridegree degree;
  std::vector<Symbol> symbols;
  std::vector<BasisElement> basis;
  std::unordered_map<std::vector<int>, std::size_t, VectorHash> index;  // code ++ x -> position

  std::size_t size() const { return basis.size(); }

  static std::vector<int> key(const SymbolCode& code, const XExponents& x) {
    std::vector<int> k;
    k.reserve(code.size() + x.size());
    k.insert(k.end(), code.begin(), code.end());
    k.insert(k.end(), x.begin(), x.end());
    return k;
  }

  std::optional<std::size_t> find(const SymbolCode& code, const XExponents& x) const {
    auto it = index.find(key(code, x));
    if (it == index.end()) return std::nullopt;
    return it->second;
  }
};

/**
 * Lazily materialized slices of one module, with cached symbol lists,
 * symbol differentials and x-monomials. Safe to share between threads.
 */
class Materialization {
 public:
  explicit Materialization(ModulePtr module, std::size_t cap = kDefaultBasisCap)
      : module_(std::move(module)), cap_(cap), symbols_(*module_), weights_(module_->algebra().base_weights()) {}

  const DgModule& module() const { return *module_; }
  const ModulePtr& module_ptr() const { return module_; }
  std::size_t cap() const { return cap_; }

  const std::vector<XExponents>& monomials(int d) const {
    std::lock_guard lock(mono_mutex_);
    auto it = monos_.find(d);
    if (it != monos_.end()) return it->second;
    return monos_.emplace(d, x_monomials(weights_, d)).first->second;
  }

  const Slice& slice(Tridegree t) const {
    {
      std::lock_guard lock(slice_mutex_);
      auto it = slices_.find(t);
      if (it != slices_.end()) return *it->second;
    }
    auto s = std::make_unique<Slice>();
    s->degree = t;
    const auto& syms = symbols_.symbols(t.h, t.w);
    for (const auto& sym : syms) {
      if (sym.degree.d > t.d) continue;
      const auto& xs = monomials(t.d - sym.degree.d);
      if (xs.empty()) continue;
      std::size_t idx = s->symbols.size();
      s->symbols.push_back(sym);
      for (const auto& x : xs) {
        if (s->basis.size() >= cap_)
          throw ResourceError(module_->name() + ": basis at tridegree " + to_string(t) + " exceeds the cap of " +
                              std::to_string(cap_));
        s->index.emplace(Slice::key(sym.code, x), s->basis.size());
        s->basis.push_back(BasisElement{idx, x});
      }
    }
    std::lock_guard lock(slice_mutex_);
    auto [it, inserted] = slices_.emplace(t, std::move(s));
    return *it->second;
  }

  const RCombination& symbol_differential(const Symbol& s) const { return symbols_.differential(s); }

  /// Matrix of d from slice t to slice t + (1,0,0).
  SparseMatrix<Coeff> differential_matrix(Tridegree t) const {
    const Slice& src = slice(t);
    const Slice& tgt = slice(t + Tridegree{1, 0, 0});
    return assemble(src, tgt, [this](const Symbol& s) -> const RCombination& { return symbol_differential(s); },
                    "differential");
  }

  /// Matrix of left multiplication by non-base generator `gen` from slice t.
  SparseMatrix<Coeff> action_matrix(std::size_t gen, Tridegree t) const {
    const auto& alg = module_->algebra();
    const Slice& src = slice(t);
    const Slice& tgt = slice(t + alg.generator(gen).degree());
    RCombination scratch;
    return assemble(
        src, tgt,
        [&](const Symbol& s) -> const RCombination& {
          scratch = module_->act(gen, s);
          return scratch;
        },
        "action of " + alg.generator(gen).name);
  }

  /// Matrix of an R-linear map given on symbols, from slice `src` to slice `tgt` of another materialization.
  template <class Fn>
  static SparseMatrix<Coeff> assemble(const Slice& src, const Slice& tgt, Fn&& on_symbol, const std::string& what) {
    SparseMatrix<Coeff> M(tgt.size(), src.size());
    std::vector<int> key;
    std::vector<std::size_t> first_col(src.symbols.size(), SIZE_MAX);
    for (std::size_t j = 0; j < src.size(); ++j) {
      const auto& b = src.basis[j];
      const RCombination& image = on_symbol(src.symbols[b.symbol]);
      std::map<std::size_t, Coeff> acc;
      for (const auto& term : image) {
        XExponents x = b.x;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += term.x[i];
        auto row = tgt.find(term.symbol, x);
        if (!row)
          throw InternalError(what + " leaves the target slice " + to_string(tgt.degree) + " (source " +
                              to_string(src.degree) + ")");
        auto& v = acc[*row];
        v = checked_add(v, term.coeff);
      }
      for (const auto& [i, c] : acc)
        if (c != 0) M.columns[j].emplace_back(i, c);
    }
    return M;
  }

 private:
  ModulePtr module_;
  std::size_t cap_;
  SymbolCache symbols_;
  std::vector<int> weights_;
  mutable std::mutex slice_mutex_;
  mutable std::map<Tridegree, std::unique_ptr<Slice>> slices_;
  mutable std::mutex mono_mutex_;
  mutable std::map<int, std::vector<XExponents>> monos_;
};

/// Matrix of a module map on slice t of its source (into slice t + shift of its target).
inline SparseMatrix<Coeff> map_matrix(const ModuleMap& f, const Materialization& src, const Materialization& tgt,
                                      Tridegree t) {
  const Slice& a = src.slice(t);
  const Slice& b = tgt.slice(t + f.shift());
  RCombination scratch;
  return Materialization::assemble(
      a, b,
      [&](const Symbol& s) -> const RCombination& {
        scratch = f(s);
        return scratch;
      },
      "map " + f.name());
}

/// Dimensions of cohomology per tridegree.
struct CohomologyTable {
  std::map<Tridegree, std::size_t> dims;

  std::size_t at(Tridegree t) const {
    auto it = dims.find(t);
    return it == dims.end() ? 0 : it->second;
  }
  bool has(Tridegree t) const { return dims.count(t) != 0; }
  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& [t, v] : dims) n += v;
    return n;
  }
  std::vector<Tridegree> support() const {
    std::vector<Tridegree> out;
    for (const auto& [t, v] : dims)
      if (v) out.push_back(t);
    return out;
  }
  friend bool operator==(const CohomologyTable&, const CohomologyTable&) = default;
};

struct Mismatch {
  Tridegree where;
  std::size_t left = 0;
  std::size_t right = 0;
  std::string describe() const {
    return "at " + to_string(where) + ": " + std::to_string(left) + " vs " + std::to_string(right);
  }
};

/// First tridegree (over keys present in both tables) where dimensions differ.
inline std::optional<Mismatch> compare_tables(const CohomologyTable& a, const CohomologyTable& b) {
  for (const auto& [t, v] : a.dims) {
    auto it = b.dims.find(t);
    if (it != b.dims.end() && it->second != v) return Mismatch{t, v, it->second};
  }
  return std::nullopt;
}

/// Number of keys shared by two tables.
inline std::size_t shared_keys(const CohomologyTable& a, const CohomologyTable& b) {
  std::size_t n = 0;
  for (const auto& [t, v] : a.dims) n += b.dims.count(t);
  return n;
}

template <class Field>
std::size_t rank_of(const Field& F, const SparseMatrix<Coeff>& M) {
  return rank(F, to_field(F, M));
}

/// dim H at one tridegree.
template <class Field>
std::size_t cohomology_dim(const Field& F, const Materialization& m, Tridegree t) {
  std::size_t n = m.slice(t).size();
  if (n == 0) return 0;
  std::size_t out = rank_of(F, m.differential_matrix(t));
  std::size_t in = rank_of(F, m.differential_matrix(t - Tridegree{1, 0, 0}));
  if (out + in > n) throw InternalError(m.module().name() + ": ranks exceed dimension, d^2 != 0 at " + to_string(t));
  return n - out - in;
}

/**
 * Cohomology over the safe interior of `win`. Work is split by (w, d);
 * each task reduces the differentials between consecutive h-slices once.
 */
template <class Field>
CohomologyTable cohomology_table(const Field& F, const Materialization& m, const Window& win, unsigned threads = 1) {
  CohomologyTable table;
  Range sh = win.safe_h();
  if (win.empty() || sh.empty()) return table;
  std::vector<std::pair<int, int>> wd;
  for (int w = win.w.lo; w <= win.w.hi; ++w)
    for (int d = win.d.lo; d <= win.d.hi; ++d) wd.emplace_back(w, d);
  std::vector<std::vector<std::size_t>> results(wd.size());
  parallel_for(wd.size(), threads, [&](std::size_t k) {
    auto [w, d] = wd[k];
    std::vector<std::size_t> ranks;  // ranks[i]: d from h = sh.lo - 1 + i
    for (int h = sh.lo - 1; h <= sh.hi; ++h) {
      const Tridegree t{h, w, d};
      bool empty = m.slice(t).size() == 0 || m.slice(t + Tridegree{1, 0, 0}).size() == 0;
      ranks.push_back(empty ? 0 : rank_of(F, m.differential_matrix(t)));
    }
    std::vector<std::size_t>& dims = results[k];
    for (int h = sh.lo; h <= sh.hi; ++h) {
      std::size_t i = static_cast<std::size_t>(h - sh.lo);
      std::size_t n = m.slice({h, w, d}).size();
      std::size_t used = ranks[i] + ranks[i + 1];
      if (used > n)
        throw InternalError(m.module().name() + ": ranks exceed dimension, d^2 != 0 at " + to_string({h, w, d}));
      dims.push_back(n - used);
    }
  });
  for (std::size_t k = 0; k < wd.size(); ++k)
    for (int h = sh.lo; h <= sh.hi; ++h)
      table.dims[{h, wd[k].first, wd[k].second}] = results[k][static_cast<std::size_t>(h - sh.lo)];
  return table;
}

/// Table of basis sizes over the safe interior (cohomology of the zero differential).
inline CohomologyTable basis_table(const Materialization& m, const Window& win) {
  CohomologyTable t;
  for (const auto& tau : win.safe_interior()) t.dims[tau] = m.slice(tau).size();
  return t;
}

/**
 * Checks d o d = 0 over the integers on every tridegree of the window.
 * Returns the first offending tridegree.
 */
/// Every window tridegree where d o d is nonzero (computed over Z), in order.
inline std::vector<Tridegree> d_squared_failures(const Materialization& m, const Window& win, unsigned threads = 1) {
  std::vector<Tridegree> all;
  for (int h = win.h.lo; h <= win.h.hi; ++h)
    for (int w = win.w.lo; w <= win.w.hi; ++w)
      for (int d = win.d.lo; d <= win.d.hi; ++d) all.push_back({h, w, d});
  std::vector<char> bad(all.size(), 0);
  IntegerRing Z;
  parallel_for(all.size(), threads, [&](std::size_t k) {
    const Tridegree t = all[k];
    if (m.slice(t).size() == 0) return;
    auto d1 = m.differential_matrix(t);
    auto d2 = m.differential_matrix(t + Tridegree{1, 0, 0});
    if (!is_zero_matrix(mat_mul(Z, d2, d1))) bad[k] = 1;
  });
  std::vector<Tridegree> out;
  for (std::size_t k = 0; k < all.size(); ++k)
    if (bad[k]) out.push_back(all[k]);
  return out;
}

inline std::optional<Tridegree> find_d_squared_failure(const Materialization& m, const Window& win,
                                                       unsigned threads = 1) {
  auto bad = d_squared_failures(m, win, threads);
  if (bad.empty()) return std::nullopt;
  return bad.front();
}

}  // namespace koszul
