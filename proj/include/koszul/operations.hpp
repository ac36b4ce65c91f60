#pragma once
/**
 * Operations on dg modules: cones, shifts, twists, sums, tensor products over
 * R, duals over R, and chain-map / quasi-isomorphism checks on a window.
 *
 * Conventions. M[m] puts the degree-h part of M in degree h - m and
 * multiplies d by (-1)^m; M(n) puts the weight-j part in weight j + n.
 * On shifted modules the algebra acts with the Koszul sign
 * g . s^m x = (-1)^(m|g|) s^m (g x).
 */

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "window.hpp"

namespace koszul {

class InvalidMapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FreeModulePtr = std::shared_ptr<const FreeDgModule>;

inline AlgebraElement signed_entry(const AlgebraElement& e, int sign) { return sign == 1 ? e : -1 * e; }

/// M[m]: degrees (h, w, d) -> (h - m, w, d).
inline FreeDgModule shift(const FreeDgModule& M, int m) {
  auto gens = M.generators();
  for (auto& g : gens) g.degree.h -= m;
  auto mat = M.matrix();
  const auto& og = M.generators();
  for (std::size_t i = 0; i < mat.size(); ++i)
    for (std::size_t j = 0; j < mat.size(); ++j)
      mat[i][j] = signed_entry(mat[i][j], sign_of_parity(static_cast<long>(m) * (og[j].degree.h - og[i].degree.h)));
  return FreeDgModule(M.algebra_ptr(), gens, mat, M.name() + "[" + std::to_string(m) + "]");
}

/// M(n): weights w -> w + n.
inline FreeDgModule twist(const FreeDgModule& M, int n) {
  auto gens = M.generators();
  for (auto& g : gens) g.degree.w += n;
  return FreeDgModule(M.algebra_ptr(), gens, M.matrix(), M.name() + "(" + std::to_string(n) + ")");
}

inline FreeDgModule direct_sum(const FreeDgModule& M, const FreeDgModule& N) {
  if (M.algebra().name() != N.algebra().name())
    throw PresentationError("direct_sum: modules over different algebras");
  auto gens = M.generators();
  gens.insert(gens.end(), N.generators().begin(), N.generators().end());
  const std::size_t a = M.generators().size(), n = gens.size();
  std::vector<std::vector<AlgebraElement>> mat(n, std::vector<AlgebraElement>(n));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j) mat[i][j] = M.matrix()[i][j];
  for (std::size_t i = a; i < n; ++i)
    for (std::size_t j = a; j < n; ++j) mat[i][j] = N.matrix()[i - a][j - a];
  return FreeDgModule(M.algebra_ptr(), gens, mat, M.name() + "+" + N.name());
}

/// Re-expresses an element over a presentation with no non-base generators in a larger presentation.
inline AlgebraElement embed_base(const AlgebraElement& e, const DgAlgebraPresentation& into) {
  AlgebraElement out;
  for (const auto& [m, c] : e.terms()) {
    Monomial big = into.unit_monomial();
    for (std::size_t i = 0; i < m.size(); ++i) big[i] = m[i];
    out.add_term(big, c);
  }
  return out;
}

/**
 * M (x)_R N for M over any presentation P and N a complex of free R-modules
 * sharing P's base ring. Generators are pairs (g_j, h_l) in row-major order;
 * d(g (x) h) = dg (x) h + (-1)^|g| g (x) dh.
 */
inline FreeDgModule tensor_over_R(const FreeDgModule& M, const FreeDgModule& N) {
  const auto& P = M.algebra();
  if (N.algebra().nonbase_count() != 0 || N.algebra().base_weights() != P.base_weights())
    throw PresentationError("tensor_over_R: right factor must be a complex over the same base ring");
  const auto& G = M.generators();
  const auto& H = N.generators();
  std::vector<ModuleGenerator> gens;
  for (const auto& g : G)
    for (const auto& h : H) gens.push_back({g.name + "*" + h.name, g.degree + h.degree});
  const std::size_t nh = H.size(), n = gens.size();
  std::vector<std::vector<AlgebraElement>> mat(n, std::vector<AlgebraElement>(n));
  for (std::size_t j = 0; j < G.size(); ++j)
    for (std::size_t l = 0; l < nh; ++l) {
      std::size_t col = j * nh + l;
      for (std::size_t i = 0; i < G.size(); ++i) mat[i * nh + l][col] += M.matrix()[i][j];
      int sign = sign_of_parity(G[j].degree.h);
      for (std::size_t k = 0; k < nh; ++k) mat[j * nh + k][col] += sign * embed_base(N.matrix()[k][l], P);
    }
  return FreeDgModule(M.algebra_ptr(), gens, mat, M.name() + "*" + N.name());
}

/**
 * Hom_R(M, R) for a complex M of free R-modules: generators g^v at negated
 * tridegrees, d(g_i^v) = (-1)^(h+1) sum_j D_ij g_j^v with h = deg_h(g_i^v).
 */
inline FreeDgModule graded_dual(const FreeDgModule& M) {
  if (M.algebra().nonbase_count() != 0) throw PresentationError("graded_dual: module must be a complex over R");
  const auto& G = M.generators();
  std::vector<ModuleGenerator> gens;
  for (const auto& g : G) gens.push_back({g.name + "^", -g.degree});
  const std::size_t n = G.size();
  std::vector<std::vector<AlgebraElement>> mat(n, std::vector<AlgebraElement>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mat[j][i] = signed_entry(M.matrix()[i][j], sign_of_parity(gens[i].degree.h + 1));
  return FreeDgModule(M.algebra_ptr(), gens, mat, M.name() + "^");
}

inline ModuleMap identity_map(ModulePtr M) {
  const std::size_t n = M->algebra().base_count();
  return ModuleMap(M, M, [n](const Symbol& s) { return RCombination{{s.code, XExponents(n, 0), 1}}; }, "id");
}

inline ModuleMap zero_map(ModulePtr source, ModulePtr target) {
  return ModuleMap(std::move(source), std::move(target), [](const Symbol&) { return RCombination{}; }, "0");
}

/// Cone of a degree-zero map between free modules, at generator level.
inline FreeDgModule cone(const FreeModuleMap& f) {
  const auto& S = f.source->generators();
  const auto& T = f.target->generators();
  if (f.source->algebra().name() != f.target->algebra().name())
    throw InvalidMapError("cone: modules over different algebras");
  const std::size_t a = S.size(), n = a + T.size();
  std::vector<ModuleGenerator> gens;
  for (const auto& g : S) gens.push_back({"s" + g.name, g.degree - Tridegree{1, 0, 0}});
  gens.insert(gens.end(), T.begin(), T.end());
  std::vector<std::vector<AlgebraElement>> mat(n, std::vector<AlgebraElement>(n));
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j)
      mat[i][j] = signed_entry(f.source->matrix()[i][j], sign_of_parity(S[j].degree.h - S[i].degree.h));
  for (std::size_t k = 0; k < T.size(); ++k)
    for (std::size_t j = 0; j < a; ++j) {
      Tridegree expected = S[j].degree - T[k].degree;
      if (!f.target->algebra().is_homogeneous(f.matrix.at(k).at(j), expected))
        throw InvalidMapError("cone: map entry is not of degree zero");
      mat[a + k][j] = f.matrix[k][j];
    }
  for (std::size_t i = 0; i < T.size(); ++i)
    for (std::size_t j = 0; j < T.size(); ++j) mat[a + i][a + j] = f.target->matrix()[i][j];
  return FreeDgModule(f.target->algebra_ptr(), gens, mat, "cone(" + f.name + ")");
}

/**
 * Cone of a degree-zero module map, lazily: symbols [0, source code] (the
 * shifted source, h lowered by one) and [1, target code];
 * d(s x) = -s(dx) + f(x), d(y) = dy, g . s x = (-1)^|g| s(g x).
 */
class ConeModule : public DgModule {
 public:
  explicit ConeModule(ModuleMap f) : f_(std::move(f)) {
    if (f_.shift() != Tridegree{}) throw InvalidMapError("cone: map must have degree zero");
    if (f_.source()->algebra().name() != f_.target()->algebra().name())
      throw InvalidMapError("cone: modules over different algebras");
  }

  std::string name() const override { return "cone(" + f_.name() + ")"; }
  const DgAlgebraPresentation& algebra() const override { return f_.target()->algebra(); }
  const ModuleMap& map() const { return f_; }

  std::vector<Symbol> symbols(int h, int w) const override {
    std::vector<Symbol> out;
    for (const auto& s : f_.source()->symbols(h + 1, w)) out.push_back({tagged(0, s.code), s.degree - Tridegree{1, 0, 0}});
    for (const auto& s : f_.target()->symbols(h, w)) out.push_back({tagged(1, s.code), s.degree});
    return out;
  }

  RCombination differential(const Symbol& s) const override {
    Symbol inner = untag(s);
    RCombination out;
    if (s.code[0] == 0) {
      for (auto& t : f_.source()->differential(inner)) out.push_back({tagged(0, t.symbol), t.x, checked_mul(-1, t.coeff)});
      for (auto& t : f_(inner)) out.push_back({tagged(1, t.symbol), t.x, t.coeff});
    } else {
      for (auto& t : f_.target()->differential(inner)) out.push_back({tagged(1, t.symbol), t.x, t.coeff});
    }
    return out;
  }

  RCombination act(std::size_t g, const Symbol& s) const override {
    Symbol inner = untag(s);
    RCombination out;
    if (s.code[0] == 0) {
      int sign = sign_of_parity(algebra().generator(g).h);
      for (auto& t : f_.source()->act(g, inner)) out.push_back({tagged(0, t.symbol), t.x, checked_mul(sign, t.coeff)});
    } else {
      for (auto& t : f_.target()->act(g, inner)) out.push_back({tagged(1, t.symbol), t.x, t.coeff});
    }
    return out;
  }

  WeightBounds weight_bounds() const override {
    auto a = f_.source()->weight_bounds(), b = f_.target()->weight_bounds();
    WeightBounds r;
    if (a.min && b.min) r.min = std::min(*a.min, *b.min);
    if (a.max && b.max) r.max = std::max(*a.max, *b.max);
    return r;
  }

  std::optional<std::vector<Symbol>> finite_basis() const override {
    auto a = f_.source()->finite_basis(), b = f_.target()->finite_basis();
    if (!a || !b) return std::nullopt;
    std::vector<Symbol> out;
    for (const auto& s : *a) out.push_back({tagged(0, s.code), s.degree - Tridegree{1, 0, 0}});
    for (const auto& s : *b) out.push_back({tagged(1, s.code), s.degree});
    return out;
  }

 private:
  static SymbolCode tagged(int tag, const SymbolCode& c) {
    SymbolCode out;
    out.reserve(c.size() + 1);
    out.push_back(tag);
    out.insert(out.end(), c.begin(), c.end());
    return out;
  }
  static Symbol untag(const Symbol& s) {
    Symbol r{SymbolCode(s.code.begin() + 1, s.code.end()), s.degree};
    if (s.code[0] == 0) r.degree.h += 1;
    return r;
  }

  ModuleMap f_;
};

/**
 * First source tridegree in the window where d_target o f != (-1)^dh f o d_source,
 * computed over the integers.
 */
inline std::optional<Tridegree> find_chain_map_failure(const ModuleMap& f, const Materialization& src,
                                                       const Materialization& tgt, const Window& win) {
  IntegerRing Z;
  const int sign = sign_of_parity(f.shift().h);
  const Tridegree one{1, 0, 0};
  for (int h = win.h.lo; h <= win.h.hi; ++h)
    for (int w = win.w.lo; w <= win.w.hi; ++w)
      for (int d = win.d.lo; d <= win.d.hi; ++d) {
        const Tridegree t{h, w, d};
        if (src.slice(t).size() == 0) continue;
        auto lhs = mat_mul(Z, tgt.differential_matrix(t + f.shift()), map_matrix(f, src, tgt, t));
        auto rhs = mat_mul(Z, map_matrix(f, src, tgt, t + one), src.differential_matrix(t));
        for (std::size_t j = 0; j < lhs.cols; ++j)
          if (axpy(Z, lhs.columns[j], Coeff(-sign), rhs.columns[j]).size() != 0) return t;
      }
  return std::nullopt;
}

inline bool check_chain_map(const ModuleMap& f, const Window& win, std::size_t cap = kDefaultBasisCap) {
  Materialization src(f.source(), cap), tgt(f.target(), cap);
  return !find_chain_map_failure(f, src, tgt, win);
}

/// Cone of f after verifying the chain-map identity on `win`.
inline std::shared_ptr<const ConeModule> checked_cone(const ModuleMap& f, const Window& win,
                                                      std::size_t cap = kDefaultBasisCap) {
  Materialization src(f.source(), cap), tgt(f.target(), cap);
  if (auto bad = find_chain_map_failure(f, src, tgt, win))
    throw InvalidMapError(f.name() + " is not a chain map at " + to_string(*bad));
  return std::make_shared<ConeModule>(f);
}

/// First safe-interior tridegree where the cone of f has cohomology; nullopt if f is a quasi-isomorphism there.
template <class Field>
std::optional<Tridegree> find_quasi_iso_failure(const Field& F, const ModuleMap& f, const Window& win,
                                                unsigned threads = 1, std::size_t cap = kDefaultBasisCap) {
  Materialization c(checked_cone(f, win, cap), cap);
  auto table = cohomology_table(F, c, win, threads);
  for (const auto& [t, dim] : table.dims)
    if (dim != 0) return t;
  return std::nullopt;
}

template <class Field>
bool check_quasi_iso(const Field& F, const ModuleMap& f, const Window& win, unsigned threads = 1) {
  return !find_quasi_iso_failure(F, f, win, threads);
}

}  // namespace koszul
