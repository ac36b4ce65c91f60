#pragma once
/**
 * The objects attached to a section s = (s_1..s_r) of the trivial bundle
 * E = R^r over X = Spec R: the dg algebras B and A, the Koszul complex K,
 * and the linear Koszul duality functors F = A (x)_R (-)^v and
 * G = B (x)_R (-)^v.
 *
 * Tridegrees, with D = max e_i:
 *   y_i (0, 1, D - e_i)   eps (-1, 1, D)     d eps = sum s_i y_i
 *   xi_i (1, -1, e_i - D) t (2, -1, -D)      d xi_i = t s_i
 */

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "operations.hpp"

namespace koszul {

using Polynomial = std::map<XExponents, Coeff>;

/// Weighted degree of a nonzero homogeneous polynomial, or nullopt if inhomogeneous.
inline std::optional<int> weighted_degree(const Polynomial& p, const std::vector<int>& weights) {
  std::optional<int> deg;
  for (const auto& [x, c] : p) {
    int e = 0;
    for (std::size_t i = 0; i < x.size(); ++i) e += x[i] * weights[i];
    if (deg && *deg != e) return std::nullopt;
    deg = e;
  }
  return deg;
}

struct SectionData {
  std::string id;
  int n = 0;
  std::vector<int> x_weights;
  std::vector<Polynomial> s;
  bool regular_claimed = true;

  int r() const { return static_cast<int>(s.size()); }

  /// e_i; a zero section component is given degree 1.
  std::vector<int> degrees() const {
    std::vector<int> e;
    for (const auto& p : s) {
      if (p.empty()) {
        e.push_back(1);
        continue;
      }
      auto d = weighted_degree(p, x_weights);
      if (!d) throw PresentationError("section component is not homogeneous");
      e.push_back(*d);
    }
    return e;
  }

  int D() const {
    auto e = degrees();
    return e.empty() ? 0 : *std::max_element(e.begin(), e.end());
  }

  void validate() const {
    if (n < 0 || static_cast<int>(x_weights.size()) != n) throw PresentationError("x_weights must list n weights");
    for (int w : x_weights)
      if (w <= 0) throw PresentationError("x weights must be positive");
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (const auto& [x, c] : s[i])
        if (static_cast<int>(x.size()) != n || c == 0) throw PresentationError("malformed section component");
      if (s[i].empty()) continue;
      auto d = weighted_degree(s[i], x_weights);
      if (!d) throw PresentationError("s" + std::to_string(i + 1) + " is not homogeneous under the x weights");
      if (*d < 1) throw PresentationError("s" + std::to_string(i + 1) + " must have positive degree");
    }
  }
};

inline std::vector<GeneratorSpec> x_generators(const SectionData& sd) {
  std::vector<GeneratorSpec> g;
  for (int i = 0; i < sd.n; ++i) g.push_back({"x" + std::to_string(i + 1), 0, 0, sd.x_weights[static_cast<std::size_t>(i)]});
  return g;
}

/// p as an element of a presentation whose first generators are the x's.
inline AlgebraElement embed_polynomial(const Polynomial& p, const DgAlgebraPresentation& P) {
  AlgebraElement out;
  for (const auto& [x, c] : p) {
    Monomial m = P.unit_monomial();
    std::copy(x.begin(), x.end(), m.begin());
    out.add_term(m, c);
  }
  return out;
}

inline AlgebraPtr build_R(const SectionData& sd) {
  auto gens = x_generators(sd);
  return std::make_shared<const DgAlgebraPresentation>("R", gens, gens.size(),
                                                       std::vector<AlgebraElement>(gens.size()));
}

inline AlgebraPtr build_B(const SectionData& sd) {
  sd.validate();
  auto gens = x_generators(sd);
  const auto e = sd.degrees();
  const int D = sd.D();
  for (int i = 0; i < sd.r(); ++i) gens.push_back({"y" + std::to_string(i + 1), 0, 1, D - e[static_cast<std::size_t>(i)]});
  gens.push_back({"eps", -1, 1, D});
  std::vector<AlgebraElement> diff(gens.size());
  auto tmp = DgAlgebraPresentation("B0", gens, static_cast<std::size_t>(sd.n), diff);
  AlgebraElement W;
  for (int i = 0; i < sd.r(); ++i)
    W += tmp.multiply(embed_polynomial(sd.s[static_cast<std::size_t>(i)], tmp),
                      tmp.generator_element(static_cast<std::size_t>(sd.n + i)));
  diff.back() = W;
  return std::make_shared<const DgAlgebraPresentation>("B", gens, static_cast<std::size_t>(sd.n), diff);
}

inline AlgebraPtr build_A(const SectionData& sd) {
  sd.validate();
  auto gens = x_generators(sd);
  const auto e = sd.degrees();
  const int D = sd.D();
  for (int i = 0; i < sd.r(); ++i) gens.push_back({"xi" + std::to_string(i + 1), 1, -1, e[static_cast<std::size_t>(i)] - D});
  gens.push_back({"t", 2, -1, -D});
  std::vector<AlgebraElement> diff(gens.size());
  auto tmp = DgAlgebraPresentation("A0", gens, static_cast<std::size_t>(sd.n), diff);
  const std::size_t t = gens.size() - 1;
  for (int i = 0; i < sd.r(); ++i)
    diff[static_cast<std::size_t>(sd.n + i)] =
        tmp.multiply(tmp.generator_element(t), embed_polynomial(sd.s[static_cast<std::size_t>(i)], tmp));
  return std::make_shared<const DgAlgebraPresentation>("A", gens, static_cast<std::size_t>(sd.n), diff);
}

/**
 * Koszul complex of s over R: generators xi_S for subsets S (bitmask order)
 * at (-|S|, 0, sum_{i in S} e_i), d xi_S = sum_k (-1)^(k-1) s_{i_k} xi_{S - i_k}.
 */
inline FreeDgModule build_koszul_resolution(const SectionData& sd, AlgebraPtr R = nullptr) {
  sd.validate();
  if (!R) R = build_R(sd);
  const auto e = sd.degrees();
  const std::size_t r = sd.s.size(), n = std::size_t{1} << r;
  std::vector<ModuleGenerator> gens;
  for (std::size_t S = 0; S < n; ++S) {
    std::string name = "1";
    int h = 0, d = 0;
    for (std::size_t i = 0; i < r; ++i)
      if (S >> i & 1) {
        name = (h == 0 ? "" : name + "^") + "xi" + std::to_string(i + 1);
        --h;
        d += e[i];
      }
    gens.push_back({name, {h, 0, d}});
  }
  std::vector<std::vector<AlgebraElement>> mat(n, std::vector<AlgebraElement>(n));
  for (std::size_t S = 0; S < n; ++S) {
    int k = 0;
    for (std::size_t i = 0; i < r; ++i) {
      if (!(S >> i & 1)) continue;
      mat[S & ~(std::size_t{1} << i)][S] = sign_of_parity(k) * embed_polynomial(sd.s[i], *R);
      ++k;
    }
  }
  return FreeDgModule(R, gens, mat, "K");
}

/// The algebra as a free module of rank one on a generator at `degree`.
inline FreeModulePtr free_rank_one(AlgebraPtr P, Tridegree degree = {}, std::string name = "") {
  if (name.empty()) name = P->name();
  return std::make_shared<const FreeDgModule>(FreeDgModule::free_rank_one(std::move(P), degree, std::move(name)));
}

/// B(i) (or A(i)): the free module of rank one twisted by i.
inline FreeModulePtr twisted_algebra(AlgebraPtr P, int i) {
  return std::make_shared<const FreeDgModule>(twist(FreeDgModule::free_rank_one(P, {}, P->name()), i));
}

/// O_X(i) as a module over P on which every non-base generator acts by zero.
inline ModulePtr structure_sheaf(AlgebraPtr P, AlgebraPtr R, int i = 0) {
  auto inner = std::make_shared<const FreeDgModule>(
      FreeDgModule::free_rank_one(std::move(R), {0, i, 0}, "O_X(" + std::to_string(i) + ")"));
  std::string name = "O_X(" + std::to_string(i) + ")/" + P->name();
  return std::make_shared<const AugmentationModule>(inner, std::move(P), name);
}

/// One term of the second Koszul differential: c * p (x) q^T.
struct KoszulPairing {
  std::size_t p;  // generator index in the target algebra
  std::size_t q;  // generator index in the source module's algebra
  Coeff c;
};

/// Pairings of F (A-side target): xi_i <-> y_i with +1, t <-> eps with -1.
inline std::vector<KoszulPairing> pairings_F(const DgAlgebraPresentation& A, const DgAlgebraPresentation& B) {
  std::vector<KoszulPairing> out;
  const std::size_t r = B.nonbase_count() - 1;
  for (std::size_t i = 0; i < r; ++i)
    out.push_back({A.index_of("xi" + std::to_string(i + 1)), B.index_of("y" + std::to_string(i + 1)), 1});
  out.push_back({A.index_of("t"), B.index_of("eps"), -1});
  return out;
}

/// Pairings of G (B-side target): y_i <-> xi_i with +1, eps <-> t with -1.
inline std::vector<KoszulPairing> pairings_G(const DgAlgebraPresentation& B, const DgAlgebraPresentation& A) {
  std::vector<KoszulPairing> out;
  const std::size_t r = A.nonbase_count() - 1;
  for (std::size_t i = 0; i < r; ++i)
    out.push_back({B.index_of("y" + std::to_string(i + 1)), A.index_of("xi" + std::to_string(i + 1)), 1});
  out.push_back({B.index_of("eps"), A.index_of("t"), -1});
  return out;
}

/**
 * P (x)_R M^v for a module M over the Koszul-dual algebra of P. Symbols are
 * a (x) mu^v with a a non-base monomial of P and mu an R-basis symbol of M,
 * at degree deg(a) - deg(mu); the code is a's exponents followed by mu's code.
 *
 *   d(a (x) mu^v) = d_P(a) (x) mu^v + (-1)^|a| a (x) D mu^v
 *                 + sum_pairs c (-1)^(|q||a|) (p a) (x) q^T mu^v
 *
 * where D and q^T are the R-transposes of d_M and of the action of q.
 */
class KoszulDualModule : public DgModule {
 public:
  KoszulDualModule(AlgebraPtr target, ModulePtr source, std::vector<KoszulPairing> pairs, std::string name)
      : P_(std::move(target)), M_(std::move(source)), pairs_(std::move(pairs)), name_(std::move(name)), msyms_(*M_) {
    if (P_->invertible()) throw PresentationError(name_ + ": target algebra must not have inverses");
    if (P_->base_weights() != M_->algebra().base_weights()) throw PresentationError(name_ + ": base ring mismatch");
    auto b = M_->weight_bounds();
    if (P_->weight_sign() < 0 && !b.min) throw PresentationError(name_ + ": source weights must be bounded below");
    if (P_->weight_sign() > 0 && !b.max) throw PresentationError(name_ + ": source weights must be bounded above");
    bound_ = P_->weight_sign() < 0 ? b.min.value_or(0) : b.max.value_or(0);
  }

  std::string name() const override { return name_; }
  const DgAlgebraPresentation& algebra() const override { return *P_; }
  const ModulePtr& source() const { return M_; }

  std::vector<Symbol> symbols(int h, int w) const override {
    std::vector<Symbol> out;
    int lo, hi;
    if (P_->weight_sign() < 0) {
      lo = w + bound_;
      hi = 0;
    } else {
      lo = 0;
      hi = w + bound_;
    }
    for (int wa = lo; wa <= hi; ++wa)
      for (const auto& a : monomials_of_weight(wa)) {
        Tridegree da = P_->degree(a);
        for (const auto& mu : msyms_.symbols(da.h - h, wa - w)) {
          SymbolCode code = nonbase_code(*P_, a);
          code.insert(code.end(), mu.code.begin(), mu.code.end());
          out.push_back({std::move(code), da - mu.degree});
        }
      }
    return out;
  }

  RCombination differential(const Symbol& s) const override {
    const std::size_t k = P_->nonbase_count();
    Monomial a = monomial_from_code(*P_, s.code);
    const SymbolCode mu(s.code.begin() + static_cast<long>(k), s.code.end());
    const Tridegree da = P_->degree(a);
    const Tridegree dmu = da - s.degree;
    const int ha = da.h;
    RCombination out;
    auto with_mu = [&](const Monomial& rest, const SymbolCode& tail) {
      SymbolCode c = nonbase_code(*P_, rest);
      c.insert(c.end(), tail.begin(), tail.end());
      return c;
    };
    const AlgebraElement da_elem = P_->differential(a);
    for (const auto& [m, c] : da_elem.terms()) {
      auto [x, rest] = P_->split(m);
      out.push_back({with_mu(rest, mu), std::move(x), c});
    }
    const int sa = sign_of_parity(ha);
    for (const auto& e : transpose(kDifferential, dmu.h, dmu.w, mu))
      out.push_back({with_mu(a, e.code), e.x, checked_mul(sa, e.coeff)});
    for (std::size_t k2 = 0; k2 < pairs_.size(); ++k2) {
      const auto& pr = pairs_[k2];
      Monomial pm = P_->unit_monomial();
      pm[pr.p] = 1;
      auto pa = P_->multiply_monomials(pm, a);
      if (!pa) continue;
      const long qh = M_->algebra().generator(pr.q).h;
      const Coeff sign = checked_mul(checked_mul(pr.c, sign_of_parity(qh * ha)), pa->coefficient);
      for (const auto& e : transpose(static_cast<int>(k2), dmu.h, dmu.w, mu))
        out.push_back({with_mu(pa->word, e.code), e.x, checked_mul(sign, e.coeff)});
    }
    return out;
  }

  RCombination act(std::size_t g, const Symbol& s) const override {
    const std::size_t k = P_->nonbase_count();
    Monomial a = monomial_from_code(*P_, s.code);
    Monomial gm = P_->unit_monomial();
    gm.at(g) = 1;
    auto prod = P_->multiply_monomials(gm, a);
    if (!prod) return {};
    SymbolCode code = nonbase_code(*P_, prod->word);
    code.insert(code.end(), s.code.begin() + static_cast<long>(k), s.code.end());
    return {RTerm{std::move(code), XExponents(P_->base_count(), 0), prod->coefficient}};
  }

  WeightBounds weight_bounds() const override {
    WeightBounds b;
    if (P_->weight_sign() < 0)
      b.max = -bound_;
    else
      b.min = -bound_;
    return b;
  }

 private:
  static constexpr int kDifferential = -1;

  struct DualEntry {
    SymbolCode code;  // nu
    XExponents x;
    Coeff coeff;
  };
  using ReverseIndex = std::unordered_map<SymbolCode, std::vector<DualEntry>, VectorHash>;

  const std::vector<Monomial>& monomials_of_weight(int w) const {
    std::lock_guard lock(mono_mutex_);
    auto it = monos_.find(w);
    if (it != monos_.end()) return it->second;
    return monos_.emplace(w, P_->nonbase_monomials_of_weight(w)).first->second;
  }

  /// Entries (nu, <mu^v, op nu>) for op = d_M or the action of pairs_[op], over nu landing in bidegree (h, w).
  const std::vector<DualEntry>& transpose(int op, int h, int w, const SymbolCode& mu) const {
    static const std::vector<DualEntry> none;
    const ReverseIndex& idx = reverse_index(op, h, w);
    auto it = idx.find(mu);
    return it == idx.end() ? none : it->second;
  }

  const ReverseIndex& reverse_index(int op, int h, int w) const {
    auto key = std::make_tuple(op, h, w);
    {
      std::lock_guard lock(index_mutex_);
      auto it = indices_.find(key);
      if (it != indices_.end()) return *it->second;
    }
    auto idx = std::make_unique<ReverseIndex>();
    if (op == kDifferential) {
      for (const auto& nu : msyms_.symbols(h - 1, w))
        for (const auto& t : msyms_.differential(nu)) (*idx)[t.symbol].push_back({nu.code, t.x, t.coeff});
    } else {
      const std::size_t q = pairs_[static_cast<std::size_t>(op)].q;
      const auto& gq = M_->algebra().generator(q);
      for (const auto& nu : msyms_.symbols(h - gq.h, w - gq.w))
        for (const auto& t : M_->act(q, nu)) (*idx)[t.symbol].push_back({nu.code, t.x, t.coeff});
    }
    std::lock_guard lock(index_mutex_);
    auto [it, inserted] = indices_.emplace(key, std::move(idx));
    return *it->second;
  }

  AlgebraPtr P_;
  ModulePtr M_;
  std::vector<KoszulPairing> pairs_;
  std::string name_;
  SymbolCache msyms_;
  int bound_ = 0;
  mutable std::mutex mono_mutex_;
  mutable std::map<int, std::vector<Monomial>> monos_;
  mutable std::mutex index_mutex_;
  mutable std::map<std::tuple<int, int, int>, std::unique_ptr<ReverseIndex>> indices_;
};

/// F(M) = A (x)_R M^v for a module M over B.
inline std::shared_ptr<const KoszulDualModule> koszul_F(AlgebraPtr A, ModulePtr M) {
  auto pairs = pairings_F(*A, M->algebra());
  std::string name = "F(" + M->name() + ")";
  return std::make_shared<const KoszulDualModule>(std::move(A), std::move(M), std::move(pairs), name);
}

/// G(N) = B (x)_R N^v for a module N over A.
inline std::shared_ptr<const KoszulDualModule> koszul_G(AlgebraPtr B, ModulePtr N) {
  auto pairs = pairings_G(*B, N->algebra());
  std::string name = "G(" + N->name() + ")";
  return std::make_shared<const KoszulDualModule>(std::move(B), std::move(N), std::move(pairs), name);
}

/**
 * The same functor for M of finite rank over R, as a module with one
 * generator mu^v per R-basis symbol: entry (nu, mu) is the coefficient of
 * mu in d(nu) plus sum_pairs c * p * <mu^v, q nu>.
 */
inline FreeDgModule koszul_dual_finite(AlgebraPtr P, const DgModule& M, const std::vector<KoszulPairing>& pairs,
                                       std::string name) {
  auto basis = M.finite_basis();
  if (!basis) throw PresentationError(name + ": source module is not of finite rank over R");
  const std::size_t n = basis->size();
  std::unordered_map<SymbolCode, std::size_t, VectorHash> pos;
  std::vector<ModuleGenerator> gens;
  for (std::size_t i = 0; i < n; ++i) {
    pos.emplace((*basis)[i].code, i);
    gens.push_back({"v" + std::to_string(i), -(*basis)[i].degree});
  }
  std::vector<std::vector<AlgebraElement>> mat(n, std::vector<AlgebraElement>(n));
  auto add = [&](std::size_t row, std::size_t col, const RTerm& t, const Monomial& extra, Coeff scale) {
    Monomial m = extra;
    std::copy(t.x.begin(), t.x.end(), m.begin());
    mat[row][col].add_term(m, checked_mul(scale, t.coeff));
  };
  for (std::size_t j = 0; j < n; ++j) {
    const Symbol& nu = (*basis)[j];
    for (const auto& t : M.differential(nu)) add(j, pos.at(t.symbol), t, P->unit_monomial(), 1);
    for (const auto& pr : pairs) {
      Monomial pm = P->unit_monomial();
      pm[pr.p] = 1;
      for (const auto& t : M.act(pr.q, nu)) add(j, pos.at(t.symbol), t, pm, pr.c);
    }
  }
  return FreeDgModule(std::move(P), gens, mat, name);
}

inline FreeDgModule koszul_F_finite(AlgebraPtr A, const DgModule& M) {
  auto pairs = pairings_F(*A, M.algebra());
  return koszul_dual_finite(std::move(A), M, pairs, "F(" + M.name() + ")");
}

inline FreeDgModule koszul_G_finite(AlgebraPtr B, const DgModule& N) {
  auto pairs = pairings_G(*B, N.algebra());
  return koszul_dual_finite(std::move(B), N, pairs, "G(" + N.name() + ")");
}

}  // namespace koszul
