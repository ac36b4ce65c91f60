#pragma once
/**
 * Regrading mu: the part of bidegree (h, w) moves to (h + 2w, w). Parity is
 * unchanged, so differentials and products carry over verbatim; only the
 * generator degrees of the algebra and of the module change. On A, t moves
 * to cohomological degree 0 and xi_i to degree -1.
 */

#include <memory>
#include <string>

#include "koszul.hpp"

namespace koszul {

inline Tridegree regrade_degree(Tridegree t, int direction = 1) { return {t.h + 2 * direction * t.w, t.w, t.d}; }

inline AlgebraPtr regrade_algebra(const DgAlgebraPresentation& P, int direction = 1) {
  auto gens = P.generators();
  for (auto& g : gens) g.h += 2 * direction * g.w;
  std::string name = direction > 0 ? "mu(" + P.name() + ")" : "mu^-1(" + P.name() + ")";
  if (direction < 0 && P.name().rfind("mu(", 0) == 0) name = P.name().substr(3, P.name().size() - 4);
  return std::make_shared<const DgAlgebraPresentation>(P.regraded(name, gens));
}

/// mu(M) (direction +1) or mu^-1(M) (direction -1) over the correspondingly regraded algebra.
inline FreeDgModule regrade_mu(const FreeDgModule& M, AlgebraPtr regraded, int direction = 1) {
  auto gens = M.generators();
  for (auto& g : gens) g.degree = regrade_degree(g.degree, direction);
  std::string name = direction > 0 ? "mu(" + M.name() + ")" : "mu^-1(" + M.name() + ")";
  return FreeDgModule(std::move(regraded), gens, M.matrix(), name);
}

inline FreeDgModule regrade_mu(const FreeDgModule& M, int direction = 1) {
  return regrade_mu(M, regrade_algebra(M.algebra(), direction), direction);
}

/// mu applied to any module, lazily.
class RegradedModule : public DgModule {
 public:
  RegradedModule(ModulePtr M, AlgebraPtr regraded) : M_(std::move(M)), P_(std::move(regraded)) {}
  std::string name() const override { return "mu(" + M_->name() + ")"; }
  const DgAlgebraPresentation& algebra() const override { return *P_; }
  std::vector<Symbol> symbols(int h, int w) const override {
    auto out = M_->symbols(h - 2 * w, w);
    for (auto& s : out) s.degree = regrade_degree(s.degree);
    return out;
  }
  RCombination differential(const Symbol& s) const override { return M_->differential(original(s)); }
  RCombination act(std::size_t g, const Symbol& s) const override { return M_->act(g, original(s)); }
  WeightBounds weight_bounds() const override { return M_->weight_bounds(); }
  std::optional<std::vector<Symbol>> finite_basis() const override {
    auto b = M_->finite_basis();
    if (b)
      for (auto& s : *b) s.degree = regrade_degree(s.degree);
    return b;
  }

 private:
  static Symbol original(const Symbol& s) { return {s.code, regrade_degree(s.degree, -1)}; }
  ModulePtr M_;
  AlgebraPtr P_;
};

/// Same generators (names and degrees) and the same differential matrix.
inline bool same_presentation(const FreeDgModule& a, const FreeDgModule& b) {
  return a.generators().size() == b.generators().size() && a.matrix() == b.matrix() &&
         std::equal(a.generators().begin(), a.generators().end(), b.generators().begin(),
                    [](const ModuleGenerator& x, const ModuleGenerator& y) { return x.degree == y.degree; });
}

}  // namespace koszul
