#pragma once
/**
 * Dg modules that are free over the base ring R, described symbolically.
 *
 * Every object in the engine (free modules over B or A, Koszul resolutions,
 * Koszul duals, cones, localizations) is a free graded R-module with an
 * R-linear differential. A module exposes a finite set of R-basis "symbols"
 * per bidegree (h, w); the k-basis in tridegree (h, w, d) is then
 * {x^a * symbol : deg(x^a) + d(symbol) = d}. Differentials and the action of
 * the non-base algebra generators are given on symbols as R-combinations.
 */

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "algebra.hpp"

namespace koszul {

using SymbolCode = std::vector<int>;
using XExponents = std::vector<int>;

struct VectorHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size() * 0x9e3779b97f4a7c15ull;
    for (int x : v) h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

struct Symbol {
  SymbolCode code;
  Tridegree degree;
};

/// coeff * x^x * symbol
struct RTerm {
  SymbolCode symbol;
  XExponents x;
  Coeff coeff = 0;
};

using RCombination = std::vector<RTerm>;

struct WeightBounds {
  std::optional<int> min;
  std::optional<int> max;
};

class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DgModule {
 public:
  virtual ~DgModule() = default;

  virtual std::string name() const = 0;
  /// The algebra acting on the module; its base generators are the x-variables.
  virtual const DgAlgebraPresentation& algebra() const = 0;
  /// R-basis symbols of bidegree (h, w), deterministic order.
  virtual std::vector<Symbol> symbols(int h, int w) const = 0;
  virtual RCombination differential(const Symbol& s) const = 0;
  /// Left multiplication by non-base generator `generator` of algebra().
  virtual RCombination act(std::size_t generator, const Symbol& s) const = 0;
  virtual WeightBounds weight_bounds() const = 0;
  /// All symbols, when the module has finite rank over R.
  virtual std::optional<std::vector<Symbol>> finite_basis() const { return std::nullopt; }
};

using ModulePtr = std::shared_ptr<const DgModule>;

/// Adds a Koszul-signed algebra element (times a symbol code suffix) to an R-combination.
inline void append_element(const DgAlgebraPresentation& alg, const AlgebraElement& a, Coeff scale,
                           const std::function<SymbolCode(const Monomial&)>& code_of, RCombination& out) {
  for (const auto& [m, c] : a.terms()) {
    auto [x, rest] = alg.split(m);
    out.push_back(RTerm{code_of(rest), std::move(x), checked_mul(scale, c)});
  }
}

/// Non-base part of a monomial as a compact code (exponents of non-base generators).
inline SymbolCode nonbase_code(const DgAlgebraPresentation& alg, const Monomial& m) {
  return SymbolCode(m.begin() + static_cast<long>(alg.base_count()), m.end());
}

inline Monomial monomial_from_code(const DgAlgebraPresentation& alg, const SymbolCode& code, std::size_t offset = 0) {
  Monomial m = alg.unit_monomial();
  for (std::size_t i = 0; i < alg.nonbase_count(); ++i) m[alg.base_count() + i] = code.at(offset + i);
  return m;
}

struct ModuleGenerator {
  std::string name;
  Tridegree degree;
  friend bool operator==(const ModuleGenerator&, const ModuleGenerator&) = default;
};

/**
 * Free dg module over a presentation on finitely many generators g_j.
 * matrix[i][j] is the coefficient of g_i in d(g_j); it must be homogeneous of
 * tridegree deg(g_j) + (1,0,0) - deg(g_i). On symbols m*g_j,
 * d(m g_j) = d(m) g_j + (-1)^|m| m d(g_j).
 * Symbol code: exponents of the non-base generators of m, then j.
 */
class FreeDgModule : public DgModule {
 public:
  FreeDgModule(AlgebraPtr algebra, std::vector<ModuleGenerator> generators,
               std::vector<std::vector<AlgebraElement>> matrix, std::string name)
      : alg_(std::move(algebra)), gens_(std::move(generators)), matrix_(std::move(matrix)), name_(std::move(name)) {
    const std::size_t n = gens_.size();
    if (matrix_.empty() && n > 0) matrix_.assign(n, std::vector<AlgebraElement>(n));
    if (matrix_.size() != n) throw PresentationError(name_ + ": differential matrix has wrong row count");
    for (std::size_t i = 0; i < n; ++i) {
      if (matrix_[i].size() != n) throw PresentationError(name_ + ": differential matrix is not square");
      for (std::size_t j = 0; j < n; ++j) {
        Tridegree expected = gens_[j].degree + Tridegree{1, 0, 0} - gens_[i].degree;
        if (!alg_->is_homogeneous(matrix_[i][j], expected))
          throw PresentationError(name_ + ": entry (" + gens_[i].name + ", " + gens_[j].name +
                                  ") is not homogeneous of tridegree " + to_string(expected));
      }
    }
  }

  static FreeDgModule free_rank_one(AlgebraPtr algebra, Tridegree degree, std::string name) {
    return FreeDgModule(std::move(algebra), {{"g", degree}}, {}, std::move(name));
  }

  std::string name() const override { return name_; }
  const DgAlgebraPresentation& algebra() const override { return *alg_; }
  const AlgebraPtr& algebra_ptr() const { return alg_; }
  const std::vector<ModuleGenerator>& generators() const { return gens_; }
  const std::vector<std::vector<AlgebraElement>>& matrix() const { return matrix_; }

  std::vector<Symbol> symbols(int h, int w) const override {
    std::vector<Symbol> out;
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      const Tridegree& g = gens_[j].degree;
      for (const auto& m : alg_->nonbase_monomials(h - g.h, w - g.w)) {
        SymbolCode code = nonbase_code(*alg_, m);
        code.push_back(static_cast<int>(j));
        out.push_back(Symbol{std::move(code), alg_->degree(m) + g});
      }
    }
    return out;
  }

  RCombination differential(const Symbol& s) const override {
    const std::size_t j = static_cast<std::size_t>(s.code.back());
    Monomial m = monomial_from_code(*alg_, s.code);
    RCombination out;
    auto code_for = [this](std::size_t gen) {
      return [this, gen](const Monomial& rest) {
        SymbolCode c = nonbase_code(*alg_, rest);
        c.push_back(static_cast<int>(gen));
        return c;
      };
    };
    append_element(*alg_, alg_->differential(m), 1, code_for(j), out);
    const int sign = sign_of_parity(alg_->h_degree(m));
    AlgebraElement mono = AlgebraElement::monomial(m);
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (matrix_[i][j].is_zero()) continue;
      append_element(*alg_, alg_->multiply(mono, matrix_[i][j]), sign, code_for(i), out);
    }
    return out;
  }

  RCombination act(std::size_t generator, const Symbol& s) const override {
    Monomial m = monomial_from_code(*alg_, s.code);
    Monomial g = alg_->unit_monomial();
    g.at(generator) = 1;
    auto p = alg_->multiply_monomials(g, m);
    if (!p) return {};
    SymbolCode code = nonbase_code(*alg_, p->word);
    code.push_back(s.code.back());
    return {RTerm{std::move(code), XExponents(alg_->base_count(), 0), p->coefficient}};
  }

  WeightBounds weight_bounds() const override {
    WeightBounds b;
    if (gens_.empty()) return {0, 0};
    int lo = gens_[0].degree.w, hi = lo;
    for (const auto& g : gens_) {
      lo = std::min(lo, g.degree.w);
      hi = std::max(hi, g.degree.w);
    }
    if (alg_->invertible()) return b;
    if (alg_->weight_sign() >= 0) b.min = lo;
    if (alg_->weight_sign() <= 0) b.max = hi;
    return b;
  }

  std::optional<std::vector<Symbol>> finite_basis() const override {
    if (alg_->nonbase_count() != 0) return std::nullopt;
    std::vector<Symbol> out;
    for (std::size_t j = 0; j < gens_.size(); ++j) out.push_back(Symbol{{static_cast<int>(j)}, gens_[j].degree});
    return out;
  }

  friend bool operator==(const FreeDgModule& a, const FreeDgModule& b) {
    return a.alg_->name() == b.alg_->name() && a.gens_ == b.gens_ && a.matrix_ == b.matrix_;
  }

 private:
  AlgebraPtr alg_;
  std::vector<ModuleGenerator> gens_;
  std::vector<std::vector<AlgebraElement>> matrix_;
  std::string name_;
};

/**
 * A complex of free R-modules (a FreeDgModule over the base presentation)
 * regarded as a dg module over a larger algebra on which every non-base
 * generator acts by zero. Leibniz holds because d(g) lies in the ideal of
 * the non-base generators for B and A. Models O_X over B and over A.
 */
class AugmentationModule : public DgModule {
 public:
  AugmentationModule(std::shared_ptr<const FreeDgModule> inner, AlgebraPtr acting, std::string name)
      : inner_(std::move(inner)), acting_(std::move(acting)), name_(std::move(name)) {
    if (inner_->algebra().nonbase_count() != 0)
      throw PresentationError(name_ + ": augmentation modules wrap complexes over the base ring");
    if (acting_->base_count() != inner_->algebra().base_count())
      throw PresentationError(name_ + ": base ring mismatch");
  }
  std::string name() const override { return name_; }
  const DgAlgebraPresentation& algebra() const override { return *acting_; }
  const AlgebraPtr& algebra_ptr() const { return acting_; }
  const std::shared_ptr<const FreeDgModule>& inner() const { return inner_; }
  std::vector<Symbol> symbols(int h, int w) const override { return inner_->symbols(h, w); }
  RCombination differential(const Symbol& s) const override { return inner_->differential(s); }
  RCombination act(std::size_t, const Symbol&) const override { return {}; }
  WeightBounds weight_bounds() const override { return inner_->weight_bounds(); }
  std::optional<std::vector<Symbol>> finite_basis() const override { return inner_->finite_basis(); }

 private:
  std::shared_ptr<const FreeDgModule> inner_;
  AlgebraPtr acting_;
  std::string name_;
};

/**
 * An R-linear map between modules, homogeneous of tridegree `shift`
 * (normally zero), given on source symbols.
 */
class ModuleMap {
 public:
  using Apply = std::function<RCombination(const Symbol&)>;

  ModuleMap(ModulePtr source, ModulePtr target, Apply apply, std::string name, Tridegree shift = {})
      : source_(std::move(source)),
        target_(std::move(target)),
        apply_(std::move(apply)),
        name_(std::move(name)),
        shift_(shift) {}

  const ModulePtr& source() const { return source_; }
  const ModulePtr& target() const { return target_; }
  const std::string& name() const { return name_; }
  Tridegree shift() const { return shift_; }
  RCombination operator()(const Symbol& s) const { return apply_(s); }

 private:
  ModulePtr source_;
  ModulePtr target_;
  Apply apply_;
  std::string name_;
  Tridegree shift_;
};

/**
 * A module map between free modules given by a matrix over the algebra:
 * f(g_j) = sum_i matrix[i][j] g_i, extended A-linearly (degree-0 maps only).
 */
struct FreeModuleMap {
  std::shared_ptr<const FreeDgModule> source;
  std::shared_ptr<const FreeDgModule> target;
  std::vector<std::vector<AlgebraElement>> matrix;  // target gens x source gens
  std::string name;

  ModuleMap as_module_map() const {
    auto src = source;
    auto tgt = target;
    auto mat = matrix;
    auto apply = [src, tgt, mat](const Symbol& s) {
      const auto& alg = src->algebra();
      const std::size_t j = static_cast<std::size_t>(s.code.back());
      AlgebraElement mono = AlgebraElement::monomial(monomial_from_code(alg, s.code));
      RCombination out;
      for (std::size_t i = 0; i < mat.size(); ++i) {
        if (mat[i][j].is_zero()) continue;
        append_element(alg, alg.multiply(mono, mat[i][j]), 1,
                       [&alg, i](const Monomial& rest) {
                         SymbolCode c = nonbase_code(alg, rest);
                         c.push_back(static_cast<int>(i));
                         return c;
                       },
                       out);
      }
      return out;
    };
    return ModuleMap(source, target, apply, name);
  }
};

/**
 * Memo of per-bidegree symbol lists and per-symbol differentials for a
 * module. Thread-safe; the cached values are pure functions of the module.
 */
class SymbolCache {
 public:
  explicit SymbolCache(const DgModule& m) : module_(m) {}

  const std::vector<Symbol>& symbols(int h, int w) const {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(h, w);
    auto it = symbols_.find(key);
    if (it != symbols_.end()) return it->second;
    return symbols_.emplace(key, module_.symbols(h, w)).first->second;
  }

  const RCombination& differential(const Symbol& s) const {
    {
      std::lock_guard lock(mutex_);
      auto it = diffs_.find(s.code);
      if (it != diffs_.end()) return it->second;
    }
    RCombination d = module_.differential(s);
    std::lock_guard lock(mutex_);
    return diffs_.emplace(s.code, std::move(d)).first->second;
  }

 private:
  const DgModule& module_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<int, int>, std::vector<Symbol>> symbols_;
  mutable std::unordered_map<SymbolCode, RCombination, VectorHash> diffs_;
};

}  // namespace koszul
