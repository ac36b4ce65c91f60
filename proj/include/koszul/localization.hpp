#pragma once
/**
 * Inverting t: modules over A[t^-1], their t-periodic (u, v) tables, the
 * non-positive truncation back to A, the unit and counit maps, the support
 * certificate, and the comparison map psi onto O_Y[t, t^-1].
 *
 * Multiplication by t has tridegree (2, -1, -D), so u = h + 2w and
 * v = d - D w are invariant and a t-periodic module is determined by its
 * weight-0 slices (u, 0, v).
 */

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "koszul.hpp"
#include "quotient.hpp"

namespace koszul {

inline Tridegree t_degree(int D) { return {2, -1, -D}; }

inline AlgebraPtr localized_algebra(const DgAlgebraPresentation& A) {
  return std::make_shared<const DgAlgebraPresentation>(A.with_inverse(A.index_of("t"), A.name() + "[t^-1]"));
}

struct TPeriodicModule {
  AlgebraPtr A;
  AlgebraPtr A_loc;
  FreeModulePtr module;  // over A_loc
  int D = 0;

  /// Cohomology at (u, 0, v) for u in `u` (reported on its safe interior, as for any window) and v in `v`.
  template <class Field>
  CohomologyTable uv_table(const Field& F, Range u, Range v, unsigned threads = 1,
                           std::size_t cap = kDefaultBasisCap) const {
    Materialization m(module, cap);
    return cohomology_table(F, m, Window{u, {0, 0}, v}, threads);
  }
};

/// A[t^-1] (x)_A N for N free over A: the same generators and matrix over A[t^-1].
inline TPeriodicModule localize_t(const FreeDgModule& N, AlgebraPtr A_loc, int D) {
  if (!A_loc->invertible()) throw PresentationError("localize_t: target algebra has no inverse");
  AlgebraPtr A = N.algebra_ptr();
  auto mod = std::make_shared<const FreeDgModule>(A_loc, N.generators(), N.matrix(), N.name() + "[t^-1]");
  return {std::move(A), std::move(A_loc), std::move(mod), D};
}

/// Weight <= 0 part of a t-periodic module, as a module over A.
class TruncatedModule : public DgModule {
 public:
  explicit TruncatedModule(TPeriodicModule N) : N_(std::move(N)) {}
  std::string name() const override { return N_.module->name() + "<=0"; }
  const DgAlgebraPresentation& algebra() const override { return *N_.A; }
  const TPeriodicModule& periodic() const { return N_; }
  std::vector<Symbol> symbols(int h, int w) const override {
    if (w > 0) return {};
    return N_.module->symbols(h, w);
  }
  RCombination differential(const Symbol& s) const override { return N_.module->differential(s); }
  RCombination act(std::size_t g, const Symbol& s) const override { return N_.module->act(g, s); }
  WeightBounds weight_bounds() const override { return {std::nullopt, 0}; }

 private:
  TPeriodicModule N_;
};

inline std::shared_ptr<const TruncatedModule> truncate_nonpositive(TPeriodicModule N) {
  return std::make_shared<const TruncatedModule>(std::move(N));
}

/**
 * A[t^-1] (x)_A N_{<=0}. Every element is t^-K sigma with sigma in N_{<=0};
 * the symbol in bidegree (h, w) uses K = max(0, w), so sigma runs over the
 * truncation's symbols at (h + 2K, w - K). Code: [K] ++ code(sigma).
 */
class LocalizedTruncation : public DgModule {
 public:
  explicit LocalizedTruncation(std::shared_ptr<const TruncatedModule> T)
      : T_(std::move(T)),
        t_pos_(*T_->periodic().A_loc->invertible() - T_->periodic().A_loc->base_count()),
        step_(t_degree(T_->periodic().D)) {}

  std::string name() const override { return "loc(" + T_->name() + ")"; }
  const DgAlgebraPresentation& algebra() const override { return *T_->periodic().A_loc; }
  const TruncatedModule& truncation() const { return *T_; }

  std::vector<Symbol> symbols(int h, int w) const override {
    const int K = std::max(0, w);
    std::vector<Symbol> out;
    for (const auto& s : T_->symbols(h + 2 * K, w - K)) out.push_back({tag(K, s.code), s.degree - K * step_});
    return out;
  }

  RCombination differential(const Symbol& s) const override {
    const int K = s.code[0];
    RCombination out;
    for (auto& t : T_->differential(untag(s))) out.push_back({tag(K, t.symbol), t.x, t.coeff});
    return out;
  }

  RCombination act(std::size_t g, const Symbol& s) const override {
    const int K = s.code[0];
    const int K2 = std::max(0, s.degree.w + algebra().generator(g).w);
    RCombination out;
    for (auto& t : T_->act(g, untag(s))) {
      SymbolCode code = t.symbol;
      code[t_pos_] -= K - K2;  // t^-K g sigma = t^-K2 (t^(K2-K) g sigma)
      out.push_back({tag(K2, code), t.x, t.coeff});
    }
    return out;
  }

  WeightBounds weight_bounds() const override { return {}; }

  /// t^-K sigma as a symbol code of the periodic module.
  SymbolCode periodic_code(const SymbolCode& code) const {
    SymbolCode c(code.begin() + 1, code.end());
    c[t_pos_] -= code[0];
    return c;
  }

 private:
  static SymbolCode tag(int K, const SymbolCode& c) {
    SymbolCode out{K};
    out.insert(out.end(), c.begin(), c.end());
    return out;
  }
  Symbol untag(const Symbol& s) const {
    return {SymbolCode(s.code.begin() + 1, s.code.end()), s.degree + s.code[0] * step_};
  }

  std::shared_ptr<const TruncatedModule> T_;
  std::size_t t_pos_;
  Tridegree step_;
};

inline std::shared_ptr<const LocalizedTruncation> localize_truncation(std::shared_ptr<const TruncatedModule> T) {
  return std::make_shared<const LocalizedTruncation>(std::move(T));
}

/// Counit A[t^-1] (x)_A N_{<=0} -> N, t^-K (x) sigma -> t^-K sigma.
inline ModuleMap counit_map(const TPeriodicModule& N) {
  auto L = localize_truncation(truncate_nonpositive(N));
  const std::size_t n = N.A_loc->base_count();
  auto apply = [L, n](const Symbol& s) { return RCombination{{L->periodic_code(s.code), XExponents(n, 0), 1}}; };
  return ModuleMap(L, N.module, apply, "counit");
}

/// Unit M -> (A[t^-1] (x)_A M)_{<=0}: sections of non-positive weight go to 1 (x) m, the rest to 0.
inline ModuleMap unit_map(const FreeModulePtr& M, AlgebraPtr A_loc, int D) {
  auto T = truncate_nonpositive(localize_t(*M, std::move(A_loc), D));
  const std::size_t n = M->algebra().base_count();
  auto apply = [n](const Symbol& s) {
    if (s.degree.w > 0) return RCombination{};
    return RCombination{{s.code, XExponents(n, 0), 1}};
  };
  return ModuleMap(M, T, apply, "unit(" + M->name() + ")");
}

/// First tridegree of the window where the map is not square and invertible.
template <class Field>
std::optional<Tridegree> find_bijection_failure(const Field& F, const ModuleMap& f, const Window& win,
                                                std::size_t cap = kDefaultBasisCap) {
  Materialization src(f.source(), cap), tgt(f.target(), cap);
  for (int h = win.h.lo; h <= win.h.hi; ++h)
    for (int w = win.w.lo; w <= win.w.hi; ++w)
      for (int d = win.d.lo; d <= win.d.hi; ++d) {
        const Tridegree t{h, w, d};
        auto M = map_matrix(f, src, tgt, t);
        if (M.rows != M.cols || rank_of(F, M) != M.cols) return t;
      }
  return std::nullopt;
}

enum class SupportVerdict { supported, not_supported, inconclusive };

inline std::string to_string(SupportVerdict v) {
  switch (v) {
    case SupportVerdict::supported:
      return "supported";
    case SupportVerdict::not_supported:
      return "not-supported";
    default:
      return "inconclusive";
  }
}

struct SupportCertificate {
  Window window;
  int exponent = 0;  // t^exponent kills every class found (when supported)
  SupportVerdict verdict = SupportVerdict::inconclusive;
  std::optional<Tridegree> witness;  // a class that survived the search
  std::size_t classes = 0;
};

/**
 * Dimension of the image of H(tau) -> H(tau'), given cocycles at tau already
 * pushed forward to tau' (images) and the boundaries at tau'.
 */
template <class Field>
std::size_t induced_rank(const Field& F, const std::vector<SparseVector<typename Field::value_type>>& images,
                         const SparseMatrix<typename Field::value_type>& boundaries) {
  EchelonBasis<Field> basis(F, false);
  for (std::size_t j = 0; j < boundaries.cols; ++j) basis.insert(boundaries.columns[j], j);
  const std::size_t base = basis.rank();
  for (std::size_t j = 0; j < images.size(); ++j) basis.insert(images[j], j);
  return basis.rank() - base;
}

/**
 * Searches, for every safe-interior tridegree with cohomology, the least N
 * up to the window's weight width such that t^N kills all classes there.
 * A class that survives with a rank sequence that has stopped changing
 * yields not-supported; any other failure is inconclusive.
 */
template <class Field>
SupportCertificate check_supported_on_X(const Field& F, const ModulePtr& M, const Window& win, int D,
                                        std::size_t cap = kDefaultBasisCap) {
  using V = typename Field::value_type;
  SupportCertificate cert;
  cert.window = win;
  cert.verdict = SupportVerdict::supported;
  const std::size_t t = M->algebra().index_of("t");
  const Tridegree step = t_degree(D), one{1, 0, 0};
  const int cap_n = win.w.width();
  Materialization m(M, cap);
  bool stalled = false;
  for (const auto& tau : win.safe_interior()) {
    if (m.slice(tau).size() == 0) continue;
    auto rk = rank_and_kernel(F, to_field(F, m.differential_matrix(tau)));
    auto in = to_field(F, m.differential_matrix(tau - one));
    if (rk.kernel.size() == rank(F, in)) continue;
    cert.classes += rk.kernel.size() - rank(F, in);
    std::vector<SparseVector<V>> images = rk.kernel;
    Tridegree cur = tau;
    std::vector<std::size_t> ranks;
    bool died = false;
    for (int N = 1; N <= cap_n; ++N) {
      auto act = to_field(F, m.action_matrix(t, cur));
      for (auto& z : images) z = mat_vec(F, act, z);
      cur = cur + step;
      auto boundaries = to_field(F, m.differential_matrix(cur - one));
      std::size_t r = induced_rank(F, images, boundaries);
      ranks.push_back(r);
      if (r == 0) {
        cert.exponent = std::max(cert.exponent, N);
        died = true;
        break;
      }
    }
    if (died) continue;
    cert.witness = cert.witness ? cert.witness : std::optional<Tridegree>(tau);
    std::size_t k = ranks.size();
    bool stable = k >= 2 && ranks[k - 1] == ranks[k - 2] && ranks[k - 1] > 0;
    if (!stable) stalled = true;
    cert.verdict = SupportVerdict::not_supported;
  }
  if (cert.verdict == SupportVerdict::not_supported && stalled) cert.verdict = SupportVerdict::inconclusive;
  return cert;
}

/**
 * Dimension of H(M) at (u, v) modulo t-torsion, read off at the two most
 * negative weights of the window: the rank of t from weight w0 = w.lo + 1 to
 * w.lo. Stable (returned) only when that rank equals both dimensions.
 */
template <class Field>
std::optional<std::size_t> t_stabilized_dim(const Field& F, const Materialization& m, int u, int v, const Window& win,
                                            int D) {
  using V = typename Field::value_type;
  const std::size_t t = m.module().algebra().index_of("t");
  const Tridegree one{1, 0, 0};
  const int w0 = win.w.lo + 1;
  const Tridegree tau{u - 2 * w0, w0, v + D * w0};
  const Tridegree tau1 = tau + t_degree(D);
  auto dims = [&](Tridegree x) {
    std::size_t n = m.slice(x).size();
    if (n == 0) return std::size_t{0};
    return n - rank_of(F, m.differential_matrix(x)) - rank_of(F, m.differential_matrix(x - one));
  };
  const std::size_t h0 = dims(tau), h1 = dims(tau1);
  if (h0 == 0 && h1 == 0) return 0;
  auto rk = rank_and_kernel(F, to_field(F, m.differential_matrix(tau)));
  auto act = to_field(F, m.action_matrix(t, tau));
  std::vector<SparseVector<V>> images;
  for (const auto& z : rk.kernel) images.push_back(mat_vec(F, act, z));
  std::size_t r = induced_rank(F, images, to_field(F, m.differential_matrix(tau1 - one)));
  if (r == h0 && r == h1) return r;
  return std::nullopt;
}

/// The t-periodic module O_Y[t, t^-1] as a table: dim (R/s)_v at u = 0, zero elsewhere.
template <class Field>
CohomologyTable OY_laurent_table(const Field& F, const SectionData& sd, Range u, Range v) {
  CohomologyTable table;
  const auto e = sd.degrees();
  for (int a = u.lo + 1; a <= u.hi - 1; ++a)
    for (int b = v.lo; b <= v.hi; ++b)
      table.dims[{a, 0, b}] = a == 0 ? quotient_ring_slice(F, sd.x_weights, sd.s, e, b).dim() : 0;
  return table;
}

/**
 * psi: A[t^-1] -> O_Y[t, t^-1] on the weight-0 slices, sending x^a to its
 * class and every symbol with a xi or t factor to 0. Returns the first (u, v)
 * where psi is not a chain map onto, or not a quasi-isomorphism.
 */
template <class Field>
std::optional<Tridegree> psi_check(const Field& F, const SectionData& sd, const TPeriodicModule& Aloc, Range u,
                                   Range v, std::size_t cap = kDefaultBasisCap) {
  using V = typename Field::value_type;
  Materialization m(Aloc.module, cap);
  const auto e = sd.degrees();
  for (int a = u.lo + 1; a <= u.hi - 1; ++a)
    for (int b = v.lo; b <= v.hi; ++b) {
      const Tridegree tau{a, 0, b};
      const Slice& sl = m.slice(tau);
      if (a != 0) {
        SparseMatrix<V> zero(0, sl.size());
        if (!quasi_iso_onto_at(F, m, tau, zero, 0)) return tau;
        continue;
      }
      auto q = quotient_ring_slice(F, sd.x_weights, sd.s, e, b);
      SparseMatrix<V> P(q.dim(), sl.size());
      for (std::size_t j = 0; j < sl.size(); ++j) {
        const auto& be = sl.basis[j];
        const auto& code = sl.symbols[be.symbol].code;
        if (std::any_of(code.begin(), code.end() - 1, [](int x) { return x != 0; })) continue;
        auto idx = q.monomial_index(be.x);
        if (!idx) throw InternalError("psi: monomial outside its graded piece");
        P.columns[j] = q.reduce({{*idx, F.one()}});
      }
      if (!quasi_iso_onto_at(F, m, tau, P, q.dim())) return tau;
    }
  return std::nullopt;
}

}  // namespace koszul
