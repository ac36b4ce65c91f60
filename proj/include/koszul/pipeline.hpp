#pragma once
/**
 * End-to-end verification of a scenario: checks C1..C10, each backed by the
 * cohomology tables it compared, plus a recomputation of every table over a
 * second field. Reports serialize deterministically (json or text).
 */

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "localization.hpp"
#include "oracle.hpp"
#include "regrade.hpp"
#include "scenario.hpp"

namespace koszul {

inline constexpr const char* kEngineVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;

enum class Verdict { pass, fail, inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    default:
      return "inconclusive";
  }
}

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::optional<std::string> witness;
  std::vector<std::string> failures;  // every failing comparison, in order
  std::string detail;
  double runtime_ms = 0;
  std::map<std::string, CohomologyTable> tables;

  void fail(const std::string& what) {
    if (!witness || verdict != Verdict::fail) witness = what;
    verdict = Verdict::fail;
    failures.push_back(what);
  }
  void inconclusive(const std::string& why) {
    if (verdict == Verdict::pass) {
      verdict = Verdict::inconclusive;
      witness = why;
    }
  }
  void note(const std::string& text) { detail += (detail.empty() ? "" : "; ") + text; }
};

struct Report {
  std::string scenario_id;
  std::string field;
  std::string cross_field;
  Window window;
  std::vector<CheckResult> checks;
  std::map<std::string, CohomologyTable> tables;
};

struct PipelineOptions {
  unsigned parallel = 1;
  bool cross_check = true;
};

/// Deterministic prime in (2^20, 2^31) derived from the scenario id.
inline std::uint64_t cross_check_prime(const std::string& id) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : id) h = (h ^ c) * 1099511628211ull;
  std::mt19937_64 rng(h);
  std::uniform_int_distribution<std::uint64_t> dist(kMinPrime + 1, (std::uint64_t{1} << 31) - 1);
  for (;;) {
    std::uint64_t p = dist(rng) | 1;
    if (is_prime(p)) return p;
  }
}

namespace detail {

inline oracle::Poly to_oracle(const Polynomial& p) {
  oracle::Poly out;
  for (const auto& [x, c] : p) out[x] = c;
  return out;
}

inline std::vector<oracle::Poly> oracle_section(const SectionData& sd) {
  std::vector<oracle::Poly> out;
  for (const auto& p : sd.s) out.push_back(to_oracle(p));
  return out;
}

inline std::vector<Mismatch> all_mismatches(const CohomologyTable& got, const CohomologyTable& want) {
  std::vector<Mismatch> out;
  for (const auto& [t, v] : got.dims) {
    auto it = want.dims.find(t);
    if (it != want.dims.end() && it->second != v) out.push_back({t, v, it->second});
  }
  return out;
}

}  // namespace detail

/// Everything the checks share for one scenario and one field.
template <class Field>
struct Context {
  const Scenario& sc;
  Field F;
  const SectionData& sd;
  AlgebraPtr R, B, A, Aloc;
  int D;
  std::vector<int> e;
  Window win;
  std::size_t cap;

  Context(const Scenario& s, Field field)
      : sc(s),
        F(std::move(field)),
        sd(s.section),
        R(build_R(s.section)),
        B(build_B(s.section)),
        A(build_A(s.section)),
        Aloc(localized_algebra(*A)),
        D(s.section.D()),
        e(s.section.degrees()),
        win(s.window),
        cap(s.basis_cap) {}

  bool W_nonzero() const {
    for (const auto& p : sd.s)
      if (!p.empty()) return true;
    return false;
  }

  CohomologyTable table(const ModulePtr& M) const {
    Materialization m(M, cap);
    return cohomology_table(F, m, win);
  }

  /// Table over the safe interior with the given value function.
  CohomologyTable expected(const std::function<std::size_t(Tridegree)>& f) const {
    CohomologyTable t;
    for (const auto& tau : win.safe_interior()) t.dims[tau] = f(tau);
    return t;
  }

  /// (u, 0, v) keys: u over the safe h range, v over the d range.
  CohomologyTable expected_uv(const std::function<std::size_t(int, int)>& f) const {
    CohomologyTable t;
    for (int u = win.h.lo + 1; u <= win.h.hi - 1; ++u)
      for (int v = win.d.lo; v <= win.d.hi; ++v) t.dims[{u, 0, v}] = f(u, v);
    return t;
  }

  std::size_t oracle_OY(int d) const { return oracle::OY_dim(sd.x_weights, detail::oracle_section(sd), d, sc.oracle_cap); }
  std::size_t oracle_OZ(int w, int d) const {
    return oracle::OZ_dim(sd.x_weights, detail::oracle_section(sd), w, d, sc.oracle_cap);
  }

  CohomologyTable OZ_table() const {
    return expected([&](Tridegree t) { return t.h == 0 ? oracle_OZ(t.w, t.d) : 0; });
  }
  CohomologyTable OY_uv_table() const {
    return expected_uv([&](int u, int v) { return u == 0 ? oracle_OY(v) : 0; });
  }
  CohomologyTable K_uv_table() const {
    auto K = std::make_shared<const FreeDgModule>(build_koszul_resolution(sd, R));
    Materialization m(K, cap);
    return cohomology_table(F, m, Window{win.h, {0, 0}, win.d});
  }

  FreeModulePtr module_B() const { return free_rank_one(B); }
  FreeModulePtr module_A() const { return free_rank_one(A); }

  /// cone(t: A -> A') with A' free on a generator at (-2, 1, D).
  FreeModulePtr cone_t() const {
    auto tgt = free_rank_one(A, {-2, 1, D}, "A'");
    FreeModuleMap f{module_A(), tgt, {{A->generator_element(A->index_of("t"))}}, "t"};
    return std::make_shared<const FreeDgModule>(cone(f));
  }

  /// cone(y1: B' -> B) with B' free on a generator at (0, 1, D - e_1).
  FreeModulePtr cone_y1() const {
    auto src = free_rank_one(B, {0, 1, D - e[0]}, "B'");
    FreeModuleMap f{src, module_B(), {{B->generator_element(B->index_of("y1"))}}, "y1"};
    return std::make_shared<const FreeDgModule>(cone(f));
  }

  /// Compares two tables on their shared keys, recording both and every mismatch.
  void compare(CheckResult& res, const std::string& got_name, const CohomologyTable& got,
               const std::string& want_name, const CohomologyTable& want) const {
    res.tables[got_name] = got;
    res.tables[want_name] = want;
    if (shared_keys(got, want) == 0) {
      res.inconclusive(got_name + " and " + want_name + " share no tridegree");
      return;
    }
    for (const auto& m : detail::all_mismatches(got, want))
      res.fail(got_name + " vs " + want_name + " at " + to_string(m.where) + ": " + std::to_string(m.left) + " vs " +
               std::to_string(m.right));
  }
};

/// Adds one failure per window tridegree where d^2 != 0 on M.
inline void record_d_squared(CheckResult& res, const ModulePtr& M, const Window& win, std::size_t cap) {
  Materialization m(M, cap);
  for (const auto& t : d_squared_failures(m, win)) res.fail("d^2 != 0 on " + M->name() + " at " + to_string(t));
}

template <class Field>
void check_C1(const Context<Field>& c, CheckResult& res) {
  std::vector<ModulePtr> objects{c.module_B(), c.module_A(),
                                 std::make_shared<const FreeDgModule>(build_koszul_resolution(c.sd, c.R))};
  for (int i = -2; i <= 2; ++i) objects.push_back(koszul_F(c.A, twisted_algebra(c.B, i)));
  objects.push_back(koszul_G(c.B, structure_sheaf(c.A, c.R)));
  objects.push_back(std::make_shared<const FreeDgModule>(koszul_G_finite(c.B, *structure_sheaf(c.A, c.R))));
  objects.push_back(std::make_shared<const FreeDgModule>(koszul_F_finite(c.A, *structure_sheaf(c.B, c.R))));
  objects.push_back(koszul_G(c.B, koszul_F(c.A, c.module_B())));
  auto ct = c.cone_t();
  objects.push_back(ct);
  if (c.sd.r() > 0) objects.push_back(c.cone_y1());
  objects.push_back(std::make_shared<const ConeModule>(unit_map(c.module_A(), c.Aloc, c.D)));
  auto LA = localize_t(*c.module_A(), c.Aloc, c.D);
  objects.push_back(LA.module);
  objects.push_back(localize_t(*ct, c.Aloc, c.D).module);
  objects.push_back(localize_truncation(truncate_nonpositive(LA)));
  for (const auto& M : objects) record_d_squared(res, M, c.win, c.cap);
  res.note(std::to_string(objects.size()) + " objects");
}

template <class Field>
void check_C2(const Context<Field>& c, CheckResult& res) {
  if (!c.W_nonzero()) {
    res.inconclusive("W = 0: B does not resolve the zero locus");
    return;
  }
  auto Bm = c.module_B();
  Materialization m(Bm, c.cap);
  c.compare(res, "H(B)", cohomology_table(c.F, m, c.win), "O_Z oracle", c.OZ_table());
  // phi: B -> pi_* O_Z, x^a y^b -> class, eps-terms -> 0
  using V = typename Field::value_type;
  const std::size_t eps = c.B->nonbase_count() - 1;
  for (const auto& tau : c.win.safe_interior()) {
    const Slice& sl = m.slice(tau);
    if (tau.h != 0) {
      if (!quasi_iso_onto_at(c.F, m, tau, SparseMatrix<V>(0, sl.size()), 0)) res.fail("phi at " + to_string(tau));
      continue;
    }
    auto q = sym_quotient_slice(c.F, c.sd.x_weights, c.sd.s, c.e, c.D, tau.w, tau.d);
    SparseMatrix<V> P(q.dim(), sl.size());
    for (std::size_t j = 0; j < sl.size(); ++j) {
      const auto& code = sl.symbols[sl.basis[j].symbol].code;
      if (code[eps] != 0) continue;
      std::vector<int> mono = sl.basis[j].x;
      mono.insert(mono.end(), code.begin(), code.begin() + static_cast<long>(eps));
      auto idx = q.monomial_index(mono);
      if (!idx) throw InternalError("phi: monomial outside its graded piece");
      P.columns[j] = q.reduce({{*idx, c.F.one()}});
    }
    if (!quasi_iso_onto_at(c.F, m, tau, P, q.dim())) res.fail("phi at " + to_string(tau));
  }
}

template <class Field>
void check_C3(const Context<Field>& c, CheckResult& res) {
  for (int i = -2; i <= 2; ++i) {
    auto FB = koszul_F(c.A, twisted_algebra(c.B, i));
    auto want = c.expected([&](Tridegree t) {
      return t.h == 0 && t.w == -i ? oracle::ring_dim(c.sd.x_weights, t.d) : std::size_t{0};
    });
    c.compare(res, "H(F(B(" + std::to_string(i) + ")))", c.table(FB), "O_X(" + std::to_string(-i) + ") oracle", want);
  }
}

template <class Field>
void check_C4(const Context<Field>& c, CheckResult& res) {
  auto K = std::make_shared<const FreeDgModule>(build_koszul_resolution(c.sd, c.R));
  auto HK = c.table(K);
  std::optional<Tridegree> higher;
  for (const auto& [t, v] : HK.dims)
    if (t.h != 0 && v != 0 && !higher) higher = t;
  const bool visible = -c.sd.r() >= c.win.safe_h().lo && c.win.safe_h().contains(0);
  auto want0 = c.expected([&](Tridegree t) { return t.h == 0 && t.w == 0 ? c.oracle_OY(t.d) : std::size_t{0}; });
  CohomologyTable H0, want;
  for (const auto& [t, v] : HK.dims)
    if (t.h == 0) H0.dims[t] = v;
  for (const auto& [t, v] : want0.dims)
    if (t.h == 0) want.dims[t] = v;
  c.compare(res, "H(K)", HK, "O_Y oracle", want0);
  if (c.sd.regular_claimed) {
    // compare() already failed on any nonzero H^{h != 0}
    if (!visible && res.verdict == Verdict::pass) res.inconclusive("Koszul complex extends beyond the window");
    if (!higher && res.verdict == Verdict::pass) res.note("H(K) concentrated in h = 0: regular");
  } else {
    res.failures.clear();
    res.verdict = Verdict::pass;
    res.witness.reset();
    for (const auto& m : detail::all_mismatches(H0, want))
      res.fail("H^0(K) vs O_Y oracle at " + to_string(m.where) + ": " + std::to_string(m.left) + " vs " +
               std::to_string(m.right));
    if (higher)
      res.note("non-exact: H^" + std::to_string(higher->h) + "(K) at " + to_string(*higher) + " has dim " +
               std::to_string(HK.at(*higher)));
    else if (visible)
      res.fail("Koszul complex is exact on the window but the scenario claims a non-regular section");
    else
      res.inconclusive("no higher Koszul cohomology inside the window");
  }
}

template <class Field>
void check_C5(const Context<Field>& c, CheckResult& res) {
  std::vector<std::pair<std::string, ModulePtr>> suite{{"B", c.module_B()}, {"B(1)", twisted_algebra(c.B, 1)}};
  auto Bfree = c.module_B();
  suite.emplace_back("B+B[1]", std::make_shared<const FreeDgModule>(direct_sum(*Bfree, shift(*Bfree, 1))));
  if (c.sd.r() > 0) suite.emplace_back("cone(y1)", c.cone_y1());
  for (const auto& [name, M] : suite) {
    auto GF = koszul_G(c.B, koszul_F(c.A, M));
    c.compare(res, "H(G(F(" + name + ")))", c.table(GF), "H(" + name + ")", c.table(M));
  }
}

template <class Field>
void check_C6(const Context<Field>& c, CheckResult& res) {
  std::vector<std::pair<std::string, FreeModulePtr>> suite{{"A", c.module_A()}, {"cone(t)", c.cone_t()}};
  for (const auto& [name, M] : suite) {
    auto L = localize_t(*M, c.Aloc, c.D);
    auto uv = L.uv_table(c.F, c.win.h, c.win.d, 1, c.cap);
    Materialization m(M, c.cap);
    CohomologyTable stable;
    std::size_t unstable = 0;
    for (const auto& [t, v] : uv.dims) {
      auto s = t_stabilized_dim(c.F, m, t.h, t.d, c.win, c.D);
      if (s)
        stable.dims[t] = *s;
      else
        ++unstable;
    }
    c.compare(res, "H(" + name + "[t^-1]) uv", uv, "H(" + name + ") t-stabilized uv", stable);
    if (unstable) res.inconclusive(std::to_string(unstable) + " (u,v) entries of " + name + " did not stabilize");
  }
}

template <class Field>
void check_C7(const Context<Field>& c, CheckResult& res) {
  for (const auto& [name, M] :
       std::vector<std::pair<std::string, FreeModulePtr>>{{"A", c.module_A()}, {"cone(t)", c.cone_t()}}) {
    auto N = localize_t(*M, c.Aloc, c.D);
    auto counit = counit_map(N);
    Materialization src(counit.source(), c.cap), tgt(counit.target(), c.cap);
    if (auto bad = find_chain_map_failure(counit, src, tgt, c.win))
      res.fail("counit on " + name + "[t^-1] is not a chain map at " + to_string(*bad));
    if (auto bad = find_bijection_failure(c.F, counit, c.win, c.cap))
      res.fail("counit on " + name + "[t^-1] is not bijective at " + to_string(*bad));
  }
  auto unit = unit_map(c.module_A(), c.Aloc, c.D);
  auto J = checked_cone(unit, c.win, c.cap);
  auto cert = check_supported_on_X(c.F, J, c.win, c.D, c.cap);
  res.note("cone(unit(A)): " + to_string(cert.verdict) + ", t-exponent " + std::to_string(cert.exponent) + ", " +
           std::to_string(cert.classes) + " classes");
  if (cert.verdict == SupportVerdict::not_supported)
    res.fail("cone(unit(A)) not supported: class at " + to_string(*cert.witness) + " survives t^" +
             std::to_string(c.win.w.width()));
  else if (cert.verdict == SupportVerdict::inconclusive)
    res.inconclusive("support certificate inconclusive at " + (cert.witness ? to_string(*cert.witness) : "?"));
}

template <class Field>
void check_C8(const Context<Field>& c, CheckResult& res) {
  auto L = localize_t(*c.module_A(), c.Aloc, c.D);
  auto uv = L.uv_table(c.F, c.win.h, c.win.d, 1, c.cap);
  if (c.sd.regular_claimed) {
    c.compare(res, "H(A[t^-1]) uv", uv, "O_Y[t,t^-1] oracle uv", c.OY_uv_table());
    if (auto bad = psi_check(c.F, c.sd, L, c.win.h, c.win.d, c.cap))
      res.fail("psi is not a quasi-isomorphism at " + to_string(*bad));
  } else {
    c.compare(res, "H(A[t^-1]) uv", uv, "H(K)[t,t^-1] uv", c.K_uv_table());
  }
}

template <class Field>
void check_C9(const Context<Field>& c, CheckResult& res) {
  auto muA_alg = regrade_algebra(*c.A);
  if (muA_alg->generator(muA_alg->index_of("t")).h != 0) res.fail("mu(A) does not put t in degree 0");
  auto Am = c.module_A();
  auto muA = std::make_shared<const FreeDgModule>(regrade_mu(*Am, muA_alg));
  if (!same_presentation(regrade_mu(*muA, -1), *Am)) res.fail("mu^-1(mu(A)) differs from A");
  std::vector<std::tuple<std::string, ModulePtr, ModulePtr>> suite{
      {"A", Am, muA}, {"F(B)", nullptr, nullptr}};
  auto FB = koszul_F(c.A, c.module_B());
  std::get<1>(suite[1]) = FB;
  std::get<2>(suite[1]) = std::make_shared<const RegradedModule>(FB, muA_alg);
  for (const auto& [name, M, muM] : suite) {
    auto tmu = c.table(muM);
    Materialization m(M, c.cap);
    CohomologyTable back;
    for (const auto& [t, v] : tmu.dims) back.dims[t] = cohomology_dim(c.F, m, regrade_degree(t, -1));
    c.compare(res, "H(mu(" + name + "))", tmu, "H(" + name + ") reindexed", back);
  }
  auto OX = FreeDgModule::free_rank_one(c.R, {}, "O_X");
  for (int k = -2; k <= 2; ++k) {
    auto lhs = regrade_mu(twist(OX, k));
    auto rhs = twist(shift(OX, -2 * k), k);
    if (!same_presentation(lhs, rhs)) res.fail("mu(O_X(" + std::to_string(k) + ")) != O_X[" + std::to_string(-2 * k) + "](" + std::to_string(k) + ")");
  }
}

template <class Field>
void check_C10(const Context<Field>& c, CheckResult& res) {
  if (!c.W_nonzero()) {
    res.inconclusive("W = 0: B does not resolve the zero locus");
  } else {
    auto GF = koszul_G(c.B, koszul_F(c.A, c.module_B()));
    c.compare(res, "H(G(F(B)))", c.table(GF), "O_Z oracle", c.OZ_table());
  }
  auto FOX = koszul_F_finite(c.A, *structure_sheaf(c.B, c.R));
  auto L = localize_t(FOX, c.Aloc, c.D);
  auto uv = L.uv_table(c.F, c.win.h, c.win.d, 1, c.cap);
  if (c.sd.regular_claimed)
    c.compare(res, "H(F(O_X)[t^-1]) uv", uv, "O_Y[t,t^-1] oracle uv", c.OY_uv_table());
  else
    c.compare(res, "H(F(O_X)[t^-1]) uv", uv, "H(K)[t,t^-1] uv", c.K_uv_table());
}

template <class Field>
CheckResult run_check(const Context<Field>& c, const std::string& name) {
  static const std::map<std::string, void (*)(const Context<Field>&, CheckResult&)> table{
      {"C1", &check_C1<Field>}, {"C2", &check_C2<Field>}, {"C3", &check_C3<Field>}, {"C4", &check_C4<Field>},
      {"C5", &check_C5<Field>}, {"C6", &check_C6<Field>}, {"C7", &check_C7<Field>}, {"C8", &check_C8<Field>},
      {"C9", &check_C9<Field>}, {"C10", &check_C10<Field>}};
  CheckResult res;
  res.name = name;
  auto start = std::chrono::steady_clock::now();
  try {
    table.at(name)(c, res);
  } catch (const ResourceError& e) {
    res.inconclusive(std::string("resource cap: ") + e.what());
  } catch (const oracle::CapExceeded& e) {
    res.inconclusive(std::string("resource cap: ") + e.what());
  } catch (const OverflowError& e) {
    res.inconclusive(std::string("coefficient overflow: ") + e.what());
  } catch (const std::exception& e) {
    res.fail(std::string("error: ") + e.what());
  }
  res.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return res;
}

template <class Field>
std::vector<CheckResult> run_checks(const Scenario& sc, Field F, unsigned parallel) {
  Context<Field> ctx(sc, std::move(F));
  std::vector<CheckResult> results(sc.checks.size());
  parallel_for(sc.checks.size(), parallel, [&](std::size_t i) { results[i] = run_check(ctx, sc.checks[i]); });
  return results;
}

namespace detail {

inline std::vector<CheckResult> run_with(const Scenario& sc, FieldSpec field, unsigned parallel) {
  if (field.rational()) return run_checks(sc, RationalField{}, parallel);
  return run_checks(sc, PrimeField{field.prime}, parallel);
}

inline std::map<std::string, CohomologyTable> merged_tables(const std::vector<CheckResult>& results) {
  std::map<std::string, CohomologyTable> out;
  for (const auto& r : results)
    for (const auto& [name, t] : r.tables) out.emplace(name, t);
  return out;
}

}  // namespace detail

inline Report run_pipeline(const Scenario& sc, const PipelineOptions& opt = {}) {
  if (sc.checks.empty()) throw ScenarioError("check list is empty");
  if (sc.window.empty()) throw ScenarioError("window is empty");
  Report rep;
  rep.scenario_id = sc.section.id;
  rep.field = sc.field.name();
  rep.window = sc.window;
  rep.checks = detail::run_with(sc, sc.field, opt.parallel);
  rep.tables = detail::merged_tables(rep.checks);
  if (opt.cross_check) {
    FieldSpec other = sc.field.rational() ? FieldSpec{cross_check_prime(sc.section.id)} : FieldSpec{};
    rep.cross_field = other.name();
    auto start = std::chrono::steady_clock::now();
    auto second = detail::merged_tables(detail::run_with(sc, other, opt.parallel));
    CheckResult res;
    res.name = "field-cross-check";
    res.note(rep.field + " vs " + rep.cross_field);
    for (const auto& [name, t] : rep.tables) {
      auto it = second.find(name);
      if (it == second.end()) {
        res.inconclusive(name + " was not produced over " + rep.cross_field);
        continue;
      }
      if (t.dims.size() != it->second.dims.size()) {
        res.fail(name + ": tables have different extents");
        continue;
      }
      for (const auto& m : detail::all_mismatches(t, it->second))
        res.fail(name + " at " + to_string(m.where) + ": " + std::to_string(m.left) + " over " + rep.field + " vs " +
                 std::to_string(m.right) + " over " + rep.cross_field);
    }
    res.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    rep.checks.push_back(std::move(res));
  }
  return rep;
}

/// 0 all pass, 1 any fail, 2 any inconclusive and none failed.
inline int exit_code(const Report& rep) {
  bool inconclusive = false;
  for (const auto& c : rep.checks) {
    if (c.verdict == Verdict::fail) return 1;
    if (c.verdict == Verdict::inconclusive) inconclusive = true;
  }
  return inconclusive ? 2 : 0;
}

inline nlohmann::json report_json(const Report& rep, bool timings = false) {
  nlohmann::json j;
  j["schema_version"] = kSchemaVersion;
  j["scenario_id"] = rep.scenario_id;
  j["engine_version"] = kEngineVersion;
  j["field"] = rep.field;
  if (!rep.cross_field.empty()) j["cross_check_field"] = rep.cross_field;
  j["window"] = {{"h", {rep.window.h.lo, rep.window.h.hi}},
                 {"w", {rep.window.w.lo, rep.window.w.hi}},
                 {"d", {rep.window.d.lo, rep.window.d.hi}}};
  j["checks"] = nlohmann::json::array();
  for (const auto& c : rep.checks) {
    nlohmann::json cj{{"name", c.name}, {"verdict", to_string(c.verdict)}};
    if (c.witness) cj["witness"] = *c.witness;
    if (!c.failures.empty()) cj["failures"] = c.failures;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    if (timings) cj["runtime_ms"] = c.runtime_ms;
    j["checks"].push_back(std::move(cj));
  }
  j["tables"] = nlohmann::json::object();
  for (const auto& [name, t] : rep.tables) {
    auto arr = nlohmann::json::array();
    for (const auto& [tau, dim] : t.dims)
      if (dim != 0) arr.push_back({{"h", tau.h}, {"w", tau.w}, {"d", tau.d}, {"dim", dim}});
    j["tables"][name] = std::move(arr);
  }
  return j;
}

inline std::string emit_report(const Report& rep, const std::string& format = "json", bool timings = false) {
  if (format == "json") return report_json(rep, timings).dump(2) + "\n";
  if (format != "text") throw std::invalid_argument("unknown report format '" + format + "'");
  std::ostringstream os;
  os << "scenario " << rep.scenario_id << "  field " << rep.field;
  if (!rep.cross_field.empty()) os << "  cross-check " << rep.cross_field;
  os << "  window " << rep.window.to_string() << "\n\n";
  for (const auto& c : rep.checks) {
    os << c.name << std::string(c.name.size() < 18 ? 18 - c.name.size() : 1, ' ') << to_string(c.verdict);
    if (timings) os << "  (" << static_cast<long long>(c.runtime_ms) << " ms)";
    os << "\n";
    if (!c.detail.empty()) os << "    " << c.detail << "\n";
    if (c.verdict == Verdict::inconclusive && c.witness) os << "    " << *c.witness << "\n";
    for (const auto& f : c.failures) os << "    FAIL " << f << "\n";
  }
  os << "\nnonzero cohomology (h w d dim); absent entries of the safe interior are 0\n";
  for (const auto& [name, t] : rep.tables) {
    os << "\n" << name << "\n";
    for (const auto& [tau, dim] : t.dims)
      if (dim) os << "  " << tau.h << " " << tau.w << " " << tau.d << " " << dim << "\n";
  }
  return os.str();
}

}  // namespace koszul
