#pragma once

#include <random>
#include <string>
#include <vector>

#include "koszul/scenario.hpp"

namespace testing_support {

inline koszul::SectionData section(const std::string& id, int n, const std::vector<std::string>& s,
                                   bool regular = true, std::vector<int> weights = {}) {
  koszul::SectionData sd;
  sd.id = id;
  sd.n = n;
  sd.x_weights = weights.empty() ? std::vector<int>(static_cast<std::size_t>(n), 1) : weights;
  for (const auto& p : s) sd.s.push_back(koszul::parse_polynomial(p, n));
  sd.regular_claimed = regular;
  sd.validate();
  return sd;
}

inline koszul::SectionData point() { return section("point", 1, {"x1"}); }
inline koszul::SectionData axes() { return section("axes", 2, {"x1*x2"}); }
inline koszul::SectionData ci() { return section("ci", 2, {"x1", "x2"}); }
inline koszul::SectionData fermat() { return section("fermat", 3, {"x1^3 + x2^3 + x3^3"}); }
inline koszul::SectionData nonregular() { return section("nonregular", 2, {"x1", "x1"}, false); }

/// Random canonical monomial: small even exponents, odd exponents 0 or 1.
inline koszul::Monomial random_monomial(const koszul::DgAlgebraPresentation& P, std::mt19937& rng, int max_exp = 2) {
  koszul::Monomial m = P.unit_monomial();
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P.invertible() && *P.invertible() == i) {
      m[i] = std::uniform_int_distribution<int>(-max_exp, max_exp)(rng);
      continue;
    }
    m[i] = std::uniform_int_distribution<int>(0, P.generator(i).odd() ? 1 : max_exp)(rng);
  }
  return m;
}

inline koszul::AlgebraElement random_element(const koszul::DgAlgebraPresentation& P, std::mt19937& rng,
                                             int terms = 3) {
  koszul::AlgebraElement a;
  for (int k = 0; k < terms; ++k)
    a.add_term(random_monomial(P, rng), std::uniform_int_distribution<int>(-3, 3)(rng));
  return a;
}

inline std::vector<std::vector<koszul::Coeff>> random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols,
                                                             int density_pct = 40, int bound = 5) {
  std::vector<std::vector<koszul::Coeff>> out(rows, std::vector<koszul::Coeff>(cols, 0));
  std::uniform_int_distribution<int> pct(0, 99), val(-bound, bound);
  for (auto& row : out)
    for (auto& v : row)
      if (pct(rng) < density_pct) v = val(rng);
  return out;
}

}  // namespace testing_support
