#include <catch_amalgamated.hpp>

#include "koszul/oracle.hpp"
#include "support.hpp"

using namespace koszul;
using testing_support::section;

namespace {

Monomial word(const DgAlgebraPresentation& P, const std::vector<std::pair<std::string, int>>& powers) {
  Monomial m = P.unit_monomial();
  for (const auto& [name, e] : powers) m[P.index_of(name)] = e;
  return m;
}

AlgebraElement el(const DgAlgebraPresentation& P, const std::vector<std::pair<std::string, int>>& powers,
                  Coeff c = 1) {
  return AlgebraElement::monomial(word(P, powers), c);
}

}  // namespace

TEST_CASE("rationals stay canonical through the fast path and GMP spill") {
  RationalField Q;
  auto half = Q.inv(Q.from_int(2));
  auto x = Q.add(half, half);
  CHECK(x == Q.one());
  CHECK(x.is_small());
  CHECK(Q.to_string(Q.mul(Q.from_int(-6), Q.inv(Q.from_int(4)))) == "-3/2");
  CHECK(Q.to_string(Q.inv(Q.from_int(-3))) == "-1/3");

  auto big = Q.from_int(INT64_MAX);
  auto sq = Q.mul(big, big);
  CHECK_FALSE(sq.is_small());
  CHECK(sq.to_mpq() == mpq_class(mpz_class("85070591730234615847396907784232501249")));
  auto back = Q.mul(sq, Q.inv(big));
  CHECK(back.is_small());
  CHECK(back == big);
  CHECK(Q.is_zero(Q.sub(sq, sq)));
  CHECK(Q.from_int(INT64_MIN).to_mpq() == mpq_class(mpz_class("-9223372036854775808")));
  CHECK_THROWS_AS(Q.inv(Q.zero()), std::domain_error);
}

TEST_CASE("rational arithmetic agrees with GMP on random operands") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::int64_t> small(-50, 50);
  std::uniform_int_distribution<std::int64_t> wide(-(std::int64_t{1} << 62), std::int64_t{1} << 62);
  RationalField Q;
  for (int k = 0; k < 2000; ++k) {
    auto pick = [&] { return k % 3 == 0 ? wide(rng) : small(rng); };
    std::int64_t an = pick(), ad = pick(), bn = pick(), bd = pick();
    if (ad == 0 || bd == 0) continue;
    auto a = Q.mul(Q.from_int(an), Q.inv(Q.from_int(ad)));
    auto b = Q.mul(Q.from_int(bn), Q.inv(Q.from_int(bd)));
    mpq_class qa(mpz_class(std::to_string(an)), mpz_class(std::to_string(ad)));
    mpq_class qb(mpz_class(std::to_string(bn)), mpz_class(std::to_string(bd)));
    qa.canonicalize();
    qb.canonicalize();
    REQUIRE(a.to_mpq() == qa);
    CHECK(Q.add(a, b).to_mpq() == qa + qb);
    CHECK(Q.sub(a, b).to_mpq() == qa - qb);
    CHECK(Q.mul(a, b).to_mpq() == qa * qb);
    if (!Q.is_zero(b)) CHECK(Q.inv(b).to_mpq() == 1 / qb);
    CHECK((Q.add(a, b) == Q.from_rational(qa + qb)));
  }
}

TEST_CASE("prime field keeps representatives in [0, p)") {
  PrimeField F{1000003};
  CHECK(F.from_int(-1) == 1000002);
  CHECK(F.from_int(1000003) == 0);
  CHECK(F.mul(F.inv(12345), 12345) == 1);
  CHECK(F.from_rational(mpq_class(1, 2)) == F.inv(2));
  CHECK(is_prime(2));
  CHECK(is_prime(2147483647));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));
  CHECK_FALSE(is_prime(std::uint64_t{4294967297}));
  CHECK_THROWS(PrimeField{1000004});
}

TEST_CASE("checked integer coefficients refuse to overflow") {
  CHECK_THROWS_AS(checked_add(INT64_MAX, 1), OverflowError);
  CHECK_THROWS_AS(checked_mul(INT64_MAX / 2, 3), OverflowError);
  CHECK(checked_mul(-3, 4) == -12);
}

TEST_CASE("normalize_monomial signs and square-zero") {
  auto A = build_A(section("two", 2, {"x1", "x2"}));
  auto B = build_B(testing_support::point());
  CHECK_FALSE(B->normalize_names({"eps", "eps"}, 1));
  auto swapped = A->normalize_names({"xi2", "xi1"}, 1);
  REQUIRE(swapped);
  CHECK(swapped->coefficient == -1);
  CHECK(swapped->word == word(*A, {{"xi1", 1}, {"xi2", 1}}));
  auto even = A->normalize_names({"t", "xi1"}, 1);
  REQUIRE(even);
  CHECK(even->coefficient == 1);
  CHECK(even->word == word(*A, {{"xi1", 1}, {"t", 1}}));
  CHECK_THROWS_AS(A->normalize_names({"zeta"}, 1), PresentationError);
}

TEST_CASE("normalize_monomial is idempotent on canonical words") {
  auto A = build_A(testing_support::ci());
  std::mt19937 rng(3);
  for (int k = 0; k < 200; ++k) {
    Monomial m = testing_support::random_monomial(*A, rng);
    std::vector<std::size_t> w;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int e = 0; e < m[i]; ++e) w.push_back(i);
    auto n = A->normalize_word(w, 5);
    REQUIRE(n);
    CHECK(n->word == m);
    CHECK(n->coefficient == 5);
  }
}

TEST_CASE("multiply: unit, odd squares, anticommuting sums") {
  auto B = build_B(testing_support::point());
  auto A = build_A(section("two", 2, {"x1", "x2"}));
  auto x1y1 = el(*B, {{"x1", 1}}) + el(*B, {{"y1", 1}});
  CHECK(B->multiply(x1y1, B->one()) == x1y1);
  CHECK(A->multiply(el(*A, {{"xi1", 1}}), el(*A, {{"xi1", 1}})).is_zero());
  auto s = el(*A, {{"xi1", 1}}) + el(*A, {{"xi2", 1}});
  CHECK(A->multiply(s, s).is_zero());
}

TEST_CASE("multiply is graded-commutative and associative") {
  auto A = build_A(testing_support::fermat());
  auto B = build_B(section("mixed", 2, {"x1^2", "x1*x2"}));
  std::mt19937 rng(11);
  for (const auto& P : {A, B}) {
    for (int k = 0; k < 300; ++k) {
      auto u = testing_support::random_monomial(*P, rng);
      auto v = testing_support::random_monomial(*P, rng);
      auto a = AlgebraElement::monomial(u, 2), b = AlgebraElement::monomial(v, -3);
      const int ha = P->h_degree(u), hb = P->h_degree(v);
      CHECK(P->multiply(a, b) == sign_of_parity(static_cast<long>(ha) * hb) * P->multiply(b, a));
      auto c = testing_support::random_element(*P, rng);
      CHECK(P->multiply(P->multiply(a, b), c) == P->multiply(a, P->multiply(b, c)));
    }
  }
}

TEST_CASE("differentials of B and A") {
  auto axes = testing_support::axes();
  auto B = build_B(axes);
  CHECK(B->differential(el(*B, {{"eps", 1}})) == el(*B, {{"x1", 1}, {"x2", 1}, {"y1", 1}}));
  CHECK(B->differential(B->one()).is_zero());

  auto ci = section("two", 2, {"x1", "x2^2"});
  auto A = build_A(ci);
  auto d = A->differential(el(*A, {{"xi1", 1}, {"xi2", 1}}));
  auto expected = el(*A, {{"t", 1}, {"x1", 1}, {"xi2", 1}}) - el(*A, {{"t", 1}, {"x2", 2}, {"xi1", 1}});
  CHECK(d == expected);
  CHECK(A->differential(d).is_zero());
  CHECK(A->degree(d) == std::optional<Tridegree>(A->degree(word(*A, {{"xi1", 1}, {"xi2", 1}})) + Tridegree{1, 0, 0}));

  auto two = section("sum", 2, {"x1", "x2"});
  auto B2 = build_B(two);
  auto W = B2->differential(el(*B2, {{"eps", 1}}));
  CHECK(W == el(*B2, {{"x1", 1}, {"y1", 1}}) + el(*B2, {{"x2", 1}, {"y2", 1}}));
  CHECK(B2->is_homogeneous(W, {0, 1, 1}));
  CHECK(B2->differential(W).is_zero());
}

TEST_CASE("d o d = 0 on random elements") {
  std::mt19937 rng(5);
  for (const auto& sd : {testing_support::point(), testing_support::fermat(), testing_support::ci(),
                         testing_support::nonregular(), section("w", 2, {"x1^2*x2", "x2^3"}, true, {2, 1})}) {
    for (const auto& P : {build_A(sd), build_B(sd)}) {
      for (int k = 0; k < 200; ++k) {
        auto a = testing_support::random_element(*P, rng, 4);
        CHECK(P->differential(P->differential(a)).is_zero());
      }
    }
  }
}

TEST_CASE("presentations reject inhomogeneous differentials") {
  std::vector<GeneratorSpec> gens{{"x1", 0, 0, 1}, {"e", -1, 0, 2}};
  std::vector<AlgebraElement> diff(2);
  Monomial x = {1, 0};
  diff[1] = AlgebraElement::monomial(x);
  CHECK_THROWS_AS(DgAlgebraPresentation("bad", gens, 1, diff), PresentationError);
  diff[1] = AlgebraElement::monomial({2, 0});
  CHECK_NOTHROW(DgAlgebraPresentation("good", gens, 1, diff));
}

TEST_CASE("rank_and_kernel examples") {
  RationalField Q;
  auto id = rank_and_kernel(Q, from_dense(Q, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(id.rank == 3);
  CHECK(id.kernel.empty());
  auto zero = rank_and_kernel(Q, from_dense(Q, {{0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}}));
  CHECK(zero.rank == 0);
  CHECK(zero.kernel.size() == 5);
  auto m = rank_and_kernel(Q, from_dense(Q, {{1, 2}, {2, 4}}));
  CHECK(m.rank == 1);
  REQUIRE(m.kernel.size() == 1);
  const auto& z = m.kernel[0];
  REQUIRE(z.size() == 2);
  // proportional to (2, -1)
  CHECK(Q.add(z[0].second, Q.mul(Q.from_int(2), z[1].second)).is_zero());
}

TEST_CASE("rank over Q, over a large prime, and by Bareiss agree") {
  std::mt19937 rng(13);
  RationalField Q;
  PrimeField F{2147483629};
  for (int k = 0; k < 150; ++k) {
    std::size_t r = 1 + rng() % 12, c = 1 + rng() % 12;
    auto dense = testing_support::random_matrix(rng, r, c, 20 + static_cast<int>(rng() % 60));
    if (k % 5 == 0 && r > 2)
      for (std::size_t j = 0; j < c; ++j) dense[r - 1][j] = dense[0][j] * 3 - dense[1][j];
    auto rq = rank_and_kernel(Q, from_dense(Q, dense));
    auto rp = rank_and_kernel(F, from_dense(F, dense));
    std::vector<std::vector<mpz_class>> big(r, std::vector<mpz_class>(c));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) big[i][j] = static_cast<long>(dense[i][j]);
    CHECK(rq.rank == rp.rank);
    CHECK(rq.rank == oracle::bareiss_rank(big));
    CHECK(rq.rank + rq.kernel.size() == c);
  }
}
