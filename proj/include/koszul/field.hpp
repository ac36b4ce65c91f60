#pragma once
/**
 * Exact scalars: checked 64-bit integer coefficients for the algebra layer,
 * and the two field policies (rationals, prime fields) used by the linear
 * algebra.
 */

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace koszul {

/// Coefficient type of algebra elements and module differentials.
using Coeff = std::int64_t;

class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline Coeff checked_add(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("coefficient overflow in addition");
  return r;
}

inline Coeff checked_mul(Coeff a, Coeff b) {
  Coeff r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("coefficient overflow in multiplication");
  return r;
}

inline int sign_of_parity(long k) { return (k % 2 == 0) ? 1 : -1; }

/**
 * A rational number. Values whose reduced numerator and denominator fit in
 * 64 bits are stored inline; anything larger lives in a GMP rational. The
 * representation is canonical, so equal numbers compare equal field-wise.
 */
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) {
    if (n == INT64_MIN)
      big_ = std::make_unique<mpq_class>(mpz_from(n), 1);
    else
      n_ = n;
  }
  explicit Rational(const mpq_class& q) { assign(q); }
  Rational(const Rational& o) : n_(o.n_), d_(o.d_), big_(o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr) {}
  Rational(Rational&&) noexcept = default;
  Rational& operator=(const Rational& o) {
    if (this != &o) {
      n_ = o.n_;
      d_ = o.d_;
      big_ = o.big_ ? std::make_unique<mpq_class>(*o.big_) : nullptr;
    }
    return *this;
  }
  Rational& operator=(Rational&&) noexcept = default;

  bool is_zero() const { return big_ ? sgn(*big_) == 0 : n_ == 0; }
  bool is_small() const { return !big_; }

  mpq_class to_mpq() const {
    if (big_) return *big_;
    return mpq_class(mpz_from(n_), mpz_from(d_));
  }
  std::string str() const { return big_ ? big_->get_str() : to_mpq().get_str(); }

  friend bool operator==(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
    return a.to_mpq() == b.to_mpq();
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.d_ == 1 && b.d_ == 1) {
        std::int64_t r;
        if (!__builtin_add_overflow(a.n_, b.n_, &r)) return Rational(r);
      }
      __int128 n = static_cast<__int128>(a.n_) * b.d_ + static_cast<__int128>(b.n_) * a.d_;
      __int128 d = static_cast<__int128>(a.d_) * b.d_;
      if (auto r = reduced(n, d)) return std::move(*r);
    }
    return Rational(a.to_mpq() + b.to_mpq());
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
      if (a.d_ == 1 && b.d_ == 1) {
        std::int64_t r;
        if (!__builtin_mul_overflow(a.n_, b.n_, &r)) return Rational(r);
      }
      if (auto r = reduced(static_cast<__int128>(a.n_) * b.n_, static_cast<__int128>(a.d_) * b.d_))
        return std::move(*r);
    }
    return Rational(a.to_mpq() * b.to_mpq());
  }

  Rational operator-() const {
    if (big_) return Rational(mpq_class(-*big_));
    Rational r;
    r.n_ = -n_;
    r.d_ = d_;
    return r;
  }

  Rational inverse() const {
    if (is_zero()) throw std::domain_error("division by zero");
    if (big_) return Rational(mpq_class(1 / *big_));
    Rational r;
    r.n_ = n_ < 0 ? -d_ : d_;
    r.d_ = n_ < 0 ? -n_ : n_;
    return r;
  }

 private:
  static mpz_class mpz_from(std::int64_t v) {
    mpz_class z;
    mpz_set_si(z.get_mpz_t(), static_cast<long>(v));
    return z;
  }

  void assign(const mpq_class& q) {
    if (mpz_fits_slong_p(q.get_num_mpz_t()) && mpz_fits_slong_p(q.get_den_mpz_t()) &&
        q.get_num().get_si() != INT64_MIN) {
      n_ = q.get_num().get_si();
      d_ = q.get_den().get_si();
      big_.reset();
    } else {
      big_ = std::make_unique<mpq_class>(q);
    }
  }

  static unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b != 0) {
      if ((a >> 64) == 0 && (b >> 64) == 0) return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
      auto t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  // n / d with d > 0, if the reduced fraction fits inline.
  static std::optional<Rational> reduced(__int128 n, __int128 d) {
    if (n == 0) return Rational(0);
    unsigned __int128 un = n < 0 ? static_cast<unsigned __int128>(-n) : static_cast<unsigned __int128>(n);
    auto g = gcd128(un, static_cast<unsigned __int128>(d));
    un /= g;
    d /= static_cast<__int128>(g);
    if (un > static_cast<unsigned __int128>(INT64_MAX) || d > INT64_MAX) return std::nullopt;
    Rational r;
    r.n_ = n < 0 ? -static_cast<std::int64_t>(un) : static_cast<std::int64_t>(un);
    r.d_ = static_cast<std::int64_t>(d);
    return r;
  }

  std::int64_t n_ = 0;
  std::int64_t d_ = 1;  // > 0, coprime to n_
  std::unique_ptr<mpq_class> big_;
};

/// The rational numbers.
struct RationalField {
  using value_type = Rational;

  value_type zero() const { return value_type(0); }
  value_type one() const { return value_type(1); }
  value_type from_int(Coeff c) const { return value_type(c); }
  value_type from_rational(const mpq_class& q) const { return value_type(q); }
  bool is_zero(const value_type& a) const { return a.is_zero(); }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a + (-b); }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type inv(const value_type& a) const { return a.inverse(); }
  std::string name() const { return "rational"; }
  std::string to_string(const value_type& a) const { return a.str(); }
};

/// Checked int64 arithmetic in the field-policy shape; used for exact products over Z.
struct IntegerRing {
  using value_type = Coeff;
  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(Coeff c) const { return c; }
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const { return checked_add(a, b); }
  value_type sub(value_type a, value_type b) const { return checked_add(a, checked_mul(-1, b)); }
  value_type mul(value_type a, value_type b) const { return checked_mul(a, b); }
  value_type neg(value_type a) const { return checked_mul(-1, a); }
  std::string name() const { return "integer"; }
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// The prime field F_p; elements are canonical representatives in [0, p).
struct PrimeField {
  using value_type = std::uint64_t;
  std::uint64_t p;

  explicit PrimeField(std::uint64_t prime) : p(prime) {
    if (!is_prime(prime)) throw std::invalid_argument("modulus " + std::to_string(prime) + " is not prime");
  }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(Coeff c) const {
    auto m = static_cast<Coeff>(p);
    Coeff r = c % m;
    if (r < 0) r += m;
    return static_cast<value_type>(r);
  }
  value_type from_rational(const mpq_class& q) const {
    mpz_class num = q.get_num() % mpz_class(static_cast<unsigned long>(p));
    mpz_class den = q.get_den() % mpz_class(static_cast<unsigned long>(p));
    if (num < 0) num += static_cast<unsigned long>(p);
    if (den == 0) throw std::domain_error("denominator vanishes modulo p");
    return mul(num.get_ui(), inv(den.get_ui()));
  }
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const {
    value_type r = a + b;
    return r >= p ? r - p : r;
  }
  value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p - b; }
  value_type mul(value_type a, value_type b) const { return mulmod(a, b, p); }
  value_type neg(value_type a) const { return a == 0 ? 0 : p - a; }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("division by zero");
    return powmod(a, p - 2, p);
  }
  std::string name() const { return "fp:" + std::to_string(p); }
  std::string to_string(value_type a) const { return std::to_string(a); }
};

}  // namespace koszul
