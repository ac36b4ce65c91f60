#pragma once
/**
 * Free graded-commutative dg algebras over the polynomial ring R = k[x_1..x_n].
 *
 * A presentation lists generators with tridegree (h, w, d): cohomological
 * degree, internal weight, x-degree. Parity is h mod 2. The first
 * `base_count` generators are the x-variables: even, closed, of tridegree
 * (0, 0, weight). Monomials are exponent vectors in declaration order; odd
 * generators carry exponent 0 or 1, and one designated even generator may be
 * invertible (negative exponents allowed), which models A[t^-1].
 */

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"

namespace koszul {

struct Tridegree {
  int h = 0;
  int w = 0;
  int d = 0;

  friend Tridegree operator+(Tridegree a, Tridegree b) { return {a.h + b.h, a.w + b.w, a.d + b.d}; }
  friend Tridegree operator-(Tridegree a, Tridegree b) { return {a.h - b.h, a.w - b.w, a.d - b.d}; }
  friend Tridegree operator-(Tridegree a) { return {-a.h, -a.w, -a.d}; }
  friend Tridegree operator*(int k, Tridegree a) { return {k * a.h, k * a.w, k * a.d}; }
  friend auto operator<=>(const Tridegree&, const Tridegree&) = default;
  friend std::ostream& operator<<(std::ostream& os, Tridegree t) {
    return os << "(" << t.h << "," << t.w << "," << t.d << ")";
  }
};

inline std::string to_string(Tridegree t) {
  return "(" + std::to_string(t.h) + "," + std::to_string(t.w) + "," + std::to_string(t.d) + ")";
}

class PresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Parity { even, odd };

struct GeneratorSpec {
  std::string name;
  int h = 0;
  int w = 0;
  int d = 0;

  Parity parity() const { return (h % 2 == 0) ? Parity::even : Parity::odd; }
  bool odd() const { return parity() == Parity::odd; }
  Tridegree degree() const { return {h, w, d}; }
};

using Monomial = std::vector<int>;

struct SignedMonomial {
  Coeff coefficient = 0;
  Monomial word;
};

/// Finite linear combination of canonical monomials; zero coefficients are never stored.
class AlgebraElement {
 public:
  AlgebraElement() = default;

  static AlgebraElement monomial(Monomial m, Coeff c = 1) {
    AlgebraElement e;
    e.add_term(m, c);
    return e;
  }

  void add_term(const Monomial& m, Coeff c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second = checked_add(it->second, c);
      if (it->second == 0) terms_.erase(it);
    }
  }

  const std::map<Monomial, Coeff>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  AlgebraElement& operator+=(const AlgebraElement& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  AlgebraElement& operator-=(const AlgebraElement& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, checked_mul(-1, c));
    return *this;
  }
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(Coeff c, const AlgebraElement& a) {
    AlgebraElement r;
    for (const auto& [m, x] : a.terms_) r.add_term(m, checked_mul(c, x));
    return r;
  }
  friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

 private:
  std::map<Monomial, Coeff> terms_;
};

class DgAlgebraPresentation {
 public:
  /**
   * Validates and builds a presentation. `differential[i]` is d(generator i).
   * Checks: base generators even, closed, tridegree (0,0,>0); every d(g) is
   * homogeneous of tridegree deg(g) + (1,0,0); d^2 = 0 on generators; the
   * non-base weights allow finite enumeration by (h, w).
   */
  DgAlgebraPresentation(std::string name, std::vector<GeneratorSpec> generators, std::size_t base_count,
                        std::vector<AlgebraElement> differential, std::optional<std::size_t> invertible = {})
      : name_(std::move(name)),
        gens_(std::move(generators)),
        base_count_(base_count),
        diff_(std::move(differential)),
        invertible_(invertible) {
    validate();
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return gens_.size(); }
  std::size_t base_count() const { return base_count_; }
  std::size_t nonbase_count() const { return gens_.size() - base_count_; }
  const GeneratorSpec& generator(std::size_t i) const { return gens_.at(i); }
  const std::vector<GeneratorSpec>& generators() const { return gens_; }
  const AlgebraElement& generator_differential(std::size_t i) const { return diff_.at(i); }
  std::optional<std::size_t> invertible() const { return invertible_; }

  /// Sign of the weights of the non-base generators: +1, -1, or 0 if there are none of nonzero weight.
  int weight_sign() const { return weight_sign_; }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return i;
    throw PresentationError("unknown generator '" + name + "' in presentation " + name_);
  }

  std::vector<int> base_weights() const {
    std::vector<int> w;
    for (std::size_t i = 0; i < base_count_; ++i) w.push_back(gens_[i].d);
    return w;
  }

  Monomial unit_monomial() const { return Monomial(gens_.size(), 0); }
  AlgebraElement one() const { return AlgebraElement::monomial(unit_monomial()); }
  AlgebraElement generator_element(std::size_t i, Coeff c = 1) const {
    Monomial m = unit_monomial();
    m.at(i) = 1;
    return AlgebraElement::monomial(m, c);
  }

  Tridegree degree(const Monomial& m) const {
    Tridegree t;
    for (std::size_t i = 0; i < gens_.size(); ++i) t = t + m[i] * gens_[i].degree();
    return t;
  }

  int h_degree(const Monomial& m) const { return degree(m).h; }

  std::optional<Tridegree> degree(const AlgebraElement& a) const {
    std::optional<Tridegree> t;
    for (const auto& [m, c] : a.terms()) {
      Tridegree tm = degree(m);
      if (t && *t != tm) return std::nullopt;
      t = tm;
    }
    return t;
  }

  bool is_homogeneous(const AlgebraElement& a, Tridegree expected) const {
    for (const auto& [m, c] : a.terms())
      if (degree(m) != expected) return false;
    return true;
  }

  /**
   * Normal form of a raw word of generator indices with coefficient `coeff`:
   * the word is sorted into declaration order, picking up a sign for every
   * transposition of two odd generators. Returns nullopt if an odd generator
   * repeats.
   */
  std::optional<SignedMonomial> normalize_word(std::span<const std::size_t> word, Coeff coeff) const {
    Monomial m = unit_monomial();
    long inversions = 0;
    for (std::size_t a = 0; a < word.size(); ++a) {
      if (word[a] >= gens_.size()) throw PresentationError("generator index out of range");
      if (!gens_[word[a]].odd()) continue;
      for (std::size_t b = a + 1; b < word.size(); ++b)
        if (gens_[word[b]].odd() && word[b] < word[a]) ++inversions;
    }
    for (std::size_t g : word) {
      m[g] += 1;
      if (gens_[g].odd() && m[g] > 1) return std::nullopt;
    }
    return SignedMonomial{checked_mul(coeff, sign_of_parity(inversions)), std::move(m)};
  }

  std::optional<SignedMonomial> normalize_names(const std::vector<std::string>& word, Coeff coeff) const {
    std::vector<std::size_t> idx;
    for (const auto& n : word) idx.push_back(index_of(n));
    return normalize_word(idx, coeff);
  }

  /// Product of two canonical monomials with its Koszul sign, or nullopt if zero.
  std::optional<SignedMonomial> multiply_monomials(const Monomial& u, const Monomial& v) const {
    Monomial m(gens_.size());
    long inversions = 0;
    long odd_in_u_after = 0;  // odd generators of u with index > current
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].odd() && u[i]) ++odd_in_u_after;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (gens_[i].odd()) {
        if (u[i]) --odd_in_u_after;
        if (u[i] && v[i]) return std::nullopt;
        if (v[i]) inversions += odd_in_u_after;
      }
      m[i] = u[i] + v[i];
    }
    return SignedMonomial{sign_of_parity(inversions), std::move(m)};
  }

  AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) const {
    AlgebraElement r;
    for (const auto& [u, cu] : a.terms())
      for (const auto& [v, cv] : b.terms())
        if (auto p = multiply_monomials(u, v)) r.add_term(p->word, checked_mul(checked_mul(cu, cv), p->coefficient));
    return r;
  }

  /// d of a canonical monomial, by the graded Leibniz rule over its factors.
  AlgebraElement differential(const Monomial& m) const {
    AlgebraElement result;
    int prefix_h = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      if (m[i] == 0) continue;
      if (!diff_[i].is_zero()) {
        Monomial prefix = unit_monomial();
        Monomial suffix = unit_monomial();
        for (std::size_t k = 0; k < i; ++k) prefix[k] = m[k];
        for (std::size_t k = i + 1; k < gens_.size(); ++k) suffix[k] = m[k];
        Monomial power = unit_monomial();
        power[i] = m[i] - 1;  // d(g^e) = e g^(e-1) dg for even g; e = 1 for odd g
        AlgebraElement dpow = multiply(AlgebraElement::monomial(power, m[i]), diff_[i]);
        AlgebraElement term =
            multiply(multiply(AlgebraElement::monomial(prefix), dpow), AlgebraElement::monomial(suffix));
        result += sign_of_parity(prefix_h) * term;
      }
      prefix_h += m[i] * gens_[i].h;
    }
    return result;
  }

  AlgebraElement differential(const AlgebraElement& a) const {
    AlgebraElement r;
    for (const auto& [m, c] : a.terms()) r += c * differential(m);
    return r;
  }

  /**
   * Non-base monomials (x-exponents zero) of bidegree (h, w), in a
   * deterministic order.
   */
  std::vector<Monomial> nonbase_monomials(int h, int w) const {
    std::vector<Monomial> out;
    Monomial cur = unit_monomial();
    enumerate(base_count_, 0, 0, h, w, true, cur, out);
    return out;
  }

  /// Non-base monomials of weight w, any h. Requires no invertible generator.
  std::vector<Monomial> nonbase_monomials_of_weight(int w) const {
    if (invertible_) throw PresentationError("weight-only enumeration needs a presentation without inverses");
    std::vector<Monomial> out;
    Monomial cur = unit_monomial();
    enumerate(base_count_, 0, 0, 0, w, false, cur, out);
    return out;
  }

  /// Splits a monomial into its x-part (length base_count) and its non-base part.
  std::pair<std::vector<int>, Monomial> split(const Monomial& m) const {
    std::vector<int> x(m.begin(), m.begin() + static_cast<long>(base_count_));
    Monomial rest = m;
    std::fill(rest.begin(), rest.begin() + static_cast<long>(base_count_), 0);
    return {std::move(x), std::move(rest)};
  }

  /// Same generators and differential, with generator `index` made invertible.
  DgAlgebraPresentation with_inverse(std::size_t index, std::string new_name) const {
    return DgAlgebraPresentation(std::move(new_name), gens_, base_count_, diff_, index);
  }

  /// Same presentation with generator degrees replaced (differential terms kept).
  DgAlgebraPresentation regraded(std::string new_name, const std::vector<GeneratorSpec>& new_gens) const {
    return DgAlgebraPresentation(std::move(new_name), new_gens, base_count_, diff_, invertible_);
  }

 private:
  void validate() {
    if (diff_.size() != gens_.size()) throw PresentationError(name_ + ": differential size mismatch");
    if (base_count_ > gens_.size()) throw PresentationError(name_ + ": base_count exceeds generator count");
    for (std::size_t i = 0; i < base_count_; ++i) {
      const auto& g = gens_[i];
      if (g.h != 0 || g.w != 0 || g.d <= 0 || !diff_[i].is_zero())
        throw PresentationError(name_ + ": base generator " + g.name + " must be closed of tridegree (0,0,>0)");
    }
    for (std::size_t i = 0; i < gens_.size(); ++i)
      for (const auto& [m, c] : diff_[i].terms())
        if (m.size() != gens_.size()) throw PresentationError(name_ + ": malformed monomial in differential");
    if (invertible_) {
      std::size_t t = *invertible_;
      if (t < base_count_ || t >= gens_.size() || gens_[t].odd() || gens_[t].w == 0)
        throw PresentationError(name_ + ": invertible generator must be even, non-base, of nonzero weight");
      for (std::size_t i = base_count_; i < gens_.size(); ++i)
        if (i != t && !gens_[i].odd())
          throw PresentationError(name_ + ": with an inverse, the other non-base generators must be odd");
    }
    weight_sign_ = 0;
    for (std::size_t i = base_count_; i < gens_.size(); ++i) {
      const auto& g = gens_[i];
      if (g.w == 0) {
        if (!g.odd()) throw PresentationError(name_ + ": even generator " + g.name + " of weight 0");
        continue;
      }
      int s = g.w > 0 ? 1 : -1;
      if (weight_sign_ != 0 && s != weight_sign_)
        throw PresentationError(name_ + ": non-base generator weights of mixed sign");
      weight_sign_ = s;
    }
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      Tridegree expected = gens_[i].degree() + Tridegree{1, 0, 0};
      if (!is_homogeneous(diff_[i], expected))
        throw PresentationError(name_ + ": d(" + gens_[i].name + ") is not homogeneous of tridegree " +
                                to_string(expected));
    }
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!differential(diff_[i]).is_zero()) throw PresentationError(name_ + ": d^2 != 0 on " + gens_[i].name);
  }

  void enumerate(std::size_t pos, int cur_h, int cur_w, int h, int w, bool match_h, Monomial& cur,
                 std::vector<Monomial>& out) const {
    if (pos == gens_.size()) {
      if (invertible_) {
        const auto& t = gens_[*invertible_];
        int rem = w - cur_w;
        if (rem % t.w != 0) return;
        int k = rem / t.w;
        if (match_h && cur_h + k * t.h != h) return;
        cur[*invertible_] = k;
        out.push_back(cur);
        cur[*invertible_] = 0;
        return;
      }
      if (cur_w == w && (!match_h || cur_h == h)) out.push_back(cur);
      return;
    }
    if (invertible_ && pos == *invertible_) {
      enumerate(pos + 1, cur_h, cur_w, h, w, match_h, cur, out);
      return;
    }
    const auto& g = gens_[pos];
    if (g.odd()) {
      enumerate(pos + 1, cur_h, cur_w, h, w, match_h, cur, out);
      cur[pos] = 1;
      enumerate(pos + 1, cur_h + g.h, cur_w + g.w, h, w, match_h, cur, out);
      cur[pos] = 0;
      return;
    }
    // even, nonzero weight; without an inverse every non-base weight has sign weight_sign_
    int budget = weight_sign_ * (w - cur_w);
    int magnitude = g.w > 0 ? g.w : -g.w;
    for (int e = 0; e * magnitude <= budget; ++e) {
      cur[pos] = e;
      enumerate(pos + 1, cur_h + e * g.h, cur_w + e * g.w, h, w, match_h, cur, out);
    }
    cur[pos] = 0;
  }

  std::string name_;
  std::vector<GeneratorSpec> gens_;
  std::size_t base_count_;
  std::vector<AlgebraElement> diff_;
  std::optional<std::size_t> invertible_;
  int weight_sign_ = 0;
};

using AlgebraPtr = std::shared_ptr<const DgAlgebraPresentation>;

}  // namespace koszul
