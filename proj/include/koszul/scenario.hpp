#pragma once
/**
 * Scenario files: JSON documents describing a section and what to verify.
 *
 *   {
 *     "id": "fermat", "n": 3, "x_weights": [1, 1, 1],
 *     "r": 1, "s": ["x1^3 + x2^3 + x3^3"], "regular": true,
 *     "window": {"h": [-6, 4], "w": [-8, 8], "d": [0, 10]},
 *     "checks": ["C1", "C2"], "field": "rational",
 *     "caps": {"basis": 200000}
 *   }
 *
 * Only id, n and s are required. Polynomial grammar:
 *   expr   := term (('+' | '-') term)*
 *   term   := unary ('*' unary)*
 *   unary  := '-' unary | power
 *   power  := atom ('^' integer)?
 *   atom   := integer | 'x' index | '(' expr ')'
 */

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <sstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "koszul.hpp"
#include "window.hpp"

namespace koszul {

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& msg, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg
                                    : msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

inline const std::vector<std::string>& all_check_names() {
  static const std::vector<std::string> names{"C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10"};
  return names;
}

struct FieldSpec {
  std::uint64_t prime = 0;  // 0 means the rationals
  bool rational() const { return prime == 0; }
  std::string name() const { return rational() ? "rational" : "fp:" + std::to_string(prime); }
};

inline constexpr std::uint64_t kMinPrime = std::uint64_t{1} << 20;

inline FieldSpec parse_field(const std::string& text) {
  if (text == "rational") return {};
  if (text.rfind("fp:", 0) == 0) {
    const std::string digits = text.substr(3);
    if (digits.empty() || digits.size() > 19 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ScenarioError("field modulus must be a decimal integer: '" + text + "'");
    std::uint64_t p = std::stoull(digits);
    if (p <= kMinPrime) throw ScenarioError("field modulus must exceed 2^20: " + digits);
    if (!is_prime(p)) throw ScenarioError("field modulus is not prime: " + digits);
    return {p};
  }
  throw ScenarioError("unknown field '" + text + "' (expected rational or fp:<p>)");
}

struct Scenario {
  SectionData section;
  Window window{{-6, 4}, {-8, 8}, {0, 10}};
  FieldSpec field;
  std::vector<std::string> checks = all_check_names();
  std::size_t basis_cap = kDefaultBasisCap;
  std::size_t oracle_cap = kDefaultBasisCap;
};

/// Recursive-descent parser for polynomials in x1..xn with integer coefficients.
class PolynomialParser {
 public:
  PolynomialParser(std::string text, int n) : s_(std::move(text)), n_(n) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

  /// 0-based offset of the last error.
  std::size_t position() const { return pos_; }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ScenarioError(msg, 1, static_cast<int>(pos_) + 1); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static Polynomial add(Polynomial a, const Polynomial& b, Coeff sign) {
    for (const auto& [m, c] : b) {
      Coeff v = checked_add(a[m], checked_mul(sign, c));
      if (v == 0)
        a.erase(m);
      else
        a[m] = v;
    }
    return a;
  }

  static Polynomial mul(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [m1, c1] : a)
      for (const auto& [m2, c2] : b) {
        XExponents m = m1;
        for (std::size_t i = 0; i < m.size(); ++i) m[i] += m2[i];
        Coeff v = checked_add(out[m], checked_mul(c1, c2));
        if (v == 0)
          out.erase(m);
        else
          out[m] = v;
      }
    return out;
  }

  Polynomial constant(Coeff c) const {
    Polynomial p;
    if (c != 0) p[XExponents(static_cast<std::size_t>(n_), 0)] = c;
    return p;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+'))
        p = add(std::move(p), term(), 1);
      else if (eat('-'))
        p = add(std::move(p), term(), -1);
      else
        return p;
    }
  }

  Polynomial term() {
    Polynomial p = unary();
    while (eat('*')) p = mul(p, unary());
    return p;
  }

  Polynomial unary() {
    if (eat('-')) return add({}, unary(), -1);
    return power();
  }

  Polynomial power() {
    Polynomial base = atom();
    if (!eat('^')) return base;
    skip();
    Coeff e = integer("exponent");
    if (e > 64) fail("exponent too large");
    Polynomial out = constant(1);
    for (Coeff i = 0; i < e; ++i) out = mul(out, base);
    return out;
  }

  Coeff integer(const char* what) {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    if (pos_ - start > 18) fail("integer literal too large");
    return std::stoll(s_.substr(start, pos_ - start));
  }

  Polynomial atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of polynomial");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return constant(integer("integer"));
    if (c == 'x') {
      std::size_t at = pos_;
      ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected variable index after 'x'");
      Coeff k = integer("variable index");
      if (k < 1 || k > n_) {
        pos_ = at;
        fail("variable x" + std::to_string(k) + " out of range (n = " + std::to_string(n_) + ")");
      }
      XExponents m(static_cast<std::size_t>(n_), 0);
      m[static_cast<std::size_t>(k - 1)] = 1;
      return Polynomial{{m, 1}};
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  int n_;
  std::size_t pos_ = 0;
};

inline Polynomial parse_polynomial(const std::string& text, int n) { return PolynomialParser(text, n).parse(); }

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t offset) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

/// Offset of the first occurrence of a JSON string literal in the raw text.
inline std::optional<std::size_t> find_literal(const std::string& text, const std::string& value) {
  auto at = text.find(nlohmann::json(value).dump());
  if (at == std::string::npos) return std::nullopt;
  return at + 1;
}

inline Range parse_range(const nlohmann::json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ScenarioError("window." + key + " must be [lo, hi] integers");
  Range r{j[0].get<int>(), j[1].get<int>()};
  if (r.empty()) throw ScenarioError("window." + key + " is empty");
  return r;
}

}  // namespace detail

inline Window parse_window_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ScenarioError("window must be an object");
  Window w{{-6, 4}, {-8, 8}, {0, 10}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "h")
      w.h = detail::parse_range(it.value(), "h");
    else if (it.key() == "w")
      w.w = detail::parse_range(it.value(), "w");
    else if (it.key() == "d")
      w.d = detail::parse_range(it.value(), "d");
    else
      throw ScenarioError("unknown window key '" + it.key() + "'");
  }
  return w;
}

/// Window override syntax of the command line: h:a..b,w:a..b,d:a..b (any subset, any order).
inline Window parse_window_override(const std::string& text, Window base) {
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    auto colon = part.find(':');
    auto dots = part.find("..");
    if (colon == std::string::npos || dots == std::string::npos || dots < colon)
      throw ScenarioError("window part '" + part + "' is not of the form k:a..b");
    std::string key = part.substr(0, colon);
    Range r;
    try {
      std::size_t used = 0;
      std::string lo = part.substr(colon + 1, dots - colon - 1), hi = part.substr(dots + 2);
      r.lo = std::stoi(lo, &used);
      if (used != lo.size()) throw std::invalid_argument(lo);
      r.hi = std::stoi(hi, &used);
      if (used != hi.size()) throw std::invalid_argument(hi);
    } catch (const std::logic_error&) {
      throw ScenarioError("window part '" + part + "' has a malformed bound");
    }
    if (r.empty()) throw ScenarioError("window part '" + part + "' is empty");
    if (key == "h")
      base.h = r;
    else if (key == "w")
      base.w = r;
    else if (key == "d")
      base.d = r;
    else
      throw ScenarioError("unknown window axis '" + key + "'");
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return base;
}

inline std::vector<std::string> parse_check_list(const std::vector<std::string>& names) {
  if (names.empty()) throw ScenarioError("check list is empty");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (std::find(all_check_names().begin(), all_check_names().end(), n) == all_check_names().end())
      throw ScenarioError("unknown check '" + n + "'");
    seen.insert(n);
  }
  std::vector<std::string> out;
  for (const auto& n : all_check_names())
    if (seen.count(n)) out.push_back(n);
  return out;
}

/// "C1,C4,C2" -> canonical order.
inline std::vector<std::string> parse_check_list(const std::string& text) {
  std::vector<std::string> names;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw ScenarioError("empty entry in check list '" + text + "'");
    names.push_back(item);
  }
  return parse_check_list(names);
}

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    auto colon = what.rfind(": ");
    throw ScenarioError("syntax error: " + (colon == std::string::npos ? what : what.substr(colon + 2)), line, col);
  }
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object", 1, 1);

  static const std::set<std::string> known{"id",     "n",      "x_weights", "r",     "s",
                                           "regular", "window", "checks",    "field", "caps"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) {
      auto at = detail::find_literal(text, it.key());
      auto [line, col] = at ? detail::line_column(text, *at - 1) : std::pair{0, 0};
      throw ScenarioError("unknown key '" + it.key() + "'", line, col);
    }

  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ScenarioError(std::string("missing required key '") + key + "'");
    return j.at(key);
  };

  Scenario sc;
  SectionData& sd = sc.section;
  try {
    const auto& id = require("id");
    if (!id.is_string() || id.get<std::string>().empty()) throw ScenarioError("id must be a non-empty string");
    sd.id = id.get<std::string>();
    const auto& n = require("n");
    if (!n.is_number_integer() || n.get<int>() < 0 || n.get<int>() > 16)
      throw ScenarioError("n must be an integer in [0, 16]");
    sd.n = n.get<int>();
    if (j.contains("x_weights")) {
      const auto& xw = j.at("x_weights");
      if (!xw.is_array()) throw ScenarioError("x_weights must be an array");
      for (const auto& v : xw) {
        if (!v.is_number_integer() || v.get<int>() <= 0) throw ScenarioError("x_weights must be positive integers");
        sd.x_weights.push_back(v.get<int>());
      }
      if (static_cast<int>(sd.x_weights.size()) != sd.n) throw ScenarioError("x_weights must list n weights");
    } else {
      sd.x_weights.assign(static_cast<std::size_t>(sd.n), 1);
    }
    const auto& s = require("s");
    if (!s.is_array()) throw ScenarioError("s must be an array of polynomial strings");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_string()) throw ScenarioError("s[" + std::to_string(i) + "] must be a string");
      const std::string poly = s[i].get<std::string>();
      Polynomial p;
      try {
        p = parse_polynomial(poly, sd.n);
      } catch (const ScenarioError& e) {
        auto at = detail::find_literal(text, poly);
        std::string msg = "s[" + std::to_string(i) + "]: " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2);
        if (!at) throw ScenarioError(msg);
        auto [line, col] = detail::line_column(text, *at + static_cast<std::size_t>(e.column() - 1));
        throw ScenarioError(msg, line, col);
      }
      if (!p.empty()) {
        auto deg = weighted_degree(p, sd.x_weights);
        if (!deg) throw ScenarioError("s[" + std::to_string(i) + "] = '" + poly + "' is not homogeneous under x_weights");
        if (*deg == 0) throw ScenarioError("s[" + std::to_string(i) + "] = '" + poly + "' is a nonzero constant");
      }
      sd.s.push_back(std::move(p));
    }
    if (j.contains("r")) {
      const auto& r = j.at("r");
      if (!r.is_number_integer() || r.get<long>() != static_cast<long>(sd.s.size()))
        throw ScenarioError("r must equal the number of polynomials in s");
    }
    if (j.contains("regular")) {
      if (!j.at("regular").is_boolean()) throw ScenarioError("regular must be a boolean");
      sd.regular_claimed = j.at("regular").get<bool>();
    }
    if (j.contains("window")) sc.window = parse_window_json(j.at("window"));
    if (j.contains("checks")) {
      const auto& c = j.at("checks");
      if (!c.is_array()) throw ScenarioError("checks must be an array of names");
      std::vector<std::string> names;
      for (const auto& v : c) {
        if (!v.is_string()) throw ScenarioError("checks must be an array of names");
        names.push_back(v.get<std::string>());
      }
      sc.checks = parse_check_list(names);
    }
    if (j.contains("field")) {
      if (!j.at("field").is_string()) throw ScenarioError("field must be a string");
      sc.field = parse_field(j.at("field").get<std::string>());
    }
    if (j.contains("caps")) {
      const auto& caps = j.at("caps");
      if (!caps.is_object()) throw ScenarioError("caps must be an object");
      for (auto it = caps.begin(); it != caps.end(); ++it) {
        if (!it.value().is_number_unsigned() || it.value().get<std::size_t>() == 0)
          throw ScenarioError("caps." + it.key() + " must be a positive integer");
        if (it.key() == "basis")
          sc.basis_cap = it.value().get<std::size_t>();
        else if (it.key() == "oracle")
          sc.oracle_cap = it.value().get<std::size_t>();
        else
          throw ScenarioError("unknown cap '" + it.key() + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("invalid value: ") + e.what());
  }
  sd.validate();
  return sc;
}

}  // namespace koszul
