#pragma once

#include "confalg/exact/rational.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace confalg {

// The fixed, ordered symbol universe: the translation operator and the
// three formal parameters used by brackets and the gc calculus.
enum class Sym : std::uint8_t { Del = 0, Lambda = 1, Mu = 2, Alpha = 3 };
inline constexpr std::size_t kNumSyms = 4;

inline constexpr std::array<const char*, kNumSyms> kSymNames = {"del", "lambda", "mu", "alpha"};

inline const char* sym_name(Sym s) { return kSymNames[static_cast<std::size_t>(s)]; }

using Exponents = std::array<std::uint16_t, kNumSyms>;

// Sparse multivariate polynomial in del, lambda, mu, alpha over Q.
// Zero coefficients are never stored.
class ParamPoly {
 public:
  using TermMap = std::map<Exponents, Rational>;

  ParamPoly() = default;
  ParamPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) terms_.emplace(Exponents{}, c);
  }
  ParamPoly(long c) : ParamPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)

  static ParamPoly var(Sym s, unsigned power = 1) {
    Exponents e{};
    e[static_cast<std::size_t>(s)] = static_cast<std::uint16_t>(power);
    return monomial(e, Rational(1));
  }
  static ParamPoly del(unsigned power = 1) { return var(Sym::Del, power); }
  static ParamPoly lambda(unsigned power = 1) { return var(Sym::Lambda, power); }
  static ParamPoly mu(unsigned power = 1) { return var(Sym::Mu, power); }
  static ParamPoly alpha(unsigned power = 1) { return var(Sym::Alpha, power); }

  static ParamPoly monomial(const Exponents& e, const Rational& c) {
    ParamPoly p;
    if (c != 0) p.terms_.emplace(e, c);
    return p;
  }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{});
  }
  Rational constant_term() const {
    auto it = terms_.find(Exponents{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool has(Sym s) const { return degree(s) > 0; }

  // Degree in one symbol; -1 for the zero polynomial.
  int degree(Sym s) const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[static_cast<std::size_t>(s)]));
    return d;
  }
  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
      int t = 0;
      for (auto x : e) t += x;
      d = std::max(d, t);
    }
    return d;
  }

  ParamPoly& operator+=(const ParamPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  ParamPoly& operator-=(const ParamPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  ParamPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [e, c] : terms_) c *= s;
    }
    return *this;
  }
  ParamPoly& operator*=(const ParamPoly& o) { return *this = *this * o; }

  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator-(ParamPoly a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }
  friend ParamPoly operator*(ParamPoly a, const Rational& s) { return a *= s; }
  friend ParamPoly operator*(const Rational& s, ParamPoly a) { return a *= s; }
  friend ParamPoly operator*(ParamPoly a, long s) { return a *= Rational(s); }
  friend ParamPoly operator*(long s, ParamPoly a) { return a *= Rational(s); }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
    ParamPoly r;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e;
        for (std::size_t i = 0; i < kNumSyms; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

  ParamPoly pow(unsigned n) const {
    ParamPoly r(1);
    for (unsigned i = 0; i < n; ++i) r *= *this;
    return r;
  }

  // Simultaneous substitution; symbols mapped to nullopt stay put.
  ParamPoly subs(const std::array<std::optional<ParamPoly>, kNumSyms>& images) const {
    std::array<std::vector<ParamPoly>, kNumSyms> powers;
    auto power_of = [&](std::size_t s, unsigned k) -> const ParamPoly& {
      auto& v = powers[s];
      if (v.empty()) v.emplace_back(1);
      while (v.size() <= k) v.push_back(v.back() * *images[s]);
      return v[k];
    };
    ParamPoly r;
    for (const auto& [e, c] : terms_) {
      Exponents kept{};
      ParamPoly t(c);
      for (std::size_t s = 0; s < kNumSyms; ++s) {
        if (images[s]) {
          if (e[s] > 0) t = t * power_of(s, e[s]);
        } else {
          kept[s] = e[s];
        }
      }
      r += t * monomial(kept, Rational(1));
    }
    return r;
  }
  ParamPoly subs(Sym s, const ParamPoly& v) const {
    std::array<std::optional<ParamPoly>, kNumSyms> images;
    images[static_cast<std::size_t>(s)] = v;
    return subs(images);
  }

  // Coefficient of s^k, as a polynomial in the remaining symbols.
  ParamPoly coeff(Sym s, unsigned k) const {
    ParamPoly r;
    const auto i = static_cast<std::size_t>(s);
    for (const auto& [e, c] : terms_) {
      if (e[i] == k) {
        Exponents f = e;
        f[i] = 0;
        r.terms_.emplace(f, c);
      }
    }
    return r;
  }
  std::vector<ParamPoly> coefficients_in(Sym s) const {
    std::vector<ParamPoly> out(static_cast<std::size_t>(std::max(0, degree(s) + 1)));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = coeff(s, static_cast<unsigned>(k));
    return out;
  }

  Rational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Rational mag = abs(c);
      bool neg = c < 0;
      if (first) {
        if (neg) os << "-";
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      bool unit = e == Exponents{};
      if (unit || mag != 1) {
        os << mag.get_str();
        if (!unit) os << "*";
      }
      bool need_star = false;
      for (std::size_t s = 0; s < kNumSyms; ++s) {
        if (e[s] == 0) continue;
        if (need_star) os << "*";
        os << kSymNames[s];
        if (e[s] > 1) os << "^" << e[s];
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  void add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  TermMap terms_;
};

// Convenience: the polynomial obtained by replacing del with del + shift.
inline ParamPoly shift_del(const ParamPoly& p, const ParamPoly& shift) {
  if (shift.is_zero() || !p.has(Sym::Del)) return p;
  return p.subs(Sym::Del, ParamPoly::del() + shift);
}

}  // namespace confalg
