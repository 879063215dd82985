#pragma once

#include "confalg/exact/param_poly.hpp"
#include "confalg/exact/rational.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace confalg {

// Dense univariate polynomial over Q in the translation operator del.
// Used by the Hermite reduction of submodules; the coefficient vector never
// carries trailing zeros.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  UPoly(const Rational& c) {  // NOLINT(google-explicit-constructor)
    if (c != 0) c_.push_back(c);
  }

  static UPoly x(unsigned power = 1) {
    std::vector<Rational> c(power + 1);
    c[power] = 1;
    return UPoly(std::move(c));
  }

  static UPoly from_param(const ParamPoly& p) {
    std::vector<Rational> c;
    for (const auto& [e, v] : p.terms()) {
      for (std::size_t s = 1; s < kNumSyms; ++s) {
        if (e[s] != 0) throw std::invalid_argument("expected a polynomial in del only: " + p.str());
      }
      if (c.size() <= e[0]) c.resize(e[0] + 1u);
      c[e[0]] = v;
    }
    return UPoly(std::move(c));
  }

  ParamPoly to_param() const {
    ParamPoly p;
    for (std::size_t k = 0; k < c_.size(); ++k) p += ParamPoly::del(static_cast<unsigned>(k)) * c_[k];
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& lead() const { return c_.back(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

  UPoly& operator+=(const UPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  UPoly& operator-=(const UPoly& o) {
    if (c_.size() < o.c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return UPoly(std::move(c));
  }
  friend UPoly operator*(UPoly a, const Rational& s) {
    for (auto& x : a.c_) x *= s;
    a.trim();
    return a;
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  // Euclidean division: *this = q * d + r with deg r < deg d.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    std::vector<Rational> r = c_;
    std::vector<Rational> q;
    const int dd = d.degree();
    if (degree() >= dd) q.resize(static_cast<std::size_t>(degree() - dd + 1));
    for (int k = degree(); k >= dd; --k) {
      const Rational& top = r[static_cast<std::size_t>(k)];
      if (top == 0) continue;
      Rational f = top / d.lead();
      q[static_cast<std::size_t>(k - dd)] = f;
      for (int i = 0; i <= dd; ++i) r[static_cast<std::size_t>(k - dd + i)] -= f * d.c_[static_cast<std::size_t>(i)];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }

  UPoly monic() const {
    if (is_zero()) return {};
    return *this * (Rational(1) / lead());
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<Rational> c_;
};

}  // namespace confalg
