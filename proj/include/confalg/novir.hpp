#pragma once

#include "confalg/exact/laurent.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace confalg {

namespace detail {

// Coefficients of e^x / u(x)^2 through x^n, where (e^{x/2} - 1)^2 = (x/2)^2 u(x)^2.
inline std::vector<Rational> exp_over_u_squared(long n) {
  const std::size_t len = static_cast<std::size_t>(n + 1);
  std::vector<Rational> u(len), inv(len), e(len);
  for (std::size_t k = 0; k < len; ++k) {
    u[k] = power(make_rational(1, 2), static_cast<unsigned>(k)) / factorial(static_cast<unsigned>(k + 1));
    e[k] = Rational(1) / factorial(static_cast<unsigned>(k));
  }
  inv[0] = 1;
  for (std::size_t k = 1; k < len; ++k) {
    Rational s = 0;
    for (std::size_t j = 1; j <= k; ++j) s += u[j] * inv[k - j];
    inv[k] = -s;
  }
  auto mul = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
    std::vector<Rational> r(len);
    for (std::size_t i = 0; i < len; ++i) {
      for (std::size_t j = 0; i + j < len; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  };
  return mul(e, mul(inv, inv));
}

}  // namespace detail

// a(del, z) = del^2 e^{z del} / (2 (e^{z del/2} - 1)^2) - (c del^2 / 8)(1 + e^{z del}),
// known through z^window.
inline LaurentWindow novir_a(const Rational& c, long window) {
  if (window < 0) throw std::invalid_argument("novir: window must be non-negative");
  const auto w = detail::exp_over_u_squared(window + 2);
  std::map<long, ParamPoly> terms;
  for (long n = 0; n <= window + 2; ++n) terms[n - 2] = ParamPoly::del(static_cast<unsigned>(n)) * Rational(2 * w[n]);
  LaurentWindow pole_part = LaurentWindow::series(Axis{-2, window, true, false}, terms);
  LaurentWindow tail = (LaurentWindow::constant(ParamPoly(1)) + truncated_exp(ParamPoly::del(), window)).scaled(
      ParamPoly::del(2) * Rational(c / 8));
  return pole_part - tail;
}

// Left side minus right side of the differential equation obtained at lambda = -del/2.
inline LaurentWindow novir_diffeq_residual(const Rational& c, long window) {
  const long order = window + 4;
  LaurentWindow a = novir_a(c, order);
  LaurentWindow em = truncated_exp(ParamPoly::del() * make_rational(-1, 2), order);
  LaurentWindow ep = truncated_exp(ParamPoly::del(), order);
  LaurentWindow one = LaurentWindow::constant(ParamPoly(1));
  LaurentWindow r = (em - one) * a.derivative() - (em * a).scaled(ParamPoly::del()) -
                    (ep + em).scaled(ParamPoly::del(3) * Rational(c / 8));
  return r.truncated_above(window);
}

// Left side minus right side of the identity on the L-coefficient of [L lambda Y(L,z)L].
inline LaurentWindow novir_virl_residual(const Rational& c, long window) {
  const long order = window + 4;
  LaurentWindow a = novir_a(c, order);
  LaurentWindow el = truncated_exp(ParamPoly::lambda(), order);
  LaurentWindow ep = truncated_exp(ParamPoly::del(), order);
  LaurentWindow one = LaurentWindow::constant(ParamPoly(1));
  const ParamPoly lam = ParamPoly::lambda();
  LaurentWindow shifted_a =
      a.map_coefficients([](const ParamPoly& p) { return p.subs(Sym::Del, ParamPoly::del() + ParamPoly::lambda()); });
  LaurentWindow lhs = (el - one) * a.derivative() + (el + one).scaled(lam * 2) * a + a.scaled(ParamPoly::del());
  LaurentWindow rhs = (el + ep).scaled(lam.pow(3) * Rational(-c)) + shifted_a.scaled(ParamPoly::del() + lam * 2);
  return (lhs - rhs).truncated_above(window);
}

struct NovirResult {
  Rational c;
  long window = 0;
  bool diffeq_zero = false;
  std::optional<long> diffeq_first_nonzero;
  bool virl_fails = false;
  long virl_z_order = 0;
  unsigned virl_lambda_power = 0;
  ParamPoly virl_coefficient;  // coefficient of lambda^p z^e, a polynomial in del
  std::string singular_part;
  std::string note;
};

inline NovirResult novir_verify(const Rational& c, long window = 8) {
  if (window < 4) throw std::invalid_argument("novir: window must be at least 4");
  NovirResult r;
  r.c = c;
  r.window = window;
  LaurentWindow a = novir_a(c, window);
  r.singular_part = a.truncated_above(-1).str();
  LaurentWindow d = novir_diffeq_residual(c, window);
  r.diffeq_zero = d.is_zero();
  if (!r.diffeq_zero) r.diffeq_first_nonzero = d.first_nonzero()->at(0);
  LaurentWindow v = novir_virl_residual(c, window);
  if (auto k = v.first_nonzero()) {
    r.virl_fails = true;
    r.virl_z_order = k->at(0);
    auto parts = v.coefficient(*k).coefficients_in(Sym::Lambda);
    for (std::size_t p = 0; p < parts.size(); ++p) {
      if (!parts[p].is_zero()) {
        r.virl_lambda_power = static_cast<unsigned>(p);
        r.virl_coefficient = parts[p];
        break;
      }
    }
  } else {
    r.note = "no failure of the identity through z^" + std::to_string(window) + "; raise the window";
  }
  return r;
}

}  // namespace confalg
