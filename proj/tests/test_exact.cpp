#include "confalg/exact/linalg.hpp"
#include "confalg/exact/param_poly.hpp"
#include "confalg/exact/rational.hpp"
#include "confalg/exact/upoly.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace confalg;

namespace {

const ParamPoly D = ParamPoly::del();
const ParamPoly L = ParamPoly::lambda();
const ParamPoly M = ParamPoly::mu();

ParamPoly random_poly(std::mt19937& rng, int max_deg = 2, int terms = 4) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> den(1, 3);
  ParamPoly p;
  for (int t = 0; t < terms; ++t) {
    Exponents e{};
    for (auto& x : e) x = static_cast<std::uint16_t>(deg(rng));
    p += ParamPoly::monomial(e, make_rational(coef(rng), den(rng)));
  }
  return p;
}

}  // namespace

TEST(Rational, CanonicalForm) {
  Rational r = make_rational(6, -4);
  EXPECT_EQ(r.get_num(), -3);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(parse_rational("10/4"), make_rational(5, 2));
  EXPECT_THROW(parse_rational("1/0"), std::domain_error);
  EXPECT_THROW(parse_rational("x"), std::invalid_argument);
  EXPECT_THROW(make_rational(1, 0), std::domain_error);
}

TEST(Rational, GeneralizedBinomial) {
  EXPECT_EQ(binomial(5, 2), 10);
  EXPECT_EQ(binomial(-1, 3), -1);
  EXPECT_EQ(binomial(-2, 2), 3);
  EXPECT_EQ(binomial(2, 5), 0);
  EXPECT_EQ(factorial(5), 120);
}

TEST(ParamPoly, Distributivity) {
  EXPECT_EQ((D + 2 * L) * L, D * L + 2 * L.pow(2));
  EXPECT_TRUE(((D + 2 * L) + (-D - 2 * L)).is_zero());
  EXPECT_EQ((L - M) * (L.pow(2) + L * M + M.pow(2)), L.pow(3) - M.pow(3));
}

TEST(ParamPoly, RingAxiomsRandomized) {
  std::mt19937 rng(20261017);
  for (int i = 0; i < 60; ++i) {
    ParamPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_TRUE((a - a).is_zero());
  }
}

TEST(ParamPoly, SubstitutionIsRingHomomorphism) {
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    ParamPoly a = random_poly(rng), b = random_poly(rng);
    ParamPoly img = D + L * 3 - M;
    EXPECT_EQ((a * b).subs(Sym::Lambda, img), a.subs(Sym::Lambda, img) * b.subs(Sym::Lambda, img));
  }
}

TEST(ParamPoly, SimultaneousSubstitution) {
  std::array<std::optional<ParamPoly>, kNumSyms> swap;
  swap[0] = L;
  swap[1] = D;
  EXPECT_EQ((D + 2 * L).subs(swap), L + 2 * D);
}

TEST(ParamPoly, CoefficientsAndPrinting) {
  ParamPoly p = D * L.pow(2) + 3 * L + 1;
  EXPECT_EQ(p.degree(Sym::Lambda), 2);
  EXPECT_EQ(p.coeff(Sym::Lambda, 2), D);
  EXPECT_EQ(p.coeff(Sym::Lambda, 1), ParamPoly(3));
  EXPECT_EQ((D + 2 * L).str(), "del + 2*lambda");
  EXPECT_EQ(ParamPoly().str(), "0");
  EXPECT_EQ(ParamPoly().degree(Sym::Del), -1);
}

TEST(UPoly, DivisionWithRemainder) {
  UPoly a = UPoly::from_param(D.pow(3) + D + 5);
  UPoly d = UPoly::from_param(D * 2 + 1);
  auto [q, r] = a.divmod(d);
  EXPECT_EQ(q * d + r, a);
  EXPECT_LT(r.degree(), d.degree());
  EXPECT_THROW(UPoly::from_param(L), std::invalid_argument);
  EXPECT_EQ(UPoly::from_param(D.pow(2) - 1).to_param(), D.pow(2) - 1);
}

TEST(Linalg, NullspaceAndRank) {
  QMatrix a{{1, 2, 3}, {2, 4, 6}, {0, 1, 1}};
  EXPECT_EQ(rank(a), 2u);
  auto ns = nullspace(a, 3);
  ASSERT_EQ(ns.size(), 1u);
  EXPECT_TRUE(is_zero(mat_vec(a, ns[0])));
  EXPECT_EQ(nullspace({}, 2).size(), 2u);
  EXPECT_TRUE(in_row_space({2, 5, 7}, a));
  EXPECT_FALSE(in_row_space({0, 0, 1}, a));
}
