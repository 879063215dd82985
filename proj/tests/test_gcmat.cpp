#include "confalg/gcmat.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace confalg;

namespace {

const ParamPoly D = ParamPoly::del();
const ParamPoly L = ParamPoly::lambda();
const ParamPoly A = ParamPoly::alpha();
const ParamPoly M = ParamPoly::mu();

ConformalAlgebra finitevertex_shadow() {
  FgModule m(2, 1, {{0}}, {"a", "b", "vac"});
  ModElement aa = zero_element(m);
  aa[1] = D * make_rational(1, 2) + L;
  return ConformalAlgebra(m, std::map<std::pair<std::size_t, std::size_t>, ModElement>{{{0, 0}, aa}});
}

ParamPoly random_entry(std::mt19937& rng, int maxdeg) {
  std::uniform_int_distribution<int> deg(0, maxdeg);
  std::uniform_int_distribution<int> coef(-3, 3);
  ParamPoly p;
  const int terms = deg(rng) + 1;
  for (int t = 0; t < terms; ++t) {
    const int total = deg(rng);
    std::uniform_int_distribution<int> split(0, total);
    const int dd = split(rng);
    p += D.pow(static_cast<unsigned>(dd)) * L.pow(static_cast<unsigned>(total - dd)) * coef(rng);
  }
  return p;
}

ConformalMatrix random_matrix(std::mt19937& rng, const FgModule& m, int maxdeg) {
  std::vector<std::vector<ParamPoly>> e(m.size(), std::vector<ParamPoly>(m.size()));
  for (auto& row : e) {
    for (auto& x : row) x = random_entry(rng, maxdeg);
  }
  return ConformalMatrix::from_entries(m, e);
}

// Independent evaluation of the matrix commutator formula for free modules:
// entries F(del, alpha) G(del + alpha, lambda - alpha) - G(del, lambda - alpha) F(del + lambda - alpha, alpha)
// under matrix multiplication.
ConformalMatrix commutator_formula(const ConformalMatrix& f, const ConformalMatrix& g) {
  const auto& m = f.base();
  const std::size_t n = m.size();
  auto sub2 = [](const ParamPoly& p, const ParamPoly& del_img, const ParamPoly& lam_img) {
    std::array<std::optional<ParamPoly>, kNumSyms> im;
    im[0] = del_img;
    im[1] = lam_img;
    return p.subs(im);
  };
  std::vector<std::vector<ParamPoly>> e(n, std::vector<ParamPoly>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t k = 0; k < n; ++k) {
        e[r][c] += sub2(f.entry(r, k), D, A) * sub2(g.entry(k, c), D + A, L - A);
        e[r][c] -= sub2(g.entry(r, k), D, L - A) * sub2(f.entry(k, c), D + L - A, A);
      }
    }
  }
  return ConformalMatrix::from_entries(m, e);
}

}  // namespace

TEST(GcBracket, WorkedValues) {
  FgModule m(1, 0, {}, {"v"});
  auto one = ConformalMatrix::from_entries(m, {{ParamPoly(1)}});
  EXPECT_TRUE(gc_bracket(one, one).is_zero());
  auto d = ConformalMatrix::from_entries(m, {{D}});
  EXPECT_EQ(gc_bracket(d, d).entry(0, 0), D * (A * 2 - L));
}

TEST(GcBracket, MatchesCommutatorFormula) {
  std::mt19937 rng(17);
  for (std::size_t n : {1u, 2u}) {
    FgModule m(n, 0);
    for (int t = 0; t < 10; ++t) {
      auto f = random_matrix(rng, m, 2), g = random_matrix(rng, m, 2);
      EXPECT_EQ(gc_bracket(f, g), commutator_formula(f, g));
    }
  }
}

TEST(GcBracket, AntisymmetryAndJacobiRandomized) {
  std::mt19937 rng(2026);
  int checked = 0;
  for (std::size_t n : {1u, 2u}) {
    FgModule m(n, 0);
    for (int t = 0; t < 25; ++t) {
      auto f = random_matrix(rng, m, 3), g = random_matrix(rng, m, 3), h = random_matrix(rng, m, 3);
      // [g_alpha f] with alpha -> lambda - alpha equals -[f_alpha g].
      EXPECT_EQ(gc_bracket(g, f).subs(Sym::Alpha, L - A), -gc_bracket(f, g));
      auto lhs = gc_bracket(f, gc_bracket(g, h, M), A) - gc_bracket(g, gc_bracket(f, h, A), M);
      auto rhs = gc_bracket(gc_bracket(f, g, A), h, A + M);
      EXPECT_EQ(lhs, rhs);
      ++checked;
    }
  }
  EXPECT_EQ(checked, 50);
}

TEST(GcBracket, TorsionColumnsAreZero) {
  FgModule m(1, 1, {{0}}, {"g", "k"});
  EXPECT_THROW(ConformalMatrix::from_entries(m, {{0, 1}, {0, 0}}), std::invalid_argument);
  auto f = ConformalMatrix::from_entries(m, {{D, 0}, {L, 0}});
  auto b = gc_bracket(f, f);
  EXPECT_TRUE(b.columns()[1].is_zero());
}

TEST(Adjoint, Examples) {
  auto v = make_virasoro();
  auto ad = adjoint_matrix(v, generator(v.base(), 0));
  EXPECT_EQ(ad.entry(0, 0), D + L * 2);
  // Applying to del L substitutes del -> del + lambda.
  EXPECT_EQ(apply(ad, ModElement({D})), ModElement({(D + L) * (D + L * 2)}));
  auto ab = make_abelian(FgModule(2, 0));
  EXPECT_TRUE(adjoint_matrix(ab, generator(ab.base(), 0)).is_zero());
  auto f = finitevertex_shadow();
  auto ada = adjoint_matrix(f, generator(f.base(), 0));
  EXPECT_EQ(ada.entry(1, 0), D * make_rational(1, 2) + L);
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      if (r != 1 || c != 0) EXPECT_TRUE(ada.entry(r, c).is_zero());
    }
  }
}

TEST(Adjoint, BracketHomomorphism) {
  // ad [x_alpha y] = [ad x _alpha ad y] (Jacobi in adjoint form).
  for (const auto& a : {make_virasoro(), make_current(sl2_structure()), make_virasoro_ext(1, 1)}) {
    const auto& m = a.base();
    for (std::size_t i = 0; i < m.free_rank(); ++i) {
      for (std::size_t j = 0; j < m.free_rank(); ++j) {
        auto adx = adjoint_matrix(a, generator(m, i));
        auto ady = adjoint_matrix(a, generator(m, j));
        auto lhs = gc_bracket(adx, ady);
        auto xy = bracket(a, generator(m, i), generator(m, j), A);
        std::vector<ModElement> cols;
        for (std::size_t k = 0; k < m.size(); ++k) cols.push_back(bracket(a, xy, generator(m, k)));
        EXPECT_EQ(lhs, ConformalMatrix(m, cols));
      }
    }
  }
}

TEST(ActionNilpotent, Examples) {
  auto f = finitevertex_shadow();
  auto r = action_nilpotent(adjoint_matrix(f, generator(f.base(), 0)));
  EXPECT_TRUE(r.nilpotent);
  EXPECT_EQ(r.steps, 2u);
  EXPECT_EQ(r.chain[1], span(f.base(), {generator(f.base(), 1)}));

  auto v = make_virasoro();
  auto rv = action_nilpotent(adjoint_matrix(v, generator(v.base(), 0)));
  EXPECT_FALSE(rv.nilpotent);
  EXPECT_TRUE(rv.stabilized);

  auto z = action_nilpotent(ConformalMatrix::zero(FgModule(2, 1)));
  EXPECT_TRUE(z.nilpotent);
  EXPECT_EQ(z.steps, 1u);
}

TEST(Weights, DiagonalDecoupled) {
  FgModule m(2, 0, {}, {"x", "y"});
  auto f = ConformalMatrix::from_entries(m, {{L, 0}, {0, 0}});
  auto ws = weight_spaces(f);
  EXPECT_TRUE(ws.diagnostic.empty()) << ws.diagnostic;
  ASSERT_EQ(ws.chains.size(), 2u);
  EXPECT_EQ(ws.chains[0].weight, L);
  EXPECT_EQ(ws.chains[0].space(), span(m, {generator(m, 0)}));
  EXPECT_EQ(ws.chains[1].space(), span(m, {generator(m, 1)}));
  EXPECT_TRUE(ws.direct);
  EXPECT_TRUE(verify_weight_vector(f, generator(m, 0), L));
  EXPECT_FALSE(verify_weight_vector(f, ModElement({D, 0}), L));
}

TEST(Weights, StrictlyTriangularOnlyZero) {
  FgModule m(2, 0, {}, {"x", "y"});
  auto f = ConformalMatrix::from_entries(m, {{0, D + L}, {0, 0}});
  auto ws = weight_spaces(f);
  ASSERT_EQ(ws.chains.size(), 1u);
  EXPECT_TRUE(ws.chains[0].weight.is_zero());
  EXPECT_TRUE(is_whole(ws.chains[0].space()));
  EXPECT_TRUE(action_nilpotent(f).nilpotent);
}

TEST(Weights, TorsionInFirstZeroStep) {
  FgModule m(1, 2, {{0, 0}, {1, 0}}, {"g", "k0", "k1"});
  auto f = ConformalMatrix::from_entries(m, {{L, 0, 0}, {L.pow(2), 0, 0}, {0, 0, 0}});
  auto c = weight_chain(f, ParamPoly());
  ASSERT_GE(c.chain.size(), 2u);
  EXPECT_EQ(c.chain[1].torsion_dim(), 2u);
  EXPECT_TRUE(c.chain[1].contains(generator(m, 1)));
  EXPECT_TRUE(c.chain[1].contains(generator(m, 2)));
}

TEST(Weights, DistinctWeightsIntersectTrivially) {
  FgModule m(2, 0, {}, {"x", "y"});
  for (const auto& f : {ConformalMatrix::from_entries(m, {{L, 0}, {0, L * 2}}),
                        ConformalMatrix::from_entries(m, {{L, 1}, {0, 0}}),
                        ConformalMatrix::from_entries(m, {{L, D}, {0, -L}})}) {
    auto ws = weight_spaces(f);
    EXPECT_TRUE(ws.direct);
    for (std::size_t i = 0; i < ws.chains.size(); ++i) {
      for (std::size_t j = i + 1; j < ws.chains.size(); ++j) {
        for (const auto& g : ws.chains[i].space().canonical()) EXPECT_FALSE(ws.chains[j].space().contains(g));
      }
    }
  }
}

TEST(Weights, NonTriangularNeedsCandidates) {
  FgModule m(2, 0);
  auto f = ConformalMatrix::from_entries(m, {{0, 1}, {1, 0}});
  auto ws = weight_spaces(f);
  EXPECT_FALSE(ws.diagnostic.empty());
  auto withc = weight_spaces(f, {ParamPoly(1), ParamPoly(-1)});
  EXPECT_TRUE(withc.diagnostic.empty());
  EXPECT_EQ(withc.chains[0].space().rank(), 1u);
  EXPECT_TRUE(withc.chains[0].space().contains(ModElement({1, 1})));
}

TEST(Fitting, Examples) {
  FgModule m(2, 0, {}, {"x", "y"});
  auto nil = fitting_decomposition(ConformalMatrix::from_entries(m, {{0, D}, {0, 0}}));
  EXPECT_TRUE(is_whole(nil.v0));
  EXPECT_TRUE(nil.nonzero.empty());

  auto d1 = fitting_decomposition(ConformalMatrix::from_entries(m, {{L, 0}, {0, 0}}));
  EXPECT_TRUE(d1.spans);
  EXPECT_TRUE(d1.direct);
  EXPECT_EQ(d1.v0.rank(), 1u);
  ASSERT_EQ(d1.nonzero.size(), 1u);
  EXPECT_EQ(d1.nonzero[0].space().rank(), 1u);

  auto d2 = fitting_decomposition(ConformalMatrix::from_entries(m, {{L, 0}, {0, L * 2}}));
  EXPECT_TRUE(d2.v0.is_zero());
  EXPECT_EQ(d2.nonzero.size(), 2u);
  EXPECT_TRUE(d2.spans);
  EXPECT_TRUE(d2.direct);
}

TEST(Fitting, PreconditionChecked) {
  auto v = make_virasoro();
  EXPECT_THROW(fitting_decomposition(adjoint_matrix(v, generator(v.base(), 0))), std::invalid_argument);
}

TEST(Consequence, NilpotentAdjointsGiveNilpotentAlgebra) {
  for (const auto& a : {finitevertex_shadow(), make_abelian(FgModule(2, 1)), make_virasoro(),
                        make_current(sl2_structure())}) {
    bool all = true;
    for (std::size_t i = 0; i < a.size(); ++i) all = all && action_nilpotent(adjoint_matrix(a, generator(a.base(), i))).nilpotent;
    if (all) EXPECT_TRUE(central_series(a).reaches_zero());
  }
}

TEST(WeightWitness, ChecksEachCondition) {
  // [a_lambda b] = b, [b_lambda a] = -b
  FgModule m(2, 0, {}, {"a", "b"});
  ConformalAlgebra s(m, {{{0, 1}, ModElement({0, 1})}, {{1, 0}, ModElement({0, -1})}});
  ASSERT_TRUE(check_axioms(s).all_pass());
  const ModElement a = generator(m, 0), b = generator(m, 1);
  EXPECT_EQ(generated_subalgebra(s, a), span(m, {a}));
  EXPECT_EQ(generated_subalgebra(s, a + b), span(m, {a + b}));

  EXPECT_TRUE(check_weight_witness(s, a, a, b, ParamPoly(1)).pass);
  EXPECT_TRUE(check_weight_witness(s, a + b, a + b, b, ParamPoly(1)).pass);
  EXPECT_FALSE(check_weight_witness(s, a, a, b, ParamPoly(2)).pass);
  EXPECT_FALSE(check_weight_witness(s, a, a, b, ParamPoly()).pass);
  EXPECT_FALSE(check_weight_witness(s, a, a, zero_element(m), ParamPoly(1)).pass);
  auto outside = check_weight_witness(s, a + b, a, b, ParamPoly(1));
  EXPECT_FALSE(outside.pass);
  EXPECT_NE(outside.reason.find("derived algebra"), std::string::npos) << outside.reason;
}
