// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.
#include "confalg/cli/run.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

using namespace confalg;

namespace {

const ParamPoly D = ParamPoly::del();
const ParamPoly L = ParamPoly::lambda();
const ParamPoly A = ParamPoly::alpha();
const ParamPoly M = ParamPoly::mu();

// Throws with the message when cond is false.
void require(bool cond, const std::string& what) {
  if (!cond) throw std::runtime_error(what);
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<void()> body;
};

bool run_criterion(const Criterion& c) {
  std::string failure;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.body();
  } catch (const std::exception& e) {
    failure = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (failure.empty() && secs >= c.limit_seconds) {
    std::ostringstream os;
    os << "runtime " << secs << " s exceeds " << c.limit_seconds << " s";
    failure = os.str();
  }
  std::cout << "criterion " << c.id << ": " << (failure.empty() ? "PASS" : "FAIL") << "  " << c.name << "  ("
            << std::fixed << std::setprecision(3) << secs << " s, limit " << std::setprecision(0) << c.limit_seconds
            << " s)";
  if (!failure.empty()) std::cout << "  -- " << failure;
  std::cout << std::endl;
  return failure.empty();
}

int run_cli(const std::vector<std::string>& args, std::string* err = nullptr) {
  std::ostringstream out, e;
  int code = cli::run(args, out, e);
  if (err) *err = e.str();
  return code;
}

ParamPoly random_entry(std::mt19937& rng, int maxdeg) {
  std::uniform_int_distribution<int> deg(0, maxdeg);
  std::uniform_int_distribution<int> coef(-3, 3);
  ParamPoly p;
  const int terms = deg(rng) + 1;
  for (int t = 0; t < terms; ++t) {
    const int total = deg(rng);
    const int dd = std::uniform_int_distribution<int>(0, total)(rng);
    p += D.pow(static_cast<unsigned>(dd)) * L.pow(static_cast<unsigned>(total - dd)) * coef(rng);
  }
  return p;
}

ConformalMatrix random_matrix(std::mt19937& rng, const FgModule& m, int maxdeg) {
  std::vector<std::vector<ParamPoly>> e(m.size(), std::vector<ParamPoly>(m.size()));
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (std::size_t c = 0; c < m.size(); ++c) {
      if (!m.is_torsion(c)) e[r][c] = random_entry(rng, maxdeg);
    }
  }
  return ConformalMatrix::from_entries(m, e);
}

VertexTable finitevertex() { return make_finitevertex({{-2, 1}}); }

void axiom_suite() {
  auto passes = [](const ConformalAlgebra& a, const std::string& name) {
    auto r = check_axioms(a);
    require(r.all_pass(), name + " fails: " + r.c2.witness + r.c3.witness + r.c4.witness);
  };
  passes(make_virasoro(), "vir");
  for (int c : {0, 1}) {
    for (std::size_t n : {0u, 1u, 2u}) passes(make_virasoro_ext(c, n), "vir-ext(" + std::to_string(c) + "," + std::to_string(n) + ")");
  }
  passes(make_current(sl2_structure()), "current-sl2");
  passes(conformal_shadow(finitevertex()), "finitevertex shadow");

  FgModule m(1, 0, {}, {"L"});
  ConformalAlgebra deformed(m, {{{0, 0}, ModElement({D + L * 3})}}, "deformed");
  auto r = check_axioms(deformed);
  require(!r.c3.pass && !r.c3.witness.empty(), "deformed table does not fail C3 with a witness");
}

void cohomology() {
  auto r0 = h2(scalar_module(0));
  require(r0.dimension == 1 && cocycle_str(scalar_module(0), r0.representatives[0]) == "lambda^3", "h2(C_0)");
  for (Rational a : {Rational(1), Rational(-2), make_rational(1, 3)}) {
    require(h2(scalar_module(a)).dimension == 0, "h2(C_" + a.get_str() + ") != 0");
  }
  for (std::size_t n = 1; n <= 4; ++n) {
    auto c = jordan_module(n);
    auto r = h2(c);
    const std::string expect = "lambda^3*del" + (n > 1 ? "^" + std::to_string(n) : std::string());
    require(r.dimension == 1 && cocycle_str(c, r.representatives[0]) == expect, "h2(jordan " + std::to_string(n) + ")");
  }
  CoefficientModule invertible({{1, 0}, {1, 1}});
  require(h2(invertible).dimension == 0, "h2 of invertible 2x2 module != 0");

  std::vector<CoefficientModule> mods{scalar_module(0), scalar_module(1), scalar_module(-2), scalar_module(make_rational(1, 3)),
                                      invertible};
  for (std::size_t n = 1; n <= 4; ++n) mods.push_back(jordan_module(n));
  for (const auto& c : mods) {
    for (std::size_t d : {4u, 6u, 8u}) {
      require(same_span(cocycle_space(c, d), structured_cocycle_space(c, d), c.dim(), d),
              "structured and flat solvers disagree at D=" + std::to_string(d));
    }
  }
}

void novir() {
  for (int c : {0, 1}) {
    auto r = novir_verify(c, 8);
    require(r.diffeq_zero, "c=" + std::to_string(c) + ": differential equation residual nonzero");
    require(r.virl_fails && !r.virl_coefficient.is_zero(), "c=" + std::to_string(c) + ": no Virasoro residual found");
  }
}

void finitevertex_example() {
  VertexTable v = finitevertex();
  const FgModule& m = v.base();
  const ModElement a = generator(m, 0), b = generator(m, 1), vac = generator(m, 2);
  auto loc = locality_check(v, a, a, vac);
  require(loc.status == LocalityResult::Status::Local && loc.minimal_n == 2, "locality order of (a,a) on vac is not 2");
  require(check_vertex_axioms(v).all_pass(), "vertex axiom suite fails");
  require(product(v, a, a, 1) == b, "a_(1)a != b");
  ModElement half_del_b = zero_element(m);
  half_del_b[1] = D * make_rational(1, 2);
  require(product(v, a, a, 0) == half_del_b, "a_(0)a != (del/2) b");
  auto ns = nil_series(v, span(m, {a, b}));
  require(ns.terms.size() >= 3 && ns.terms[1] == span(m, {b}) && ns.terms[2].is_zero() && ns.nil_at == 3u,
          "nil series is not <a,b> > <b> > 0");
  auto cs = central_series(conformal_shadow(v));
  require(cs.zero_at == 2u, "V^{[2]} != 0");

  VertexTable odd = make_finitevertex({{-3, 1}}, 8, true);
  auto bad = locality_check(odd, a, a, vac, 8);
  require(bad.status == LocalityResult::Status::Fail, "odd psi does not fail locality for N <= 8");
}

void series_verdicts() {
  auto vir = make_virasoro();
  auto whole = whole_module(vir.base());
  auto ds = derived_series(vir), cs = central_series(vir);
  require(!ds.reaches_zero() && ds.stabilized_at == 0u && ds.terms[1] == whole, "Virasoro derived series");
  require(!cs.reaches_zero() && cs.stabilized_at == 0u && cs.terms[1] == whole, "Virasoro central series");
  for (const auto& m : {FgModule(1, 0), FgModule(2, 1, {{0}}), FgModule(0, 2, {{0, 0}, {1, 0}})}) {
    auto ab = make_abelian(m);
    require(central_series(ab).zero_at == 1u && derived_series(ab).zero_at == 1u, "abelian algebra not nilpotent at step 1");
  }
  auto shadow = conformal_shadow(finitevertex());
  require(derived_series(shadow).zero_at == 2u, "finitevertex shadow derived length != 2");
  require(central_series(shadow).zero_at == 2u, "finitevertex shadow nilpotency class != 2");
}

void gc_calculus() {
  std::mt19937 rng(2026);
  int checked = 0;
  for (std::size_t n : {1u, 2u}) {
    FgModule m(n, 0);
    for (int t = 0; t < 25; ++t) {
      auto f = random_matrix(rng, m, 3), g = random_matrix(rng, m, 3), h = random_matrix(rng, m, 3);
      require(gc_bracket(g, f).subs(Sym::Alpha, L - A) == -gc_bracket(f, g), "antisymmetry fails");
      auto lhs = gc_bracket(f, gc_bracket(g, h, M), A) - gc_bracket(g, gc_bracket(f, h, A), M);
      require(lhs == gc_bracket(gc_bracket(f, g, A), h, A + M), "Jacobi identity fails");
      ++checked;
    }
  }
  require(checked == 50, "wrong number of samples");
  FgModule one(1, 0);
  auto d = ConformalMatrix::from_entries(one, {{D}});
  require(gc_bracket(d, d).entry(0, 0) == D * (A * 2 - L), "[del alpha del] != del(2 alpha - lambda)");
}

void weights() {
  FgModule m(2, 0, {}, {"x", "y"});
  auto diag = weight_spaces(ConformalMatrix::from_entries(m, {{L, 0}, {0, 0}}));
  require(diag.diagnostic.empty() && diag.chains.size() == 2 && diag.direct, "diag(lambda,0) decomposition");
  require(diag.chains[0].weight == L && diag.chains[0].space() == span(m, {generator(m, 0)}), "V^lambda != <x>");
  require(diag.chains[1].weight.is_zero() && diag.chains[1].space() == span(m, {generator(m, 1)}), "V^0 != <y>");

  std::mt19937 rng(7);
  for (int t = 0; t < 10; ++t) {
    FgModule m3(3, 0);
    std::vector<std::vector<ParamPoly>> e(3, std::vector<ParamPoly>(3));
    for (std::size_t r = 0; r < 3; ++r) {
      for (std::size_t c = r + 1; c < 3; ++c) e[r][c] = random_entry(rng, 2);
    }
    auto f = ConformalMatrix::from_entries(m3, e);
    auto ws = weight_spaces(f);
    require(ws.chains.size() == 1 && ws.chains[0].weight.is_zero() && ws.chains[0].space() == whole_module(m3),
            "strictly triangular " + f.str() + " has a weight other than 0");
    require(action_nilpotent(f).nilpotent, "strictly triangular " + f.str() + " is not nilpotent");
  }

  FgModule tm(2, 2, {{0, 0}, {1, 0}}, {"g", "h", "k0", "k1"});
  for (int t = 0; t < 10; ++t) {
    auto f = random_matrix(rng, tm, 2);
    auto c = weight_chain(f, ParamPoly());
    require(c.chain.size() >= 2, "weight chain too short");
    for (std::size_t k = tm.free_rank(); k < tm.size(); ++k) {
      require(c.chain[1].contains(generator(tm, k)), "torsion generator outside V^0_1 for " + f.str());
    }
  }

  auto lb = liebracket_all(finitevertex());
  require(lb.pass && lb.checked > 0, "commutator formula: " + lb.witness);
}

void consequences() {
  std::size_t reduced = 0;
  for (const auto& spec : cli::builtin_corpus()) {
    cli::Definition d = cli::builtin(spec);
    if (d.kind != cli::Definition::Kind::Vertex) continue;
    VertexTable v = cli::to_vertex(d);
    auto g = genwick_all(v);
    require(g.pass && g.checked > 0, spec + ": " + g.witness);
    if (spec.rfind("holomorphic", 0) != 0) continue;
    auto r = consequence_check(v);
    require(r.pass, spec + ": " + r.detail);
    if (r.reduced_within_search) {
      ++reduced;
      require(r.adjoint_nilpotent && r.central_series_reaches_zero, spec + ": " + r.detail);
    }
  }
  for (std::size_t n = 1; n <= 5; ++n) {
    auto r = consequence_check(make_semisimple_holomorphic(n));
    require(r.pass && r.reduced_within_search, "semisimple holomorphic(" + std::to_string(n) + "): " + r.detail);
    ++reduced;
  }
  require(reduced > 0, "no reduced example checked");
}

void parser() {
  for (const auto& spec : cli::builtin_corpus()) {
    cli::Definition d = cli::builtin(spec);
    const std::string text = cli::print(d);
    require(cli::parse_definition(text) == d && cli::print(cli::parse_definition(text)) == text, spec + " does not round-trip");
  }
  std::size_t cases = 0;
  const std::regex positioned(R"(:\d+:\d+: )");
  for (const auto& entry : std::filesystem::directory_iterator(std::string(CONFALG_DEFS_DIR) + "/errors")) {
    std::string err;
    const int code = run_cli({"check-axioms", entry.path().string()}, &err);
    require(code == 3, entry.path().filename().string() + " exits " + std::to_string(code));
    require(std::regex_search(err, positioned), entry.path().filename().string() + " has no position: " + err);
    ++cases;
  }
  require(cases >= 6, "error corpus incomplete");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "axiom suite", 1, axiom_suite},
      {2, "second cohomology", 5, cohomology},
      {3, "deformation obstruction mechanization", 10, novir},
      {4, "finite vertex algebra example", 2, finitevertex_example},
      {5, "series verdicts", 1, series_verdicts},
      {6, "gc bracket calculus", 5, gc_calculus},
      {7, "weight machinery", 5, weights},
      {8, "consequence checks", 10, consequences},
      {9, "parser round trip and diagnostics", 10, parser},
  };
  int failed = 0;
  for (const auto& c : criteria) failed += run_criterion(c) ? 0 : 1;
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
