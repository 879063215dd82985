#include "confalg/cli/run.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sys/wait.h>

using namespace confalg;
using namespace confalg::cli;

namespace {

struct RunResult {
  int code = 0;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string defs(const std::string& name) { return std::string(CONFALG_DEFS_DIR) + "/" + name; }

bool contains(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

InputError parse_error(const std::string& src) {
  try {
    for (const auto& d : parse_definitions(src)) {
      switch (d.kind) {
        case Definition::Kind::Conformal: to_conformal(d); break;
        case Definition::Kind::Vertex: to_vertex(d); break;
        case Definition::Kind::Coefficient: to_coefficient(d); break;
        case Definition::Kind::GcMatrix: to_gcmatrix(d); break;
      }
    }
  } catch (const InputError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << src;
  return InputError("none");
}

Expr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 10 : 4);
  Expr e;
  switch (pick(rng)) {
    case 0: e.kind = Expr::Kind::Num; e.num = Rational(static_cast<long>(rng() % 7)); break;
    case 1: e.kind = Expr::Kind::Del; break;
    case 2: e.kind = Expr::Kind::Lambda; break;
    case 3: e.kind = Expr::Kind::Z; break;
    case 4: e.kind = Expr::Kind::Gen; e.name = rng() % 2 ? "a" : "b2"; break;
    case 5: e.kind = Expr::Kind::Add; break;
    case 6: e.kind = Expr::Kind::Sub; break;
    case 7: e.kind = Expr::Kind::Mul; break;
    case 8: e.kind = Expr::Kind::Div; break;
    case 9: e.kind = Expr::Kind::Neg; break;
    default: e.kind = Expr::Kind::Pow; break;
  }
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      e.args = {random_expr(rng, depth - 1), random_expr(rng, depth - 1)};
      break;
    case Expr::Kind::Neg: e.args = {random_expr(rng, depth - 1)}; break;
    case Expr::Kind::Pow: {
      e.args = {random_expr(rng, depth - 1)};
      const bool on_z = e.args[0].kind == Expr::Kind::Z;
      e.exponent = on_z ? static_cast<long>(rng() % 7) - 3 : static_cast<long>(rng() % 4);
      break;
    }
    default: break;
  }
  return e;
}

bool same_series_on(const VertexTable& a, const VertexTable& b, long lo, long hi) {
  const FgModule& m = a.base();
  if (!(m == b.base())) return false;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      VSeries x = a.field(generator(m, i), generator(m, j));
      VSeries y = b.field(generator(m, i), generator(m, j));
      for (long e = lo; e <= hi; ++e) {
        if (x.coefficient(e) != y.coefficient(e)) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST(Parser, VirasoroDefinition) {
  auto d = parse_definition("conformal Vir { gen L; bracket L L = (del + 2*lambda)*L; }");
  EXPECT_EQ(d.kind, Definition::Kind::Conformal);
  auto a = to_conformal(d);
  EXPECT_EQ(a.table(), make_virasoro().table());
}

TEST(Parser, CoefficientModule) {
  auto d = parse_definition("coeff C0 { dim 1; del [[0]]; }");
  auto c = to_coefficient(d);
  EXPECT_EQ(c.del_action, (QMatrix{{0}}));
  EXPECT_EQ(h2(c).dimension, 1u);
}

TEST(Parser, TrailingOperatorIsPositioned) {
  auto e = parse_error("conformal Vir {\n  gen L;\n  bracket L L = (del + 2*lambda)*L +");
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 37);
  EXPECT_TRUE(contains(e.what(), "end of input")) << e.what();
}

TEST(Parser, DocumentedErrorsArePositioned) {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"conformal X {\n  gen L;\n  torsion C;\n  bracket C L = L;\n}", "torsion"},
      {"vertex X {\n  gen a, b;\n  torsion vac;\n  vacuum vac;\n  window 8;\n  field a a = z^-1*b;\n}", "skew"},
      {"vertex X {\n  gen a;\n  torsion vac;\n  vacuum vac;\n}", "window"},
      {"conformal X {\n  gen L;\n  bracket L L = del^-1*L;\n}", "negative exponents"},
      {"conformal X {\n  gen L;\n  bracket L L = M;\n}", "unknown generator"},
      {"conformal X {\n  gen L;\n  bracket L L = L*L;\n}", "product of two generator"},
      {"conformal X {\n  gen L;\n  bracket L L = L/del;\n}", "division"},
      {"conformal X {\n  gen L;\n  bracket L L = z*L;\n}", "z is not allowed"},
      {"conformal X {\n  gen L;\n  bracket L L = L;\n  bracket L L = L;\n}", "duplicate"},
      {"conformal X {\n  gen L;\n  torsion C;\n  del [[0, 1]];\n}", "del matrix"},
      {"coeff X {\n  dim 2;\n  del [[0]];\n}", "del matrix"},
      {"conformal X {\n  gen L;\n  frob L;\n}", "unexpected directive"},
      {"vertex X {\n  gen a;\n  torsion vac;\n  vacuum vac;\n  window 4;\n  flag nonsense;\n}", "unknown flag"},
      {"conformal X {\n  gen L;\n  bracket L L = 2 $ L;\n}", "unexpected character"},
      {"widget X { }", "unknown definition kind"},
  };
  for (const auto& [src, what] : cases) {
    auto e = parse_error(src);
    EXPECT_GT(e.line(), 0) << src;
    EXPECT_GT(e.column(), 0) << src;
    EXPECT_TRUE(contains(e.what(), what)) << e.what();
  }
}

TEST(Parser, ExpressionRoundTripRandom) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    Expr e = random_expr(rng, 4);
    std::string text = print(e);
    Expr back = parse_expr(text);
    EXPECT_EQ(back, e) << text << " reprinted as " << print(back);
    EXPECT_EQ(print(back), text);
  }
}

TEST(Parser, BuiltinCorpusRoundTrips) {
  for (const auto& spec : builtin_corpus()) {
    Definition d = builtin(spec);
    const std::string text = print(d);
    Definition back = parse_definition(text);
    EXPECT_EQ(back, d) << spec << "\n" << text;
    EXPECT_EQ(print(back), text) << spec;
  }
}

TEST(Parser, SampleFilesRoundTrip) {
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(CONFALG_DEFS_DIR)) {
    if (entry.path().extension() != ".def") continue;
    ++files;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    auto defs_in_file = parse_definitions(ss.str());
    for (const auto& d : defs_in_file) {
      Definition back = parse_definition(print(d));
      EXPECT_EQ(back, d) << entry.path();
    }
  }
  EXPECT_GE(files, 6u);
}

TEST(Builtins, AgreeWithLibraryConstructors) {
  EXPECT_EQ(to_conformal(builtin("vir")).table(), make_virasoro().table());
  EXPECT_EQ(to_conformal(builtin("current-sl2")).table(), make_current(sl2_structure()).table());
  for (Rational c : {Rational(0), Rational(1), make_rational(-1, 2)}) {
    for (std::size_t n : {0u, 1u, 2u}) {
      auto a = to_conformal(builtin("vir-ext(" + c.get_str() + "," + std::to_string(n) + ")"));
      auto b = make_virasoro_ext(c, n);
      EXPECT_EQ(a.base(), b.base());
      EXPECT_EQ(a.table(), b.table());
    }
  }
  EXPECT_TRUE(same_series_on(to_vertex(builtin("finitevertex(z^-2)")), make_finitevertex({{-2, 1}}), -4, 8));
  EXPECT_TRUE(same_series_on(to_vertex(builtin("finitevertex(z^-4+z^-2)")), make_finitevertex({{-4, 1}, {-2, 1}}), -6, 8));
  EXPECT_TRUE(same_series_on(to_vertex(builtin("holomorphic(3)")), make_semisimple_holomorphic(3), -2, 8));
  EXPECT_TRUE(same_series_on(to_vertex(builtin("holomorphic(4,jet)")), make_jet_holomorphic(4), -2, 8));
  EXPECT_EQ(to_coefficient(builtin("C(1/3)")).del_action, scalar_module(make_rational(1, 3)).del_action);
  EXPECT_EQ(to_coefficient(builtin("jordan(3)")).del_action, jordan_module(3).del_action);
  EXPECT_THROW(to_vertex(builtin("finitevertex(z^-3)")), InputError);
  BuiltinOptions flagged;
  flagged.expect_locality_failure = true;
  EXPECT_NO_THROW(to_vertex(builtin("finitevertex(z^-3)", flagged)));
  EXPECT_THROW(builtin("holomorphic(0)"), InputError);
  EXPECT_THROW(builtin("nosuch"), InputError);
}

TEST(Run, DocumentedExamples) {
  auto h = run_cli({"h2", "C0"});
  EXPECT_EQ(h.code, 0);
  EXPECT_TRUE(contains(h.out, "dimension: 1"));
  EXPECT_TRUE(contains(h.out, "representative.1: lambda^3\n"));

  auto n = run_cli({"novir", "--c", "0", "--window", "8"});
  EXPECT_EQ(n.code, 0);
  EXPECT_TRUE(contains(n.out, "diffeq-residual: zero through z^8"));
  EXPECT_TRUE(contains(n.out, "virL-residual: nonzero at lambda^2 z^0"));

  auto d = run_cli({"derived-series", "vir"});
  EXPECT_EQ(d.code, 0);
  EXPECT_TRUE(contains(d.out, "not solvable: R^{(1)} = R")) << d.out;
}

TEST(Run, ExitCodesPartitionOutcomes) {
  EXPECT_EQ(run_cli({"check-axioms", defs("virasoro.def")}).code, 0);
  auto bad = run_cli({"check-axioms", defs("virasoro_deformed.def")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_TRUE(contains(bad.out, "witness: C3"));
  // A failing input among passing ones still fails the run.
  EXPECT_EQ(run_cli({"check-axioms", "vir", defs("virasoro_deformed.def"), "current-sl2"}).code, 1);
  EXPECT_EQ(run_cli({"weights", "vir"}).code, 2);
  EXPECT_EQ(run_cli({"h2", defs("errors/trailing_operator.def")}).code, 3);
  EXPECT_EQ(run_cli({"frobnicate", "vir"}).code, 3);
  EXPECT_EQ(run_cli({"h2"}).code, 3);
  EXPECT_EQ(run_cli({"h2", "--window"}).code, 3);
  EXPECT_EQ(run_cli({"locality", "finitevertex(z^-3)"}).code, 3);
  EXPECT_EQ(run_cli({"locality", "finitevertex(z^-3)", "--expect-locality-failure", "--pair", "a,a"}).code, 0);
  EXPECT_EQ(run_cli({"locality", "finitevertex(z^-2)", "--expect-locality-failure", "--pair", "a,a"}).code, 1);
  EXPECT_EQ(run_cli({"vertex-check", defs("finitevertex_odd.def")}).code, 1);
  EXPECT_EQ(run_cli({"novir", "--window", "3"}).code, 3);
}

TEST(Run, ErrorFilesGivePositionedDiagnostics) {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(defs("errors"))) {
    ++seen;
    auto r = run_cli({"check-axioms", entry.path().string()});
    EXPECT_EQ(r.code, 3) << entry.path();
    // path:line:col or name: line:col
    EXPECT_TRUE(std::regex_search(r.err, std::regex(R"(\d+:\d+: )"))) << r.err;
  }
  EXPECT_GE(seen, 6u);
}

TEST(Run, NegativeBoundsAreRejected) {
  EXPECT_EQ(run_cli({"locality", "finitevertex", "--window", "-1"}).code, 3);
  EXPECT_EQ(run_cli({"h2", "C0", "--lambda-degree", "-2"}).code, 3);
  EXPECT_EQ(run_cli({"derived-series", "vir", "--max-steps", "-1"}).code, 3);
}

TEST(Run, MachineReportIsDeterministic) {
  auto a = run_cli({"vertex-check", "finitevertex", "--machine"});
  auto b = run_cli({"vertex-check", "finitevertex", "--machine"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("confalg-report v1\n", 0), 0u);
  EXPECT_TRUE(contains(a.out, "bound.window=8\n"));
  EXPECT_TRUE(contains(a.out, "outcome=pass\n"));
  EXPECT_TRUE(std::regex_search(a.out, std::regex("digest=[0-9a-f]{16}\n")));
  // The digest identifies the input, not the command.
  auto c = run_cli({"genwick", "finitevertex", "--machine"});
  auto digest = [](const std::string& s) { return s.substr(s.find("digest="), 24); };
  EXPECT_EQ(digest(a.out), digest(c.out));
  EXPECT_NE(digest(a.out), digest(run_cli({"genwick", "finitevertex(z^-4+z^-2)", "--machine"}).out));
}

TEST(Run, ReportsCarryBounds) {
  EXPECT_TRUE(contains(run_cli({"h2", "jordan(2)", "--lambda-degree", "8"}).out, "lambda-degree: 8"));
  EXPECT_TRUE(contains(run_cli({"products", "finitevertex", "--window", "5"}).out, "window: 5"));
  EXPECT_TRUE(contains(run_cli({"central-series", "vir"}).out, "max-steps:"));
}

TEST(Run, ExampleFiniteVertex) {
  auto r = run_cli({"example-finitevertex"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(contains(r.out, "a_(1)a: b\n"));
  EXPECT_TRUE(contains(r.out, "a_(0)a: (1/2*del)*b\n"));
  EXPECT_TRUE(contains(r.out, "locality.a.a.on.vac: N=2"));
  EXPECT_TRUE(contains(r.out, "nil.I^2: <b>"));
  EXPECT_TRUE(contains(r.out, "V^{[2]}: 0"));
}

TEST(Run, BinaryExitCode) {
  const std::string cli = CONFALG_CLI_PATH;
  auto status = [&](const std::string& args) {
    int s = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("h2 C0"), 0);
  EXPECT_EQ(status("check-axioms " + defs("virasoro_deformed.def")), 1);
  EXPECT_EQ(status("weights vir"), 2);
  EXPECT_EQ(status("h2 " + defs("errors/odd_psi.def")), 3);
}

TEST(Run, MixedFilesKeepUsableDefinitions) {
  const auto path = std::filesystem::temp_directory_path() / "confalg_mixed.def";
  std::ofstream(path) << virasoro_text() << scalar_coeff_text(0) << jordan_text(1);
  auto h = run_cli({"h2", path.string()});
  EXPECT_EQ(h.code, 0);
  EXPECT_TRUE(contains(h.out, "lambda^3*del\n"));
  EXPECT_FALSE(contains(h.out, "vir"));
  auto c = run_cli({"check-axioms", path.string()});
  EXPECT_EQ(c.code, 0);
  EXPECT_FALSE(contains(c.out, "jordan"));
  EXPECT_EQ(run_cli({"locality", path.string()}).code, 3);
  std::filesystem::remove(path);
}
