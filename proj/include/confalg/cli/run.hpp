#pragma once

#include "confalg/cli/builtins.hpp"
#include "confalg/cli/report.hpp"
#include "confalg/novir.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace confalg::cli {

struct Options {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<long> window;
  std::optional<int> lambda_degree;
  std::optional<std::size_t> max_steps;
  bool machine = false;
  bool expect_locality_failure = false;
  std::string c = "0";
  std::vector<std::string> pairs;
  std::optional<std::string> on;
  std::vector<std::string> elements;
  std::vector<std::string> candidates;
  std::string psi = "z^-2";
  bool timings = false;

  long window_or_default() const { return window.value_or(8); }
  BuiltinOptions builtin_options() const { return {window_or_default(), expect_locality_failure}; }
};

struct LoadedInput {
  std::string label;
  Definition def;
  std::string file;  // empty for builtins
};

inline std::vector<LoadedInput> load_input(const std::string& spec, const Options& o) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (fs::is_regular_file(spec, ec)) {
    std::ifstream in(spec);
    std::stringstream ss;
    ss << in.rdbuf();
    std::vector<LoadedInput> out;
    try {
      for (auto& d : parse_definitions(ss.str())) {
        if (o.expect_locality_failure) d.flags.insert("expect-locality-failure");
        out.push_back({spec + ":" + d.name, std::move(d), spec});
      }
    } catch (const InputError& e) {
      throw InputError(spec + ":" + e.what());
    }
    return out;
  }
  if (is_builtin_name(spec)) return {{spec, builtin(spec, o.builtin_options()), ""}};
  throw InputError("'" + spec + "' is neither a readable file nor a builtin");
}

namespace detail {

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline ModElement parse_element(const FgModule& m, const std::string& text) {
  Expr e = parse_expr(text);
  EvalContext ctx{&m, false, false, 0};
  return element_of(m, evaluate(e, ctx), e.pos);
}

inline ParamPoly parse_weight(const std::string& text) {
  Expr e = parse_expr(text);
  EvalContext ctx{nullptr, false, true, 0};
  return evaluate(e, ctx).scalar_part().coefficient(0);
}

inline std::pair<std::string, std::string> parse_pair(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw InputError("--pair expects A,B: '" + s + "'");
  return {s.substr(0, comma), s.substr(comma + 1)};
}

inline ConformalAlgebra algebra_of(const Definition& d, const Options& o) {
  if (d.kind == Definition::Kind::Vertex) return conformal_shadow(to_vertex(d, o.window));
  return to_conformal(d);
}

inline std::vector<std::pair<std::string, ConformalMatrix>> matrices_of(const Definition& d, const Options& o) {
  if (d.kind == Definition::Kind::GcMatrix) return {{d.name, to_gcmatrix(d)}};
  ConformalAlgebra a = algebra_of(d, o);
  const FgModule& m = a.base();
  std::vector<std::pair<std::string, ConformalMatrix>> out;
  if (o.elements.empty()) {
    for (std::size_t i = 0; i < m.free_rank(); ++i) out.emplace_back("ad " + m.label(i), adjoint_matrix(a, generator(m, i)));
  } else {
    for (const auto& e : o.elements) out.emplace_back("ad " + e, adjoint_matrix(a, parse_element(m, e)));
  }
  return out;
}

inline std::string key_of(std::string s) {
  for (auto& c : s) {
    if (c == ' ') c = '.';
  }
  return s;
}

inline std::string series_name(bool derived, std::size_t k, const std::string& r = "R") {
  if (k == 0) return r;
  return derived ? r + "^{(" + std::to_string(k) + ")}" : r + "^{[" + std::to_string(k) + "]}";
}

inline void series_report(Report& rep, const SeriesResult& s, bool derived, const std::string& r = "R") {
  for (std::size_t k = 0; k < s.terms.size(); ++k) rep.add(series_name(derived, k, r), s.terms[k].str());
  rep.bound("max-steps", std::to_string(s.max_steps));
  const std::string yes = derived ? "solvable" : "nilpotent";
  if (s.zero_at) {
    rep.verdict = yes + ": " + series_name(derived, *s.zero_at, r) + " = 0";
  } else if (s.stabilized_at) {
    rep.verdict = "not " + yes + ": " + series_name(derived, *s.stabilized_at + 1, r) + " = " +
                  series_name(derived, *s.stabilized_at, r);
  } else {
    rep.fail(Outcome::Inconclusive, "series undecided after " + std::to_string(s.max_steps) + " steps; raise --max-steps");
  }
}

inline std::string locality_str(const LocalityResult& r) {
  switch (r.status) {
    case LocalityResult::Status::Local:
      return "N=" + std::to_string(*r.minimal_n) + " (decisive points " + std::to_string(r.decisive_points) + ")";
    case LocalityResult::Status::Fail: return "fail for all N<=" + std::to_string(r.n_max) + ": " + r.witness;
    default: return "inconclusive: " + r.witness;
  }
}

inline std::vector<std::pair<std::size_t, std::size_t>> selected_pairs(const VertexTable& v, const Options& o) {
  const FgModule& m = v.base();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (o.pairs.empty()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = 0; j < m.size(); ++j) {
        if (i != v.vacuum() && j != v.vacuum()) out.emplace_back(i, j);
      }
    }
    return out;
  }
  for (const auto& p : o.pairs) {
    auto [a, b] = parse_pair(p);
    auto ia = m.index_of(a), ib = m.index_of(b);
    if (!ia || !ib) throw InputError("--pair " + p + ": unknown generator");
    out.emplace_back(*ia, *ib);
  }
  return out;
}

// Locality over the selected pairs; returns true when some pair failed.
inline bool locality_items(Report& rep, const VertexTable& v, const Options& o) {
  const FgModule& m = v.base();
  ModElement on = v.vacuum_element();
  std::string on_label = m.label(v.vacuum());
  if (o.on) {
    on = parse_element(m, *o.on);
    on_label = *o.on;
  }
  bool failed = false;
  for (auto [i, j] : selected_pairs(v, o)) {
    auto r = locality_check(v, generator(m, i), generator(m, j), on);
    rep.add("locality." + m.label(i) + "." + m.label(j) + ".on." + key_of(on_label), locality_str(r));
    if (r.status == LocalityResult::Status::Fail) {
      failed = true;
      if (!o.expect_locality_failure) rep.fail(Outcome::Fail, "(" + m.label(i) + "," + m.label(j) + ") " + r.witness);
    } else if (r.status == LocalityResult::Status::Inconclusive) {
      rep.fail(Outcome::Inconclusive, r.witness);
    }
  }
  if (o.expect_locality_failure) {
    if (failed) {
      rep.verdict = "expected locality failure observed";
    } else {
      rep.fail(Outcome::Fail, "a locality failure was expected but every pair is local within the window");
    }
  }
  return failed;
}

inline void vertex_axiom_items(Report& rep, const VertexTable& v) {
  auto ax = check_vertex_axioms(v);
  auto one = [&](const char* name, const AxiomCheck& c) {
    rep.add(name, c.pass ? "pass" : "fail");
    if (!c.pass) rep.fail(Outcome::Fail, std::string(name) + ": " + c.witness);
  };
  one("vacuum", ax.vacuum);
  one("translation", ax.translation);
  one("skew-symmetry", ax.skew);
}

inline std::string identity_str(const IdentityCheck& c) {
  return std::string(c.pass ? "pass" : "fail") + " (checked " + std::to_string(c.checked) + ", skipped " +
         std::to_string(c.skipped) + ")";
}

inline void nil_items(Report& rep, const VertexTable& v, const Submodule& ideal) {
  auto ns = nil_series(v, ideal);
  for (std::size_t k = 0; k < ns.terms.size(); ++k) rep.add("I^" + std::to_string(k + 1), ns.terms[k].str());
  rep.add("ideal", yes_no(is_vertex_ideal(v, ideal)));
  if (ns.window_conditional) rep.add("window-conditional", "yes");
  if (ns.nil_at) {
    rep.verdict = "nil: I^" + std::to_string(*ns.nil_at) + " = 0";
  } else if (ns.stalled_at) {
    rep.verdict = "not nil: I^" + std::to_string(*ns.stalled_at + 1) + " = I^" + std::to_string(*ns.stalled_at);
  } else {
    rep.fail(Outcome::Inconclusive, "nil series undecided");
  }
}

inline Submodule selected_ideal(const VertexTable& v, const Options& o) {
  const FgModule& m = v.base();
  std::vector<ModElement> gens;
  if (o.elements.empty()) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i != v.vacuum()) gens.push_back(generator(m, i));
    }
  } else {
    for (const auto& e : o.elements) gens.push_back(parse_element(m, e));
  }
  return span(m, gens);
}

}  // namespace detail

using Command = std::function<void(Report&, const Definition&, const Options&)>;

// Definition kinds a command can work on.
inline bool accepts(const std::string& command, Definition::Kind k) {
  using K = Definition::Kind;
  if (command == "h2" || command == "classify-ext") return k == K::Coefficient;
  if (command == "vertex-check" || command == "locality" || command == "genwick" || command == "products" ||
      command == "nil-series") {
    return k == K::Vertex;
  }
  if (command == "adjoint" || command == "nilpotent-action" || command == "weights") return k != K::Coefficient;
  return k == K::Conformal || k == K::Vertex;
}

inline const std::map<std::string, Command>& definition_commands() {
  using namespace detail;
  static const std::map<std::string, Command> table{
      {"check-axioms",
       [](Report& rep, const Definition& d, const Options& o) {
         auto a = algebra_of(d, o);
         auto r = check_axioms(a);
         rep.bound("table-degree", std::to_string(a.table_degree()));
         for (auto [name, c] : {std::pair{"C2", &r.c2}, std::pair{"C3", &r.c3}, std::pair{"C4", &r.c4}}) {
           rep.add(name, c->pass ? "pass" : "fail");
           if (!c->pass) rep.fail(Outcome::Fail, std::string(name) + ": " + c->witness);
         }
       }},
      {"derived-series",
       [](Report& rep, const Definition& d, const Options& o) {
         series_report(rep, derived_series(algebra_of(d, o), o.max_steps.value_or(0)), true);
       }},
      {"central-series",
       [](Report& rep, const Definition& d, const Options& o) {
         series_report(rep, central_series(algebra_of(d, o), o.max_steps.value_or(0)), false);
       }},
      {"center",
       [](Report& rep, const Definition& d, const Options& o) {
         auto r = center(algebra_of(d, o), o.lambda_degree);
         rep.bound("del-degree", std::to_string(r.degree_bound));
         rep.add("center-contains", r.center.str());
       }},
      {"adjoint",
       [](Report& rep, const Definition& d, const Options& o) {
         for (const auto& [name, f] : matrices_of(d, o)) rep.add(key_of(name), f.str());
       }},
      {"nilpotent-action",
       [](Report& rep, const Definition& d, const Options& o) {
         for (const auto& [name, f] : matrices_of(d, o)) {
           auto r = action_nilpotent(f);
           std::string v = r.nilpotent ? "nilpotent (W_" + std::to_string(r.steps) + " = 0)" : "not nilpotent";
           rep.add(key_of(name), v);
           if (!r.nilpotent && !r.stabilized) rep.fail(Outcome::Inconclusive, name + ": undecided within the step bound");
         }
       }},
      {"weights",
       [](Report& rep, const Definition& d, const Options& o) {
         std::vector<ParamPoly> cands;
         for (const auto& c : o.candidates) cands.push_back(parse_weight(c));
         for (const auto& [name, f] : matrices_of(d, o)) {
           auto r = weight_spaces(f, cands, o.lambda_degree);
           for (const auto& ch : r.chains) {
             rep.add(key_of(name) + ".V^{" + ch.weight.str() + "}", ch.space().str() + " (chain length " +
                                                                     std::to_string(ch.chain.size() - 1) + ")");
           }
           if (!r.diagnostic.empty()) {
             rep.fail(Outcome::Inconclusive, name + ": " + r.diagnostic);
           } else {
             rep.add(key_of(name) + ".direct", yes_no(r.direct));
           }
         }
       }},
      {"h2",
       [](Report& rep, const Definition& d, const Options& o) {
         auto c = to_coefficient(d);
         const std::size_t bound = static_cast<std::size_t>(o.lambda_degree.value_or(6));
         rep.bound("lambda-degree", std::to_string(bound));
         auto r = h2(c, bound);
         rep.add("dimension", std::to_string(r.dimension));
         for (std::size_t k = 0; k < r.representatives.size(); ++k) {
           rep.add("representative." + std::to_string(k + 1), cocycle_str(c, r.representatives[k]));
         }
         rep.add("cocycles", std::to_string(r.cocycle_dim));
         rep.add("coboundaries", std::to_string(r.coboundary_dim));
         if (!r.coboundaries_contained) rep.fail(Outcome::Fail, "coboundaries are not cocycles");
       }},
      {"classify-ext",
       [](Report& rep, const Definition& d, const Options& o) {
         auto c = to_coefficient(d);
         const std::size_t bound = static_cast<std::size_t>(o.lambda_degree.value_or(6));
         rep.bound("lambda-degree", std::to_string(bound));
         auto r = classify_irreducible(c, bound);
         for (std::size_t k = 0; k < r.summands.size(); ++k) {
           const auto& s = r.summands[k];
           rep.add("summand." + std::to_string(k + 1), s.kind + " size " + std::to_string(s.size) + ", h2 " +
                                                          std::to_string(s.h2_dim) + ", carries irreducible " +
                                                          yes_no(s.carries_irreducible));
         }
         rep.add("h2", std::to_string(r.h2_dim));
         rep.add("irreducible", yes_no(r.irreducible_exists));
         if (!r.representative.empty()) rep.add("representative", r.representative);
         if (!r.note.empty()) rep.add("note", r.note);
         rep.add("cross-check", r.cross_check ? "pass" : "fail");
         if (!r.cross_check) rep.fail(Outcome::Fail, "perfectness cross-check disagrees");
       }},
      {"vertex-check",
       [](Report& rep, const Definition& d, const Options& o) {
         auto v = to_vertex(d, o.window);
         vertex_axiom_items(rep, v);
         auto g = genwick_all(v);
         rep.add("genwick", identity_str(g));
         if (!g.pass) rep.fail(Outcome::Fail, "genwick: " + g.witness);
         auto l = liebracket_all(v);
         rep.add("commutator-formula", identity_str(l));
         if (!l.pass) rep.fail(Outcome::Fail, "commutator formula: " + l.witness);
         auto s = check_axioms(conformal_shadow(v));
         const bool ok = s.c2.pass && s.c3.pass && s.c4.pass;
         rep.add("shadow-axioms", ok ? "pass" : "fail");
         if (!ok) rep.fail(Outcome::Fail, "conformal shadow fails the axioms");
       }},
      {"locality", [](Report& rep, const Definition& d, const Options& o) { locality_items(rep, to_vertex(d, o.window), o); }},
      {"genwick",
       [](Report& rep, const Definition& d, const Options& o) {
         auto g = genwick_all(to_vertex(d, o.window));
         rep.add("genwick", identity_str(g));
         if (!g.pass) rep.fail(Outcome::Fail, g.witness);
       }},
      {"products",
       [](Report& rep, const Definition& d, const Options& o) {
         auto v = to_vertex(d, o.window);
         const FgModule& m = v.base();
         for (auto [i, j] : selected_pairs(v, o)) {
           VSeries s = v.field(generator(m, i), generator(m, j));
           rep.add("Y(" + m.label(i) + ",z)" + m.label(j) + ".known", "z" + s.window_str());
           for (const auto& [e, c] : s.c) {
             rep.add(m.label(i) + "_(" + std::to_string(-e - 1) + ")" + m.label(j), str(m, c));
           }
         }
       }},
      {"nil-series",
       [](Report& rep, const Definition& d, const Options& o) {
         auto v = to_vertex(d, o.window);
         nil_items(rep, v, selected_ideal(v, o));
         auto nb = nilradical_bound(v);
         for (std::size_t k = 0; k < nb.bracket_series.terms.size(); ++k) {
           rep.add(series_name(false, k, "V"), nb.bracket_series.terms[k].str());
         }
         rep.add("nilradical-contains", nb.lower_bound.str());
       }},
  };
  return table;
}

inline Report run_novir(const Options& o) {
  Report rep;
  rep.command = "novir";
  Rational c = detail::arg_rational("--c", o.c);
  rep.input = "c=" + c.get_str();
  const long k = o.window_or_default();
  rep.bound("window", std::to_string(k));
  if (k < 4) throw InputError("novir: --window must be at least 4");
  rep.digest = fnv1a64("novir c=" + c.get_str() + " K=" + std::to_string(k));
  auto r = novir_verify(c, k);
  rep.add("a-singular-part", r.singular_part);
  rep.add("diffeq-residual", r.diffeq_zero ? "zero through z^" + std::to_string(k)
                                           : "nonzero at z^" + std::to_string(*r.diffeq_first_nonzero));
  if (!r.diffeq_zero) rep.fail(Outcome::Fail, "a(del,z) does not solve the differential equation");
  if (r.virl_fails) {
    rep.add("virL-residual", "nonzero at lambda^" + std::to_string(r.virl_lambda_power) + " z^" +
                                 std::to_string(r.virl_z_order) + ": " + r.virl_coefficient.str());
    if (r.diffeq_zero) rep.verdict = "a(del,z) solves the differential equation and violates the L-identity";
  } else {
    rep.fail(Outcome::Inconclusive, r.note);
  }
  return rep;
}

inline Report run_example_finitevertex(const Options& o) {
  using namespace detail;
  Report rep;
  rep.command = "example-finitevertex";
  Definition d = builtin("finitevertex(" + o.psi + ")", o.builtin_options());
  rep.input = "psi=" + o.psi;
  rep.digest = fnv1a64(print(d));
  VertexTable v = to_vertex(d, o.window);
  const FgModule& m = v.base();
  rep.bound("window", std::to_string(v.window()));
  auto a = generator(m, 0);
  for (long n : {1L, 0L, -1L}) rep.add("a_(" + std::to_string(n) + ")a", str(m, product(v, a, a, n)));
  vertex_axiom_items(rep, v);
  Options lo = o;
  lo.pairs = {"a,a"};
  lo.on.reset();
  locality_items(rep, v, lo);
  Report nil;
  nil_items(nil, v, span(m, {a, generator(m, 1)}));
  for (auto& it : nil.items) rep.add("nil." + it.first, it.second);
  rep.add("nil.verdict", nil.verdict);
  auto cs = central_series(conformal_shadow(v));
  for (std::size_t k = 0; k < cs.terms.size(); ++k) rep.add(series_name(false, k, "V"), cs.terms[k].str());
  return rep;
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "check-axioms", "derived-series", "central-series", "center",      "adjoint",       "nilpotent-action",
      "weights",      "h2",             "classify-ext",   "vertex-check", "locality",      "genwick",
      "products",     "nil-series",     "novir",          "example-finitevertex"};
  return names;
}

// Runs one command; reports go to out, diagnostics to err; returns the exit code.
inline int run(const Options& o, std::ostream& out, std::ostream& err) {
  auto emit = [&](const Report& r) {
    if (o.machine) {
      render_machine(out, r);
    } else {
      render_human(out, r);
    }
  };
  auto timed = [&](const std::function<Report()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Report r = f();
    if (o.timings) {
      r.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    return r;
  };
  auto guarded = [&](Report base, const std::function<void(Report&)>& body) {
    try {
      body(base);
    } catch (const WindowError& e) {
      base.fail(Outcome::Inconclusive, std::string(e.what()) + "; raise --window");
    }
    return base;
  };
  try {
    if (o.command == "novir") {
      Report r = timed([&] { return guarded(Report{}, [&](Report& rep) { rep = run_novir(o); }); });
      emit(r);
      return static_cast<int>(r.outcome);
    }
    if (o.command == "example-finitevertex") {
      Report r = timed([&] { return guarded(Report{}, [&](Report& rep) { rep = run_example_finitevertex(o); }); });
      emit(r);
      return static_cast<int>(r.outcome);
    }
    auto it = definition_commands().find(o.command);
    if (it == definition_commands().end()) throw InputError("unknown command '" + o.command + "'");
    if (o.inputs.empty()) throw InputError(o.command + " needs at least one definition file or builtin");
    std::vector<LoadedInput> inputs;
    for (const auto& s : o.inputs) {
      auto loaded = load_input(s, o);
      // Files may mix kinds; keep what the command can use.
      if (!loaded.empty() && !loaded.front().file.empty()) {
        std::erase_if(loaded, [&](const LoadedInput& li) { return !accepts(o.command, li.def.kind); });
        if (loaded.empty()) throw InputError(s + ": no definition usable by " + o.command);
      }
      for (auto& li : loaded) inputs.push_back(std::move(li));
    }
    Outcome total = Outcome::Pass;
    for (const auto& in : inputs) {
      Report r = timed([&] {
        Report base;
        base.command = o.command;
        base.input = in.label;
        base.digest = fnv1a64(print(in.def));
        if (in.def.kind == Definition::Kind::Vertex) base.bound("window", std::to_string(o.window.value_or(*in.def.window)));
        return guarded(base, [&](Report& rep) {
          try {
            it->second(rep, in.def, o);
          } catch (const InputError& e) {
            if (e.line() > 0 && !in.file.empty()) {
              throw InputError(in.file + ":" + e.what() + " (in " + in.def.name + ")");
            }
            throw InputError(in.label + ": " + e.what());
          }
        });
      });
      emit(r);
      total = worst(total, r.outcome);
    }
    return static_cast<int>(total);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact computations with Lie conformal algebras and finite vertex algebras", "confalg"};
  Options o;
  long window = -1;
  int lambda_degree = -1;
  long max_steps = -1;
  std::string on;
  app.add_option("command", o.command, "one of: check-axioms, derived-series, central-series, center, adjoint, "
                                       "nilpotent-action, weights, h2, classify-ext, vertex-check, locality, genwick, "
                                       "products, nil-series, novir, example-finitevertex")
      ->required();
  app.add_option("inputs", o.inputs, "definition files or builtins (vir, vir-ext(c,N), current-sl2, finitevertex(psi), "
                                     "holomorphic(n[,jet]), C0, C(a), jordan(N))");
  app.add_option("--window", window, "truncation order K in z (default 8)")->check(CLI::NonNegativeNumber);
  app.add_option("--lambda-degree", lambda_degree, "degree bound for cocycles and ansatz searches (default 6)")->check(CLI::NonNegativeNumber);
  app.add_option("--max-steps", max_steps, "step bound for series")->check(CLI::NonNegativeNumber);
  app.add_flag("--machine", o.machine, "key=value report");
  app.add_flag("--expect-locality-failure", o.expect_locality_failure, "a locality failure is the expected outcome");
  app.add_option("--c", o.c, "central charge for novir (rational)");
  app.add_option("--pair", o.pairs, "generator pair A,B (repeatable)");
  app.add_option("--on", on, "vector the locality commutator is applied to (default: vacuum)");
  app.add_option("--element", o.elements, "element expression (repeatable)");
  app.add_option("--candidate", o.candidates, "candidate weight, a polynomial in lambda (repeatable)");
  app.add_option("--psi", o.psi, "Laurent polynomial psi(z) for example-finitevertex");
  app.add_flag("--timings", o.timings, "add wall-clock timings to reports");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  if (window >= 0) o.window = window;
  if (lambda_degree >= 0) o.lambda_degree = lambda_degree;
  if (max_steps >= 0) o.max_steps = static_cast<std::size_t>(max_steps);
  if (!on.empty()) o.on = on;
  return run(o, out, err);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"confalg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace confalg::cli
