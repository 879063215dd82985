#pragma once

#include "confalg/cdmod.hpp"
#include "confalg/errors.hpp"

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace confalg {

// A Lie conformal algebra on an FgModule, given by [g_i lambda g_j] for all
// generator pairs. Entries are polynomials in del and lambda; any bracket
// with a torsion generator is zero.
class ConformalAlgebra {
 public:
  using Table = std::vector<std::vector<ModElement>>;

  ConformalAlgebra() = default;
  ConformalAlgebra(FgModule base, Table table, std::string name = "") : base_(std::move(base)), name_(std::move(name)) {
    const std::size_t n = base_.size();
    table_.assign(n, std::vector<ModElement>(n, zero_element(base_)));
    if (!table.empty() && table.size() != n) throw DimensionError("bracket table must be square of module size");
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (table[i].size() != n) throw DimensionError("bracket table must be square of module size");
      for (std::size_t j = 0; j < n; ++j) set(i, j, table[i][j]);
    }
  }
  ConformalAlgebra(FgModule base, const std::map<std::pair<std::size_t, std::size_t>, ModElement>& entries,
                   std::string name = "")
      : ConformalAlgebra(std::move(base), Table{}, std::move(name)) {
    for (const auto& [ij, e] : entries) set(ij.first, ij.second, e);
  }

  const FgModule& base() const { return base_; }
  const std::string& name() const { return name_; }
  std::size_t size() const { return base_.size(); }
  const ModElement& entry(std::size_t i, std::size_t j) const { return table_.at(i).at(j); }
  const Table& table() const { return table_; }

  // Largest total degree in (del, lambda) over the table.
  int table_degree() const {
    int d = 0;
    for (const auto& row : table_) {
      for (const auto& e : row) {
        for (const auto& c : e.coeffs) d = std::max(d, c.total_degree());
      }
    }
    return d;
  }

  bool is_abelian() const {
    for (const auto& row : table_) {
      for (const auto& e : row) {
        if (!e.is_zero()) return false;
      }
    }
    return true;
  }

 private:
  void set(std::size_t i, std::size_t j, const ModElement& e) {
    check_element(base_, e);
    for (const auto& c : e.coeffs) {
      if (c.has(Sym::Mu) || c.has(Sym::Alpha)) {
        throw std::invalid_argument("bracket entries may only use del and lambda");
      }
    }
    ModElement n = normalize(base_, e);
    if ((base_.is_torsion(i) || base_.is_torsion(j)) && !n.is_zero()) {
      throw std::invalid_argument("bracket [" + base_.label(i) + " lambda " + base_.label(j) +
                                  "] involves a torsion generator and must vanish");
    }
    table_.at(i).at(j) = std::move(n);
  }

  FgModule base_;
  Table table_;
  std::string name_;
};

// [x_nu y] extended from the table by sesquilinearity:
// sum_{i,j} p_i(-nu) q_j(del + nu) c_ij(del, nu). Coefficients of x and y may
// carry other parameters; they are treated as scalars.
inline ModElement bracket(const ConformalAlgebra& a, const ModElement& x, const ModElement& y,
                          const ParamPoly& nu = ParamPoly::lambda()) {
  const FgModule& m = a.base();
  check_element(m, x);
  check_element(m, y);
  ModElement out = zero_element(m);
  const ParamPoly minus_nu = -nu;
  const ParamPoly shifted = ParamPoly::del() + nu;
  for (std::size_t i = 0; i < m.free_rank(); ++i) {
    if (x[i].is_zero()) continue;
    const ParamPoly p = x[i].subs(Sym::Del, minus_nu);
    for (std::size_t j = 0; j < m.free_rank(); ++j) {
      if (y[j].is_zero() || a.entry(i, j).is_zero()) continue;
      const ParamPoly q = y[j].subs(Sym::Del, shifted);
      const ModElement c = nu == ParamPoly::lambda() ? a.entry(i, j) : subs(a.entry(i, j), Sym::Lambda, nu);
      out += act(m, p * q, c);
    }
  }
  return out;
}

struct AxiomCheck {
  bool pass = true;
  std::string witness;
};

struct AxiomReport {
  AxiomCheck c2;
  AxiomCheck c3;
  AxiomCheck c4;
  bool all_pass() const { return c2.pass && c3.pass && c4.pass; }
};

inline AxiomReport check_axioms(const ConformalAlgebra& a) {
  const FgModule& m = a.base();
  const std::size_t n = m.size();
  const ParamPoly lam = ParamPoly::lambda();
  const ParamPoly mu = ParamPoly::mu();
  AxiomReport rep;
  auto fail = [&](AxiomCheck& c, const std::string& w) {
    if (c.pass) {
      c.pass = false;
      c.witness = w;
    }
  };
  for (std::size_t i = 0; i < n && rep.c2.pass; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ModElement gi = generator(m, i), gj = generator(m, j);
      const ModElement base = bracket(a, gi, gj);
      if (bracket(a, apply_del(m, gi), gj) != act(m, -lam, base)) {
        fail(rep.c2, "[del " + m.label(i) + " lambda " + m.label(j) + "] != -lambda [" + m.label(i) + " lambda " +
                         m.label(j) + "]");
        break;
      }
      if (bracket(a, gi, apply_del(m, gj)) != act(m, ParamPoly::del() + lam, base)) {
        fail(rep.c2, "[" + m.label(i) + " lambda del " + m.label(j) + "] != (del + lambda)[" + m.label(i) +
                         " lambda " + m.label(j) + "]");
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n && rep.c3.pass; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const ModElement lhs = a.entry(i, j);
      const ModElement rhs = -normalize(m, subs(a.entry(j, i), Sym::Lambda, -ParamPoly::del() - lam));
      if (lhs != rhs) {
        fail(rep.c3, "pair (" + m.label(i) + "," + m.label(j) + "): [" + m.label(i) + " lambda " + m.label(j) +
                         "] = " + str(m, lhs) + " but -[" + m.label(j) + " -del-lambda " + m.label(i) +
                         "] = " + str(m, rhs));
        break;
      }
    }
  }
  for (std::size_t i = 0; i < n && rep.c4.pass; ++i) {
    for (std::size_t j = 0; j < n && rep.c4.pass; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const ModElement gi = generator(m, i), gj = generator(m, j), gk = generator(m, k);
        const ModElement lhs =
            bracket(a, gi, bracket(a, gj, gk, mu), lam) - bracket(a, gj, bracket(a, gi, gk, lam), mu);
        const ModElement rhs = bracket(a, bracket(a, gi, gj, lam), gk, lam + mu);
        if (lhs != rhs) {
          fail(rep.c4, "triple (" + m.label(i) + "," + m.label(j) + "," + m.label(k) +
                           "): difference " + str(m, lhs - rhs));
          break;
        }
      }
    }
  }
  return rep;
}

// [X, Y]: C[del]-span of the lambda-coefficients of brackets of generators.
inline Submodule subspace_bracket(const ConformalAlgebra& a, const Submodule& x, const Submodule& y) {
  std::vector<ModElement> gens;
  for (const auto& u : x.canonical()) {
    for (const auto& v : y.canonical()) {
      ModElement b = bracket(a, u, v);
      if (!b.is_zero()) gens.push_back(std::move(b));
    }
  }
  return span(a.base(), gens);
}

inline bool is_ideal(const ConformalAlgebra& a, const Submodule& s) {
  return s.contains(subspace_bracket(a, whole_module(a.base()), s));
}

inline bool is_subalgebra(const ConformalAlgebra& a, const Submodule& s) {
  return s.contains(subspace_bracket(a, s, s));
}

struct SeriesResult {
  std::vector<Submodule> terms;  // terms[0] is the whole algebra
  std::optional<std::size_t> zero_at;       // first n with terms[n] = 0
  std::optional<std::size_t> stabilized_at;  // first n with terms[n+1] = terms[n] != 0
  std::size_t max_steps = 0;

  bool reaches_zero() const { return zero_at.has_value(); }
  bool decided() const { return zero_at.has_value() || stabilized_at.has_value(); }
};

inline std::size_t default_max_steps(const FgModule& m) { return 2 * (m.free_rank() + m.torsion_dim()) + 2; }

namespace detail {

template <typename Next>
SeriesResult run_series(const ConformalAlgebra& a, std::size_t max_steps, Next next) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be at least 1");
  SeriesResult r;
  r.max_steps = max_steps;
  r.terms.push_back(whole_module(a.base()));
  if (r.terms[0].is_zero()) {
    r.zero_at = 0;
    return r;
  }
  for (std::size_t n = 0; n < max_steps; ++n) {
    Submodule t = next(r.terms.back());
    const bool same = t == r.terms.back();
    r.terms.push_back(std::move(t));
    if (r.terms.back().is_zero()) {
      r.zero_at = n + 1;
      break;
    }
    if (same) {
      r.stabilized_at = n;
      break;
    }
  }
  return r;
}

}  // namespace detail

// R^(0) = R, R^(n+1) = [R^(n), R^(n)].
inline SeriesResult derived_series(const ConformalAlgebra& a, std::size_t max_steps = 0) {
  if (max_steps == 0) max_steps = default_max_steps(a.base());
  return detail::run_series(a, max_steps, [&](const Submodule& s) { return subspace_bracket(a, s, s); });
}

// R^[0] = R, R^[n+1] = [R, R^[n]].
inline SeriesResult central_series(const ConformalAlgebra& a, std::size_t max_steps = 0) {
  if (max_steps == 0) max_steps = default_max_steps(a.base());
  const Submodule whole = whole_module(a.base());
  return detail::run_series(a, max_steps, [&](const Submodule& s) { return subspace_bracket(a, whole, s); });
}

struct CenterResult {
  Submodule center;
  int degree_bound = 0;  // del-degree of the ansatz on free generators
};

// Solve [x lambda g_j] = 0 for all j with x of bounded del-degree on the
// free block; torsion is always central.
inline CenterResult center(const ConformalAlgebra& a, std::optional<int> bound = std::nullopt) {
  const FgModule& m = a.base();
  CenterResult res;
  res.degree_bound = bound.value_or(a.table_degree() + static_cast<int>(m.free_rank()));
  const std::size_t r = m.free_rank();
  const auto B = static_cast<std::size_t>(res.degree_bound);
  // Column (i, n): x = del^n g_i. Its brackets with every generator, flattened.
  std::vector<std::vector<ModElement>> images;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t n = 0; n <= B; ++n) {
      ModElement x = zero_element(m);
      x[i] = ParamPoly::del(static_cast<unsigned>(n));
      std::vector<ModElement> row;
      for (std::size_t j = 0; j < m.size(); ++j) row.push_back(bracket(a, x, generator(m, j)));
      images.push_back(std::move(row));
    }
  }
  std::map<std::tuple<std::size_t, std::size_t, Exponents>, std::size_t> coord;
  for (const auto& row : images) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      for (std::size_t g = 0; g < row[j].size(); ++g) {
        for (const auto& [e, c] : row[j][g].terms()) coord.try_emplace({j, g, e}, coord.size());
      }
    }
  }
  QMatrix eqs(coord.size(), QVector(images.size()));
  for (std::size_t col = 0; col < images.size(); ++col) {
    for (std::size_t j = 0; j < images[col].size(); ++j) {
      for (std::size_t g = 0; g < images[col][j].size(); ++g) {
        for (const auto& [e, c] : images[col][j][g].terms()) eqs[coord.at({j, g, e})][col] = c;
      }
    }
  }
  std::vector<ModElement> gens;
  for (const auto& sol : nullspace(eqs, images.size())) {
    ModElement x = zero_element(m);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t n = 0; n <= B; ++n) {
        const Rational& c = sol[i * (B + 1) + n];
        if (c != 0) x[i] += ParamPoly::del(static_cast<unsigned>(n)) * c;
      }
    }
    gens.push_back(std::move(x));
  }
  for (std::size_t t = 0; t < m.torsion_dim(); ++t) gens.push_back(generator(m, r + t));
  res.center = span(m, gens);
  return res;
}

// Per-generator check that [C g, R] = R; a necessary condition for strong
// simplicity that only inspects the generators, not every element.
struct StrongSimplicityReport {
  bool all_generators_pass = true;
  std::vector<std::string> failing_generators;
};

inline StrongSimplicityReport strong_simplicity_check(const ConformalAlgebra& a) {
  const FgModule& m = a.base();
  StrongSimplicityReport rep;
  const Submodule whole = whole_module(m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<ModElement> gens;
    for (std::size_t j = 0; j < m.size(); ++j) gens.push_back(bracket(a, generator(m, i), generator(m, j)));
    if (!(span(m, gens) == whole)) {
      rep.all_generators_pass = false;
      rep.failing_generators.push_back(m.label(i));
    }
  }
  return rep;
}

// Structure constants of a finite-dimensional Lie algebra:
// [e_a, e_b] = sum_c f[a][b][c] e_c.
struct LieStructure {
  std::vector<std::string> labels;
  std::vector<std::vector<QVector>> f;
};

inline void check_lie_structure(const LieStructure& s) {
  const std::size_t n = s.labels.size();
  if (s.f.size() != n) throw std::invalid_argument("structure constants: wrong size");
  for (const auto& row : s.f) {
    if (row.size() != n) throw std::invalid_argument("structure constants: wrong size");
    for (const auto& v : row) {
      if (v.size() != n) throw std::invalid_argument("structure constants: wrong size");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (s.f[a][b][c] != -s.f[b][a][c]) {
          throw std::invalid_argument("structure constants not antisymmetric at (" + s.labels[a] + "," +
                                      s.labels[b] + ")");
        }
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        // [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
        QVector total(n);
        auto add_nested = [&](std::size_t x, std::size_t y, std::size_t z) {
          for (std::size_t d = 0; d < n; ++d) {
            if (s.f[y][z][d] == 0) continue;
            for (std::size_t e = 0; e < n; ++e) total[e] += s.f[y][z][d] * s.f[x][d][e];
          }
        };
        add_nested(a, b, c);
        add_nested(b, c, a);
        add_nested(c, a, b);
        if (!is_zero(total)) {
          throw std::invalid_argument("structure constants violate Jacobi on (" + s.labels[a] + "," + s.labels[b] +
                                      "," + s.labels[c] + ")");
        }
      }
    }
  }
}

inline ConformalAlgebra make_virasoro() {
  FgModule m(1, 0, {}, {"L"});
  ModElement e(1);
  e[0] = ParamPoly::del() + ParamPoly::lambda() * 2;
  return ConformalAlgebra(m, ConformalAlgebra::Table{{e}}, "vir");
}

// Cur g: [a lambda b] = [a, b].
inline ConformalAlgebra make_current(const LieStructure& s, std::string name = "current") {
  check_lie_structure(s);
  const std::size_t n = s.labels.size();
  FgModule m(n, 0, {}, s.labels);
  ConformalAlgebra::Table t(n, std::vector<ModElement>(n, zero_element(m)));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) t[a][b][c] = ParamPoly(s.f[a][b][c]);
    }
  }
  return ConformalAlgebra(m, t, std::move(name));
}

inline LieStructure sl2_structure() {
  LieStructure s;
  s.labels = {"e", "h", "f"};
  s.f.assign(3, std::vector<QVector>(3, QVector(3)));
  s.f[0][2][1] = 1;   // [e,f] = h
  s.f[2][0][1] = -1;
  s.f[1][0][0] = 2;   // [h,e] = 2e
  s.f[0][1][0] = -2;
  s.f[1][2][2] = -2;  // [h,f] = -2f
  s.f[2][1][2] = 2;
  return s;
}

// Vir extended by C[del]/(del^{N+1}) with basis k_i = del^i k:
// [L lambda L] = (del + 2 lambda) L + c lambda^3 del^N k.
inline ConformalAlgebra make_virasoro_ext(const Rational& c, std::size_t N) {
  std::vector<std::string> labels{"L"};
  if (N == 0) {
    labels.push_back("k");
  } else {
    for (std::size_t i = 0; i <= N; ++i) labels.push_back("k" + std::to_string(i));
  }
  QMatrix shift(N + 1, QVector(N + 1));
  for (std::size_t i = 0; i < N; ++i) shift[i + 1][i] = 1;
  FgModule m(1, N + 1, shift, labels);
  ModElement e = zero_element(m);
  e[0] = ParamPoly::del() + ParamPoly::lambda() * 2;
  e[1 + N] = ParamPoly::lambda(3) * c;
  return ConformalAlgebra(m, std::map<std::pair<std::size_t, std::size_t>, ModElement>{{{0, 0}, e}},
                          "vir-ext(" + c.get_str() + "," + std::to_string(N) + ")");
}

inline ConformalAlgebra make_abelian(const FgModule& m) { return ConformalAlgebra(m, ConformalAlgebra::Table{}, "abelian"); }

}  // namespace confalg
