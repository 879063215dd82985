#pragma once

#include "confalg/cli/expr.hpp"
#include "confalg/cohom.hpp"
#include "confalg/gcmat.hpp"
#include "confalg/lca.hpp"
#include "confalg/va.hpp"

#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace confalg::cli {

struct Entry {
  std::string left;
  std::string right;
  Expr value;
  Pos pos;

  friend bool operator==(const Entry& a, const Entry& b) {
    return a.left == b.left && a.right == b.right && a.value == b.value;
  }
};

struct Definition {
  enum class Kind { Conformal, Vertex, Coefficient, GcMatrix };
  Kind kind = Kind::Conformal;
  std::string name;
  std::vector<std::string> free;
  std::vector<std::string> torsion;
  QMatrix del;                      // torsion action (coefficient modules: the del matrix)
  std::size_t dim = 0;              // coefficient modules
  std::vector<std::string> basis;   // coefficient modules, optional labels
  std::optional<std::string> vacuum;
  std::optional<long> window;
  std::set<std::string> flags;
  std::vector<Entry> entries;
  Pos pos;

  friend bool operator==(const Definition& a, const Definition& b) {
    return a.kind == b.kind && a.name == b.name && a.free == b.free && a.torsion == b.torsion && a.del == b.del &&
           a.dim == b.dim && a.basis == b.basis && a.vacuum == b.vacuum && a.window == b.window &&
           a.flags == b.flags && a.entries == b.entries;
  }
};

inline const char* kind_keyword(Definition::Kind k) {
  switch (k) {
    case Definition::Kind::Conformal: return "conformal";
    case Definition::Kind::Vertex: return "vertex";
    case Definition::Kind::Coefficient: return "coeff";
    default: return "gcmatrix";
  }
}

inline const std::set<std::string>& known_flags() {
  static const std::set<std::string> f{"expect-locality-failure"};
  return f;
}

namespace detail {

inline Rational parse_signed_rational(Lexer& lx) {
  bool neg = false;
  if (lx.at("-")) {
    lx.next();
    neg = true;
  }
  Rational r(lx.expect_number("a rational number").text);
  if (lx.at("/")) {
    lx.next();
    Token d = lx.expect_number("a denominator");
    if (d.text.find_first_not_of('0') == std::string::npos) throw InputError("zero denominator", d.pos.line, d.pos.col);
    r /= Rational(d.text);
  }
  return neg ? Rational(-r) : r;
}

inline QMatrix parse_matrix(Lexer& lx) {
  QMatrix m;
  lx.expect("[");
  while (!lx.at("]")) {
    Token open = lx.expect("[");
    QVector row;
    while (!lx.at("]")) {
      row.push_back(parse_signed_rational(lx));
      if (!lx.at("]")) lx.expect(",");
    }
    lx.next();
    if (!m.empty() && row.size() != m[0].size()) throw InputError("matrix rows differ in length", open.pos.line, open.pos.col);
    m.push_back(std::move(row));
    if (!lx.at("]")) lx.expect(",");
  }
  lx.next();
  return m;
}

inline std::vector<std::string> parse_names(Lexer& lx) {
  std::vector<std::string> out;
  out.push_back(lx.expect_ident("a name").text);
  while (lx.at(",")) {
    lx.next();
    out.push_back(lx.expect_ident("a name").text);
  }
  return out;
}

// flag names are words joined by '-'
inline std::string parse_flag(Lexer& lx) {
  std::string s = lx.expect_ident("a flag name").text;
  while (lx.at("-")) {
    lx.next();
    s += "-" + lx.expect_ident("a flag name").text;
  }
  return s;
}

inline Definition parse_block(Lexer& lx) {
  Definition d;
  Token kw = lx.expect_ident("a definition kind (conformal, vertex, coeff, gcmatrix)");
  d.pos = kw.pos;
  if (kw.text == "conformal") {
    d.kind = Definition::Kind::Conformal;
  } else if (kw.text == "vertex") {
    d.kind = Definition::Kind::Vertex;
  } else if (kw.text == "coeff") {
    d.kind = Definition::Kind::Coefficient;
  } else if (kw.text == "gcmatrix") {
    d.kind = Definition::Kind::GcMatrix;
  } else {
    throw InputError("unknown definition kind '" + kw.text + "'", kw.pos.line, kw.pos.col);
  }
  d.name = lx.expect_ident("a definition name").text;
  lx.expect("{");
  std::optional<Pos> del_pos;
  while (!lx.at("}")) {
    if (lx.at_end()) lx.fail("expected '}'");
    Token item = lx.expect_ident("a directive");
    auto bad = [&](const std::string& msg) { return InputError(msg, item.pos.line, item.pos.col); };
    const bool is_coeff = d.kind == Definition::Kind::Coefficient;
    if (item.text == "gen" && !is_coeff) {
      for (auto& n : parse_names(lx)) d.free.push_back(std::move(n));
    } else if (item.text == "torsion" && !is_coeff) {
      for (auto& n : parse_names(lx)) d.torsion.push_back(std::move(n));
    } else if (item.text == "del") {
      d.del = parse_matrix(lx);
      del_pos = item.pos;
    } else if (item.text == "dim" && is_coeff) {
      Token n = lx.expect_number("a dimension");
      d.dim = std::stoul(n.text);
    } else if (item.text == "basis" && is_coeff) {
      d.basis = parse_names(lx);
    } else if (item.text == "vacuum" && d.kind == Definition::Kind::Vertex) {
      d.vacuum = lx.expect_ident("the vacuum generator").text;
    } else if (item.text == "window" && d.kind == Definition::Kind::Vertex) {
      d.window = std::stol(lx.expect_number("a window size").text);
    } else if (item.text == "flag") {
      std::string f = parse_flag(lx);
      if (!known_flags().count(f)) throw bad("unknown flag '" + f + "'");
      d.flags.insert(f);
    } else if ((item.text == "bracket" && d.kind == Definition::Kind::Conformal) ||
               (item.text == "field" && d.kind == Definition::Kind::Vertex) ||
               (item.text == "entry" && d.kind == Definition::Kind::GcMatrix)) {
      Entry e;
      e.pos = item.pos;
      e.left = lx.expect_ident("a generator name").text;
      e.right = lx.expect_ident("a generator name").text;
      lx.expect("=");
      e.value = parse_expr(lx);
      for (const auto& o : d.entries) {
        if (o.left == e.left && o.right == e.right) throw bad("duplicate entry for " + e.left + " " + e.right);
      }
      d.entries.push_back(std::move(e));
    } else {
      throw bad("unexpected directive '" + item.text + "' in " + kind_keyword(d.kind) + " block");
    }
    lx.expect(";");
  }
  lx.next();

  // Shape checks that need the whole block.
  auto at = [&](Pos p, const std::string& msg) { return InputError(msg, p.line, p.col); };
  if (d.kind == Definition::Kind::Coefficient) {
    if (d.dim == 0 && !d.del.empty()) d.dim = d.del.size();
    if (!d.basis.empty() && d.basis.size() != d.dim) throw at(d.pos, "basis size differs from dim");
    if (d.del.empty()) d.del = QMatrix(d.dim, QVector(d.dim));
    if (d.del.size() != d.dim || (!d.del.empty() && d.del[0].size() != d.dim)) {
      throw at(del_pos.value_or(d.pos), "del matrix must be " + std::to_string(d.dim) + "x" + std::to_string(d.dim));
    }
  } else {
    if (d.del.empty()) d.del = QMatrix(d.torsion.size(), QVector(d.torsion.size()));
    if (d.del.size() != d.torsion.size() || (!d.del.empty() && d.del[0].size() != d.torsion.size())) {
      throw at(del_pos.value_or(d.pos), "del matrix must be square of the torsion dimension");
    }
    if (d.free.empty() && d.torsion.empty()) throw at(d.pos, "no generators declared");
  }
  if (d.kind == Definition::Kind::Vertex) {
    if (!d.window) throw at(d.pos, "vertex definition needs a window directive");
    if (!d.vacuum) throw at(d.pos, "vertex definition needs a vacuum directive");
  }
  return d;
}

inline std::string rational_str(const Rational& r) { return r.get_str(); }

}  // namespace detail

inline std::vector<Definition> parse_definitions(std::string_view source) {
  Lexer lx(source);
  std::vector<Definition> out;
  while (!lx.at_end()) out.push_back(detail::parse_block(lx));
  if (out.empty()) throw InputError("no definitions found", 1, 1);
  return out;
}

inline Definition parse_definition(std::string_view source) {
  auto defs = parse_definitions(source);
  if (defs.size() != 1) throw InputError("expected exactly one definition", defs[1].pos.line, defs[1].pos.col);
  return defs[0];
}

inline std::string print(const Definition& d) {
  std::ostringstream os;
  auto names = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  os << kind_keyword(d.kind) << " " << d.name << " {\n";
  if (!d.free.empty()) os << "  gen " << names(d.free) << ";\n";
  if (!d.torsion.empty()) os << "  torsion " << names(d.torsion) << ";\n";
  if (d.kind == Definition::Kind::Coefficient) {
    os << "  dim " << d.dim << ";\n";
    if (!d.basis.empty()) os << "  basis " << names(d.basis) << ";\n";
  }
  if (!d.del.empty()) {
    os << "  del [";
    for (std::size_t i = 0; i < d.del.size(); ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < d.del[i].size(); ++j) os << (j ? ", " : "") << detail::rational_str(d.del[i][j]);
      os << "]";
    }
    os << "];\n";
  }
  if (d.vacuum) os << "  vacuum " << *d.vacuum << ";\n";
  if (d.window) os << "  window " << *d.window << ";\n";
  for (const auto& f : d.flags) os << "  flag " << f << ";\n";
  const char* kw = d.kind == Definition::Kind::Conformal ? "bracket" : d.kind == Definition::Kind::Vertex ? "field" : "entry";
  for (const auto& e : d.entries) os << "  " << kw << " " << e.left << " " << e.right << " = " << print(e.value) << ";\n";
  os << "}\n";
  return os.str();
}

// ---- Building domain objects -----------------------------------------------

inline FgModule module_of(const Definition& d) {
  std::vector<std::string> labels = d.free;
  labels.insert(labels.end(), d.torsion.begin(), d.torsion.end());
  try {
    return FgModule(d.free.size(), d.torsion.size(), d.del, labels);
  } catch (const Error& e) {
    throw InputError(e.what(), d.pos.line, d.pos.col);
  }
}

namespace detail {

inline std::size_t entry_index(const FgModule& m, const std::string& name, Pos p) {
  auto i = m.index_of(name);
  if (!i) throw InputError("unknown generator '" + name + "'", p.line, p.col);
  return *i;
}

// A z-free value as a module element.
inline ModElement element_of(const FgModule& m, const Value& v, Pos p) {
  ModElement e = zero_element(m);
  for (const auto& [k, w] : v.parts) {
    if (w.is_zero()) continue;
    if (k < 0) throw InputError("bracket value has a term without a generator", p.line, p.col);
    for (const auto& [key, c] : w.coefficients()) {
      if (key[0] != 0) throw InputError("bracket value depends on z", p.line, p.col);
      e[static_cast<std::size_t>(k)] += c;
    }
  }
  return normalize(m, e);
}

}  // namespace detail

inline ConformalAlgebra to_conformal(const Definition& d) {
  if (d.kind != Definition::Kind::Conformal) throw InputError("'" + d.name + "' is not a conformal definition", d.pos.line, d.pos.col);
  FgModule m = module_of(d);
  EvalContext ctx{&m, false, true, 0};
  std::map<std::pair<std::size_t, std::size_t>, ModElement> table;
  for (const auto& e : d.entries) {
    const std::size_t i = detail::entry_index(m, e.left, e.pos);
    const std::size_t j = detail::entry_index(m, e.right, e.pos);
    ModElement v = detail::element_of(m, evaluate(e.value, ctx), e.value.pos);
    if ((m.is_torsion(i) || m.is_torsion(j)) && !v.is_zero()) {
      throw InputError("bracket with torsion generator " + (m.is_torsion(i) ? e.left : e.right) + " must be zero",
                       e.pos.line, e.pos.col);
    }
    table.emplace(std::make_pair(i, j), v);
  }
  return ConformalAlgebra(m, table, d.name);
}

inline CoefficientModule to_coefficient(const Definition& d) {
  if (d.kind != Definition::Kind::Coefficient) throw InputError("'" + d.name + "' is not a coeff definition", d.pos.line, d.pos.col);
  return CoefficientModule(d.del, d.basis);
}

inline ConformalMatrix to_gcmatrix(const Definition& d) {
  if (d.kind != Definition::Kind::GcMatrix) throw InputError("'" + d.name + "' is not a gcmatrix definition", d.pos.line, d.pos.col);
  FgModule m = module_of(d);
  EvalContext ctx{nullptr, false, true, 0};
  std::vector<std::vector<ParamPoly>> entries(m.size(), std::vector<ParamPoly>(m.size()));
  for (const auto& e : d.entries) {
    const std::size_t r = detail::entry_index(m, e.left, e.pos);
    const std::size_t c = detail::entry_index(m, e.right, e.pos);
    Value v = evaluate(e.value, ctx);
    entries[r][c] = v.scalar_part().coefficient(0);
  }
  try {
    return ConformalMatrix::from_entries(m, entries);
  } catch (const std::invalid_argument& ex) {
    throw InputError(ex.what(), d.pos.line, d.pos.col);
  }
}

inline VSeries truncated_above(const VSeries& s, long hi) {
  if (s.axis.zero_above && s.axis.hi <= hi) return s;
  VSeries r = s;
  if (r.axis.hi > hi) {
    r.axis.hi = hi;
    r.axis.zero_above = false;
  }
  for (auto it = r.c.begin(); it != r.c.end();) it = it->first > r.axis.hi ? r.c.erase(it) : std::next(it);
  return r;
}

// window_override replaces the declared window when given.
inline VertexTable to_vertex(const Definition& d, std::optional<long> window_override = std::nullopt) {
  if (d.kind != Definition::Kind::Vertex) throw InputError("'" + d.name + "' is not a vertex definition", d.pos.line, d.pos.col);
  FgModule m = module_of(d);
  const long window = window_override.value_or(*d.window);
  if (window < 0) throw InputError("window must be non-negative", d.pos.line, d.pos.col);
  const std::size_t vac = detail::entry_index(m, *d.vacuum, d.pos);
  VertexTable::Entries table;
  std::map<std::pair<std::size_t, std::size_t>, Pos> where;
  for (const auto& e : d.entries) {
    const std::size_t i = detail::entry_index(m, e.left, e.pos);
    const std::size_t j = detail::entry_index(m, e.right, e.pos);
    EvalContext ctx{&m, true, false, window + pole_bound(e.value)};
    Value v = evaluate(e.value, ctx);
    VSeries s = VSeries::zero(m.size());
    for (const auto& [k, w] : v.parts) {
      if (w.is_zero()) continue;
      if (k < 0) throw InputError("field value has a term without a generator", e.value.pos.line, e.value.pos.col);
      s = s + from_scalar(m, w, generator(m, static_cast<std::size_t>(k)));
    }
    table.emplace(std::make_pair(i, j), truncated_above(s, window));
    where.emplace(std::make_pair(i, j), e.pos);
  }
  VertexTable vt;
  try {
    vt = VertexTable(m, vac, window, table, d.name);
  } catch (const std::invalid_argument& ex) {
    throw InputError(ex.what(), d.pos.line, d.pos.col);
  }
  // Y(g,z)g must equal e^{z del} Y(g,-z)g (for psi: evenness) unless flagged.
  if (!d.flags.count("expect-locality-failure")) {
    for (const auto& [ij, p] : where) {
      if (ij.first != ij.second) continue;
      VSeries s = vt.field(generator(m, ij.first), generator(m, ij.first));
      const long lo = s.c.empty() ? 0 : std::min(0L, s.c.begin()->first);
      VSeries rhs = multiply(m, truncated_exp(ParamPoly::del(), std::max(0L, window - lo + 1)), reflect(s));
      if (!(s - rhs).is_zero()) {
        throw InputError("Y(" + m.label(ij.first) + ",z)" + m.label(ij.first) +
                             " is not skew-symmetric (odd psi); add 'flag expect-locality-failure;' to load it",
                         p.line, p.col);
      }
    }
  }
  return vt;
}

}  // namespace confalg::cli
