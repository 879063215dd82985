#pragma once

#include "confalg/errors.hpp"
#include "confalg/exact/linalg.hpp"
#include "confalg/exact/param_poly.hpp"
#include "confalg/exact/upoly.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace confalg {

// A finitely generated C[del]-module: free generators g_0..g_{r-1} followed by
// a torsion block k_0..k_{t-1}. del acts on torsion coordinates by the matrix
// M (del k_j = sum_i M[i][j] k_i, i.e. column j is the image of k_j).
class FgModule {
 public:
  FgModule() = default;
  FgModule(std::size_t free_rank, std::size_t torsion_dim, QMatrix del_action = {},
           std::vector<std::string> labels = {})
      : free_rank_(free_rank), torsion_dim_(torsion_dim), del_action_(std::move(del_action)), labels_(std::move(labels)) {
    if (del_action_.empty()) del_action_ = QMatrix(torsion_dim_, QVector(torsion_dim_));
    if (del_action_.size() != torsion_dim_) throw DimensionError("torsion action must be square of torsion dimension");
    for (const auto& row : del_action_) {
      if (row.size() != torsion_dim_) throw DimensionError("torsion action must be square of torsion dimension");
    }
    if (labels_.empty()) {
      for (std::size_t i = 0; i < free_rank_; ++i) labels_.push_back("g" + std::to_string(i));
      for (std::size_t i = 0; i < torsion_dim_; ++i) labels_.push_back("k" + std::to_string(i));
    }
    if (labels_.size() != size()) throw DimensionError("one label per generator required");
    std::set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw DimensionError("generator labels must be distinct");
  }

  std::size_t free_rank() const { return free_rank_; }
  std::size_t torsion_dim() const { return torsion_dim_; }
  std::size_t size() const { return free_rank_ + torsion_dim_; }
  const QMatrix& del_action() const { return del_action_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  bool is_torsion(std::size_t i) const { return i >= free_rank_; }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i] == name) return i;
    }
    return std::nullopt;
  }

  friend bool operator==(const FgModule& a, const FgModule& b) {
    return a.free_rank_ == b.free_rank_ && a.torsion_dim_ == b.torsion_dim_ && a.del_action_ == b.del_action_ &&
           a.labels_ == b.labels_;
  }

 private:
  std::size_t free_rank_ = 0;
  std::size_t torsion_dim_ = 0;
  QMatrix del_action_;
  std::vector<std::string> labels_;
};

// Coefficients on the generators of an FgModule. Free coefficients are
// polynomials in del (and possibly lambda, mu, alpha when representing
// elements of V[lambda]); torsion coefficients never contain del once
// normalized.
struct ModElement {
  std::vector<ParamPoly> coeffs;

  ModElement() = default;
  explicit ModElement(std::size_t n) : coeffs(n) {}
  explicit ModElement(std::vector<ParamPoly> c) : coeffs(std::move(c)) {}

  std::size_t size() const { return coeffs.size(); }
  const ParamPoly& operator[](std::size_t i) const { return coeffs.at(i); }
  ParamPoly& operator[](std::size_t i) { return coeffs.at(i); }

  bool is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const ParamPoly& p) { return p.is_zero(); });
  }

  ModElement& operator+=(const ModElement& o) {
    if (o.size() != size()) throw DimensionError("element size mismatch");
    for (std::size_t i = 0; i < size(); ++i) coeffs[i] += o.coeffs[i];
    return *this;
  }
  ModElement& operator-=(const ModElement& o) {
    if (o.size() != size()) throw DimensionError("element size mismatch");
    for (std::size_t i = 0; i < size(); ++i) coeffs[i] -= o.coeffs[i];
    return *this;
  }
  friend ModElement operator+(ModElement a, const ModElement& b) { return a += b; }
  friend ModElement operator-(ModElement a, const ModElement& b) { return a -= b; }
  friend ModElement operator-(ModElement a) {
    for (auto& c : a.coeffs) c = -c;
    return a;
  }
  friend ModElement operator*(const Rational& s, ModElement a) {
    for (auto& c : a.coeffs) c *= s;
    return a;
  }
  friend bool operator==(const ModElement& a, const ModElement& b) { return a.coeffs == b.coeffs; }

  int degree(Sym s) const {
    int d = -1;
    for (const auto& c : coeffs) d = std::max(d, c.degree(s));
    return d;
  }
};

inline ModElement zero_element(const FgModule& m) { return ModElement(m.size()); }

inline ModElement generator(const FgModule& m, std::size_t i) {
  if (i >= m.size()) throw DimensionError("generator index out of range");
  ModElement e(m.size());
  e[i] = ParamPoly(1);
  return e;
}

inline void check_element(const FgModule& m, const ModElement& e) {
  if (e.size() != m.size()) {
    throw DimensionError("element has " + std::to_string(e.size()) + " coefficients, module has " +
                         std::to_string(m.size()) + " generators");
  }
}

// Rewrite del-powers in torsion coefficients through the torsion action.
inline ModElement normalize(const FgModule& m, const ModElement& e) {
  check_element(m, e);
  const std::size_t r = m.free_rank();
  const std::size_t t = m.torsion_dim();
  bool clean = true;
  for (std::size_t j = 0; j < t; ++j) clean = clean && !e[r + j].has(Sym::Del);
  if (clean) return e;
  ModElement out = e;
  for (std::size_t j = 0; j < t; ++j) out[r + j] = ParamPoly();
  for (std::size_t j = 0; j < t; ++j) {
    const auto parts = e[r + j].coefficients_in(Sym::Del);
    QVector v(t);
    v[j] = 1;
    for (std::size_t n = 0; n < parts.size(); ++n) {
      if (n > 0) v = mat_vec(m.del_action(), v);
      if (parts[n].is_zero()) continue;
      for (std::size_t i = 0; i < t; ++i) {
        if (v[i] != 0) out[r + i] += parts[n] * v[i];
      }
    }
  }
  return out;
}

// p(del) . e, with p possibly containing the other parameters.
inline ModElement act(const FgModule& m, const ParamPoly& p, const ModElement& e) {
  check_element(m, e);
  ModElement out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) out[i] = e[i] * p;
  return normalize(m, out);
}

inline ModElement apply_del(const FgModule& m, const ModElement& e) { return act(m, ParamPoly::del(), e); }

// Substitute a non-del symbol in every coefficient.
inline ModElement subs(const ModElement& e, Sym s, const ParamPoly& v) {
  ModElement out = e;
  for (auto& c : out.coeffs) c = c.subs(s, v);
  return out;
}

// e(del -> del + shift) on the free block. Torsion coefficients carry no del.
inline ModElement shift_del(const FgModule& m, const ModElement& e, const ParamPoly& shift) {
  ModElement out = e;
  for (std::size_t i = 0; i < m.free_rank(); ++i) out[i] = shift_del(e[i], shift);
  return out;
}

// Coefficients of s^0, s^1, ... as elements.
inline std::vector<ModElement> coefficients_in(const ModElement& e, Sym s) {
  const int d = e.degree(s);
  std::vector<ModElement> out;
  for (int k = 0; k <= d; ++k) {
    ModElement c(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) c[i] = e[i].coeff(s, static_cast<unsigned>(k));
    out.push_back(std::move(c));
  }
  return out;
}

// Split an element of V[lambda, mu, alpha] into its parameter-free coefficients.
inline std::vector<ModElement> parameter_coefficients(const ModElement& e) {
  std::map<Exponents, ModElement> parts;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (const auto& [ex, c] : e[i].terms()) {
      Exponents key = ex;
      key[0] = 0;
      Exponents del_only{};
      del_only[0] = ex[0];
      auto [it, inserted] = parts.try_emplace(key, ModElement(e.size()));
      it->second[i] += ParamPoly::monomial(del_only, c);
    }
  }
  std::vector<ModElement> out;
  for (auto& [k, v] : parts) {
    if (!v.is_zero()) out.push_back(std::move(v));
  }
  return out;
}

inline std::string str(const FgModule& m, const ModElement& e) {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    if (e[i] == ParamPoly(1)) {
      out += m.label(i);
    } else if (e[i].size() == 1 && e[i].constant_term() == 0 && e[i].terms().begin()->second == 1) {
      out += e[i].str() + "*" + m.label(i);
    } else {
      out += "(" + e[i].str() + ")*" + m.label(i);
    }
  }
  return out.empty() ? "0" : out;
}

namespace detail {

// Row of a presentation matrix: free entries in Q[del], torsion entries in Q.
struct ModRow {
  std::vector<UPoly> f;
  QVector t;

  bool free_zero() const {
    return std::all_of(f.begin(), f.end(), [](const UPoly& p) { return p.is_zero(); });
  }
};

inline QVector poly_on_torsion(const QMatrix& mat, const UPoly& q, const QVector& v) {
  QVector r(v.size());
  for (int n = q.degree(); n >= 0; --n) {
    r = mat_vec(mat, r);
    const Rational c = q[static_cast<std::size_t>(n)];
    if (c == 0) continue;
    for (std::size_t i = 0; i < v.size(); ++i) r[i] += c * v[i];
  }
  return r;
}

// a -= q * b
inline void row_submul(const FgModule& m, ModRow& a, const UPoly& q, const ModRow& b) {
  for (std::size_t i = 0; i < a.f.size(); ++i) {
    if (!b.f[i].is_zero()) a.f[i] -= q * b.f[i];
  }
  QVector tq = poly_on_torsion(m.del_action(), q, b.t);
  for (std::size_t i = 0; i < a.t.size(); ++i) a.t[i] -= tq[i];
}

inline ModRow to_row(const FgModule& m, const ModElement& e) {
  ModElement n = normalize(m, e);
  ModRow r;
  for (std::size_t i = 0; i < m.free_rank(); ++i) r.f.push_back(UPoly::from_param(n[i]));
  for (std::size_t j = 0; j < m.torsion_dim(); ++j) {
    if (!n[m.free_rank() + j].is_constant()) {
      throw std::invalid_argument("torsion coefficient is not a scalar: " + n[m.free_rank() + j].str());
    }
    r.t.push_back(n[m.free_rank() + j].constant_term());
  }
  return r;
}

inline ModElement from_row(const FgModule& m, const ModRow& r) {
  ModElement e(m.size());
  for (std::size_t i = 0; i < m.free_rank(); ++i) e[i] = r.f[i].to_param();
  for (std::size_t j = 0; j < m.torsion_dim(); ++j) e[m.free_rank() + j] = ParamPoly(r.t[j]);
  return e;
}

// Smallest del-stable subspace containing the given vectors, in RREF.
inline QMatrix krylov_closure(const QMatrix& mat, QMatrix vecs, std::vector<std::size_t>& pivots) {
  QMatrix basis;
  pivots.clear();
  while (!vecs.empty()) {
    QVector v = vecs.back();
    vecs.pop_back();
    if (basis.empty() ? is_zero(v) : is_zero(reduce_against(v, basis, pivots))) continue;
    basis.push_back(v);
    pivots = rref(basis);
    vecs.push_back(mat_vec(mat, v));
  }
  return basis;
}

}  // namespace detail

// A C[del]-submodule given by generators, with a canonical generating set:
// Hermite normal form on the free block (monic pivots, entries above a pivot
// reduced below its degree) followed by an RREF basis of the torsion part.
class Submodule {
 public:
  struct Membership {
    bool member = false;
    std::vector<ParamPoly> pivot_multipliers;  // one per canonical pivot row
    QVector torsion_coords;                    // on the torsion basis rows
  };

  Submodule() = default;
  Submodule(FgModule m, std::vector<ModElement> gens) : module_(std::move(m)), generators_(std::move(gens)) {
    build();
  }

  const FgModule& module() const { return module_; }
  const std::vector<ModElement>& generators() const { return generators_; }
  const std::vector<ModElement>& canonical() const { return canonical_; }
  const std::vector<std::size_t>& pivot_columns() const { return pivot_cols_; }
  std::size_t rank() const { return pivots_.size(); }
  std::size_t torsion_dim() const { return torsion_.size(); }
  bool is_zero() const { return canonical_.empty(); }
  const QMatrix& torsion_basis() const { return torsion_; }

  // Reduce e against the canonical form; linear in e. Zero iff e is a member.
  // Parameter content is reduced coefficientwise.
  ModElement normal_form(const ModElement& e) const {
    bool plain = true;
    for (const auto& c : e.coeffs) {
      for (std::size_t s = 1; s < kNumSyms; ++s) plain = plain && !c.has(static_cast<Sym>(s));
    }
    if (plain) return reduce(e).first;
    std::map<Exponents, ModElement> parts;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (const auto& [ex, c] : e[i].terms()) {
        Exponents key = ex;
        key[0] = 0;
        Exponents del_only{};
        del_only[0] = ex[0];
        parts.try_emplace(key, ModElement(e.size())).first->second[i] += ParamPoly::monomial(del_only, c);
      }
    }
    ModElement out(e.size());
    for (const auto& [key, part] : parts) {
      ModElement r = reduce(part).first;
      const ParamPoly mono = ParamPoly::monomial(key, Rational(1));
      for (std::size_t i = 0; i < e.size(); ++i) out[i] += r[i] * mono;
    }
    return out;
  }

  Membership membership(const ModElement& e) const {
    auto [rem, mult] = reduce(e);
    Membership out;
    if (!rem.is_zero()) return out;
    out.member = true;
    out.pivot_multipliers = std::move(mult);
    out.torsion_coords = torsion_coords_of(detail::to_row(module_, e - combination(out.pivot_multipliers)).t);
    return out;
  }
  bool contains(const ModElement& e) const { return normal_form(e).is_zero(); }
  bool contains(const Submodule& o) const {
    return std::all_of(o.canonical_.begin(), o.canonical_.end(), [&](const ModElement& g) { return contains(g); });
  }

  Submodule torsion_part() const {
    std::vector<ModElement> gens;
    for (const auto& v : torsion_) {
      detail::ModRow r{std::vector<UPoly>(module_.free_rank()), v};
      gens.push_back(detail::from_row(module_, r));
    }
    return Submodule(module_, gens);
  }

  friend bool operator==(const Submodule& a, const Submodule& b) {
    return a.module_ == b.module_ && a.canonical_ == b.canonical_;
  }

  std::string str() const {
    if (canonical_.empty()) return "0";
    std::string out = "<";
    for (std::size_t i = 0; i < canonical_.size(); ++i) {
      if (i > 0) out += ", ";
      out += confalg::str(module_, canonical_[i]);
    }
    return out + ">";
  }

 private:
  void build() {
    const std::size_t r = module_.free_rank();
    std::vector<detail::ModRow> rows;
    for (const auto& g : generators_) {
      check_element(module_, g);
      for (const auto& part : parameter_coefficients(g)) rows.push_back(detail::to_row(module_, part));
    }
    std::vector<detail::ModRow> pivot_rows;
    for (std::size_t c = 0; c < r; ++c) {
      while (true) {
        std::size_t best = rows.size();
        std::size_t count = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].f[c].is_zero()) continue;
          ++count;
          if (best == rows.size() || rows[i].f[c].degree() < rows[best].f[c].degree()) best = i;
        }
        if (count == 0) break;
        if (count == 1) {
          detail::ModRow p = std::move(rows[best]);
          rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
          const Rational inv = Rational(1) / p.f[c].lead();
          for (auto& x : p.f) x = x * inv;
          for (auto& x : p.t) x *= inv;
          pivot_rows.push_back(std::move(p));
          pivot_cols_.push_back(c);
          break;
        }
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (i == best || rows[i].f[c].is_zero()) continue;
          auto q = rows[i].f[c].divmod(rows[best].f[c]).first;
          detail::row_submul(module_, rows[i], q, rows[best]);
        }
      }
    }
    // Remaining rows have no free part.
    QMatrix tvecs;
    for (const auto& row : rows) {
      if (!confalg::is_zero(row.t)) tvecs.push_back(row.t);
    }
    torsion_ = detail::krylov_closure(module_.del_action(), tvecs, torsion_pivots_);
    // Back-reduce above pivots, then reduce torsion parts modulo the torsion span.
    for (std::size_t p = 0; p < pivot_rows.size(); ++p) {
      const std::size_t c = pivot_cols_[p];
      for (std::size_t i = 0; i < p; ++i) {
        if (pivot_rows[i].f[c].is_zero()) continue;
        auto q = pivot_rows[i].f[c].divmod(pivot_rows[p].f[c]).first;
        if (!q.is_zero()) detail::row_submul(module_, pivot_rows[i], q, pivot_rows[p]);
      }
    }
    for (auto& row : pivot_rows) {
      if (!torsion_.empty()) row.t = reduce_against(row.t, torsion_, torsion_pivots_);
      pivots_.push_back(row);
      canonical_.push_back(detail::from_row(module_, row));
    }
    for (const auto& v : torsion_) {
      canonical_.push_back(detail::from_row(module_, detail::ModRow{std::vector<UPoly>(r), v}));
    }
  }

  std::pair<ModElement, std::vector<ParamPoly>> reduce(const ModElement& e) const {
    check_element(module_, e);
    detail::ModRow row = detail::to_row(module_, e);
    std::vector<ParamPoly> mult;
    for (std::size_t p = 0; p < pivots_.size(); ++p) {
      const std::size_t c = pivot_cols_[p];
      auto q = row.f[c].divmod(pivots_[p].f[c]).first;
      if (!q.is_zero()) detail::row_submul(module_, row, q, pivots_[p]);
      mult.push_back(q.to_param());
    }
    if (!torsion_.empty()) row.t = reduce_against(row.t, torsion_, torsion_pivots_);
    return {detail::from_row(module_, row), mult};
  }

  ModElement combination(const std::vector<ParamPoly>& mult) const {
    ModElement acc = zero_element(module_);
    for (std::size_t p = 0; p < mult.size(); ++p) acc += act(module_, mult[p], canonical_[p]);
    return acc;
  }

  QVector torsion_coords_of(const QVector& t) const {
    QVector coords(torsion_.size());
    for (std::size_t i = 0; i < torsion_.size(); ++i) coords[i] = t[torsion_pivots_[i]];
    return coords;
  }

  FgModule module_;
  std::vector<ModElement> generators_;
  std::vector<detail::ModRow> pivots_;
  std::vector<std::size_t> pivot_cols_;
  QMatrix torsion_;
  std::vector<std::size_t> torsion_pivots_;
  std::vector<ModElement> canonical_;
};

inline Submodule span(const FgModule& m, const std::vector<ModElement>& gens) { return Submodule(m, gens); }

inline Submodule whole_module(const FgModule& m) {
  std::vector<ModElement> gens;
  for (std::size_t i = 0; i < m.size(); ++i) gens.push_back(generator(m, i));
  return Submodule(m, gens);
}

inline Submodule zero_submodule(const FgModule& m) { return Submodule(m, {}); }

inline Submodule sum(const Submodule& a, const Submodule& b) {
  std::vector<ModElement> gens = a.canonical();
  gens.insert(gens.end(), b.canonical().begin(), b.canonical().end());
  return Submodule(a.module(), gens);
}

inline bool is_whole(const Submodule& s) { return s.contains(whole_module(s.module())); }

}  // namespace confalg
