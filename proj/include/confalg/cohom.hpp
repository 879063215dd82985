#pragma once

#include "confalg/errors.hpp"
#include "confalg/exact/linalg.hpp"
#include "confalg/exact/param_poly.hpp"
#include "confalg/lca.hpp"

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace confalg {

// A finite-dimensional C[del]-module: del acts by a square matrix, column j
// being del applied to basis vector j.
struct CoefficientModule {
  QMatrix del_action;
  std::vector<std::string> labels;

  CoefficientModule() = default;
  explicit CoefficientModule(QMatrix m, std::vector<std::string> names = {})
      : del_action(std::move(m)), labels(std::move(names)) {
    for (const auto& row : del_action) {
      if (row.size() != del_action.size()) throw DimensionError("coefficient module: del action is not square");
    }
    if (labels.empty()) {
      for (std::size_t i = 0; i < dim(); ++i) labels.push_back("c" + std::to_string(i));
    }
    if (labels.size() != dim()) throw DimensionError("coefficient module: label count mismatch");
  }
  std::size_t dim() const { return del_action.size(); }
};

// C_alpha: one dimension, del acting by alpha.
inline CoefficientModule scalar_module(const Rational& alpha) { return CoefficientModule({{alpha}}, {"c"}); }

// C[del]/(del^{N+1}) in the basis k, del k, ..., del^N k.
inline CoefficientModule jordan_module(std::size_t n) {
  QMatrix m(n + 1, QVector(n + 1));
  for (std::size_t i = 0; i < n; ++i) m[i + 1][i] = 1;
  return CoefficientModule(m);
}

// Is the module presented as a single cyclic chain k, del k, ..., del^N k?
inline bool is_cyclic_chain(const CoefficientModule& c) {
  const std::size_t d = c.dim();
  if (d == 0) return false;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (c.del_action[i][j] != (i == j + 1 ? 1 : 0)) return false;
    }
  }
  return true;
}

// p(del, lambda) = sum_n lambda^n p[n], with p[n] a vector in the module.
struct Cocycle {
  std::vector<QVector> p;

  std::size_t degree_bound() const { return p.empty() ? 0 : p.size() - 1; }
  bool is_zero() const {
    for (const auto& v : p) {
      if (!confalg::is_zero(v)) return false;
    }
    return true;
  }
  bool operator==(const Cocycle& o) const = default;
};

namespace detail {

// The cocycle identity evaluated on p, one ParamPoly in lambda, mu per
// module coordinate: (lambda - mu) p(lambda + mu) - (del + lambda + 2 mu) p(lambda)
// + (del + 2 lambda + mu) p(mu).
inline std::vector<ParamPoly> cocycle_residual(const CoefficientModule& c, const Cocycle& q) {
  const std::size_t d = c.dim();
  const ParamPoly l = ParamPoly::lambda(), m = ParamPoly::mu();
  std::vector<ParamPoly> r(d);
  for (std::size_t n = 0; n < q.p.size(); ++n) {
    const auto& v = q.p[n];
    if (v.size() != d) throw DimensionError("cocycle: coefficient vector has wrong size");
    if (confalg::is_zero(v)) continue;
    const unsigned e = static_cast<unsigned>(n);
    ParamPoly shape = (l - m) * (l + m).pow(e) - (l + m * 2) * l.pow(e) + (l * 2 + m) * m.pow(e);
    ParamPoly diff = l.pow(e) - m.pow(e);
    QVector mv = mat_vec(c.del_action, v);
    for (std::size_t k = 0; k < d; ++k) r[k] += shape * v[k] - diff * mv[k];
  }
  return r;
}

inline Cocycle from_flat(const QVector& x, std::size_t d, std::size_t bound) {
  Cocycle q;
  q.p.assign(bound + 1, QVector(d));
  for (std::size_t n = 0; n <= bound; ++n) {
    for (std::size_t i = 0; i < d; ++i) q.p[n][i] = x[n * d + i];
  }
  return q;
}

inline QVector to_flat(const Cocycle& q, std::size_t d, std::size_t bound) {
  QVector x((bound + 1) * d);
  for (std::size_t n = 0; n < q.p.size(); ++n) {
    for (std::size_t i = 0; i < d; ++i) {
      if (q.p[n][i] == 0) continue;
      if (n > bound) throw DimensionError("cocycle exceeds the lambda-degree bound");
      x[n * d + i] = q.p[n][i];
    }
  }
  return x;
}

// Homogeneous piece of the identity for p = a x^n: the polynomial
// (lambda - mu)(lambda + mu)^n - (lambda + 2 mu) lambda^n + (2 lambda + mu) mu^n.
inline ParamPoly homogeneous_shape(unsigned n) {
  const ParamPoly l = ParamPoly::lambda(), m = ParamPoly::mu();
  return (l - m) * (l + m).pow(n) - (l + m * 2) * l.pow(n) + (l * 2 + m) * m.pow(n);
}

// If shape_n = r (lambda^{n+1} - mu^{n+1}) return r.
inline std::optional<Rational> shape_ratio(unsigned n) {
  ParamPoly s = homogeneous_shape(n);
  ParamPoly target = ParamPoly::lambda(n + 1) - ParamPoly::mu(n + 1);
  Exponents top{};
  top[static_cast<std::size_t>(Sym::Lambda)] = static_cast<std::uint16_t>(n + 1);
  Rational r = s.coefficient(top);
  if (s == target * r) return r;
  return std::nullopt;
}

}  // namespace detail

inline bool is_cocycle(const CoefficientModule& c, const Cocycle& q) {
  for (const auto& r : detail::cocycle_residual(c, q)) {
    if (!r.is_zero()) return false;
  }
  return true;
}

// Checked construction of a user-supplied cocycle.
inline Cocycle make_cocycle(const CoefficientModule& c, std::vector<QVector> p) {
  Cocycle q{std::move(p)};
  if (!is_cocycle(c, q)) throw std::invalid_argument("polynomial does not satisfy the cocycle identity");
  return q;
}

// Flat solve: every coefficient of every lambda-power is an unknown, and
// every lambda^a mu^b coefficient of the identity is an equation.
inline std::vector<Cocycle> cocycle_space(const CoefficientModule& c, std::size_t bound) {
  if (bound < 3) throw std::invalid_argument("cocycle_space: lambda-degree bound must be at least 3");
  const std::size_t d = c.dim();
  const std::size_t nunk = (bound + 1) * d;
  if (nunk == 0) return {};
  std::map<std::pair<std::size_t, Exponents>, std::size_t> eq_index;
  QMatrix a;
  for (std::size_t u = 0; u < nunk; ++u) {
    Cocycle unit;
    unit.p.assign(bound + 1, QVector(d));
    unit.p[u / d][u % d] = 1;
    auto r = detail::cocycle_residual(c, unit);
    for (std::size_t k = 0; k < d; ++k) {
      for (const auto& [e, coef] : r[k].terms()) {
        auto [it, inserted] = eq_index.emplace(std::make_pair(k, e), a.size());
        if (inserted) a.emplace_back(nunk);
        a[it->second][u] = coef;
      }
    }
  }
  std::vector<Cocycle> out;
  for (const auto& x : nullspace(a, nunk)) out.push_back(detail::from_flat(x, d, bound));
  return out;
}

// (del + 2 lambda) q for q running over the basis of the module.
inline std::vector<Cocycle> coboundary_space(const CoefficientModule& c) {
  const std::size_t d = c.dim();
  QMatrix rows;
  for (std::size_t i = 0; i < d; ++i) {
    QVector x(2 * d);
    for (std::size_t k = 0; k < d; ++k) x[k] = c.del_action[k][i];
    x[d + i] = 2;
    rows.push_back(x);
  }
  rref(rows);
  std::vector<Cocycle> out;
  for (const auto& x : rows) out.push_back(detail::from_flat(x, d, 1));
  return out;
}

// Basis of the row space of a set of cocycles, flattened to a common bound.
inline QMatrix cocycle_rows(const std::vector<Cocycle>& qs, std::size_t d, std::size_t bound) {
  QMatrix rows;
  for (const auto& q : qs) rows.push_back(detail::to_flat(q, d, bound));
  if (!rows.empty()) rref(rows);
  return rows;
}

inline bool same_span(const std::vector<Cocycle>& a, const std::vector<Cocycle>& b, std::size_t d,
                      std::size_t bound) {
  return cocycle_rows(a, d, bound) == cocycle_rows(b, d, bound);
}

// Decomposition of the del action: generalized kernel split into Jordan
// chains, plus the complementary subspace on which del is invertible.
struct DelDecomposition {
  // Each chain is [v, del v, ..., del^{s-1} v] with del^s v = 0.
  std::vector<QMatrix> chains;
  QMatrix invertible_basis;
  std::vector<std::size_t> block_sizes() const {
    std::vector<std::size_t> s;
    for (const auto& ch : chains) s.push_back(ch.size());
    return s;
  }
};

inline DelDecomposition decompose_del(const CoefficientModule& c) {
  const std::size_t d = c.dim();
  const QMatrix& m = c.del_action;
  DelDecomposition out;
  if (d == 0) return out;
  QMatrix md = mat_pow(m, static_cast<unsigned>(d));
  out.invertible_basis = column_space(md);

  // kernels[k] = ker m^k
  std::vector<QMatrix> kernels{QMatrix{}};
  for (unsigned k = 1; k <= d; ++k) {
    kernels.push_back(nullspace(mat_pow(m, k), d));
    if (kernels.back().size() == kernels[k - 1].size()) {
      kernels.pop_back();
      break;
    }
  }
  const std::size_t top = kernels.size() - 1;
  // chosen[k]: vectors already placed at height k (in ker m^k, not ker m^{k-1}).
  std::vector<QMatrix> chosen(top + 1);
  for (std::size_t k = top; k >= 1; --k) {
    QMatrix span_rows = kernels[k - 1];
    for (const auto& v : chosen[k]) span_rows.push_back(v);
    for (const auto& v : kernels[k]) {
      if (in_row_space(v, span_rows)) continue;
      span_rows.push_back(v);
      QMatrix chain{v};
      for (std::size_t j = 1; j < k; ++j) chain.push_back(mat_vec(m, chain.back()));
      for (std::size_t j = 1; j < k; ++j) chosen[k - j].push_back(chain[j]);
      out.chains.push_back(std::move(chain));
    }
  }
  return out;
}

namespace detail {

// Degree-by-degree solve on a block where del acts by `m`, using
// a_n shape_n = (lambda^{n+1} - mu^{n+1}) m a_{n+1}: either shape_n is a
// multiple r of the right-hand polynomial (then r a_n = m a_{n+1}), or both
// sides vanish separately.
inline QMatrix degree_separated_block(const QMatrix& m, std::size_t bound) {
  const std::size_t s = m.size();
  const std::size_t nunk = (bound + 1) * s;
  QMatrix eqs;
  auto idx = [&](std::size_t n, std::size_t i) { return n * s + i; };
  for (std::size_t n = 0; n <= bound; ++n) {
    auto r = shape_ratio(static_cast<unsigned>(n));
    for (std::size_t i = 0; i < s; ++i) {
      QVector row(nunk);
      QVector row_m(nunk);
      if (n + 1 <= bound) {
        for (std::size_t j = 0; j < s; ++j) row_m[idx(n + 1, j)] = m[i][j];
      }
      if (r) {
        row = row_m;
        for (auto& x : row) x = -x;
        row[idx(n, i)] += *r;
        eqs.push_back(row);
      } else {
        row[idx(n, i)] = 1;
        eqs.push_back(row);
        eqs.push_back(row_m);
      }
    }
  }
  return nullspace(eqs, nunk);
}

// Solutions on C[del]/(del^{t+1}) for t = 0..size-1, lifting one level at a
// time. Coordinates: index n * size + j is the coefficient of lambda^n del^j.
inline QMatrix jordan_lift(std::size_t size, std::size_t bound) {
  auto idx = [&](std::size_t n, std::size_t j) { return n * size + j; };
  const std::size_t nunk = (bound + 1) * size;
  // Level 0: a_{0,n} shape_n = 0.
  QMatrix sols;
  for (std::size_t n = 0; n <= bound; ++n) {
    if (homogeneous_shape(static_cast<unsigned>(n)).is_zero()) {
      QVector v(nunk);
      v[idx(n, 0)] = 1;
      sols.push_back(v);
    }
  }
  for (std::size_t t = 1; t < size; ++t) {
    // Unknowns: combination weights of sols, then a_{t,n} for n = 0..bound.
    const std::size_t nw = sols.size();
    const std::size_t total = nw + bound + 1;
    QMatrix eqs;
    for (std::size_t n = 0; n <= bound; ++n) {
      auto r = shape_ratio(static_cast<unsigned>(n));
      // a_{t-1, n+1} as a combination of the previous solutions.
      QVector prev(total);
      if (n + 1 <= bound) {
        for (std::size_t w = 0; w < nw; ++w) prev[w] = sols[w][idx(n + 1, t - 1)];
      }
      if (r) {
        QVector row = prev;
        for (auto& x : row) x = -x;
        row[nw + n] += *r;
        eqs.push_back(row);
      } else {
        QVector row(total);
        row[nw + n] = 1;
        eqs.push_back(row);
        eqs.push_back(prev);
      }
    }
    QMatrix next;
    for (const auto& z : nullspace(eqs, total)) {
      QVector v(nunk);
      for (std::size_t w = 0; w < nw; ++w) {
        if (z[w] == 0) continue;
        for (std::size_t k = 0; k < nunk; ++k) v[k] += z[w] * sols[w][k];
      }
      for (std::size_t n = 0; n <= bound; ++n) v[idx(n, t)] = z[nw + n];
      next.push_back(v);
    }
    sols = std::move(next);
  }
  return sols;
}

}  // namespace detail

// Cocycles via the del decomposition: each Jordan chain is solved by
// lifting level by level with the homogeneous ansatz, the invertible part
// by the same degree separation, and the results are mapped back.
inline std::vector<Cocycle> structured_cocycle_space(const CoefficientModule& c, std::size_t bound) {
  if (bound < 3) throw std::invalid_argument("structured_cocycle_space: lambda-degree bound must be at least 3");
  const std::size_t d = c.dim();
  auto dec = decompose_del(c);
  std::vector<Cocycle> out;
  auto emit = [&](const QMatrix& basis_vectors, const QMatrix& block_sols) {
    const std::size_t s = basis_vectors.size();
    for (const auto& x : block_sols) {
      Cocycle q;
      q.p.assign(bound + 1, QVector(d));
      for (std::size_t n = 0; n <= bound; ++n) {
        for (std::size_t j = 0; j < s; ++j) {
          const Rational& coef = x[n * s + j];
          if (coef == 0) continue;
          for (std::size_t i = 0; i < d; ++i) q.p[n][i] += coef * basis_vectors[j][i];
        }
      }
      out.push_back(std::move(q));
    }
  };
  for (const auto& chain : dec.chains) emit(chain, detail::jordan_lift(chain.size(), bound));
  if (!dec.invertible_basis.empty()) {
    // Matrix of del restricted to the invertible part, in its own basis.
    const auto& b = dec.invertible_basis;
    const std::size_t s = b.size();
    QMatrix cols = transpose(b);  // d x s
    QMatrix restricted(s, QVector(s));
    // Solve b^T y = m b_j for each j via the left inverse on pivot rows.
    QMatrix aug;
    for (std::size_t i = 0; i < d; ++i) {
      QVector row = cols[i];
      row.resize(s + s);
      aug.push_back(row);
    }
    for (std::size_t j = 0; j < s; ++j) {
      QVector img = mat_vec(c.del_action, b[j]);
      for (std::size_t i = 0; i < d; ++i) aug[i][s + j] = img[i];
    }
    auto piv = rref(aug);
    for (std::size_t r = 0; r < piv.size(); ++r) {
      if (piv[r] >= s) throw std::logic_error("invertible part is not del-stable");
      for (std::size_t j = 0; j < s; ++j) restricted[piv[r]][j] = aug[r][s + j];
    }
    emit(b, detail::degree_separated_block(restricted, bound));
  }
  return out;
}

// Monomial order for representatives: lambda-power descending, then
// coordinate (del-power for cyclic chains) descending.
namespace detail {
inline std::size_t rep_index(std::size_t n, std::size_t i, std::size_t d, std::size_t bound) {
  return (bound - n) * d + (d - 1 - i);
}
inline QVector to_rep_order(const Cocycle& q, std::size_t d, std::size_t bound) {
  QVector x((bound + 1) * d);
  for (std::size_t n = 0; n < q.p.size() && n <= bound; ++n) {
    for (std::size_t i = 0; i < d; ++i) x[rep_index(n, i, d, bound)] = q.p[n][i];
  }
  return x;
}
inline Cocycle from_rep_order(const QVector& x, std::size_t d, std::size_t bound) {
  Cocycle q;
  q.p.assign(bound + 1, QVector(d));
  for (std::size_t n = 0; n <= bound; ++n) {
    for (std::size_t i = 0; i < d; ++i) q.p[n][i] = x[rep_index(n, i, d, bound)];
  }
  return q;
}
}  // namespace detail

struct H2Result {
  std::size_t dimension = 0;
  std::vector<Cocycle> representatives;
  std::size_t cocycle_dim = 0;
  std::size_t coboundary_dim = 0;
  bool coboundaries_contained = true;
};

inline H2Result h2(const CoefficientModule& c, std::size_t bound = 6) {
  const std::size_t d = c.dim();
  H2Result r;
  auto z = cocycle_space(c, bound);
  auto b = coboundary_space(c);
  r.cocycle_dim = z.size();
  r.coboundary_dim = b.size();
  QMatrix zrows;
  for (const auto& q : z) zrows.push_back(detail::to_rep_order(q, d, bound));
  QMatrix brows;
  for (const auto& q : b) brows.push_back(detail::to_rep_order(q, d, bound));
  for (const auto& row : brows) {
    if (!in_row_space(row, zrows)) r.coboundaries_contained = false;
  }
  std::vector<std::size_t> bpiv;
  if (!brows.empty()) bpiv = rref(brows);
  QMatrix reduced;
  for (const auto& row : zrows) {
    QVector v = reduce_against(row, brows, bpiv);
    if (!confalg::is_zero(v)) reduced.push_back(v);
  }
  if (!reduced.empty()) rref(reduced);
  for (const auto& v : reduced) r.representatives.push_back(detail::from_rep_order(v, d, bound));
  r.dimension = r.representatives.size();
  return r;
}

// Human-readable form: "lambda^3*del^2" for cyclic chains, "lambda^3" for
// one-dimensional modules, "lambda^3*c1" otherwise.
inline std::string cocycle_str(const CoefficientModule& c, const Cocycle& q) {
  const std::size_t d = c.dim();
  const bool chain = is_cyclic_chain(c) && d > 1;
  std::ostringstream os;
  bool first = true;
  for (std::size_t n = q.p.size(); n-- > 0;) {
    for (std::size_t i = d; i-- > 0;) {
      const Rational& coef = q.p[n][i];
      if (coef == 0) continue;
      std::vector<std::string> factors;
      if (n == 1) factors.push_back("lambda");
      if (n > 1) factors.push_back("lambda^" + std::to_string(n));
      if (chain) {
        if (i == 1) factors.push_back("del");
        if (i > 1) factors.push_back("del^" + std::to_string(i));
      } else if (d > 1) {
        factors.push_back(c.labels[i]);
      }
      Rational mag = abs(coef);
      os << (first ? (coef < 0 ? "-" : "") : (coef < 0 ? " - " : " + "));
      first = false;
      if (factors.empty() || mag != 1) {
        os << mag.get_str();
        if (!factors.empty()) os << "*";
      }
      for (std::size_t f = 0; f < factors.size(); ++f) os << (f ? "*" : "") << factors[f];
    }
  }
  return first ? "0" : os.str();
}

struct SummandReport {
  std::string kind;  // "jordan" or "invertible"
  std::size_t size = 0;
  std::size_t h2_dim = 0;
  bool carries_irreducible = false;
};

struct IrreducibleReport {
  std::vector<SummandReport> summands;
  std::size_t h2_dim = 0;
  // True iff the whole module is one-dimensional with del acting by zero.
  bool irreducible_exists = false;
  std::string representative;
  // The extension built from the lambda^3 class is perfect exactly when
  // the module is C_0; checked on the conformal algebra itself.
  bool cross_check = true;
  std::string note;
};

inline IrreducibleReport classify_irreducible(const CoefficientModule& c, std::size_t bound = 6) {
  IrreducibleReport r;
  if (c.dim() == 0) {
    r.note = "zero module: only the zero extension";
    return r;
  }
  auto dec = decompose_del(c);
  for (const auto& ch : dec.chains) {
    SummandReport s{"jordan", ch.size(), h2(jordan_module(ch.size() - 1), bound).dimension, ch.size() == 1};
    r.summands.push_back(s);
  }
  if (!dec.invertible_basis.empty()) {
    std::size_t total = h2(c, bound).dimension;
    std::size_t from_chains = 0;
    for (const auto& s : r.summands) from_chains += s.h2_dim;
    r.summands.push_back({"invertible", dec.invertible_basis.size(), total - from_chains, false});
  }
  auto full = h2(c, bound);
  r.h2_dim = full.dimension;
  r.irreducible_exists = c.dim() == 1 && c.del_action[0][0] == 0;
  if (r.irreducible_exists && full.dimension == 1) r.representative = cocycle_str(c, full.representatives[0]);

  // Cross-check on the conformal algebra: Vir extended by the lambda^3 class
  // on a chain of length N+1 is perfect only for N = 0.
  for (const auto& s : r.summands) {
    if (s.kind != "jordan") continue;
    auto ext = make_virasoro_ext(Rational(1), s.size - 1);
    bool perfect = derived_series(ext).terms[1] == whole_module(ext.base());
    if (perfect != s.carries_irreducible) r.cross_check = false;
  }
  if (r.irreducible_exists) {
    if (full.dimension != 1 || r.representative != "lambda^3") r.cross_check = false;
  }
  if (!r.irreducible_exists) {
    r.note = dec.invertible_basis.size() == c.dim() ? "del acts invertibly: every extension is trivial"
                                                     : "no irreducible extension: module is not C_0";
  }
  return r;
}

}  // namespace confalg
