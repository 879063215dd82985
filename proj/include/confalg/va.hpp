#pragma once

#include "confalg/cdmod.hpp"
#include "confalg/errors.hpp"
#include "confalg/exact/laurent.hpp"
#include "confalg/gcmat.hpp"
#include "confalg/lca.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace confalg {

// A truncated Laurent series in z with coefficients in a module: the
// coefficient of z^e is known for e in the axis range, and outside it is
// zero or unknown as the axis flags say.
struct VSeries {
  std::size_t dim = 0;
  Axis axis{0, 0, true, true};
  std::map<long, ModElement> c;

  static VSeries zero(std::size_t dim) {
    VSeries s;
    s.dim = dim;
    return s;
  }

  static VSeries constant(const ModElement& v) {
    VSeries s = zero(v.size());
    if (!v.is_zero()) s.c.emplace(0, v);
    return s;
  }

  bool is_zero() const { return c.empty(); }
  bool in_range(long e) const { return e >= axis.lo && e <= axis.hi; }

  ModElement coefficient(long e) const {
    if (axis.state(e) == Axis::State::Unknown) {
      std::ostringstream os;
      os << "coefficient of z^" << e << " lies outside the window [" << axis.lo << "," << axis.hi << "]";
      throw WindowError(WindowError::Kind::OutOfWindow, os.str());
    }
    auto it = c.find(e);
    return it == c.end() ? ModElement(dim) : it->second;
  }

  void add(long e, const ModElement& v) {
    if (v.is_zero() || !in_range(e)) return;
    auto [it, inserted] = c.emplace(e, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) c.erase(it);
    }
  }

  std::string window_str() const {
    std::ostringstream os;
    os << "[" << axis.lo << "," << axis.hi << "]";
    if (!axis.zero_above) os << " (unknown above)";
    return os.str();
  }
};

inline VSeries operator+(const VSeries& a, const VSeries& b) {
  if (a.dim != b.dim) throw DimensionError("series dimension mismatch");
  VSeries r = VSeries::zero(a.dim);
  r.axis = detail::sum_axis(a.axis, b.axis);
  if (r.axis.empty()) throw WindowError(WindowError::Kind::EmptyWindow, "series windows do not overlap");
  for (const auto& [e, v] : a.c) r.add(e, v);
  for (const auto& [e, v] : b.c) r.add(e, v);
  return r;
}

inline VSeries operator-(const VSeries& a) {
  VSeries r = a;
  for (auto& [e, v] : r.c) v = -v;
  return r;
}

inline VSeries operator-(const VSeries& a, const VSeries& b) { return a + (-b); }

// Multiply every coefficient by p(del) (p may carry lambda as a scalar).
inline VSeries act(const FgModule& m, const ParamPoly& p, const VSeries& s) {
  VSeries r = s;
  r.c.clear();
  if (p.is_zero()) return r;
  for (const auto& [e, v] : s.c) r.add(e, act(m, p, v));
  return r;
}

inline VSeries derivative(const VSeries& s) {
  VSeries r = VSeries::zero(s.dim);
  r.axis = s.axis;
  r.axis.lo -= 1;
  r.axis.hi -= 1;
  for (const auto& [e, v] : s.c) {
    if (e != 0) r.add(e - 1, Rational(e) * v);
  }
  return r;
}

// (del - d/dz) s
inline VSeries translate_minus_derivative(const FgModule& m, const VSeries& s) {
  return act(m, ParamPoly::del(), s) - derivative(s);
}

// z -> -z
inline VSeries reflect(const VSeries& s) {
  VSeries r = s;
  for (auto& [e, v] : r.c) {
    if (e % 2 != 0) v = -v;
  }
  return r;
}

// A scalar series (coefficients polynomial in del and parameters) times a
// module-valued series.
inline VSeries multiply(const FgModule& m, const LaurentWindow& w, const VSeries& s) {
  if (w.nvars() != 1) throw std::invalid_argument("multiply: one-variable window expected");
  VSeries r = VSeries::zero(s.dim);
  r.axis = detail::product_axis(w.axis(0), s.axis);
  if (r.axis.empty()) throw WindowError(WindowError::Kind::EmptyWindow, "product of series has an empty window");
  for (const auto& [k, p] : w.coefficients()) {
    for (const auto& [e, v] : s.c) r.add(k[0] + e, act(m, p, v));
  }
  return r;
}

inline VSeries from_scalar(const FgModule& m, const LaurentWindow& w, const ModElement& v) {
  return multiply(m, w, VSeries::constant(v));
}

inline std::string str(const FgModule& m, const VSeries& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, v] : s.c) {
    if (!first) os << " + ";
    first = false;
    os << "z^" << e << ": " << str(m, v);
  }
  if (first) os << "0";
  os << " on z" << s.window_str();
  return os.str();
}

// Split a coefficient into powers of del: p = sum_k del^k c_k.
inline std::vector<ParamPoly> del_parts(const ParamPoly& p) { return p.coefficients_in(Sym::Del); }

// A finite vertex algebra given by Y(g_i, z) g_j on generators, extended by
//   Y(del u, z) v = d/dz Y(u, z) v,   Y(u, z) del v = (del - d/dz) Y(u, z) v.
// Unlisted pairs default to Y(vac, z) v = v, Y(g, z) vac = e^{z del} g, and 0.
class VertexTable {
 public:
  using Entries = std::map<std::pair<std::size_t, std::size_t>, VSeries>;

  VertexTable() = default;
  VertexTable(FgModule base, std::size_t vacuum, long window, Entries entries, std::string name = "")
      : base_(std::move(base)), vacuum_(vacuum), window_(window), name_(std::move(name)) {
    if (vacuum_ >= base_.size() || !base_.is_torsion(vacuum_)) {
      throw std::invalid_argument("the vacuum must be a torsion generator");
    }
    const std::size_t r = base_.free_rank();
    for (std::size_t i = 0; i < base_.torsion_dim(); ++i) {
      if (base_.del_action()[i][vacuum_ - r] != 0) throw std::invalid_argument("del must annihilate the vacuum");
    }
    if (window_ < 0) throw std::invalid_argument("window must be non-negative");
    const std::size_t n = base_.size();
    for (auto& [ij, s] : entries) {
      if (ij.first >= n || ij.second >= n) throw DimensionError("table entry index out of range");
      if (s.dim != n) throw DimensionError("table entry has the wrong dimension");
      for (auto& [e, v] : s.c) v = normalize(base_, v);
    }
    table_.assign(n, std::vector<VSeries>(n, VSeries::zero(n)));
    given_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto it = entries.find({i, j});
        if (it != entries.end()) {
          table_[i][j] = it->second;
          given_[i][j] = true;
        } else if (i == vacuum_) {
          table_[i][j] = VSeries::constant(generator(base_, j));
        } else if (j == vacuum_) {
          table_[i][j] = from_scalar(base_, truncated_exp(ParamPoly::del(), window_), generator(base_, i));
        }
      }
    }
  }

  const FgModule& base() const { return base_; }
  std::size_t vacuum() const { return vacuum_; }
  ModElement vacuum_element() const { return generator(base_, vacuum_); }
  long window() const { return window_; }
  const std::string& name() const { return name_; }
  const VSeries& entry(std::size_t i, std::size_t j) const { return table_.at(i).at(j); }
  bool entry_given(std::size_t i, std::size_t j) const { return given_.at(i).at(j); }

  // (del - d/dz)^k Y(g_i, z) g_j
  const VSeries& translated_entry(std::size_t i, std::size_t j, unsigned k) const {
    auto key = std::make_tuple(i, j, k);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    VSeries s = k == 0 ? entry(i, j) : translate_minus_derivative(base_, translated_entry(i, j, k - 1));
    return cache_.emplace(key, std::move(s)).first->second;
  }

  // Y(g_i, z) b
  VSeries field_on(std::size_t i, const ModElement& b) const {
    VSeries total = VSeries::zero(base_.size());
    for (std::size_t j = 0; j < base_.size(); ++j) {
      if (b[j].is_zero()) continue;
      const auto parts = del_parts(b[j]);
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].is_zero()) continue;
        total = total + act(base_, parts[k], translated_entry(i, j, static_cast<unsigned>(k)));
      }
    }
    return total;
  }

  // Y(a, z) b
  VSeries field(const ModElement& a, const ModElement& b) const {
    check_element(base_, a);
    check_element(base_, b);
    const ModElement na = normalize(base_, a);
    const ModElement nb = normalize(base_, b);
    VSeries total = VSeries::zero(base_.size());
    for (std::size_t i = 0; i < base_.size(); ++i) {
      if (na[i].is_zero()) continue;
      const auto parts = del_parts(na[i]);
      VSeries s = field_on(i, nb);
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (!parts[k].is_zero()) total = total + act(base_, parts[k], s);
        if (k + 1 < parts.size()) s = derivative(s);
      }
    }
    return total;
  }

 private:
  FgModule base_;
  std::size_t vacuum_ = 0;
  long window_ = 0;
  std::string name_;
  std::vector<std::vector<VSeries>> table_;
  std::vector<std::vector<bool>> given_;
  mutable std::map<std::tuple<std::size_t, std::size_t, unsigned>, VSeries> cache_;
};

// a_(n) b: the coefficient of z^{-n-1} in Y(a, z) b.
inline ModElement product(const VertexTable& v, const ModElement& a, const ModElement& b, long n) {
  return v.field(a, b).coefficient(-n - 1);
}

inline ModElement wick(const VertexTable& v, const ModElement& a, const ModElement& b) { return product(v, a, b, -1); }

// [a lambda b] = sum_{n >= 0} lambda^n / n! a_(n) b
inline ModElement lambda_bracket(const VertexTable& v, const ModElement& a, const ModElement& b) {
  VSeries s = v.field(a, b);
  if (!s.axis.zero_above && s.axis.hi < -1) {
    throw WindowError(WindowError::Kind::TooSmall, "the window does not reach the regular part of Y(a,z)b");
  }
  ModElement out = zero_element(v.base());
  for (const auto& [e, c] : s.c) {
    if (e >= 0) break;
    const unsigned n = static_cast<unsigned>(-e - 1);
    out += act(v.base(), ParamPoly::lambda(n) * (Rational(1) / factorial(n)), c);
  }
  return out;
}

// The Lie conformal algebra of non-negative products. Brackets with torsion
// generators must vanish.
inline ConformalAlgebra conformal_shadow(const VertexTable& v) {
  const FgModule& m = v.base();
  std::map<std::pair<std::size_t, std::size_t>, ModElement> entries;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      ModElement b = lambda_bracket(v, generator(m, i), generator(m, j));
      if (!b.is_zero()) entries.emplace(std::make_pair(i, j), std::move(b));
    }
  }
  return ConformalAlgebra(m, entries, v.name().empty() ? "" : v.name() + "^conf");
}

struct VertexAxiomReport {
  AxiomCheck vacuum;
  AxiomCheck translation;
  AxiomCheck skew;
  long window = 0;
  bool all_pass() const { return vacuum.pass && translation.pass && skew.pass; }
};

namespace detail {

inline std::optional<long> first_difference(const VSeries& d) {
  if (d.c.empty()) return std::nullopt;
  return d.c.begin()->first;
}

inline std::string pair_str(const FgModule& m, std::size_t i, std::size_t j) {
  return "(" + m.label(i) + "," + m.label(j) + ")";
}

}  // namespace detail

inline VertexAxiomReport check_vertex_axioms(const VertexTable& v) {
  const FgModule& m = v.base();
  const std::size_t n = m.size();
  const std::size_t vac = v.vacuum();
  VertexAxiomReport rep;
  rep.window = v.window();
  auto fail = [](AxiomCheck& c, const std::string& w) {
    if (c.pass) {
      c.pass = false;
      c.witness = w;
    }
  };
  auto compare = [&](AxiomCheck& c, const VSeries& lhs, const VSeries& rhs, const std::string& what) {
    try {
      VSeries d = lhs - rhs;
      if (auto e = detail::first_difference(d)) {
        fail(c, what + " at z^" + std::to_string(*e) + ": difference " + str(m, d.c.begin()->second));
      }
    } catch (const WindowError& e) {
      fail(c, what + ": " + e.what());
    }
  };

  for (std::size_t j = 0; j < n; ++j) {
    compare(rep.vacuum, v.field(generator(m, vac), generator(m, j)), VSeries::constant(generator(m, j)),
            "Y(" + m.label(vac) + ",z)" + m.label(j) + " != " + m.label(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    VSeries s = v.field(generator(m, i), generator(m, vac));
    if (!s.c.empty() && s.c.begin()->first < 0) {
      fail(rep.vacuum, "Y(" + m.label(i) + ",z)" + m.label(vac) + " has a pole of order " +
                           std::to_string(-s.c.begin()->first));
    } else if (s.coefficient(0) != generator(m, i)) {
      fail(rep.vacuum, "Y(" + m.label(i) + ",z)" + m.label(vac) + " is not " + m.label(i) + " mod z");
    }
  }

  // Translation: on torsion generators the rules are not definitions, so both
  // forms must agree with the table.
  for (std::size_t i = m.free_rank(); i < n; ++i) {
    const ModElement di = apply_del(m, generator(m, i));
    for (std::size_t j = 0; j < n; ++j) {
      compare(rep.translation, derivative(v.field(generator(m, i), generator(m, j))),
              v.field(di, generator(m, j)), "d/dz Y(" + m.label(i) + ",z)" + m.label(j) + " != Y(del " + m.label(i) + ",z)" + m.label(j));
      compare(rep.translation, translate_minus_derivative(m, v.field(generator(m, j), generator(m, i))),
              v.field(generator(m, j), di),
              "(del - d/dz) Y(" + m.label(j) + ",z)" + m.label(i) + " != Y(" + m.label(j) + ",z) del " + m.label(i));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      VSeries lhs = v.field(generator(m, i), generator(m, j));
      VSeries other = reflect(v.field(generator(m, j), generator(m, i)));
      const long lo = other.c.empty() ? 0 : std::min(0L, other.c.begin()->first);
      VSeries rhs = multiply(m, truncated_exp(ParamPoly::del(), std::max(0L, v.window() - lo + 1)), other);
      compare(rep.skew, lhs, rhs, "skew-commutativity on " + detail::pair_str(m, i, j));
    }
  }
  return rep;
}

// ---- Locality -------------------------------------------------------------

struct LocalityResult {
  enum class Status { Local, Fail, Inconclusive };
  Status status = Status::Inconclusive;
  std::optional<long> minimal_n;
  long n_max = 0;
  long window = 0;
  std::size_t decisive_points = 0;  // for the reported N
  std::string witness;
};

inline const char* status_name(LocalityResult::Status s) {
  switch (s) {
    case LocalityResult::Status::Local: return "local";
    case LocalityResult::Status::Fail: return "fail";
    default: return "inconclusive";
  }
}

namespace detail {

// One ordering of the two fields applied to `on`: outer(x) inner(y) on, with
// x the outer variable. Stored per inner exponent.
struct OrderedProduct {
  VSeries inner;                      // Y(inner, y) on
  std::map<long, VSeries> outer;      // Y(outer, x) applied to each inner coefficient

  // State and value at (x exponent, y exponent).
  std::optional<ModElement> at(long x, long y, std::size_t dim) const {
    if (inner.axis.state(y) == Axis::State::Zero) return ModElement(dim);
    if (inner.axis.state(y) == Axis::State::Unknown) return std::nullopt;
    auto it = outer.find(y);
    if (it == outer.end()) return ModElement(dim);  // inner coefficient vanishes
    auto st = it->second.axis.state(x);
    if (st == Axis::State::Unknown) return std::nullopt;
    if (st == Axis::State::Zero) return ModElement(dim);
    return it->second.coefficient(x);
  }

  long inner_min() const { return inner.c.empty() ? 0 : inner.c.begin()->first; }
  long outer_min() const {
    long r = 0;
    for (const auto& [y, s] : outer) {
      if (!s.c.empty()) r = std::min(r, s.c.begin()->first);
    }
    return r;
  }
};

inline OrderedProduct ordered_product(const VertexTable& v, const ModElement& outer, const ModElement& inner,
                                      const ModElement& on) {
  OrderedProduct p;
  p.inner = v.field(inner, on);
  for (const auto& [e, u] : p.inner.c) {
    p.outer.emplace(e, v.field(outer, u));
  }
  return p;
}

}  // namespace detail

// (z - w)^N [Y(a,z), Y(b,w)] on, checked on every point of the box
// z, w <= box_top where all contributing coefficients are known.
inline LocalityResult locality_check(const VertexTable& v, const ModElement& a, const ModElement& b,
                                     const ModElement& on, long n_max = 8, std::optional<long> box_top = std::nullopt) {
  const FgModule& m = v.base();
  const std::size_t dim = m.size();
  LocalityResult r;
  r.n_max = n_max;
  r.window = v.window();
  const long top = box_top.value_or(v.window());
  // term1(z, w) = Y(a,z) Y(b,w) on; term2(z, w) = Y(b,w) Y(a,z) on.
  auto t1 = detail::ordered_product(v, a, b, on);
  auto t2 = detail::ordered_product(v, b, a, on);
  // Every exponent below these bounds carries a zero coefficient.
  const long zmin = std::min(t1.outer_min(), t2.inner_min());
  const long wmin = std::min(t1.inner_min(), t2.outer_min());

  auto commutator = [&](long z, long w) -> std::optional<ModElement> {
    auto x = t1.at(z, w, dim);
    if (!x) return std::nullopt;
    auto y = t2.at(w, z, dim);
    if (!y) return std::nullopt;
    return *x - *y;
  };

  std::optional<long> first_inconclusive;
  for (long N = 0; N <= n_max; ++N) {
    std::size_t decisive = 0;
    std::optional<std::string> bad;
    for (long p = zmin; p <= top && !bad; ++p) {
      for (long q = wmin; q <= top; ++q) {
        ModElement g = zero_element(m);
        bool known = true;
        for (long k = 0; k <= N; ++k) {
          auto f = commutator(p - N + k, q - k);
          if (!f) {
            known = false;
            break;
          }
          Rational coef = binomial(N, static_cast<unsigned>(k));
          if (k % 2) coef = -coef;
          if (!f->is_zero()) g += coef * *f;
        }
        if (!known) continue;
        ++decisive;
        if (!g.is_zero()) {
          bad = "N=" + std::to_string(N) + ": coefficient of z^" + std::to_string(p) + " w^" + std::to_string(q) +
                " is " + str(m, g);
          break;
        }
      }
    }
    if (bad) {
      r.witness = *bad;
      continue;
    }
    if (decisive == 0) {
      if (!first_inconclusive) first_inconclusive = N;
      continue;
    }
    if (first_inconclusive) break;
    r.status = LocalityResult::Status::Local;
    r.minimal_n = N;
    r.decisive_points = decisive;
    r.witness.clear();
    return r;
  }
  if (first_inconclusive) {
    r.status = LocalityResult::Status::Inconclusive;
    r.witness = "no decisive coefficients for N=" + std::to_string(*first_inconclusive) + "; raise the window";
  } else {
    r.status = LocalityResult::Status::Fail;
  }
  return r;
}

// ---- Identities ----------------------------------------------------------

struct IdentityCheck {
  bool pass = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;  // not admissible within the window
  std::string witness;
};

namespace detail {

inline std::string lambda_z_witness(const FgModule& m, long e, const ModElement& diff) {
  auto parts = coefficients_in(diff, Sym::Lambda);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k].is_zero()) {
      return "lambda^" + std::to_string(k) + " z^" + std::to_string(e) + ": " + str(m, parts[k]);
    }
  }
  return "z^" + std::to_string(e) + ": " + str(m, diff);
}

}  // namespace detail

// [a lambda Y(b,z)c] = e^{lambda z} Y([a lambda b], z)c + Y(b,z)[a lambda c]
inline IdentityCheck genwick_check(const VertexTable& v, const ModElement& a, const ModElement& b,
                                   const ModElement& c) {
  const FgModule& m = v.base();
  IdentityCheck r;
  try {
    VSeries ybc = v.field(b, c);
    VSeries lhs = VSeries::zero(m.size());
    lhs.axis = ybc.axis;
    for (const auto& [e, u] : ybc.c) lhs.add(e, lambda_bracket(v, a, u));
    VSeries first = v.field(lambda_bracket(v, a, b), c);
    const long lo = first.c.empty() ? 0 : std::min(0L, first.c.begin()->first);
    first = multiply(m, truncated_exp(ParamPoly::lambda(), std::max(0L, v.window() - lo + 1)), first);
    VSeries rhs = first + v.field(b, lambda_bracket(v, a, c));
    VSeries d = lhs - rhs;
    r.checked = 1;
    if (!d.c.empty()) {
      r.pass = false;
      r.witness = detail::lambda_z_witness(m, d.c.begin()->first, d.c.begin()->second);
    }
  } catch (const WindowError& e) {
    r.skipped = 1;
    r.witness = e.what();
  }
  return r;
}

inline IdentityCheck genwick_all(const VertexTable& v) {
  const FgModule& m = v.base();
  IdentityCheck total;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      for (std::size_t k = 0; k < m.size(); ++k) {
        auto r = genwick_check(v, generator(m, i), generator(m, j), generator(m, k));
        total.checked += r.checked;
        total.skipped += r.skipped;
        if (!r.pass && total.pass) {
          total.pass = false;
          total.witness = "triple (" + m.label(i) + "," + m.label(j) + "," + m.label(k) + ") " + r.witness;
        }
      }
    }
  }
  return total;
}

// binomial(m, j) for any integer m
inline Rational general_binomial(long m, unsigned j) {
  Rational r(1);
  for (unsigned t = 0; t < j; ++t) r *= Rational(m - static_cast<long>(t));
  return r / factorial(j);
}

// [a_(m), b_(n)] x = sum_{j >= 0} binom(m, j) (a_(j) b)_(m+n-j) x for m, n in
// [-range, range]; pairs that need coefficients outside the window are skipped.
inline IdentityCheck liebracket_check(const VertexTable& v, const ModElement& a, const ModElement& b,
                                      const ModElement& x, long range) {
  const FgModule& m = v.base();
  IdentityCheck r;
  VSeries yab = v.field(a, b);
  // a_(j) b for j >= 0, from the singular part.
  std::vector<std::pair<unsigned, VSeries>> singular;
  if (!yab.axis.zero_above && yab.axis.hi < -1) {
    r.skipped = 1;
    r.witness = "window does not reach the singular part of Y(a,z)b";
    return r;
  }
  for (const auto& [e, c] : yab.c) {
    if (e >= 0) break;
    singular.emplace_back(static_cast<unsigned>(-e - 1), v.field(c, x));
  }
  VSeries ybx = v.field(b, x);
  VSeries yax = v.field(a, x);
  for (long mm = -range; mm <= range; ++mm) {
    for (long nn = -range; nn <= range; ++nn) {
      try {
        ModElement lhs = product(v, a, ybx.coefficient(-nn - 1), mm) - product(v, b, yax.coefficient(-mm - 1), nn);
        ModElement rhs = zero_element(m);
        for (const auto& [j, s] : singular) rhs += general_binomial(mm, j) * s.coefficient(-(mm + nn - static_cast<long>(j)) - 1);
        ++r.checked;
        if (lhs != rhs && r.pass) {
          r.pass = false;
          r.witness = "m=" + std::to_string(mm) + " n=" + std::to_string(nn) + ": difference " + str(m, lhs - rhs);
        }
      } catch (const WindowError&) {
        ++r.skipped;
      }
    }
  }
  return r;
}

inline IdentityCheck liebracket_all(const VertexTable& v, std::optional<long> range = std::nullopt) {
  const FgModule& m = v.base();
  const long rg = range.value_or(v.window());
  IdentityCheck total;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      for (std::size_t k = 0; k < m.size(); ++k) {
        auto r = liebracket_check(v, generator(m, i), generator(m, j), generator(m, k), rg);
        total.checked += r.checked;
        total.skipped += r.skipped;
        if (!r.pass && total.pass) {
          total.pass = false;
          total.witness = "triple (" + m.label(i) + "," + m.label(j) + "," + m.label(k) + ") " + r.witness;
        }
      }
    }
  }
  return total;
}

// ---- Ideal calculus -------------------------------------------------------

struct ProductSpan {
  Submodule span;
  bool window_conditional = false;  // some series had an unknown tail
};

// A . B: C[del]-span of a_(j) b over generators of A and B and every j whose
// coefficient is known.
inline ProductSpan product_span(const VertexTable& v, const Submodule& a, const Submodule& b) {
  const FgModule& m = v.base();
  std::vector<ModElement> gens;
  bool conditional = false;
  for (const auto& x : a.canonical()) {
    for (const auto& y : b.canonical()) {
      VSeries s = v.field(x, y);
      if (!s.axis.zero_above) conditional = true;
      for (const auto& [e, c] : s.c) gens.push_back(c);
    }
  }
  return {span(m, gens), conditional};
}

inline bool is_vertex_ideal(const VertexTable& v, const Submodule& s) {
  return s.contains(product_span(v, s, whole_module(v.base())).span);
}

struct NilSeries {
  std::vector<Submodule> terms;  // terms[0] = I = I^1
  std::optional<std::size_t> nil_at;       // n with I^n = 0
  std::optional<std::size_t> stalled_at;   // I^{n+1} = I^n != 0
  bool window_conditional = false;
  bool is_nil() const { return nil_at.has_value(); }
};

// I^1 = I, I^{n+1} = I^n . I^n
inline NilSeries nil_series(const VertexTable& v, const Submodule& ideal, std::size_t max_n = 8) {
  NilSeries r;
  r.terms.push_back(ideal);
  for (std::size_t n = 1; n <= max_n; ++n) {
    const Submodule& cur = r.terms.back();
    if (cur.is_zero()) {
      r.nil_at = n;
      return r;
    }
    auto next = product_span(v, cur, cur);
    r.window_conditional = r.window_conditional || next.window_conditional;
    if (next.span == cur) {
      r.stalled_at = n;
      return r;
    }
    r.terms.push_back(std::move(next.span));
  }
  if (r.terms.back().is_zero()) r.nil_at = r.terms.size();
  return r;
}

// Smallest ideal containing s, by closing under V . s and s . V.
inline Submodule ideal_closure(const VertexTable& v, const Submodule& s, std::size_t max_steps = 16) {
  const Submodule whole = whole_module(v.base());
  Submodule cur = s;
  for (std::size_t k = 0; k < max_steps; ++k) {
    Submodule next = sum(cur, sum(product_span(v, cur, whole).span, product_span(v, whole, cur).span));
    if (next == cur) return cur;
    cur = std::move(next);
  }
  return cur;
}

struct NilradicalBound {
  SeriesResult bracket_series;  // V^[n] = [V, V^[n-1]] on the conformal shadow
  Submodule stable_term;
  bool stable_is_nil = false;
  std::vector<Submodule> nil_ideals;  // certified nil ideals found by search
  Submodule lower_bound;              // the nilradical contains this
  bool window_conditional = false;
};

inline NilradicalBound nilradical_bound(const VertexTable& v) {
  const FgModule& m = v.base();
  NilradicalBound r;
  r.bracket_series = central_series(conformal_shadow(v));
  r.stable_term = r.bracket_series.terms.back();
  auto ns = nil_series(v, r.stable_term);
  r.stable_is_nil = ns.is_nil();
  r.window_conditional = ns.window_conditional;
  r.lower_bound = r.stable_is_nil ? r.stable_term : zero_submodule(m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == v.vacuum()) continue;
    Submodule id = ideal_closure(v, span(m, {generator(m, i)}));
    if (id.contains(v.vacuum_element())) continue;
    auto s = nil_series(v, id);
    r.window_conditional = r.window_conditional || s.window_conditional;
    if (s.is_nil()) {
      r.nil_ideals.push_back(id);
      r.lower_bound = sum(r.lower_bound, id);
    }
  }
  return r;
}

// ---- Centre and ker c_(-1) -------------------------------------------------

inline bool is_vertex_central(const VertexTable& v, const ModElement& c) {
  const FgModule& m = v.base();
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (!lambda_bracket(v, generator(m, i), c).is_zero()) return false;
    if (!lambda_bracket(v, c, generator(m, i)).is_zero()) return false;
  }
  return true;
}

// Elements x of del-degree at most `bound` with c_(-1) x = 0, as a submodule.
inline Submodule kernel_minus_one(const VertexTable& v, const ModElement& c, int bound) {
  const FgModule& m = v.base();
  auto basis = detail::ansatz_basis(m, bound);
  std::vector<ModElement> images;
  for (const auto& x : basis) images.push_back(product(v, c, x, -1));
  return span(m, detail::kernel_combinations(basis, images));
}

// For central c with del c = 0: every a_(n) x with x in ker c_(-1) is again
// in the kernel, for all generators a and n in the window.
inline IdentityCheck kernel_closure_check(const VertexTable& v, const ModElement& c, int bound) {
  const FgModule& m = v.base();
  IdentityCheck r;
  Submodule ker = kernel_minus_one(v, c, bound);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (const auto& x : ker.canonical()) {
      VSeries s = v.field(generator(m, i), x);
      for (const auto& [e, y] : s.c) {
        try {
          ++r.checked;
          if (!product(v, c, y, -1).is_zero() && r.pass) {
            r.pass = false;
            r.witness = m.label(i) + "_(" + std::to_string(-e - 1) + ") applied to " + str(m, x) + " leaves the kernel";
          }
        } catch (const WindowError&) {
          ++r.skipped;
        }
      }
    }
  }
  return r;
}

// ---- Consequence checks ---------------------------------------------------

struct ConsequenceReport {
  bool reduced_within_search = false;
  bool adjoint_nilpotent = true;
  bool central_series_reaches_zero = false;
  std::string weight_ideal;  // "vacuous", "certified" or a failure description
  bool pass = true;
  std::string detail;
};

inline ConsequenceReport consequence_check(const VertexTable& v) {
  const FgModule& m = v.base();
  ConsequenceReport r;
  auto nb = nilradical_bound(v);
  ConformalAlgebra shadow = conformal_shadow(v);
  r.reduced_within_search = nb.lower_bound.is_zero();
  r.central_series_reaches_zero = central_series(shadow).reaches_zero();
  if (r.reduced_within_search) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!action_nilpotent(adjoint_matrix(shadow, generator(m, i))).nilpotent) {
        r.adjoint_nilpotent = false;
        r.detail = "adjoint action of " + m.label(i) + " is not nilpotent";
      }
    }
    if (!r.adjoint_nilpotent || !r.central_series_reaches_zero) {
      r.pass = false;
      if (r.detail.empty()) r.detail = "central series of the conformal shadow does not reach 0";
    }
  } else {
    r.detail = "not reduced: no claim";
  }
  // Nonzero weights of single-generator subalgebras.
  r.weight_ideal = "vacuous";
  for (std::size_t i = 0; i < m.free_rank(); ++i) {
    Submodule s = span(m, {generator(m, i)});
    if (!is_subalgebra(shadow, s)) continue;
    auto cand = diagonal_candidates(adjoint_matrix(shadow, generator(m, i)));
    for (const auto& phi : cand.weights) {
      if (phi.is_zero()) continue;
      auto chain = weight_chain(adjoint_matrix(shadow, generator(m, i)), phi);
      const Submodule& vphi = chain.chain.back();
      if (vphi.is_zero()) continue;
      bool ok = is_vertex_ideal(v, vphi) && product_span(v, vphi, vphi).span.is_zero();
      if (!ok) {
        r.weight_ideal = "weight " + phi.str() + " of " + m.label(i) + ": V^phi is not an abelian ideal";
        r.pass = false;
      } else if (r.weight_ideal == "vacuous") {
        r.weight_ideal = "certified";
      }
    }
  }
  return r;
}

// ---- Built-in tables -------------------------------------------------------

inline bool is_even_laurent(const std::map<long, Rational>& psi) {
  for (const auto& [e, c] : psi) {
    if (c != 0 && e % 2 != 0) return false;
  }
  return true;
}

// V = C[del]a + C[del]b + C vac with Y(a,z)a = e^{z del/2} psi(z) b and all
// other products of a, b zero.
inline VertexTable make_finitevertex(const std::map<long, Rational>& psi, long window = 8,
                                     bool allow_odd = false) {
  if (!allow_odd && !is_even_laurent(psi)) {
    throw std::invalid_argument("psi must be even, psi(z) = psi(-z)");
  }
  FgModule m(2, 1, {{0}}, {"a", "b", "vac"});
  VertexTable::Entries e;
  std::map<long, ParamPoly> terms;
  long lo = 0;
  bool any = false;
  for (const auto& [k, c] : psi) {
    if (c == 0) continue;
    terms[k] = ParamPoly(c);
    lo = any ? std::min(lo, k) : k;
    any = true;
  }
  if (any) {
    LaurentWindow w =
        truncated_exp(ParamPoly::del() * make_rational(1, 2), std::max(0L, window - lo)) * LaurentWindow::polynomial(terms);
    e.emplace(std::make_pair(0u, 0u), from_scalar(m, w, generator(m, 1)));
  }
  return VertexTable(m, 2, window, e, "finitevertex");
}

// Holomorphic vertex algebra of a finite-dimensional unital commutative
// algebra with derivation T: Y(x,z)y = (e^{zT}x) y. mult[i][j] is the
// coordinate vector of g_i g_j; T is given by columns.
inline VertexTable make_holomorphic(const std::vector<std::vector<QVector>>& mult, const QMatrix& t, std::size_t unit,
                                    std::vector<std::string> labels, long window = 8, std::string name = "holomorphic") {
  const std::size_t n = t.size();
  if (mult.size() != n || unit >= n) throw DimensionError("holomorphic: inconsistent dimensions");
  auto mul = [&](const QVector& x, const QVector& y) {
    QVector r(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        for (std::size_t k = 0; k < n; ++k) r[k] += x[i] * y[j] * mult[i][j][k];
      }
    }
    return r;
  };
  auto unitv = [&](std::size_t i) {
    QVector v(n);
    v[i] = 1;
    return v;
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (mul(unitv(unit), unitv(i)) != unitv(i)) throw std::invalid_argument("holomorphic: not a unit");
    for (std::size_t j = 0; j < n; ++j) {
      if (mul(unitv(i), unitv(j)) != mul(unitv(j), unitv(i))) throw std::invalid_argument("holomorphic: not commutative");
      QVector leibniz = mul(mat_vec(t, unitv(i)), unitv(j));
      QVector second = mul(unitv(i), mat_vec(t, unitv(j)));
      for (std::size_t k = 0; k < n; ++k) leibniz[k] += second[k];
      if (mat_vec(t, mul(unitv(i), unitv(j))) != leibniz) throw std::invalid_argument("holomorphic: T is not a derivation");
      for (std::size_t k = 0; k < n; ++k) {
        if (mul(mul(unitv(i), unitv(j)), unitv(k)) != mul(unitv(i), mul(unitv(j), unitv(k)))) {
          throw std::invalid_argument("holomorphic: not associative");
        }
      }
    }
  }
  FgModule m(0, n, t, std::move(labels));
  const bool nilpotent = is_zero(mat_pow(t, static_cast<unsigned>(n)));
  VertexTable::Entries e;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      VSeries s = VSeries::zero(n);
      s.axis = Axis{0, nilpotent ? static_cast<long>(n) : window, true, nilpotent};
      QVector x = unitv(i);
      Rational fact(1);
      for (long k = 0; k <= s.axis.hi; ++k) {
        if (k > 0) {
          x = mat_vec(t, x);
          fact *= Rational(k);
        }
        QVector p = mul(x, unitv(j));
        ModElement me(n);
        for (std::size_t q = 0; q < n; ++q) me[q] = ParamPoly(p[q] / fact);
        s.add(k, me);
      }
      e.emplace(std::make_pair(i, j), std::move(s));
    }
  }
  return VertexTable(m, unit, window, e, std::move(name));
}

// C^n with T = 0: basis vac, e1, ..., e_{n-1} with e_i e_j = delta_ij e_i.
inline VertexTable make_semisimple_holomorphic(std::size_t n, long window = 8) {
  if (n == 0) throw std::invalid_argument("holomorphic: dimension must be positive");
  std::vector<std::vector<QVector>> mult(n, std::vector<QVector>(n, QVector(n)));
  std::vector<std::string> labels{"vac"};
  for (std::size_t i = 1; i < n; ++i) labels.push_back("e" + std::to_string(i));
  for (std::size_t j = 0; j < n; ++j) {
    mult[0][j][j] = 1;
    mult[j][0][j] = 1;
  }
  for (std::size_t i = 1; i < n; ++i) mult[i][i][i] = 1;
  return make_holomorphic(mult, QMatrix(n, QVector(n)), 0, labels, window, "holomorphic(" + std::to_string(n) + ")");
}

// C[x]/(x^n) with T = x^2 d/dx: basis vac, x, x2, ..., x^{n-1}.
inline VertexTable make_jet_holomorphic(std::size_t n, long window = 8) {
  if (n == 0) throw std::invalid_argument("holomorphic: dimension must be positive");
  std::vector<std::vector<QVector>> mult(n, std::vector<QVector>(n, QVector(n)));
  std::vector<std::string> labels{"vac"};
  for (std::size_t i = 1; i < n; ++i) labels.push_back(i == 1 ? "x" : "x" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i + j < n) mult[i][j][i + j] = 1;
    }
  }
  QMatrix t(n, QVector(n));
  for (std::size_t k = 1; k + 1 < n; ++k) t[k + 1][k] = Rational(static_cast<long>(k));
  return make_holomorphic(mult, t, 0, labels, window, "holomorphic(" + std::to_string(n) + ",jet)");
}

}  // namespace confalg
