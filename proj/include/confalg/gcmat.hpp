#pragma once

#include "confalg/cdmod.hpp"
#include "confalg/errors.hpp"
#include "confalg/lca.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace confalg {

// A conformal linear map F_lambda on an FgModule, stored by columns:
// column j is F_lambda(g_j). Applying F to p(del) g_j gives p(del + lambda)
// F_lambda(g_j). Columns of torsion generators are zero.
class ConformalMatrix {
 public:
  ConformalMatrix() = default;
  ConformalMatrix(FgModule base, std::vector<ModElement> columns) : base_(std::move(base)) {
    if (columns.size() != base_.size()) throw DimensionError("one column per generator required");
    for (std::size_t j = 0; j < columns.size(); ++j) {
      ModElement c = normalize(base_, columns[j]);
      if (base_.is_torsion(j) && !c.is_zero()) {
        throw std::invalid_argument("column of torsion generator " + base_.label(j) + " must be zero");
      }
      columns_.push_back(std::move(c));
    }
  }

  static ConformalMatrix zero(const FgModule& m) {
    return ConformalMatrix(m, std::vector<ModElement>(m.size(), zero_element(m)));
  }

  // From entries[row][col].
  static ConformalMatrix from_entries(const FgModule& m, const std::vector<std::vector<ParamPoly>>& entries) {
    if (entries.size() != m.size()) throw DimensionError("matrix must be square of module size");
    std::vector<ModElement> cols(m.size(), zero_element(m));
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (entries[r].size() != m.size()) throw DimensionError("matrix must be square of module size");
      for (std::size_t c = 0; c < m.size(); ++c) cols[c][r] = entries[r][c];
    }
    return ConformalMatrix(m, cols);
  }

  const FgModule& base() const { return base_; }
  const std::vector<ModElement>& columns() const { return columns_; }
  const ParamPoly& entry(std::size_t row, std::size_t col) const { return columns_.at(col)[row]; }
  bool is_zero() const {
    for (const auto& c : columns_) {
      if (!c.is_zero()) return false;
    }
    return true;
  }

  int max_degree(Sym s) const {
    int d = 0;
    for (const auto& c : columns_) d = std::max(d, c.degree(s));
    return d;
  }

  ConformalMatrix subs(Sym s, const ParamPoly& v) const {
    ConformalMatrix r = *this;
    for (auto& c : r.columns_) c = normalize(base_, confalg::subs(c, s, v));
    return r;
  }

  ConformalMatrix operator-(const ConformalMatrix& o) const {
    ConformalMatrix r = *this;
    for (std::size_t j = 0; j < columns_.size(); ++j) r.columns_[j] -= o.columns_.at(j);
    return r;
  }
  ConformalMatrix operator+(const ConformalMatrix& o) const {
    ConformalMatrix r = *this;
    for (std::size_t j = 0; j < columns_.size(); ++j) r.columns_[j] += o.columns_.at(j);
    return r;
  }
  ConformalMatrix operator-() const {
    ConformalMatrix r = *this;
    for (auto& c : r.columns_) c = -c;
    return r;
  }
  friend bool operator==(const ConformalMatrix& a, const ConformalMatrix& b) {
    return a.base_ == b.base_ && a.columns_ == b.columns_;
  }

  std::string str() const {
    std::string out = "[";
    for (std::size_t r = 0; r < base_.size(); ++r) {
      if (r > 0) out += "; ";
      for (std::size_t c = 0; c < base_.size(); ++c) {
        if (c > 0) out += ", ";
        out += entry(r, c).str();
      }
    }
    return out + "]";
  }

 private:
  FgModule base_;
  std::vector<ModElement> columns_;
};

// F_nu(x): sum_j x_j(del + nu) F_nu(g_j). Other parameters in x and F are
// carried along as scalars.
inline ModElement apply(const ConformalMatrix& f, const ModElement& x, const ParamPoly& nu = ParamPoly::lambda()) {
  const FgModule& m = f.base();
  check_element(m, x);
  ModElement out = zero_element(m);
  const ParamPoly shifted = ParamPoly::del() + nu;
  const bool plain = nu == ParamPoly::lambda();
  for (std::size_t j = 0; j < m.free_rank(); ++j) {
    if (x[j].is_zero() || f.columns()[j].is_zero()) continue;
    const ModElement col = plain ? f.columns()[j] : subs(f.columns()[j], Sym::Lambda, nu);
    out += act(m, x[j].subs(Sym::Del, shifted), col);
  }
  return out;
}

// [f_nu g]_lambda = f_nu(g_{lambda-nu}) - g_{lambda-nu}(f_nu), as a map in lambda.
// With nu = alpha this is F(del, alpha) G(del + alpha, lambda - alpha)
// - G(del, lambda - alpha) F(del + lambda - alpha, alpha).
inline ConformalMatrix gc_bracket(const ConformalMatrix& f, const ConformalMatrix& g,
                                  const ParamPoly& nu = ParamPoly::alpha()) {
  if (!(f.base() == g.base())) throw DimensionError("gc_bracket: matrices over different bases");
  const FgModule& m = f.base();
  const ParamPoly rest = ParamPoly::lambda() - nu;
  std::vector<ModElement> cols;
  for (std::size_t k = 0; k < m.size(); ++k) {
    const ModElement ek = generator(m, k);
    cols.push_back(apply(f, apply(g, ek, rest), nu) - apply(g, apply(f, ek, nu), rest));
  }
  return ConformalMatrix(m, cols);
}

// (ad s)_lambda x = [s lambda x].
inline ConformalMatrix adjoint_matrix(const ConformalAlgebra& a, const ModElement& s) {
  std::vector<ModElement> cols;
  for (std::size_t j = 0; j < a.size(); ++j) cols.push_back(bracket(a, s, generator(a.base(), j)));
  return ConformalMatrix(a.base(), cols);
}

struct NilpotencyResult {
  bool nilpotent = false;
  std::size_t steps = 0;            // first n with W_n = 0, when nilpotent
  std::vector<Submodule> chain;     // W_0 = V, W_{k+1} = span of coefficients of F(W_k)
  std::size_t step_bound = 0;
  bool stabilized = false;          // W_{k+1} = W_k != 0
};

inline std::size_t nilpotency_step_bound(const ConformalMatrix& f) {
  const FgModule& m = f.base();
  return m.free_rank() * static_cast<std::size_t>(f.max_degree(Sym::Del) + 2) + m.torsion_dim() + 1;
}

inline Submodule image_of(const ConformalMatrix& f, const Submodule& w) {
  std::vector<ModElement> gens;
  for (const auto& g : w.canonical()) {
    ModElement y = apply(f, g);
    if (!y.is_zero()) gens.push_back(std::move(y));
  }
  return span(f.base(), gens);
}

inline NilpotencyResult action_nilpotent(const ConformalMatrix& f) {
  NilpotencyResult r;
  r.step_bound = nilpotency_step_bound(f);
  r.chain.push_back(whole_module(f.base()));
  if (r.chain[0].is_zero()) {
    r.nilpotent = true;
    return r;
  }
  for (std::size_t k = 0; k < r.step_bound; ++k) {
    Submodule next = image_of(f, r.chain.back());
    const bool same = next == r.chain.back();
    r.chain.push_back(std::move(next));
    if (r.chain.back().is_zero()) {
      r.nilpotent = true;
      r.steps = k + 1;
      return r;
    }
    if (same) {
      r.stabilized = true;
      return r;
    }
  }
  return r;
}

// F_lambda w = phi(lambda) w exactly.
inline bool verify_weight_vector(const ConformalMatrix& f, const ModElement& w, const ParamPoly& phi) {
  ModElement scaled = w;
  for (auto& c : scaled.coeffs) c *= phi;
  return apply(f, w) == normalize(f.base(), scaled);
}

struct WeightSpaceChain {
  ParamPoly weight;                 // phi(lambda)
  std::vector<Submodule> chain;     // V_0 = 0 ⊆ V_1 ⊆ ...
  bool stabilized = false;
  int degree_bound = 0;             // del-degree of the ansatz
  std::string diagnostic;

  const Submodule& space() const { return chain.back(); }
};

// Subalgebra generated by s, closed under all lambda-coefficients of brackets.
inline Submodule generated_subalgebra(const ConformalAlgebra& a, const ModElement& s) {
  Submodule cur = span(a.base(), {s});
  while (true) {
    Submodule next = sum(cur, subspace_bracket(a, cur, cur));
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

struct WeightWitnessCheck {
  bool pass = false;
  std::string reason;
};

// Checks a claimed outcome of removing the off-diagonal column of a
// non-nilpotent action: s_bar - s lies in <s>', w != 0 and
// (ad s_bar)_lambda w = phi(lambda) w with phi != 0. Finding s_bar is not
// attempted here.
inline WeightWitnessCheck check_weight_witness(const ConformalAlgebra& a, const ModElement& s, const ModElement& s_bar,
                                               const ModElement& w, const ParamPoly& phi) {
  const FgModule& m = a.base();
  WeightWitnessCheck r;
  if (phi.is_zero()) {
    r.reason = "weight is zero";
  } else if (normalize(m, w).is_zero()) {
    r.reason = "weight vector is zero";
  } else {
    const Submodule gen = generated_subalgebra(a, s);
    if (!subspace_bracket(a, gen, gen).contains(s_bar - s)) {
      r.reason = str(m, s_bar - s) + " is not in the derived algebra of <" + str(m, s) + ">";
    } else if (!verify_weight_vector(adjoint_matrix(a, s_bar), w, phi)) {
      r.reason = str(m, w) + " is not a weight vector of weight " + phi.str() + " for " + str(m, s_bar);
    } else {
      r.pass = true;
    }
  }
  return r;
}

inline int default_weight_degree(const ConformalMatrix& f) {
  return static_cast<int>(f.base().free_rank()) + f.max_degree(Sym::Del);
}

namespace detail {

// Basis vectors of the bounded ansatz: del^n g_i (n <= bound) on free
// generators and the torsion generators.
inline std::vector<ModElement> ansatz_basis(const FgModule& m, int bound) {
  std::vector<ModElement> out;
  for (std::size_t i = 0; i < m.free_rank(); ++i) {
    for (int n = 0; n <= bound; ++n) {
      ModElement e = zero_element(m);
      e[i] = ParamPoly::del(static_cast<unsigned>(n));
      out.push_back(std::move(e));
    }
  }
  for (std::size_t t = 0; t < m.torsion_dim(); ++t) out.push_back(generator(m, m.free_rank() + t));
  return out;
}

// Nullspace of the linear map basis_k -> images_k, expressed as combinations
// of the basis elements.
inline std::vector<ModElement> kernel_combinations(const std::vector<ModElement>& basis,
                                                   const std::vector<ModElement>& images) {
  std::map<std::pair<std::size_t, Exponents>, std::size_t> coord;
  for (const auto& img : images) {
    for (std::size_t g = 0; g < img.size(); ++g) {
      for (const auto& [e, c] : img[g].terms()) coord.try_emplace({g, e}, coord.size());
    }
  }
  QMatrix eqs(coord.size(), QVector(images.size()));
  for (std::size_t k = 0; k < images.size(); ++k) {
    for (std::size_t g = 0; g < images[k].size(); ++g) {
      for (const auto& [e, c] : images[k][g].terms()) eqs[coord.at({g, e})][k] = c;
    }
  }
  std::vector<ModElement> out;
  for (const auto& sol : nullspace(eqs, images.size())) {
    ModElement v(basis.empty() ? 0 : basis[0].size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (sol[k] != 0) v += sol[k] * basis[k];
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

// V_{i+1} = V_i + C[del]-span{ v : F_lambda v - phi(lambda) v in V_i[lambda] },
// with v of del-degree at most the bound.
inline WeightSpaceChain weight_chain(const ConformalMatrix& f, const ParamPoly& phi,
                                     std::optional<int> degree_bound = std::nullopt) {
  const FgModule& m = f.base();
  for (std::size_t s = 0; s < kNumSyms; ++s) {
    if (static_cast<Sym>(s) != Sym::Lambda && phi.has(static_cast<Sym>(s))) {
      throw std::invalid_argument("weight must be a polynomial in lambda: " + phi.str());
    }
  }
  WeightSpaceChain w;
  w.weight = phi;
  w.degree_bound = degree_bound.value_or(default_weight_degree(f));
  w.chain.push_back(zero_submodule(m));
  const auto basis = detail::ansatz_basis(m, w.degree_bound);
  const std::size_t max_steps = m.size() * static_cast<std::size_t>(w.degree_bound + 2) + 2;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const Submodule& cur = w.chain.back();
    std::vector<ModElement> images;
    for (const auto& v : basis) {
      ModElement diff = apply(f, v);
      ModElement pv = v;
      for (auto& c : pv.coeffs) c *= phi;
      diff -= normalize(m, pv);
      images.push_back(cur.normal_form(diff));
    }
    std::vector<ModElement> gens = cur.canonical();
    for (auto& v : detail::kernel_combinations(basis, images)) gens.push_back(std::move(v));
    Submodule next = span(m, gens);
    if (next == cur) {
      w.stabilized = true;
      return w;
    }
    w.chain.push_back(std::move(next));
  }
  w.diagnostic = "weight chain for " + phi.str() + " did not stabilize within " + std::to_string(max_steps) + " steps";
  return w;
}

struct CandidateResult {
  std::vector<ParamPoly> weights;
  std::string diagnostic;  // empty when candidates were found
};

// Weights read off the diagonal of a triangular matrix. Only del-free
// diagonal entries are weights.
inline CandidateResult diagonal_candidates(const ConformalMatrix& f) {
  const FgModule& m = f.base();
  const std::size_t n = m.size();
  bool upper = true, lower = true;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (f.entry(r, c).is_zero()) continue;
      if (r > c) upper = false;
      if (r < c) lower = false;
    }
  }
  CandidateResult res;
  if (!upper && !lower) {
    res.diagnostic = "matrix is not triangular in the given base; supply candidate weights";
    return res;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const ParamPoly& d = f.entry(j, j);
    if (d.has(Sym::Del)) {
      res.diagnostic = "diagonal entry " + d.str() + " at " + m.label(j) + " depends on del and is not a weight";
      res.weights.clear();
      return res;
    }
    if (std::find(res.weights.begin(), res.weights.end(), d) == res.weights.end()) res.weights.push_back(d);
  }
  return res;
}

// Sum of the submodules is direct: ranks add up and torsion parts are independent.
inline bool is_direct_sum(const FgModule& m, const std::vector<Submodule>& parts) {
  std::size_t rank_total = 0, torsion_total = 0;
  std::vector<ModElement> all, tors;
  for (const auto& p : parts) {
    rank_total += p.rank();
    all.insert(all.end(), p.canonical().begin(), p.canonical().end());
    Submodule t = p.torsion_part();
    torsion_total += t.torsion_dim();
    tors.insert(tors.end(), t.canonical().begin(), t.canonical().end());
  }
  return span(m, all).rank() == rank_total && span(m, tors).torsion_dim() == torsion_total;
}

struct WeightSpacesResult {
  std::vector<WeightSpaceChain> chains;
  bool direct = false;
  std::string diagnostic;
};

inline WeightSpacesResult weight_spaces(const ConformalMatrix& f, std::vector<ParamPoly> candidates = {},
                                        std::optional<int> degree_bound = std::nullopt) {
  WeightSpacesResult res;
  if (candidates.empty()) {
    auto c = diagonal_candidates(f);
    if (!c.diagnostic.empty()) {
      res.diagnostic = c.diagnostic;
      return res;
    }
    candidates = c.weights;
  }
  std::vector<Submodule> spaces;
  for (const auto& phi : candidates) {
    res.chains.push_back(weight_chain(f, phi, degree_bound));
    if (!res.chains.back().diagnostic.empty() && res.diagnostic.empty()) res.diagnostic = res.chains.back().diagnostic;
    spaces.push_back(res.chains.back().space());
  }
  res.direct = is_direct_sum(f.base(), spaces);
  return res;
}

namespace detail {

// Flatten a matrix with parameters into (column, generator, exponents) coordinates.
inline std::map<std::tuple<std::size_t, std::size_t, Exponents>, Rational> matrix_coords(const ConformalMatrix& f) {
  std::map<std::tuple<std::size_t, std::size_t, Exponents>, Rational> out;
  for (std::size_t j = 0; j < f.columns().size(); ++j) {
    for (std::size_t g = 0; g < f.columns()[j].size(); ++g) {
      for (const auto& [e, c] : f.columns()[j][g].terms()) out[{j, g, e}] = c;
    }
  }
  return out;
}

}  // namespace detail

// The alpha-coefficients of [f_alpha k] for k in a finite set of matrices.
inline std::vector<ConformalMatrix> alpha_coefficients_of_brackets(const ConformalMatrix& f,
                                                                    const std::vector<ConformalMatrix>& ks) {
  std::vector<ConformalMatrix> out;
  for (const auto& k : ks) {
    ConformalMatrix b = gc_bracket(f, k);
    const int d = b.max_degree(Sym::Alpha);
    for (int n = 0; n <= d; ++n) {
      std::vector<ModElement> cols;
      for (const auto& c : b.columns()) {
        ModElement e(c.size());
        for (std::size_t g = 0; g < c.size(); ++g) e[g] = c[g].coeff(Sym::Alpha, static_cast<unsigned>(n));
        cols.push_back(std::move(e));
      }
      ConformalMatrix cm(f.base(), cols);
      if (!cm.is_zero()) out.push_back(std::move(cm));
    }
  }
  return out;
}

// Whether iterated brackets with f vanish within `bound` steps, i.e. f acts
// nilpotently on the subalgebra of gc it generates.
inline std::optional<std::size_t> generates_nilpotent(const ConformalMatrix& f, std::size_t bound = 8) {
  std::vector<ConformalMatrix> k{f};
  for (std::size_t step = 1; step <= bound; ++step) {
    k = alpha_coefficients_of_brackets(f, k);
    // keep a linearly independent subset
    std::vector<ConformalMatrix> kept;
    QMatrix rows;
    std::map<std::tuple<std::size_t, std::size_t, Exponents>, std::size_t> index;
    for (const auto& c : k) {
      for (const auto& [key, v] : detail::matrix_coords(c)) index.try_emplace(key, index.size());
    }
    for (const auto& c : k) {
      QVector row(index.size());
      for (const auto& [key, v] : detail::matrix_coords(c)) row[index.at(key)] = v;
      QMatrix trial = rows;
      trial.push_back(row);
      if (rank(trial) > rows.size()) {
        rows.push_back(row);
        kept.push_back(c);
      }
    }
    k = std::move(kept);
    if (k.empty()) return step;
  }
  return std::nullopt;
}

struct FittingResult {
  Submodule v0;
  std::vector<WeightSpaceChain> nonzero;
  bool spans = false;
  bool direct = false;
  std::string diagnostic;
};

inline FittingResult fitting_decomposition(const ConformalMatrix& f, std::optional<int> degree_bound = std::nullopt) {
  if (!generates_nilpotent(f)) {
    throw std::invalid_argument("fitting_decomposition: the map does not generate a nilpotent subalgebra of gc");
  }
  FittingResult res;
  auto zero_chain = weight_chain(f, ParamPoly(), degree_bound);
  res.v0 = zero_chain.space();
  std::vector<Submodule> parts{res.v0};
  auto cands = diagonal_candidates(f);
  if (!cands.diagnostic.empty()) res.diagnostic = cands.diagnostic;
  for (const auto& phi : cands.weights) {
    if (phi.is_zero()) continue;
    auto c = weight_chain(f, phi, degree_bound);
    if (c.space().is_zero()) continue;
    parts.push_back(c.space());
    res.nonzero.push_back(std::move(c));
  }
  std::vector<ModElement> all;
  for (const auto& p : parts) all.insert(all.end(), p.canonical().begin(), p.canonical().end());
  res.spans = is_whole(span(f.base(), all));
  res.direct = is_direct_sum(f.base(), parts);
  if (!res.spans && res.diagnostic.empty()) res.diagnostic = "incomplete decomposition within degree bounds";
  return res;
}

}  // namespace confalg
