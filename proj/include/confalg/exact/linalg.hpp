#pragma once

#include "confalg/exact/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace confalg {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;  // row-major

inline QMatrix identity(std::size_t n) {
  QMatrix m(n, QVector(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline bool is_zero(const QVector& v) {
  for (const auto& x : v) {
    if (x != 0) return false;
  }
  return true;
}

inline bool is_zero(const QMatrix& m) {
  for (const auto& r : m) {
    if (!is_zero(r)) return false;
  }
  return true;
}

inline QVector mat_vec(const QMatrix& m, const QVector& v) {
  QVector out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != v.size()) throw std::invalid_argument("mat_vec: dimension mismatch");
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (m[i][j] != 0 && v[j] != 0) out[i] += m[i][j] * v[j];
    }
  }
  return out;
}

inline QMatrix mat_mul(const QMatrix& a, const QMatrix& b) {
  const std::size_t n = a.size();
  const std::size_t k = b.size();
  const std::size_t m = b.empty() ? 0 : b[0].size();
  QMatrix out(n, QVector(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < k; ++t) {
      if (a[i][t] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][t] * b[t][j];
    }
  }
  return out;
}

inline QMatrix mat_pow(const QMatrix& a, unsigned e) {
  QMatrix r = identity(a.size());
  for (unsigned i = 0; i < e; ++i) r = mat_mul(r, a);
  return r;
}

// Reduced row echelon form in place; returns pivot columns. Zero rows are
// dropped, so rows.size() equals the rank afterwards.
inline std::vector<std::size_t> rref(QMatrix& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    Rational inv = Rational(1) / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rational f = rows[i][c];
      for (std::size_t j = c; j < ncols; ++j) {
        if (rows[r][j] != 0) rows[i][j] -= f * rows[r][j];
      }
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

inline std::size_t rank(QMatrix m) { return rref(m).size(); }

// Basis of {x : A x = 0}; A has `ncols` columns (needed when A has no rows).
inline QMatrix nullspace(QMatrix a, std::size_t ncols) {
  for (const auto& row : a) {
    if (row.size() != ncols) throw std::invalid_argument("nullspace: ragged matrix");
  }
  auto pivots = rref(a);
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : pivots) is_pivot[p] = true;
  QMatrix basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    QVector v(ncols);
    v[f] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Reduce v against an RREF basis (with its pivot columns); result has zero
// entries at every pivot column.
inline QVector reduce_against(QVector v, const QMatrix& basis, const std::vector<std::size_t>& pivots) {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Rational f = v[pivots[i]];
    if (f == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (basis[i][j] != 0) v[j] -= f * basis[i][j];
    }
  }
  return v;
}

// Row space of `rows` contains v?
inline bool in_row_space(const QVector& v, QMatrix rows) {
  auto piv = rref(rows);
  return is_zero(reduce_against(v, rows, piv));
}

// Inverse of a square matrix; throws if singular.
inline QMatrix inverse(const QMatrix& a) {
  const std::size_t n = a.size();
  QMatrix aug(n, QVector(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("inverse: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n + i] = 1;
  }
  auto piv = rref(aug);
  if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) throw std::domain_error("inverse: singular matrix");
  QMatrix inv(n, QVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = aug[i][n + j];
  }
  return inv;
}

inline QMatrix transpose(const QMatrix& a) {
  if (a.empty()) return {};
  QMatrix t(a[0].size(), QVector(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

// Basis of the column space of a.
inline QMatrix column_space(const QMatrix& a) {
  QMatrix t = transpose(a);
  rref(t);
  return t;
}

}  // namespace confalg
