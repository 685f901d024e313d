#pragma once

// Small dense linear-algebra helpers for desk-scale systems: nullspace
// bases by Gauss-Jordan elimination and row-space orthonormalization.

#include <cmath>
#include <cstddef>
#include <vector>

namespace regretlab::linalg {

using Matrix = std::vector<std::vector<double>>;

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

// Basis for the nullspace of a (rows x cols) system via Gauss-Jordan with
// partial pivoting; pivots with magnitude <= pivot_tol count as zero.
inline Matrix nullspace_basis(Matrix a, double pivot_tol) {
  if (a.empty()) return {};
  const std::size_t rows = a.size();
  const std::size_t cols = a[0].size();
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t best = r;
    for (std::size_t k = r + 1; k < rows; ++k) {
      if (std::abs(a[k][c]) > std::abs(a[best][c])) best = k;
    }
    if (std::abs(a[best][c]) <= pivot_tol) continue;
    std::swap(a[r], a[best]);
    const double p = a[r][c];
    for (std::size_t j = 0; j < cols; ++j) a[r][j] /= p;
    for (std::size_t k = 0; k < rows; ++k) {
      if (k == r) continue;
      const double f = a[k][c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) a[k][j] -= f * a[r][j];
    }
    pivot_col.push_back(c);
    ++r;
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivot_col) is_pivot[c] = true;

  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<double> v(cols, 0.0);
    v[free] = 1.0;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) {
      v[pivot_col[k]] = -a[k][free];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Orthonormal basis of the row space (modified Gram-Schmidt with
// re-orthogonalization, so near-dependent rows do not leak noise
// directions); a row whose residual shrinks below rel_tol times its own
// norm is dropped as dependent.
inline Matrix orthonormal_rows(const Matrix& a, double rel_tol) {
  Matrix q;
  for (const auto& row : a) {
    const double original = norm2(row);
    if (original == 0.0) continue;
    std::vector<double> v = row;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : q) {
        const double c = dot(v, u);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
      }
    }
    const double n = norm2(v);
    if (n <= rel_tol * original) continue;
    for (double& x : v) x /= n;
    q.push_back(std::move(v));
  }
  return q;
}

// Removes from v its component in the span of the orthonormal rows q; the
// second sweep clears first-order leakage from rounding.
inline std::vector<double> project_out(std::vector<double> v, const Matrix& q) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : q) {
      const double c = dot(v, u);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
    }
  }
  return v;
}

}  // namespace regretlab::linalg
