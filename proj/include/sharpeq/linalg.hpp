#pragma once

#include <optional>
#include <vector>

#include "sharpeq/vec.hpp"

namespace sharpeq::linalg {

// Tiny dense routines for the n <= 4 problems this library handles.
// Everything is tolerance-based; inputs are well scaled corpus data.

inline constexpr double kRankTol = 1e-10;

// Orthonormal basis of span{rows} (modified Gram-Schmidt).
inline std::vector<Vec> orthonormal_basis(const std::vector<Vec>& rows) {
  std::vector<Vec> q;
  for (Vec v : rows) {
    for (const Vec& u : q) v = sub(v, scale(dot(v, u), u));
    double nrm = norm(v);
    if (nrm > kRankTol) q.push_back(scale(1.0 / nrm, v));
  }
  return q;
}

// Orthonormal basis of {d : <a,d> = 0 for all rows a}.
inline std::vector<Vec> null_basis(const std::vector<Vec>& rows, int n) {
  std::vector<Vec> q = orthonormal_basis(rows);
  std::vector<Vec> res;
  for (int i = 0; i < n; ++i) {
    Vec v = unit(n, i);
    for (const Vec& u : q) v = sub(v, scale(dot(v, u), u));
    for (const Vec& u : res) v = sub(v, scale(dot(v, u), u));
    double nrm = norm(v);
    if (nrm > kRankTol) res.push_back(scale(1.0 / nrm, v));
  }
  return res;
}

// Component of v orthogonal to span{rows}, i.e. the projection of v onto
// the null space of the row matrix.
inline Vec project_to_null(const std::vector<Vec>& rows, const Vec& v) {
  Vec r = v;
  for (const Vec& u : orthonormal_basis(rows)) r = sub(r, scale(dot(r, u), u));
  return r;
}

// Any particular solution of A p = b, or nullopt if the system is
// inconsistent (to tolerance). Gaussian elimination with partial pivoting;
// free variables are set to zero.
inline std::optional<Vec> solve_affine(std::vector<Vec> A, Vec b, int n) {
  const int m = static_cast<int>(A.size());
  std::vector<int> pivot_col(static_cast<std::size_t>(m), -1);
  int row = 0;
  for (int col = 0; col < n && row < m; ++col) {
    int best = -1;
    double best_abs = kRankTol;
    for (int r = row; r < m; ++r) {
      double a = std::abs(A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best < 0) continue;
    std::swap(A[static_cast<std::size_t>(row)], A[static_cast<std::size_t>(best)]);
    std::swap(b[static_cast<std::size_t>(row)], b[static_cast<std::size_t>(best)]);
    double piv = A[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    for (int r = row + 1; r < m; ++r) {
      double f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / piv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c)
        A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * A[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(row)];
    }
    pivot_col[static_cast<std::size_t>(row)] = col;
    ++row;
  }
  for (int r = row; r < m; ++r)
    if (std::abs(b[static_cast<std::size_t>(r)]) > 1e-9) return std::nullopt;
  Vec p = zeros(n);
  for (int r = row - 1; r >= 0; --r) {
    int col = pivot_col[static_cast<std::size_t>(r)];
    double s = b[static_cast<std::size_t>(r)];
    for (int c = col + 1; c < n; ++c)
      s -= A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * p[static_cast<std::size_t>(c)];
    p[static_cast<std::size_t>(col)] = s / A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
  }
  return p;
}

// Projection of x onto the affine set {p : A p = b}; the set must be
// nonempty (checked, nullopt otherwise).
inline std::optional<Vec> project_affine(const std::vector<Vec>& A, const Vec& b, const Vec& x) {
  const int n = static_cast<int>(x.size());
  auto p0 = solve_affine(A, b, n);
  if (!p0) return std::nullopt;
  Vec d = sub(x, *p0);
  Vec r = *p0;
  for (const Vec& u : null_basis(A, n)) r = add(r, scale(dot(d, u), u));
  return r;
}

// Solve the square SPD-ish system M z = rhs (small, Gaussian elimination).
// Returns nullopt when the system is singular to tolerance.
inline std::optional<Vec> solve_square(std::vector<Vec> M, Vec rhs) {
  const int n = static_cast<int>(rhs.size());
  std::vector<Vec> A = std::move(M);
  for (int col = 0; col < n; ++col) {
    int best = col;
    double best_abs = std::abs(A[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)]);
    for (int r = col + 1; r < n; ++r) {
      double a = std::abs(A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]);
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (best_abs <= kRankTol) return std::nullopt;
    std::swap(A[static_cast<std::size_t>(col)], A[static_cast<std::size_t>(best)]);
    std::swap(rhs[static_cast<std::size_t>(col)], rhs[static_cast<std::size_t>(best)]);
    for (int r = col + 1; r < n; ++r) {
      double f = A[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                 A[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c)
        A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
            f * A[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
      rhs[static_cast<std::size_t>(r)] -= f * rhs[static_cast<std::size_t>(col)];
    }
  }
  Vec z = zeros(n);
  for (int r = n - 1; r >= 0; --r) {
    double s = rhs[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c)
      s -= A[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * z[static_cast<std::size_t>(c)];
    z[static_cast<std::size_t>(r)] = s / A[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
  }
  return z;
}

}  // namespace sharpeq::linalg
