#pragma once

// Dense linear algebra over the prime field F_p.  Matrices are tiny
// (dimension is bounded by the residue-field and fiber caps), so plain
// Gaussian elimination is all that is needed.

#include <optional>
#include <vector>

#include "errors.hpp"

namespace asdescent {

using FpVec = std::vector<int>;
using FpMat = std::vector<FpVec>;  // row major, entries in [0, p)

namespace detail {

inline int fp_inv(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw DivisionByZero();
  int r = 1;
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
  }
  return r;
}

}  // namespace detail

// Solves M x = b over F_p.  Returns one solution or nullopt if inconsistent.
inline std::optional<FpVec> fp_solve(FpMat m, FpVec b, int p) {
  const size_t rows = m.size();
  const size_t cols = rows ? m[0].size() : 0;
  std::vector<int> pivot_col(rows, -1);
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t pr = r;
    while (pr < rows && m[pr][c] == 0) ++pr;
    if (pr == rows) continue;
    std::swap(m[pr], m[r]);
    std::swap(b[pr], b[r]);
    const int inv = detail::fp_inv(m[r][c], p);
    for (size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv % p;
    b[r] = b[r] * inv % p;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const int f = m[i][c];
      for (size_t j = c; j < cols; ++j)
        m[i][j] = ((m[i][j] - f * m[r][j]) % p + p) % p;
      b[i] = ((b[i] - f * b[r]) % p + p) % p;
    }
    pivot_col[r] = static_cast<int>(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] % p != 0) return std::nullopt;
  FpVec x(cols, 0);
  for (size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

// Inverts a square matrix over F_p.  Throws DivisionByZero if singular.
inline FpMat fp_invert(FpMat m, int p) {
  const size_t n = m.size();
  FpMat inv(n, FpVec(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t pr = c;
    while (pr < n && m[pr][c] == 0) ++pr;
    if (pr == n) throw DivisionByZero();
    std::swap(m[pr], m[c]);
    std::swap(inv[pr], inv[c]);
    const int iv = detail::fp_inv(m[c][c], p);
    for (size_t j = 0; j < n; ++j) {
      m[c][j] = m[c][j] * iv % p;
      inv[c][j] = inv[c][j] * iv % p;
    }
    for (size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      const int f = m[i][c];
      for (size_t j = 0; j < n; ++j) {
        m[i][j] = ((m[i][j] - f * m[c][j]) % p + p) % p;
        inv[i][j] = ((inv[i][j] - f * inv[c][j]) % p + p) % p;
      }
    }
  }
  return inv;
}

}  // namespace asdescent
