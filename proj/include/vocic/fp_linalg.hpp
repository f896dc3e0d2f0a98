#ifndef VOCIC_FP_LINALG_HPP
#define VOCIC_FP_LINALG_HPP

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "vocic/errors.hpp"

namespace vocic {

// Dense matrix over F_p (or over the integers when entries stay small);
// the modulus travels with the operations, not with the matrix.
struct fpmat {
  int rows = 0, cols = 0;
  std::vector<uint32_t> a;

  fpmat() = default;
  fpmat(int r, int c) : rows(r), cols(c), a((size_t)r * (size_t)c, 0) {}

  uint32_t& at(int r, int c) { return a[(size_t)r * (size_t)cols + (size_t)c]; }
  uint32_t at(int r, int c) const { return a[(size_t)r * (size_t)cols + (size_t)c]; }

  bool operator==(const fpmat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline uint32_t inv_mod(uint32_t x, uint32_t p) {
  // p is prime and x != 0 mod p
  long long t = 0, nt = 1, r = p, nr = x % p;
  while (nr != 0) {
    long long q = r / nr;
    long long tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (t < 0) t += p;
  return (uint32_t)t;
}

inline fpmat mul_fp(const fpmat& x, const fpmat& y, uint32_t p) {
  if (x.cols != y.rows) fail(errkind::internal, "matrix shape mismatch");
  fpmat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      uint64_t xv = x.at(i, k);
      if (xv == 0) continue;
      for (int j = 0; j < y.cols; ++j) {
        uint64_t acc = r.at(i, j) + xv * y.at(k, j) % p;
        r.at(i, j) = (uint32_t)(acc % p);
      }
    }
  return r;
}

// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref_fp(fpmat& m, uint32_t p) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols && row < m.rows; ++col) {
    int sel = -1;
    for (int r = row; r < m.rows; ++r)
      if (m.at(r, col) % p != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < m.cols; ++c) std::swap(m.at(sel, c), m.at(row, c));
    uint64_t inv = inv_mod(m.at(row, col) % p, p);
    for (int c = 0; c < m.cols; ++c)
      m.at(row, c) = (uint32_t)(m.at(row, c) * inv % p);
    for (int r = 0; r < m.rows; ++r) {
      if (r == row) continue;
      uint64_t f = m.at(r, col) % p;
      if (f == 0) continue;
      for (int c = 0; c < m.cols; ++c) {
        uint64_t v = m.at(r, c) + (p - (uint32_t)(f * m.at(row, c) % p));
        m.at(r, c) = (uint32_t)(v % p);
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline int rank_fp(fpmat m, uint32_t p) { return (int)rref_fp(m, p).size(); }

// Exact rank over the rationals.
inline int rank_exact(std::vector<std::vector<mpq_class>> m) {
  if (m.empty()) return 0;
  int rows = (int)m.size(), cols = (int)m[0].size();
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int sel = -1;
    for (int r = rank; r < rows; ++r)
      if (m[(size_t)r][(size_t)col] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(m[(size_t)sel], m[(size_t)rank]);
    mpq_class inv = 1 / m[(size_t)rank][(size_t)col];
    for (int c = col; c < cols; ++c) m[(size_t)rank][(size_t)c] *= inv;
    for (int r = rank + 1; r < rows; ++r) {
      mpq_class f = m[(size_t)r][(size_t)col];
      if (f == 0) continue;
      for (int c = col; c < cols; ++c)
        m[(size_t)r][(size_t)c] -= f * m[(size_t)rank][(size_t)c];
    }
    ++rank;
  }
  return rank;
}

// Basis of the right kernel of m over F_p, one vector per non-pivot
// column, in ascending column order.
inline std::vector<std::vector<uint32_t>> kernel_basis_fp(fpmat m, uint32_t p) {
  int cols = m.cols;
  std::vector<int> pivots = rref_fp(m, p);
  std::vector<int> pivot_of_col((size_t)cols, -1);
  for (size_t r = 0; r < pivots.size(); ++r) pivot_of_col[(size_t)pivots[r]] = (int)r;
  std::vector<std::vector<uint32_t>> basis;
  for (int c = 0; c < cols; ++c) {
    if (pivot_of_col[(size_t)c] >= 0) continue;
    std::vector<uint32_t> v((size_t)cols, 0);
    v[(size_t)c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) {
      uint32_t coef = m.at((int)r, c) % p;
      if (coef) v[(size_t)pivots[r]] = p - coef;
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

// Visits the reduced echelon basis of every e-dimensional subspace of
// F_p^d exactly once, in a fixed order: pivot column sets in lexicographic
// order, free entries cycled like an odometer.
template <class F>
inline void for_each_subspace(int d, int e, uint32_t p, F&& visit) {
  if (e < 0 || e > d) return;
  if (e == 0) {
    fpmat m(0, d);
    visit(m);
    return;
  }
  std::vector<int> piv((size_t)e);
  for (int t = 0; t < e; ++t) piv[(size_t)t] = t;
  while (true) {
    std::vector<char> is_piv((size_t)d, 0);
    for (int t = 0; t < e; ++t) is_piv[(size_t)piv[(size_t)t]] = 1;
    std::vector<std::pair<int, int>> free_pos;
    for (int t = 0; t < e; ++t)
      for (int c = piv[(size_t)t] + 1; c < d; ++c)
        if (!is_piv[(size_t)c]) free_pos.emplace_back(t, c);

    fpmat m(e, d);
    for (int t = 0; t < e; ++t) m.at(t, piv[(size_t)t]) = 1;
    while (true) {
      visit(m);
      size_t k = 0;
      for (; k < free_pos.size(); ++k) {
        auto [t, c] = free_pos[k];
        uint32_t v = m.at(t, c) + 1;
        if (v < p) {
          m.at(t, c) = v;
          break;
        }
        m.at(t, c) = 0;
      }
      if (k == free_pos.size()) break;
    }

    // next pivot combination in lexicographic order
    int t = e - 1;
    while (t >= 0 && piv[(size_t)t] == d - e + t) --t;
    if (t < 0) break;
    ++piv[(size_t)t];
    for (int s = t + 1; s < e; ++s) piv[(size_t)s] = piv[(size_t)s - 1] + 1;
  }
}

// Visits every e-dimensional subspace of F_p^d containing the row space of
// W (given in reduced echelon form).  Subspaces over W correspond to
// subspaces of the quotient, read off through the non-pivot coordinates.
template <class F>
inline void for_each_subspace_over(const fpmat& W, int e, uint32_t p, F&& visit) {
  int d = W.cols, w = W.rows;
  if (e < w || e > d) return;
  std::vector<char> is_piv((size_t)d, 0);
  for (int t = 0; t < w; ++t) {
    int c = 0;
    while (c < d && W.at(t, c) == 0) ++c;
    if (c == d) fail(errkind::internal, "zero row in echelon basis");
    is_piv[(size_t)c] = 1;
  }
  std::vector<int> compl_cols;
  for (int c = 0; c < d; ++c)
    if (!is_piv[(size_t)c]) compl_cols.push_back(c);

  for_each_subspace((int)compl_cols.size(), e - w, p, [&](const fpmat& q) {
    fpmat m(w + q.rows, d);
    for (int t = 0; t < w; ++t)
      for (int c = 0; c < d; ++c) m.at(t, c) = W.at(t, c);
    for (int t = 0; t < q.rows; ++t)
      for (int c = 0; c < q.cols; ++c) m.at(w + t, compl_cols[(size_t)c]) = q.at(t, c);
    rref_fp(m, p);
    visit(m);
  });
}

}  // namespace vocic

#endif
