#ifndef VOCIC_REPQUIVER_HPP
#define VOCIC_REPQUIVER_HPP

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "vocic/fp_linalg.hpp"
#include "vocic/multisegment.hpp"

namespace vocic {

// Euler form of the equioriented A_n quiver 1 -> 2 -> ... -> n.
inline long euler_form(const dimvec& d, const dimvec& e) {
  if (d.size() != e.size()) fail(errkind::rank_mismatch, "euler form needs equal ranks");
  long s = 0;
  size_t n = d.size();
  for (size_t i = 0; i < n; ++i) s += (long)d[i] * e[i];
  for (size_t i = 0; i + 1 < n; ++i) s -= (long)d[i] * e[i + 1];
  return s;
}

// A representation given by explicit matrices over F_p: maps[i] is the
// matrix of f_{i+1}: V_{i+1} -> V_{i+2} with shape dims[i+1] x dims[i]
// (columns indexed by the source).
struct matrix_rep {
  uint32_t p = 2;
  dimvec dims;
  std::vector<fpmat> maps;
};

// Normal form of a multisegment: one basis chain per segment copy, ordered
// by segment (lexicographic) then copy index.  Entries are 0/1, so the
// same matrices serve over any prime and over the integers.
inline matrix_rep normal_form(const multisegment& m, uint32_t p) {
  int n = m.rank();
  matrix_rep rep;
  rep.p = p;
  rep.dims.assign((size_t)n, 0);
  // basis[v] lists (segment start, segment end, copy) present at vertex v+1
  std::vector<std::vector<std::array<int, 3>>> basis((size_t)n);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j)
      for (int c = 0; c < m.mult(i, j); ++c)
        for (int t = i; t <= j; ++t) basis[(size_t)(t - 1)].push_back({i, j, c});
  for (int v = 0; v < n; ++v) rep.dims[(size_t)v] = (int)basis[(size_t)v].size();
  for (int v = 0; v + 1 < n; ++v) {
    fpmat f(rep.dims[(size_t)(v + 1)], rep.dims[(size_t)v]);
    for (int col = 0; col < rep.dims[(size_t)v]; ++col) {
      auto key = basis[(size_t)v][(size_t)col];
      if (key[1] >= v + 2) {
        auto& next = basis[(size_t)(v + 1)];
        int row = (int)(std::find(next.begin(), next.end(), key) - next.begin());
        f.at(row, col) = 1;
      }
    }
    rep.maps.push_back(std::move(f));
  }
  return rep;
}

// Recovers the isomorphism class from rank data: with rk(i,j) the rank of
// the composite V_i -> V_j (and rk(i,i) = dim V_i, out of range ranks 0),
// the multiplicity of [i..j] is
//   rk(i,j) - rk(i-1,j) - rk(i,j+1) + rk(i-1,j+1).
inline multisegment multisegment_from_matrices(const matrix_rep& rep) {
  int n = (int)rep.dims.size();
  if (n < 1) fail(errkind::index_range, "empty representation");
  std::vector<std::vector<int>> rk((size_t)(n + 1), std::vector<int>((size_t)(n + 1), 0));
  for (int i = 1; i <= n; ++i) {
    rk[(size_t)i][(size_t)i] = rep.dims[(size_t)(i - 1)];
    fpmat acc;
    for (int j = i + 1; j <= n; ++j) {
      const fpmat& step = rep.maps[(size_t)(j - 2)];
      acc = (j == i + 1) ? step : mul_fp(step, acc, rep.p);
      rk[(size_t)i][(size_t)j] = rank_fp(acc, rep.p);
    }
  }
  auto rkat = [&](int i, int j) -> int {
    if (i < 1 || j > n) return 0;
    return rk[(size_t)i][(size_t)j];
  };
  multisegment out(n);
  for (int i = 1; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      int mult = rkat(i, j) - rkat(i - 1, j) - rkat(i, j + 1) + rkat(i - 1, j + 1);
      if (mult < 0) fail(errkind::internal, "negative multiplicity from rank data");
      out.set_mult(i, j, mult);
    }
  return out;
}

// Linear system cutting out Hom(M, N): unknowns are the entries of the
// vertex maps phi_i (shape dimN_i x dimM_i), equations say
//   phi_{i+1} f_i^M = f_i^N phi_i.
// Coefficients are in {-1, 0, 1}.
struct intertwiner_system {
  int vars = 0;
  std::vector<int> offset;      // first variable of phi_i
  dimvec dm, dn;                // vertex dimensions of M and N
  std::vector<std::vector<int>> rows;
  int var_index(int i, int r, int c) const {
    return offset[(size_t)i] + r * dm[(size_t)i] + c;
  }
};

inline intertwiner_system build_intertwiner_system(const multisegment& M,
                                                   const multisegment& N) {
  if (M.rank() != N.rank()) fail(errkind::rank_mismatch, "hom of different ranks");
  int n = M.rank();
  matrix_rep rm = normal_form(M, 2), rn = normal_form(N, 2);
  intertwiner_system sys;
  sys.dm = rm.dims;
  sys.dn = rn.dims;
  sys.offset.assign((size_t)n, 0);
  for (int i = 0; i < n; ++i) {
    sys.offset[(size_t)i] = sys.vars;
    sys.vars += rm.dims[(size_t)i] * rn.dims[(size_t)i];
  }
  for (int i = 0; i + 1 < n; ++i) {
    int dm = rm.dims[(size_t)i], dm1 = rm.dims[(size_t)(i + 1)];
    int dn = rn.dims[(size_t)i], dn1 = rn.dims[(size_t)(i + 1)];
    for (int r = 0; r < dn1; ++r)
      for (int c = 0; c < dm; ++c) {
        std::vector<int> row((size_t)sys.vars, 0);
        bool nonzero = false;
        for (int k = 0; k < dm1; ++k)
          if (rm.maps[(size_t)i].at(k, c)) {
            row[(size_t)sys.var_index(i + 1, r, k)] += 1;
            nonzero = true;
          }
        for (int k = 0; k < dn; ++k)
          if (rn.maps[(size_t)i].at(r, k)) {
            row[(size_t)sys.var_index(i, k, c)] -= 1;
            nonzero = true;
          }
        if (nonzero) sys.rows.push_back(std::move(row));
      }
  }
  return sys;
}

// dim Hom(M, N) as the corank of the intertwiner system over the rationals.
inline int hom_dim(const multisegment& M, const multisegment& N) {
  intertwiner_system sys = build_intertwiner_system(M, N);
  if (sys.vars == 0) return 0;
  std::vector<std::vector<mpq_class>> rows;
  rows.reserve(sys.rows.size());
  for (const auto& r : sys.rows) {
    std::vector<mpq_class> q(r.size());
    for (size_t i = 0; i < r.size(); ++i) q[i] = r[i];
    rows.push_back(std::move(q));
  }
  return sys.vars - rank_exact(std::move(rows));
}

// Complex type: dimension vector d, middle ranks r (length n-1), corank
// vector h_i = d_i - r_{i-1} - r_i with the boundary ranks fixed at 0.
struct complex_type {
  dimvec d;
  std::vector<int> r;
  std::vector<int> h;

  int rank() const { return (int)d.size(); }
  int r_at(int i) const {  // r_0 = r_n = 0
    if (i <= 0 || i >= rank()) return 0;
    return r[(size_t)(i - 1)];
  }
  int h_at(int i) const { return h[(size_t)(i - 1)]; }
};

inline complex_type make_complex(const dimvec& d, const std::vector<int>& r) {
  int n = (int)d.size();
  if (n < 1) fail(errkind::index_range, "rank must be at least 1");
  if ((int)r.size() != n - 1)
    fail(errkind::rank_mismatch, "rank vector must have length n-1");
  complex_type c;
  c.d = d;
  c.r = r;
  c.h.assign((size_t)n, 0);
  for (int i = 1; i <= n; ++i) {
    if (i < n && r[(size_t)(i - 1)] < 0) fail(errkind::infeasible, "negative rank");
    int h = d[(size_t)(i - 1)] - c.r_at(i - 1) - c.r_at(i);
    if (h < 0)
      fail(errkind::infeasible,
           "rank vector infeasible at vertex " + std::to_string(i));
    c.h[(size_t)(i - 1)] = h;
  }
  return c;
}

// The attached module: one length two interval per unit of r_i plus simples
// for the coranks.
inline multisegment complex_to_multisegment(const complex_type& c) {
  int n = c.rank();
  multisegment m(n);
  for (int i = 1; i <= n; ++i) m.set_mult(i, i, c.h_at(i));
  for (int i = 1; i < n; ++i) m.set_mult(i, i + 1, c.r_at(i));
  return m;
}

inline std::vector<int> omega(const complex_type& c) {
  std::vector<int> out;
  for (int i = 1; i <= c.rank(); ++i)
    if (c.h_at(i) != 0) out.push_back(i);
  return out;
}

inline bool is_sparse(const std::vector<int>& om) {
  for (size_t t = 0; t + 1 < om.size(); ++t)
    if (om[t + 1] == om[t] + 1) return false;
  return true;
}

// (h with a shift of k folded in)_i = h_i + k_{i-1} + k_i
inline std::vector<int> dotplus(const std::vector<int>& h, const std::vector<int>& k) {
  size_t n = h.size();
  if (k.size() + 1 != n) fail(errkind::rank_mismatch, "shift vector must have length n-1");
  auto kat = [&](size_t i) -> int { return (i >= 1 && i < n) ? k[i - 1] : 0; };
  std::vector<int> out(n);
  for (size_t i = 1; i <= n; ++i)
    out[i - 1] = h[i - 1] + kat(i - 1) + kat(i);
  return out;
}

// Degeneration of a complex type along k <= r: ranks drop to r - k, the
// dimension vector is unchanged.
inline complex_type deform(const complex_type& c, const std::vector<int>& k) {
  int n = c.rank();
  if ((int)k.size() != n - 1)
    fail(errkind::rank_mismatch, "shift vector must have length n-1");
  std::vector<int> r2((size_t)(n - 1));
  for (int i = 0; i < n - 1; ++i) {
    if (k[(size_t)i] < 0 || k[(size_t)i] > c.r[(size_t)i])
      fail(errkind::infeasible, "shift exceeds rank at position " + std::to_string(i + 1));
    r2[(size_t)i] = c.r[(size_t)i] - k[(size_t)i];
  }
  return make_complex(c.d, r2);
}

// dim End of the attached module, in closed form.
inline long mm_dim(const complex_type& c) {
  long s = 0;
  for (int i = 1; i <= c.rank(); ++i) {
    long h = c.h_at(i), ri = c.r_at(i), rp = c.r_at(i - 1);
    s += h * h + h * ri + ri * ri + h * rp + rp * ri;
  }
  return s;
}

// Codimension of the orbit attached to (r - k, h + shifts) inside the
// closure of the orbit of (r, h), in closed form.
inline long codim_shift(const complex_type& c, const std::vector<int>& k) {
  int n = c.rank();
  if ((int)k.size() != n - 1)
    fail(errkind::rank_mismatch, "shift vector must have length n-1");
  auto kat = [&](int i) -> long {
    return (i >= 1 && i < n) ? k[(size_t)(i - 1)] : 0;
  };
  long s = 0;
  for (int i = 1; i <= n; ++i) {
    long h = c.h_at(i), ki = kat(i), kp = kat(i - 1);
    s += h * ki + h * kp + ki * ki + kp * ki;
  }
  return s;
}

// All feasible rank vectors for d, lexicographically descending in r.
inline std::vector<complex_type> enumerate_orbits(const dimvec& d) {
  int n = (int)d.size();
  if (n < 1) fail(errkind::index_range, "rank must be at least 1");
  for (int x : d)
    if (x < 0) fail(errkind::infeasible, "negative dimension");
  std::vector<complex_type> out;
  std::vector<int> r((size_t)std::max(0, n - 1), 0);
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n) {
      out.push_back(make_complex(d, r));
      return;
    }
    int prev = (i >= 2) ? r[(size_t)(i - 2)] : 0;
    int hi = std::min(d[(size_t)(i - 1)] - prev, d[(size_t)i]);
    for (int v = hi; v >= 0; --v) {
      r[(size_t)(i - 1)] = v;
      self(self, i + 1);
    }
    r[(size_t)(i - 1)] = 0;
  };
  rec(rec, 1);
  return out;
}

// Irreducible components: the feasible rank vectors whose corank support
// has no two adjacent vertices.
inline std::vector<complex_type> enumerate_components(const dimvec& d) {
  std::vector<complex_type> out;
  for (const auto& c : enumerate_orbits(d))
    if (is_sparse(omega(c))) out.push_back(c);
  return out;
}

// Closure order: the orbit of a lies in the closure of the orbit of b
// exactly when a.r <= b.r componentwise.
inline bool closure_leq(const complex_type& a, const complex_type& b) {
  if (a.d != b.d) fail(errkind::rank_mismatch, "closure order needs equal dimension vectors");
  for (size_t i = 0; i < a.r.size(); ++i)
    if (a.r[i] > b.r[i]) return false;
  return true;
}

// All shift vectors 0 <= k <= r, ascending lexicographically.
inline std::vector<std::vector<int>> enumerate_shifts(const std::vector<int>& r) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(r.size(), 0);
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == r.size()) {
      out.push_back(k);
      return;
    }
    for (int v = 0; v <= r[i]; ++v) {
      k[i] = v;
      self(self, i + 1);
    }
    k[i] = 0;
  };
  rec(rec, 0);
  return out;
}

}  // namespace vocic

#endif
