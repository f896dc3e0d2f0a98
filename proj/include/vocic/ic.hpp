#pragma once

#include <string>
#include <vector>

#include "vocic/canonical.hpp"
#include "vocic/errors.hpp"
#include "vocic/laurent.hpp"
#include "vocic/repquiver.hpp"

namespace vocic {

namespace detail {

inline qpoly q_power(long e) {
  std::vector<mpz_class> cs((size_t)e + 1, mpz_class(0));
  cs.back() = 1;
  return qpoly(std::move(cs));
}

}  // namespace detail

// Local Poincaré polynomial of the intersection complex on the closure of
// the orbit of c, evaluated at a point of the smaller orbit deform(c, k):
//
//   sum over (t_i)_{i in Omega}, 0 <= t_i <= min(k_{i-1}, k_i), of
//     q^{sum_{i in Omega} (h_i + t_i) t_i}
//     * prod_{i in Omega} (k_i over k_i - t_i)_q (k_{i-1} over t_i)_q
//     * prod_{i not in Omega} (k_{i-1} + k_i over k_i)_q
//
// with k_0 = k_n = 0 and (a over b)_q the q-binomial normalized to constant
// term 1.  Odd local cohomology vanishes, so the polynomial in q = v^2
// carries the full stalk.
inline qpoly stalk_poincare(const complex_type& c, const std::vector<int>& k) {
  int n = c.rank();
  if ((int)k.size() != n - 1)
    fail(errkind::rank_mismatch, "shift vector must have length n-1");
  for (int i = 0; i < n - 1; ++i)
    if (k[(size_t)i] < 0 || k[(size_t)i] > c.r[(size_t)i])
      fail(errkind::infeasible, "shift exceeds rank at position " + std::to_string(i + 1));
  std::vector<int> om = omega(c);
  if (!is_sparse(om))
    fail(errkind::not_a_component,
         "marked vertices are not sparse; this orbit closure is not a component");
  auto kat = [&](int i) -> long {
    return (i >= 1 && i < n) ? k[(size_t)(i - 1)] : 0;
  };
  std::vector<char> marked((size_t)n + 1, 0);
  for (int i : om) marked[(size_t)i] = 1;

  qpoly fixed(1);
  for (int i = 1; i <= n; ++i)
    if (!marked[(size_t)i]) fixed *= normalized_binomial(kat(i - 1) + kat(i), kat(i));

  qpoly acc;
  std::vector<long> t(om.size(), 0);
  while (true) {
    long e = 0;
    qpoly term = fixed;
    for (size_t s = 0; s < om.size(); ++s) {
      int i = om[s];
      e += (c.h_at(i) + t[s]) * t[s];
      term *= normalized_binomial(kat(i), kat(i) - t[s]);
      term *= normalized_binomial(kat(i - 1), t[s]);
    }
    acc += term * detail::q_power(e);
    size_t s = 0;
    while (s < om.size()) {
      int i = om[s];
      if (t[s] < std::min(kat(i - 1), kat(i))) {
        ++t[s];
        break;
      }
      t[s] = 0;
      ++s;
    }
    if (s == om.size()) break;
  }
  return acc;
}

// The same polynomial reached through the Hall-algebra side: the expansion
// coefficient of the component element at the deformed orbit, multiplied by
// v^codim.  The result must be a polynomial in q = v^2; an odd or negative
// exponent would mean the codimension shift and the closed-form coefficient
// disagree, which is an internal contradiction rather than a user error.
inline qpoly ic_from_zeta(const complex_type& c, const std::vector<int>& k) {
  laurent z = component_coefficient(c, k);
  laurent shifted = z.shifted(codim_shift(c, k));
  return qpoly::from_even_laurent(shifted, errkind::odd_power, errkind::negative_power);
}

// True when the stalk degree stays below half the codimension, the defining
// support bound for intersection complexes on orbits below the dense one.
inline bool support_condition_check(const complex_type& c, const std::vector<int>& k) {
  return 2 * stalk_poincare(c, k).degree() < codim_shift(c, k);
}

struct stalk_row {
  std::vector<int> k;
  complex_type orbit;
  qpoly poincare;
  long codim = 0;
};

struct stalk_table {
  complex_type component;
  std::vector<stalk_row> rows;  // shifts 0 <= k <= r, ascending lexicographically
};

inline stalk_table build_stalk_table(const complex_type& c) {
  if (!is_sparse(omega(c)))
    fail(errkind::not_a_component,
         "marked vertices are not sparse; this orbit closure is not a component");
  stalk_table table;
  table.component = c;
  for (const auto& k : enumerate_shifts(c.r))
    table.rows.push_back(stalk_row{k, deform(c, k), stalk_poincare(c, k), codim_shift(c, k)});
  return table;
}

// One table per irreducible component of the variety of complexes with
// dimension vector d.
inline std::vector<stalk_table> component_report(const dimvec& d) {
  std::vector<stalk_table> out;
  for (const auto& c : enumerate_components(d)) out.push_back(build_stalk_table(c));
  return out;
}

}  // namespace vocic
