#ifndef VOCIC_CANONICAL_HPP
#define VOCIC_CANONICAL_HPP

#include <string>
#include <vector>

#include "vocic/hall.hpp"

namespace vocic {

// The distinguished element attached to an irreducible component is built
// from words in divided powers of the Chevalley generators.  Two kinds of
// pieces occur: plain stretches between marked vertices, and a corrected
// sum at each marked vertex (a vertex where the complex has homology).

// For p from j-1 down to i, the pair E_p^(r_p) E_(p+1)^(r_p).  Empty when
// j <= i or when every r_p in the range vanishes.
inline generator_word stretch_word(const complex_type& c, int i, int j) {
  generator_word w;
  w.n = c.rank();
  for (int p = j - 1; p >= i; --p) {
    int rp = c.r_at(p);
    if (rp > 0) {
      w.factors.push_back({p, p, rp, false});
      w.factors.push_back({p + 1, p + 1, rp, false});
    }
  }
  return w;
}

// The summands of the corrected word at a marked vertex i, one per choice
// of u in [0, r_i]; the scalar carries the signed binomial weight.
// Factors at vertex 0 or n+1 and factors with zero exponent are omitted.
inline std::vector<generator_word> marked_words(const complex_type& c, int i) {
  int n = c.rank();
  if (i < 1 || i > n) fail(errkind::index_range, "vertex out of range");
  int hi = c.h[(size_t)(i - 1)];
  int ri = c.r_at(i), rprev = c.r_at(i - 1);
  std::vector<generator_word> out;
  for (int u = 0; u <= ri; ++u) {
    generator_word w;
    w.n = n;
    w.scalar = gauss_binomial(-hi, u);
    auto push = [&](int vertex, int exp) {
      if (vertex < 1 || vertex > n || exp <= 0) return;
      w.factors.push_back({vertex, vertex, exp, false});
    };
    push(i, ri - u);
    push(i + 1, ri);
    push(i - 1, rprev);
    push(i, hi + rprev + u);
    out.push_back(std::move(w));
  }
  return out;
}

// Every word of the component element: the product, read left to right,
// of a stretch above the top marked vertex, the corrected sum at each
// marked vertex going down, and the stretches in between.  The sums are
// expanded into one word per choice tuple.
inline std::vector<generator_word> component_words(const complex_type& c) {
  if (!is_sparse(omega(c)))
    fail(errkind::not_a_component,
         "marked vertices are not sparse; this orbit closure is not a component");
  int n = c.rank();
  std::vector<int> om = omega(c);
  std::vector<std::vector<generator_word>> parts;
  if (om.empty()) {
    parts.push_back({stretch_word(c, 1, n)});
  } else {
    int s = (int)om.size();
    for (int t = s - 1; t >= 0; --t) {
      int lo = om[(size_t)t] + 1;
      int hi = (t == s - 1) ? n : om[(size_t)t + 1] - 1;
      parts.push_back({stretch_word(c, lo, hi)});
      parts.push_back(marked_words(c, om[(size_t)t]));
    }
    parts.push_back({stretch_word(c, 1, om[0] - 1)});
  }

  std::vector<generator_word> words;
  std::vector<size_t> pick(parts.size(), 0);
  while (true) {
    generator_word w;
    w.n = n;
    for (size_t t = 0; t < parts.size(); ++t) {
      const generator_word& piece = parts[t][pick[t]];
      w.scalar = w.scalar * piece.scalar;
      for (const auto& f : piece.factors) w.factors.push_back(f);
    }
    words.push_back(std::move(w));
    size_t t = 0;
    for (; t < parts.size(); ++t) {
      if (++pick[t] < parts[t].size()) break;
      pick[t] = 0;
    }
    if (t == parts.size()) break;
  }
  return words;
}

inline hall_element stretch_element(hall_context& ctx, const complex_type& c,
                                    int i, int j) {
  return ctx.evaluate_word(stretch_word(c, i, j));
}

inline hall_element marked_element(hall_context& ctx, const complex_type& c, int i) {
  hall_element out(c.rank());
  for (const auto& w : marked_words(c, i)) out += ctx.evaluate_word(w);
  return out;
}

inline hall_element component_element(hall_context& ctx, const complex_type& c) {
  if (ctx.rank() != c.rank()) fail(errkind::rank_mismatch, "context of wrong rank");
  hall_element out(c.rank());
  for (const auto& w : component_words(c)) out += ctx.evaluate_word(w);
  return out;
}

// Closed form for the coefficient of the orbit deformed by the shift k in
// the component element.  Never zero: every summand has coefficients of
// one sign.
inline laurent component_coefficient(const complex_type& c, const dimvec& k) {
  int n = c.rank();
  if ((int)k.size() != n - 1)
    fail(errkind::rank_mismatch, "shift vector of wrong length");
  for (int i = 1; i < n; ++i)
    if (k[(size_t)(i - 1)] < 0 || k[(size_t)(i - 1)] > c.r_at(i))
      fail(errkind::infeasible, "shift exceeds the orbit parameters");
  if (!is_sparse(omega(c)))
    fail(errkind::not_a_component,
         "marked vertices are not sparse; this orbit closure is not a component");

  auto k_at = [&](int i) -> long {
    if (i <= 0 || i >= n) return 0;
    return k[(size_t)(i - 1)];
  };
  std::vector<char> marked((size_t)n + 1, 0);
  std::vector<int> om = omega(c);
  for (int i : om) marked[(size_t)i] = 1;

  long e0 = 0;
  for (int i = 1; i < n; ++i) e0 -= k_at(i) * k_at(i);
  laurent fixed(1);
  for (int i = 1; i <= n; ++i) {
    long hi = c.h[(size_t)(i - 1)];
    if (marked[(size_t)i]) {
      e0 -= k_at(i - 1) * k_at(i);
      e0 -= hi * (k_at(i - 1) + k_at(i));
    } else {
      fixed = fixed * gauss_binomial(k_at(i - 1) + k_at(i), k_at(i));
    }
  }

  std::vector<long> tmax(om.size()), t(om.size(), 0);
  for (size_t s = 0; s < om.size(); ++s)
    tmax[s] = std::min(k_at(om[s] - 1), k_at(om[s]));

  laurent acc;
  while (true) {
    long e = e0;
    laurent term = fixed;
    for (size_t s = 0; s < om.size(); ++s) {
      int i = om[s];
      long hi = c.h[(size_t)(i - 1)];
      e += (2 * hi + k_at(i - 1) + k_at(i)) * t[s];
      term = term * gauss_binomial(k_at(i), k_at(i) - t[s]) *
             gauss_binomial(k_at(i - 1), t[s]);
    }
    acc += term * laurent::v_power(e);
    size_t s = 0;
    for (; s < om.size(); ++s) {
      if (++t[s] <= tmax[s]) break;
      t[s] = 0;
    }
    if (s == om.size()) break;
  }
  return acc;
}

// Coefficient of every orbit in the closure, keyed by the shift.
inline std::map<dimvec, laurent> component_coefficients(const complex_type& c) {
  std::map<dimvec, laurent> out;
  for (const auto& k : enumerate_shifts(c.r)) out[k] = component_coefficient(c, k);
  return out;
}

struct component_check {
  bool support_ok = true;
  bool coeffs_ok = true;
  bool lattice_ok = true;
  bool bar_ok = true;
  std::vector<std::string> details;
  bool ok() const { return support_ok && coeffs_ok && lattice_ok && bar_ok; }
};

// Compares a candidate element against the closed form orbit by orbit,
// then recomputes its image under the bar involution from scratch through
// the monomial basis.
inline component_check check_component_element(hall_context& ctx,
                                               const complex_type& c,
                                               const hall_element& candidate) {
  component_check rep;
  if (ctx.rank() != c.rank()) fail(errkind::rank_mismatch, "context of wrong rank");

  std::map<multisegment, laurent> expected;
  std::map<multisegment, bool> leading;
  for (const auto& k : enumerate_shifts(c.r)) {
    multisegment m = complex_to_multisegment(deform(c, k));
    expected.emplace(m, component_coefficient(c, k));
    bool zero_shift = true;
    for (int x : k)
      if (x != 0) zero_shift = false;
    leading.emplace(m, zero_shift);
  }

  for (const auto& [m, z] : expected) {
    laurent got = candidate.coeff(m);
    if (got.is_zero()) {
      rep.support_ok = false;
      rep.details.push_back("missing orbit class " + m.str());
    }
    if (!(got == z)) {
      rep.coeffs_ok = false;
      rep.details.push_back("coefficient of " + m.str() + " is " + got.str() +
                            ", closed form gives " + z.str());
    }
    if (!leading.at(m) && !got.in_v_inverse_lattice()) {
      rep.lattice_ok = false;
      rep.details.push_back("coefficient of " + m.str() +
                            " is not in the strictly negative lattice");
    }
  }
  for (const auto& [m, coeff] : candidate.terms()) {
    if (!expected.count(m)) {
      rep.support_ok = false;
      rep.details.push_back("unexpected class " + m.str() + " in the support");
    }
  }

  // bar image through the monomial basis: each class is the exact value of
  // its monomial, so the barred monomial word gives the barred class
  hall_element barred(ctx.rank());
  for (const auto& [m, coeff] : candidate.terms()) {
    generator_word w = ctx.pbw_monomial(m);
    if (!(ctx.evaluate_word(w) == hall_element::basis(m)))
      fail(errkind::order_convention,
           "monomial of " + m.str() + " does not evaluate to its class");
    barred += ctx.evaluate_word(hall_context::bar_word(w)).scaled(coeff.bar());
  }
  if (!(barred == candidate)) {
    rep.bar_ok = false;
    rep.details.push_back("element moves under the bar involution");
  }
  return rep;
}

inline component_check check_component_element(hall_context& ctx,
                                               const complex_type& c) {
  return check_component_element(ctx, c, component_element(ctx, c));
}

}  // namespace vocic

#endif
