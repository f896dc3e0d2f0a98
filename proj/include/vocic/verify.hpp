#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vocic/canonical.hpp"
#include "vocic/hall.hpp"
#include "vocic/ic.hpp"

namespace vocic {

struct verify_options {
  int max_total_dim = 6;  // ceiling on the total dimension of the oracle grids
  hall_options hall;
};

struct suite_result {
  std::string name;
  long checks = 0;
  std::vector<std::string> failures;
};

struct verify_report {
  int max_total_dim = 6;
  std::vector<suite_result> suites;

  long failures_total() const {
    long t = 0;
    for (const auto& s : suites) t += (long)s.failures.size();
    return t;
  }
  bool ok() const { return failures_total() == 0; }
};

namespace detail {

constexpr size_t max_recorded_failures = 40;

class suite_recorder {
 public:
  explicit suite_recorder(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::function<std::string()>& describe) {
    ++result_.checks;
    if (ok) return;
    if (result_.failures.size() < max_recorded_failures)
      result_.failures.push_back(describe());
    else if (result_.failures.size() == max_recorded_failures)
      result_.failures.push_back("further failures suppressed");
  }

  suite_result take() { return std::move(result_); }

 private:
  suite_result result_;
};

inline std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << ",";
    os << v[i];
  }
  return os.str();
}

inline std::string complex_str(const complex_type& c) {
  return "d=(" + join_ints(c.d) + ") r=(" + join_ints(c.r) + ")";
}

// Iterates v over the box [0, hi]^len (or [0, hi_i] with per-entry bounds),
// lexicographically ascending.
inline void for_each_box(std::vector<int>& v, const std::vector<int>& hi,
                         const std::function<void()>& body) {
  auto rec = [&](auto&& self, size_t i) -> void {
    if (i == v.size()) {
      body();
      return;
    }
    for (int x = 0; x <= hi[i]; ++x) {
      v[i] = x;
      self(self, i + 1);
    }
    v[i] = 0;
  };
  rec(rec, 0);
}

inline void for_each_box(std::vector<int>& v, int hi, const std::function<void()>& body) {
  std::vector<int> his(v.size(), hi);
  for_each_box(v, his, body);
}

// Dimension vectors with nonzero first and last entries, ranks 1..max_rank
// and total dimension at most max_total, in rank-then-lexicographic order.
// Padding zeros at either end would only replay a smaller rank.
inline std::vector<dimvec> dimension_grid(int max_rank, int max_total) {
  std::vector<dimvec> out;
  for (int n = 1; n <= max_rank; ++n) {
    dimvec d((size_t)n, 0);
    auto rec = [&](auto&& self, int i, int used) -> void {
      if (i == n) {
        if (d[0] > 0 && d[(size_t)(n - 1)] > 0) out.push_back(d);
        return;
      }
      for (int v = 0; v + used <= max_total; ++v) {
        d[(size_t)i] = v;
        self(self, i + 1, used + v);
      }
      d[(size_t)i] = 0;
    };
    rec(rec, 0, 0);
  }
  return out;
}

inline suite_result run_binomial_suite() {
  suite_recorder rec("binomial-identities");

  // three-term rearrangement of a product of two Gaussian binomials
  for (long c1 = -4; c1 <= 4; ++c1)
    for (long c2 = -4; c2 <= 4; ++c2)
      for (long c3 = -4; c3 <= 4; ++c3)
        for (long t = 0; t <= 6; ++t) {
          laurent lhs, rhs;
          for (long t1 = 0; t1 <= t; ++t1)
            lhs += laurent::v_power((c2 - c3) * t1 - c1 * (t - t1)) *
                   gauss_binomial(c1, t1) * gauss_binomial(c2 + c3, t - t1);
          for (long t3 = 0; t3 <= t; ++t3)
            rhs += laurent::v_power((c2 - c1) * t3 - c3 * (t - t3)) *
                   gauss_binomial(c1 + c2, t - t3) * gauss_binomial(c3, t3);
          rec.check(lhs == rhs, [&] {
            return "three-term binomial identity at c=(" + std::to_string(c1) + "," +
                   std::to_string(c2) + "," + std::to_string(c3) + ") t=" + std::to_string(t);
          });
        }

  // negative top argument reduces to a positive one with a sign
  for (long a = 0; a <= 6; ++a)
    for (long m = 0; m <= 6; ++m) {
      laurent want = gauss_binomial(a + m - 1, m);
      if (m % 2) want = -want;
      rec.check(gauss_binomial(-a, m) == want, [&] {
        return "negative binomial law at a=" + std::to_string(a) + " m=" + std::to_string(m);
      });
    }

  // Pascal rule for the balanced binomial
  for (long a = -4; a <= 6; ++a)
    for (long m = 1; m <= 6; ++m) {
      laurent want = laurent::v_power(m) * gauss_binomial(a - 1, m) +
                     laurent::v_power(m - a) * gauss_binomial(a - 1, m - 1);
      rec.check(gauss_binomial(a, m) == want, [&] {
        return "Pascal rule at a=" + std::to_string(a) + " m=" + std::to_string(m);
      });
    }

  return rec.take();
}

inline suite_result run_dimension_suite() {
  suite_recorder rec("dimension-formulas");
  std::map<multisegment, long> hom_memo;
  auto end_dim = [&](const multisegment& m) -> long {
    auto it = hom_memo.find(m);
    if (it != hom_memo.end()) return it->second;
    long h = hom_dim(m, m);
    hom_memo.emplace(m, h);
    return h;
  };
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> r((size_t)std::max(0, n - 1), 0);
    std::vector<int> h((size_t)n, 0);
    for_each_box(r, 2, [&] {
      for_each_box(h, 2, [&] {
        complex_type c;
        c.r = r;
        c.h = h;
        c.d.assign((size_t)n, 0);
        for (int j = 1; j <= n; ++j)
          c.d[(size_t)(j - 1)] = c.r_at(j - 1) + c.r_at(j) + h[(size_t)(j - 1)];
        long base = end_dim(complex_to_multisegment(c));
        rec.check(mm_dim(c) == base, [&] {
          return "endomorphism dimension at " + complex_str(c) + " h=(" + join_ints(h) + ")";
        });
        for (const auto& k : enumerate_shifts(r)) {
          long down = end_dim(complex_to_multisegment(deform(c, k)));
          rec.check(codim_shift(c, k) == down - base, [&] {
            return "codimension at " + complex_str(c) + " h=(" + join_ints(h) + ") k=(" +
                   join_ints(k) + ")";
          });
        }
      });
    });
  }
  return rec.take();
}

inline suite_result run_stalk_suite(const verify_options& opt) {
  suite_recorder rec("stalk-tables");
  for (const dimvec& d : dimension_grid(5, opt.max_total_dim)) {
    for (const auto& c : enumerate_components(d)) {
      for (const auto& k : enumerate_shifts(c.r)) {
        qpoly stalk = stalk_poincare(c, k);
        laurent zeta = component_coefficient(c, k);
        rec.check(stalk == ic_from_zeta(c, k), [&] {
          return "stalk route mismatch at " + complex_str(c) + " k=(" + join_ints(k) + ")";
        });
        rec.check(stalk.coeff(0) == 1, [&] {
          return "stalk constant term at " + complex_str(c) + " k=(" + join_ints(k) + ")";
        });
        bool nonneg = true;
        for (const auto& x : stalk.coeffs()) nonneg = nonneg && x >= 0;
        rec.check(nonneg, [&] {
          return "negative stalk coefficient at " + complex_str(c) + " k=(" + join_ints(k) + ")";
        });
        bool zero_shift = std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
        if (zero_shift) {
          rec.check(zeta == laurent(1), [&] {
            return "unit coefficient at the dense orbit of " + complex_str(c);
          });
        } else {
          rec.check(support_condition_check(c, k), [&] {
            return "support bound at " + complex_str(c) + " k=(" + join_ints(k) + ")";
          });
          rec.check(zeta.in_v_inverse_lattice(), [&] {
            return "coefficient outside v^-1 lattice at " + complex_str(c) + " k=(" +
                   join_ints(k) + ")";
          });
        }
        if (d.size() == 2) {
          rec.check(stalk == qpoly(1), [&] {
            return "nontrivial rank-two stalk at " + complex_str(c) + " k=(" + join_ints(k) + ")";
          });
        }
      }
    }
  }
  return rec.take();
}

inline suite_result run_product_identity_suite(std::vector<std::unique_ptr<hall_context>>& ctxs) {
  suite_recorder rec("product-identities");

  // quantum Serre relations between all generator pairs up to rank four
  for (int n = 2; n <= 4; ++n) {
    hall_context& ctx = *ctxs[(size_t)(n - 1)];
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        hall_element ei = ctx.chevalley(i), ej = ctx.chevalley(j);
        if (std::abs(i - j) >= 2) {
          rec.check(ctx.multiply(ei, ej) == ctx.multiply(ej, ei), [&] {
            return "distant generators do not commute at n=" + std::to_string(n) + " (i,j)=(" +
                   std::to_string(i) + "," + std::to_string(j) + ")";
          });
        } else {
          hall_element lhs = ctx.multiply(ctx.multiply(ei, ei), ej);
          lhs -= ctx.multiply(ctx.multiply(ei, ej), ei)
                     .scaled(laurent::v_power(1) + laurent::v_power(-1));
          lhs += ctx.multiply(ctx.multiply(ej, ei), ei);
          rec.check(lhs.is_zero(), [&] {
            return "Serre relation fails at n=" + std::to_string(n) + " (i,j)=(" +
                   std::to_string(i) + "," + std::to_string(j) + ")";
          });
        }
      }
  }

  // divided-power exchange across one arrow
  hall_context& c2 = *ctxs[1];
  for (long m = 0; m <= 3; ++m)
    for (long n = m; n <= 3; ++n) {
      hall_element lhs = c2.multiply(c2.divided_power(c2.chevalley(1), m),
                                     c2.divided_power(c2.chevalley(2), n));
      hall_element rhs(2);
      for (long k = 0; k <= m; ++k) {
        hall_element term = c2.divided_power(c2.chevalley(2), n - m + k);
        term = c2.multiply(term, c2.divided_power(c2.root_element(1, 2), m - k));
        term = c2.multiply(term, c2.divided_power(c2.chevalley(1), k));
        rhs += term.scaled(laurent::v_power(-(n - m + k) * k));
      }
      rec.check(lhs == rhs, [&] {
        return "divided-power exchange fails at m=" + std::to_string(m) + " n=" +
               std::to_string(n);
      });
    }

  return rec.take();
}

inline suite_result run_hall_suite(std::vector<std::unique_ptr<hall_context>>& ctxs,
                                   const verify_options& opt) {
  suite_recorder rec("hall-structure");
  hall_context& c2 = *ctxs[1];
  multisegment s1 = multisegment::parse("[1..1]", 2);
  multisegment s2 = multisegment::parse("[2..2]", 2);
  multisegment s1s1 = multisegment::parse("[1..1]^2", 2);
  multisegment u12 = multisegment::parse("[1..2]", 2);

  rec.check(c2.hall_polynomial(s1, s1, s1s1) == qpoly(std::vector<mpz_class>{1, 1}),
            [&] { return "golden structure constant for a split square"; });
  rec.check(c2.hall_polynomial(s1, s2, u12) == qpoly(1),
            [&] { return "golden structure constant for the interval extension"; });
  rec.check(c2.hall_polynomial(s2, s1, u12) == qpoly(),
            [&] { return "vanishing structure constant for the wrong extension order"; });
  rec.check(c2.count_automorphisms(s1) == qpoly(std::vector<mpz_class>{-1, 1}),
            [&] { return "golden automorphism count of a simple"; });
  rec.check(c2.count_automorphisms(s1s1) == qpoly(std::vector<mpz_class>{0, 1, -1, -1, 1}),
            [&] { return "golden automorphism count of a split square"; });

  // Re-count every structure constant in the grid at the first prime the
  // interpolation never touched.  Enumeration work is capped; the skipped
  // cases are concentrated at one vertex and use the closed form anyway.
  for (const dimvec& d : dimension_grid(4, std::min(opt.max_total_dim, 5))) {
    hall_context& ctx = *ctxs[d.size() - 1];
    for (const auto& x : ctx.classes(d)) {
      std::vector<int> e(d.size(), 0);
      for_each_box(e, d, [&] {
        bool zero = std::all_of(e.begin(), e.end(), [](int v) { return v == 0; });
        if (zero || e == d) return;
        long deg_bound = 0;
        for (size_t i = 0; i < e.size(); ++i) deg_bound += (long)e[i] * (d[i] - e[i]);
        size_t idx = (size_t)deg_bound + 1 + (size_t)opt.hall.extra_primes;
        if (idx >= detail::primes.size()) return;
        uint32_t pstar = detail::primes[idx];
        long long work = 1;
        for (long i = 0; i < deg_bound && work <= 3000000; ++i) work *= pstar;
        if (work > 3000000) return;
        auto counts = hall_context::batch_count_matrices(normal_form(x, pstar), e);
        dimvec de(d.size());
        for (size_t i = 0; i < d.size(); ++i) de[i] = d[i] - e[i];
        for (const auto& sub : ctx.classes(e))
          for (const auto& quot : ctx.classes(de)) {
            qpoly f = ctx.hall_polynomial(quot, sub, x);
            auto it = counts.find(std::make_pair(sub, quot));
            long long fresh = it == counts.end() ? 0 : it->second;
            rec.check(f.evaluate(pstar) == (long)fresh, [&] {
              return "structure constant of " + x.str() + " with sub " + sub.str() +
                     " and quotient " + quot.str() + " at held-out prime " +
                     std::to_string(pstar);
            });
          }
      });
    }
  }
  return rec.take();
}

inline suite_result run_component_construction_suite(
    std::vector<std::unique_ptr<hall_context>>& ctxs, const verify_options& opt) {
  suite_recorder rec("component-construction");
  for (const dimvec& d : dimension_grid(4, opt.max_total_dim)) {
    hall_context& ctx = *ctxs[d.size() - 1];
    for (const auto& c : enumerate_components(d)) {
      component_check chk = check_component_element(ctx, c);
      rec.check(chk.support_ok,
                [&] { return "support of the component element at " + complex_str(c); });
      rec.check(chk.coeffs_ok,
                [&] { return "expansion coefficients at " + complex_str(c); });
      rec.check(chk.lattice_ok,
                [&] { return "lattice membership at " + complex_str(c); });
      rec.check(chk.bar_ok, [&] { return "bar invariance at " + complex_str(c); });
    }
  }
  return rec.take();
}

inline suite_result run_canonical_basis_suite(std::vector<std::unique_ptr<hall_context>>& ctxs,
                                              const verify_options& opt) {
  suite_recorder rec("canonical-basis");
  for (const dimvec& d : dimension_grid(4, opt.max_total_dim)) {
    hall_context& ctx = *ctxs[d.size() - 1];
    auto comps = enumerate_components(d);
    if (comps.empty()) continue;
    auto basis = ctx.triangular_canonical_basis(d);
    for (const auto& c : comps) {
      auto it = basis.find(complex_to_multisegment(c));
      if (it == basis.end()) {
        rec.check(false, [&] { return "no basis element at " + complex_str(c); });
        continue;
      }
      rec.check(it->second == component_element(ctx, c), [&] {
        return "basis element differs from the component element at " + complex_str(c);
      });
    }
  }
  return rec.take();
}

}  // namespace detail

// Runs every property and oracle suite inside the configured bounds.  The
// report depends only on the bounds, never on thread count or cache state.
inline verify_report run_verify(const verify_options& opt) {
  if (opt.max_total_dim < 1)
    fail(errkind::ceiling, "total dimension ceiling must be at least 1");
  std::vector<std::unique_ptr<hall_context>> ctxs;
  for (int n = 1; n <= 4; ++n) ctxs.push_back(std::make_unique<hall_context>(n, opt.hall));
  verify_report rep;
  rep.max_total_dim = opt.max_total_dim;
  rep.suites.push_back(detail::run_binomial_suite());
  rep.suites.push_back(detail::run_dimension_suite());
  rep.suites.push_back(detail::run_stalk_suite(opt));
  rep.suites.push_back(detail::run_product_identity_suite(ctxs));
  rep.suites.push_back(detail::run_hall_suite(ctxs, opt));
  rep.suites.push_back(detail::run_component_construction_suite(ctxs, opt));
  rep.suites.push_back(detail::run_canonical_basis_suite(ctxs, opt));
  return rep;
}

}  // namespace vocic
