#ifndef VOCIC_HALL_HPP
#define VOCIC_HALL_HPP

#include <array>
#include <memory>
#include <optional>
#include <tuple>

#include "vocic/hall_cache.hpp"
#include "vocic/laurent.hpp"
#include "vocic/parallel.hpp"
#include "vocic/repquiver.hpp"

namespace vocic {

// Element of the twisted Hall algebra: a finite sum of basis classes with
// Laurent coefficients.  All operations preserve homogeneity in the
// dimension vector.
class hall_element {
 public:
  explicit hall_element(int n) : n_(n) {
    if (n < 1) fail(errkind::index_range, "rank must be at least 1");
  }

  static hall_element unit(int n) {
    hall_element e(n);
    e.terms_.emplace(multisegment(n), laurent(1));
    return e;
  }
  static hall_element basis(const multisegment& m) {
    hall_element e(m.rank());
    e.terms_.emplace(m, laurent(1));
    return e;
  }

  int rank() const { return n_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<multisegment, laurent>& terms() const { return terms_; }

  laurent coeff(const multisegment& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? laurent() : it->second;
  }

  void add(const multisegment& m, const laurent& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(m, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  hall_element& operator+=(const hall_element& o) {
    check_rank(o);
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
  }
  hall_element& operator-=(const hall_element& o) {
    check_rank(o);
    for (const auto& [m, c] : o.terms_) add(m, -c);
    return *this;
  }
  friend hall_element operator+(hall_element a, const hall_element& b) { return a += b; }
  friend hall_element operator-(hall_element a, const hall_element& b) { return a -= b; }

  hall_element scaled(const laurent& c) const {
    hall_element r(n_);
    if (c.is_zero()) return r;
    for (const auto& [m, x] : terms_) r.terms_.emplace(m, x * c);
    return r;
  }

  bool operator==(const hall_element& o) const {
    return n_ == o.n_ && terms_ == o.terms_;
  }
  bool operator!=(const hall_element& o) const { return !(*this == o); }

  // Rendering: terms in ascending class order.  A coefficient of 1 prints
  // the class bare; otherwise the class is parenthesized and composite
  // coefficients are too:  "[1..2] + v^-1*([1..1]+[2..2])".
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
      if (!first) out += " + ";
      first = false;
      std::string cs = c.str();
      bool one = (c == laurent(1));
      if (m.is_zero()) {
        out += (cs.find(' ') != std::string::npos) ? "(" + cs + ")" : cs;
        continue;
      }
      if (one) {
        out += m.str();
      } else {
        bool composite = cs.find(' ') != std::string::npos || cs[0] == '-';
        out += (composite ? "(" + cs + ")" : cs) + "*(" + m.str() + ")";
      }
    }
    return out;
  }

 private:
  int n_;
  std::map<multisegment, laurent> terms_;
  void check_rank(const hall_element& o) const {
    if (n_ != o.n_) fail(errkind::rank_mismatch, "elements of different ranks");
  }
};

// One factor of a monomial in the generators: a divided power of the class
// of the interval [i..j] (a Chevalley generator when j == i).  A barred
// root factor stands for the image of the factor under the bar involution.
struct word_factor {
  int i = 1, j = 1;
  int exp = 1;
  bool barred = false;
};

struct generator_word {
  int n = 1;
  laurent scalar = laurent(1);
  std::vector<word_factor> factors;
};

enum class root_convention { left, right };

struct hall_options {
  int extra_primes = 1;
  unsigned threads = 1;
  std::shared_ptr<hall_cache> cache;
};

namespace detail {
inline constexpr std::array<uint32_t, 30> primes = {
    2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113};
}

class hall_context {
 public:
  explicit hall_context(int rank, hall_options opt = {})
      : n_(rank), opt_(std::move(opt)) {
    if (rank < 1) fail(errkind::index_range, "rank must be at least 1");
    if (opt_.extra_primes < 0) fail(errkind::index_range, "negative extra prime count");
    resolve_convention();
  }

  int rank() const { return n_; }
  root_convention convention() const { return conv_; }
  bool convention_flipped() const { return flipped_; }
  const hall_options& options() const { return opt_; }

  hall_element unit() const { return hall_element::unit(n_); }
  hall_element chevalley(int i) const {
    if (i < 1 || i > n_) fail(errkind::index_range, "vertex out of range");
    return hall_element::basis(multisegment::simple(i, n_));
  }

  // ---- classes and hom data ----------------------------------------

  const std::vector<multisegment>& classes(const dimvec& d) {
    if ((int)d.size() != n_) fail(errkind::rank_mismatch, "dimension vector length");
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = classes_.find(d);
      if (it != classes_.end()) return it->second;
    }
    auto list = enumerate_multisegments(d);
    std::lock_guard<std::mutex> lock(mu_);
    return classes_.emplace(d, std::move(list)).first->second;
  }

  int self_hom(const multisegment& m) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = self_hom_.find(m);
      if (it != self_hom_.end()) return it->second;
    }
    int h = hom_dim(m, m);
    std::lock_guard<std::mutex> lock(mu_);
    self_hom_.emplace(m, h);
    return h;
  }

  // dim Hom from each interval class, in lexicographic interval order
  std::vector<int> hom_vector(const multisegment& m) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = hom_vec_.find(m);
      if (it != hom_vec_.end()) return it->second;
    }
    std::vector<int> hv;
    for (int i = 1; i <= n_; ++i)
      for (int j = i; j <= n_; ++j)
        hv.push_back(hom_dim(multisegment::interval(i, j, n_), m));
    std::lock_guard<std::mutex> lock(mu_);
    hom_vec_.emplace(m, hv);
    return hv;
  }

  // N degenerates M: hom from every interval weakly grows, strictly
  // somewhere.
  bool hom_below(const multisegment& N, const multisegment& M) {
    auto a = hom_vector(N), b = hom_vector(M);
    bool strict = false;
    for (size_t t = 0; t < a.size(); ++t) {
      if (a[t] < b[t]) return false;
      if (a[t] > b[t]) strict = true;
    }
    return strict;
  }

  // ---- counting and structure constants ----------------------------

  // Exact number of subrepresentation tuples of x with prescribed sub and
  // quotient classes, by direct enumeration over F_p.
  static long long count_subreps(const matrix_rep& x, const multisegment& sub,
                                 const multisegment& quot) {
    auto counts = batch_count_matrices(x, sub.dim());
    auto it = counts.find(std::make_pair(sub, quot));
    return it == counts.end() ? 0 : it->second;
  }

  // F_{M,N}^X with N the subrepresentation and M the quotient: counts over
  // a window of primes, interpolated exactly, then checked at held out
  // primes.
  qpoly hall_polynomial(const multisegment& M, const multisegment& N,
                        const multisegment& X) {
    check_class(M);
    check_class(N);
    check_class(X);
    dimvec dm = M.dim(), dn = N.dim(), dx = X.dim();
    for (int i = 0; i < n_; ++i)
      if (dm[(size_t)i] + dn[(size_t)i] != dx[(size_t)i])
        fail(errkind::infeasible, "dimension vectors do not add up");
    if (N.is_zero()) return (M == X) ? qpoly(1) : qpoly();
    if (M.is_zero()) return (N == X) ? qpoly(1) : qpoly();

    auto key = hall_cache::make_key(M, N, X);
    if (opt_.cache) {
      auto hit = opt_.cache->find(key);
      if (hit) return *hit;
    }
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = local_polys_.find(key);
      if (it != local_polys_.end()) return it->second;
    }

    qpoly F = hall_polynomial_uncached(M, N, X, dn, dx);

    if (opt_.cache) opt_.cache->insert(key, F);
    std::lock_guard<std::mutex> lock(mu_);
    auto it = local_polys_.find(key);
    if (it == local_polys_.end()) local_polys_.emplace(key, F);
    return F;
  }

  // Order of the automorphism group as a polynomial in q, interpolated
  // from exact counts like the structure constants.
  qpoly count_automorphisms(const multisegment& M) {
    check_class(M);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = autos_.find(M);
      if (it != autos_.end()) return it->second;
    }
    int h = self_hom(M);
    size_t npts = (size_t)h + 1;
    size_t need = npts + (size_t)opt_.extra_primes;
    if (need > detail::primes.size())
      fail(errkind::ceiling, "not enough primes for interpolation");
    std::vector<long long> counts(need);
    parallel_for(need, opt_.threads, [&](size_t t) {
      counts[t] = automorphism_count_at(M, detail::primes[t], h);
    });
    std::vector<uint32_t> nodes(detail::primes.begin(),
                                detail::primes.begin() + (long)npts);
    qpoly a = interpolate_integer(nodes, {counts.begin(), counts.begin() + (long)npts});
    for (size_t t = npts; t < need; ++t)
      if (a.evaluate(detail::primes[t]) != (long)counts[t])
        fail(errkind::extra_prime_mismatch,
             "automorphism count of " + M.str() + " at p=" +
                 std::to_string(detail::primes[t]));
    std::lock_guard<std::mutex> lock(mu_);
    autos_.emplace(M, a);
    return a;
  }

  // ---- algebra operations ------------------------------------------

  hall_element multiply(const hall_element& a, const hall_element& b) {
    if (a.rank() != n_ || b.rank() != n_)
      fail(errkind::rank_mismatch, "operands of wrong rank");
    hall_element out(n_);
    for (const auto& [M, ca] : a.terms())
      for (const auto& [N, cb] : b.terms()) {
        laurent c = ca * cb;
        if (M.is_zero()) {
          out.add(N, c);
          continue;
        }
        if (N.is_zero()) {
          out.add(M, c);
          continue;
        }
        dimvec dm = M.dim(), dn = N.dim();
        dimvec dsum(dm.size());
        for (size_t i = 0; i < dm.size(); ++i) dsum[i] = dm[i] + dn[i];
        long base = self_hom(M) + self_hom(N) + euler_form(dm, dn);
        for (const auto& X : classes(dsum)) {
          qpoly F = hall_polynomial(M, N, X);
          if (F.is_zero()) continue;
          long t = base - self_hom(X);
          out.add(X, c * F.as_laurent_v2().shifted(t));
        }
      }
    return out;
  }

  // A^m / [m]!
  hall_element divided_power(const hall_element& a, long m) {
    if (m < 0) fail(errkind::index_range, "negative divided power");
    if (m == 0) return unit();
    hall_element acc = a;
    for (long t = 1; t < m; ++t) acc = multiply(acc, a);
    laurent fact = quantum_factorial(m);
    hall_element out(n_);
    for (const auto& [X, c] : acc.terms())
      out.add(X, laurent::divide_exact(c, fact));
    return out;
  }

  // Class of the interval [i..j], built from commutators of Chevalley
  // generators.  Both bracketings are implemented; the constructor picks
  // the one whose results agree with the interval classes.
  hall_element root_element(int i, int j, bool barred = false) {
    if (i < 1 || j < i || j > n_) fail(errkind::index_range, "interval out of range");
    return root_impl(i, j, barred, true);
  }

  hall_element evaluate_word(const generator_word& w) {
    if (w.n != n_) fail(errkind::rank_mismatch, "word of wrong rank");
    hall_element acc = unit();
    for (const auto& f : w.factors) {
      if (f.exp < 0) fail(errkind::index_range, "negative exponent in word");
      if (f.exp == 0) continue;
      acc = multiply(acc, factor_value(f));
    }
    return acc.scaled(w.scalar);
  }

  // The image of a word under the bar involution: conjugate the scalar and
  // mark root factors, which evaluate through the opposite twist.  Divided
  // powers of Chevalley generators are fixed.
  static generator_word bar_word(generator_word w) {
    w.scalar = w.scalar.bar();
    for (auto& f : w.factors)
      if (f.j > f.i) f.barred = !f.barred;
    return w;
  }

  // Monomial attached to a class: divided powers of interval classes with
  // starts descending and, within a start, ends descending.
  generator_word pbw_monomial(const multisegment& M) const {
    if (M.rank() != n_) fail(errkind::rank_mismatch, "class of wrong rank");
    generator_word w;
    w.n = n_;
    for (int i = n_; i >= 1; --i)
      for (int j = n_; j >= i; --j) {
        int m = M.mult(i, j);
        if (m > 0) w.factors.push_back({i, j, m, false});
      }
    return w;
  }

  // Bar fixed elements with unitriangular monomial transition, one per
  // class of dimension vector d, solved by the standard fixed point
  // recursion down a linear extension of the degeneration order.
  std::map<multisegment, hall_element> triangular_canonical_basis(const dimvec& d) {
    const auto& cl = classes(d);
    size_t K = cl.size();

    // linear extension: degeneration strictly increases the total hom
    // vector, so sorting by its sum puts generic classes first
    std::vector<size_t> ord(K);
    for (size_t k = 0; k < K; ++k) ord[k] = k;
    std::vector<long> hv_sum(K);
    for (size_t k = 0; k < K; ++k) {
      auto hv = hom_vector(cl[k]);
      hv_sum[k] = 0;
      for (int x : hv) hv_sum[k] += x;
    }
    std::sort(ord.begin(), ord.end(), [&](size_t a, size_t b) {
      if (hv_sum[a] != hv_sum[b]) return hv_sum[a] < hv_sum[b];
      return cl[a] < cl[b];
    });

    // bar matrix rows through genuine word evaluation
    std::vector<hall_element> brow(K, hall_element(n_));
    std::vector<char> pbw_ok(K, 0);
    parallel_for(K, opt_.threads, [&](size_t k) {
      generator_word w = pbw_monomial(cl[k]);
      hall_element ev = evaluate_word(w);
      pbw_ok[k] = (ev == hall_element::basis(cl[k])) ? 1 : 0;
      brow[k] = evaluate_word(bar_word(w));
    });
    for (size_t k = 0; k < K; ++k)
      if (!pbw_ok[k]) {
        if (try_flip()) return triangular_canonical_basis(d);
        fail(errkind::order_convention,
             "monomial of " + cl[k].str() + " does not evaluate to its class");
      }
    for (size_t k = 0; k < K; ++k) {
      if (!(brow[k].coeff(cl[k]) == laurent(1)))
        fail(errkind::not_unitriangular, "diagonal entry of " + cl[k].str());
      for (const auto& [P, c] : brow[k].terms())
        if (!(P == cl[k]) && !hom_below(P, cl[k]))
          fail(errkind::not_unitriangular,
               cl[k].str() + " reaches " + P.str() + " which is not below it");
    }

    std::map<multisegment, hall_element> result;
    std::vector<std::map<size_t, laurent>> zrows(K);
    for (size_t a = 0; a < K; ++a) {
      std::map<size_t, laurent>& z = zrows[a];
      z[ord[a]] = laurent(1);
      for (size_t b = a + 1; b < K; ++b) {
        const multisegment& P = cl[ord[b]];
        laurent g;
        for (size_t c = a; c < b; ++c) {
          auto it = z.find(ord[c]);
          if (it == z.end()) continue;
          laurent bc = brow[ord[c]].coeff(P);
          if (bc.is_zero()) continue;
          g += it->second.bar() * bc;
        }
        if (g.is_zero()) continue;
        if (!(g.bar() == -g) || g.coeff(0) != 0)
          fail(errkind::no_lattice_solution,
               "correction at " + P.str() + " for " + cl[ord[a]].str());
        z[ord[b]] = g.strictly_negative_part();
      }
      hall_element elem(n_);
      for (const auto& [pos, zc] : z) elem.add(cl[pos], zc);
      // bar fixedness straight from the transition matrix
      hall_element barred(n_);
      for (const auto& [pos, zc] : z) barred += brow[pos].scaled(zc.bar());
      if (!(barred == elem))
        fail(errkind::internal, "fixed point recursion left a bar unstable element");
      result.emplace(cl[ord[a]], std::move(elem));
    }
    return result;
  }

  // All structure constants for subrepresentations of the given matrices
  // with vertex dimensions e, grouped by (sub class, quotient class).
  static std::map<std::pair<multisegment, multisegment>, long long>
  batch_count_matrices(const matrix_rep& rep, const dimvec& e) {
    int n = (int)rep.dims.size();
    uint32_t p = rep.p;
    std::map<std::pair<multisegment, multisegment>, long long> counts;
    if ((int)e.size() != n) fail(errkind::rank_mismatch, "dimension vector length");
    for (int v = 0; v < n; ++v)
      if (e[(size_t)v] < 0 || e[(size_t)v] > rep.dims[(size_t)v]) return counts;

    // right action form: maps act on row vectors
    std::vector<fpmat> R((size_t)std::max(0, n - 1));
    for (int v = 0; v + 1 < n; ++v) {
      const fpmat& f = rep.maps[(size_t)v];
      fpmat t(f.cols, f.rows);
      for (int r = 0; r < f.rows; ++r)
        for (int c = 0; c < f.cols; ++c) t.at(c, r) = f.at(r, c);
      R[(size_t)v] = std::move(t);
    }

    std::vector<fpmat> U((size_t)n);
    auto rec = [&](auto&& self, int v) -> void {
      if (v == n) {
        counts[classify(rep.dims, R, U, e, p)] += 1;
        return;
      }
      fpmat W(0, rep.dims[(size_t)v]);
      if (v > 0 && U[(size_t)(v - 1)].rows > 0) {
        fpmat img = mul_fp(U[(size_t)(v - 1)], R[(size_t)(v - 1)], p);
        size_t rank = rref_fp(img, p).size();
        W = fpmat((int)rank, img.cols);
        for (int r = 0; r < (int)rank; ++r)
          for (int c = 0; c < img.cols; ++c) W.at(r, c) = img.at(r, c);
      }
      if (W.rows > e[(size_t)v]) return;
      for_each_subspace_over(W, e[(size_t)v], p, [&](const fpmat& u) {
        U[(size_t)v] = u;
        self(self, v + 1);
      });
    };
    rec(rec, 0);
    return counts;
  }

 private:
  int n_;
  hall_options opt_;
  root_convention conv_ = root_convention::left;
  bool flipped_ = false;

  mutable std::mutex mu_;
  std::map<dimvec, std::vector<multisegment>> classes_;
  std::map<multisegment, int> self_hom_;
  std::map<multisegment, std::vector<int>> hom_vec_;
  std::map<multisegment, qpoly> autos_;
  std::map<hall_cache::key, qpoly> local_polys_;
  std::map<std::tuple<multisegment, dimvec, uint32_t>,
           std::shared_ptr<const std::map<std::pair<multisegment, multisegment>,
                                          long long>>>
      batches_;
  std::map<std::array<int, 4>, hall_element> factors_;

  void check_class(const multisegment& m) const {
    if (m.rank() != n_) fail(errkind::rank_mismatch, "class of wrong rank");
  }

  // ---- convention handling -----------------------------------------

  // Build every interval class from both bracketings at construction time
  // and keep the convention that reproduces the basis elements.
  void resolve_convention() {
    if (n_ < 2) return;
    if (intervals_ok()) return;
    conv_ = root_convention::right;
    flipped_ = true;
    clear_element_caches();
    if (intervals_ok()) return;
    fail(errkind::order_convention, "neither bracketing yields interval classes");
  }

  bool intervals_ok() {
    try {
      for (int len = 1; len < n_; ++len)
        for (int i = 1; i + len <= n_; ++i) {
          hall_element r = root_impl(i, i + len, false, false);
          if (!(r == hall_element::basis(multisegment::interval(i, i + len, n_))))
            return false;
        }
    } catch (const error&) {
      return false;
    }
    return true;
  }

  bool try_flip() {
    std::lock_guard<std::mutex> lock(flip_mu_);
    if (flipped_) return false;
    conv_ = root_convention::right;
    flipped_ = true;
    clear_element_caches();
    return intervals_ok();
  }
  std::mutex flip_mu_;

  void clear_element_caches() {
    std::lock_guard<std::mutex> lock(mu_);
    factors_.clear();
  }

  hall_element root_impl(int i, int j, bool barred, bool checked) {
    std::array<int, 4> key = {i, j, barred ? 1 : 0, 1};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = factors_.find(key);
      if (it != factors_.end()) return it->second;
    }
    hall_element r(n_);
    if (i == j) {
      r = chevalley(i);
    } else {
      // unbarred: [x, y]_{v^{-1}};  barred: the same with v
      long tw = barred ? 1 : -1;
      if (conv_ == root_convention::left) {
        hall_element sub = root_impl(i + 1, j, barred, checked);
        r = multiply(chevalley(i), sub) -
            multiply(sub, chevalley(i)).scaled(laurent::v_power(tw));
      } else {
        hall_element sub = root_impl(i, j - 1, barred, checked);
        r = multiply(sub, chevalley(j)) -
            multiply(chevalley(j), sub).scaled(laurent::v_power(tw));
      }
      if (!barred && checked &&
          !(r == hall_element::basis(multisegment::interval(i, j, n_)))) {
        if (try_flip()) return root_impl(i, j, barred, checked);
        fail(errkind::order_convention,
             "commutator does not produce the interval [" + std::to_string(i) +
                 ".." + std::to_string(j) + "]");
      }
    }
    std::lock_guard<std::mutex> lock(mu_);
    factors_.emplace(key, r);
    return r;
  }

  hall_element factor_value(const word_factor& f) {
    if (f.i < 1 || f.j < f.i || f.j > n_)
      fail(errkind::index_range, "word factor out of range");
    std::array<int, 4> key = {f.i, f.j, f.exp + 1, (f.barred && f.j > f.i) ? 3 : 2};
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = factors_.find(key);
      if (it != factors_.end()) return it->second;
    }
    hall_element base = (f.j == f.i) ? chevalley(f.i)
                                     : root_impl(f.i, f.j, f.barred, true);
    hall_element r = divided_power(base, f.exp);
    std::lock_guard<std::mutex> lock(mu_);
    factors_.emplace(key, r);
    return r;
  }

  // ---- counting backend --------------------------------------------

  std::shared_ptr<const std::map<std::pair<multisegment, multisegment>, long long>>
  batch(const multisegment& X, const dimvec& e, uint32_t p) {
    auto key = std::make_tuple(X, e, p);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = batches_.find(key);
      if (it != batches_.end()) return it->second;
    }
    auto counts = std::make_shared<
        const std::map<std::pair<multisegment, multisegment>, long long>>(
        batch_count_matrices(normal_form(X, p), e));
    std::lock_guard<std::mutex> lock(mu_);
    auto it = batches_.find(key);
    if (it != batches_.end()) return it->second;
    batches_.emplace(key, counts);
    return counts;
  }

  qpoly hall_polynomial_uncached(const multisegment& M, const multisegment& N,
                                 const multisegment& X, const dimvec& dn,
                                 const dimvec& dx) {
    // a class concentrated in one vertex is plain linear algebra: the
    // count of a-dimensional subspaces of an m-dimensional space
    {
      int support_vertex = 0, segments = 0;
      for (int i = 1; i <= n_ && segments <= 1; ++i)
        for (int j = i; j <= n_; ++j)
          if (X.mult(i, j) != 0) {
            ++segments;
            if (i != j) segments = 2;
            support_vertex = i;
          }
      if (segments == 1 && X.mult(support_vertex, support_vertex) > 0) {
        int m = X.mult(support_vertex, support_vertex);
        int a = dn[(size_t)(support_vertex - 1)];
        return normalized_binomial(m, a);
      }
    }

    long D = 0;
    for (int i = 0; i < n_; ++i)
      D += (long)dn[(size_t)i] * (dx[(size_t)i] - dn[(size_t)i]);
    size_t npts = (size_t)D + 1;
    size_t need = npts + (size_t)opt_.extra_primes;
    if (need > detail::primes.size())
      fail(errkind::ceiling, "not enough primes for interpolation");

    std::vector<std::shared_ptr<
        const std::map<std::pair<multisegment, multisegment>, long long>>>
        tables(need);
    parallel_for(need, opt_.threads,
                 [&](size_t t) { tables[t] = batch(X, dn, detail::primes[t]); });

    auto value_at = [&](size_t t) -> long long {
      auto it = tables[t]->find(std::make_pair(N, M));
      return it == tables[t]->end() ? 0 : it->second;
    };
    std::vector<uint32_t> nodes(detail::primes.begin(),
                                detail::primes.begin() + (long)npts);
    std::vector<long long> values(npts);
    for (size_t t = 0; t < npts; ++t) values[t] = value_at(t);
    qpoly F = interpolate_integer(nodes, values);
    for (size_t t = npts; t < need; ++t)
      if (F.evaluate(detail::primes[t]) != (long)value_at(t))
        fail(errkind::extra_prime_mismatch,
             "structure constant (" + M.str() + ", " + N.str() + ", " + X.str() +
                 ") at p=" + std::to_string(detail::primes[t]));
    return F;
  }

  long long automorphism_count_at(const multisegment& M, uint32_t p, int h) {
    intertwiner_system sys = build_intertwiner_system(M, M);
    fpmat mat((int)sys.rows.size(), sys.vars);
    for (int r = 0; r < mat.rows; ++r)
      for (int c = 0; c < mat.cols; ++c) {
        int x = sys.rows[(size_t)r][(size_t)c];
        mat.at(r, c) = (uint32_t)((x % (int)p + (int)p) % (int)p);
      }
    auto kb = kernel_basis_fp(mat, p);
    if ((int)kb.size() != h)
      fail(errkind::internal, "endomorphism dimension drifted modulo p");

    double est = 1;
    for (int t = 0; t < h; ++t) est *= p;
    if (est > 5e7) fail(errkind::ceiling, "automorphism enumeration too large");

    int n = (int)sys.dm.size();
    std::vector<uint32_t> coeff((size_t)h, 0);
    std::vector<uint32_t> phi((size_t)sys.vars, 0);
    long long count = 0;
    while (true) {
      for (int c = 0; c < sys.vars; ++c) phi[(size_t)c] = 0;
      for (int b = 0; b < h; ++b) {
        uint64_t cb = coeff[(size_t)b];
        if (cb == 0) continue;
        for (int c = 0; c < sys.vars; ++c)
          phi[(size_t)c] =
              (uint32_t)((phi[(size_t)c] + cb * kb[(size_t)b][(size_t)c]) % p);
      }
      bool ok = true;
      for (int i = 0; i < n && ok; ++i) {
        int dv = sys.dm[(size_t)i];
        if (dv == 0) continue;
        fpmat sq(dv, dv);
        for (int r = 0; r < dv; ++r)
          for (int c = 0; c < dv; ++c)
            sq.at(r, c) = phi[(size_t)sys.var_index(i, r, c)];
        if (rank_fp(sq, p) != dv) ok = false;
      }
      if (ok) ++count;
      int b = 0;
      for (; b < h; ++b) {
        if (++coeff[(size_t)b] < p) break;
        coeff[(size_t)b] = 0;
      }
      if (b == h) break;
    }
    return count;
  }

  // ---- leaf classification -----------------------------------------

  static std::pair<multisegment, multisegment> classify(
      const dimvec& dims, const std::vector<fpmat>& R,
      const std::vector<fpmat>& U, const dimvec& e, uint32_t p) {
    int n = (int)dims.size();
    std::vector<std::vector<int>> piv((size_t)n), npiv((size_t)n);
    for (int v = 0; v < n; ++v) {
      std::vector<char> isp((size_t)dims[(size_t)v], 0);
      for (int r = 0; r < U[(size_t)v].rows; ++r) {
        int c = 0;
        while (c < U[(size_t)v].cols && U[(size_t)v].at(r, c) == 0) ++c;
        piv[(size_t)v].push_back(c);
        isp[(size_t)c] = 1;
      }
      for (int c = 0; c < dims[(size_t)v]; ++c)
        if (!isp[(size_t)c]) npiv[(size_t)v].push_back(c);
    }

    matrix_rep sub, quot;
    sub.p = quot.p = p;
    sub.dims = e;
    quot.dims.assign((size_t)n, 0);
    for (int v = 0; v < n; ++v)
      quot.dims[(size_t)v] = dims[(size_t)v] - e[(size_t)v];

    for (int v = 0; v + 1 < n; ++v) {
      int ev = e[(size_t)v], ev1 = e[(size_t)(v + 1)];
      int qv = quot.dims[(size_t)v], qv1 = quot.dims[(size_t)(v + 1)];
      fpmat sf(ev1, ev), qf(qv1, qv);

      // restriction of the map to U[v], in echelon coordinates
      for (int t = 0; t < ev; ++t) {
        std::vector<uint32_t> y((size_t)dims[(size_t)(v + 1)], 0);
        for (int c = 0; c < U[(size_t)v].cols; ++c) {
          uint64_t x = U[(size_t)v].at(t, c);
          if (x == 0) continue;
          for (int s = 0; s < R[(size_t)v].cols; ++s)
            y[(size_t)s] = (uint32_t)((y[(size_t)s] + x * R[(size_t)v].at(c, s)) % p);
        }
        for (int s = 0; s < ev1; ++s)
          sf.at(s, t) = y[(size_t)piv[(size_t)(v + 1)][(size_t)s]];
      }

      // induced map on the quotient, through reduction by U[v+1]
      for (int t = 0; t < qv; ++t) {
        int c0 = npiv[(size_t)v][(size_t)t];
        std::vector<uint32_t> y((size_t)dims[(size_t)(v + 1)], 0);
        for (int s = 0; s < R[(size_t)v].cols; ++s) y[(size_t)s] = R[(size_t)v].at(c0, s);
        for (int s = 0; s < ev1; ++s) {
          uint64_t f = y[(size_t)piv[(size_t)(v + 1)][(size_t)s]];
          if (f == 0) continue;
          for (int c = 0; c < U[(size_t)(v + 1)].cols; ++c) {
            uint64_t sub_val = f * U[(size_t)(v + 1)].at(s, c) % p;
            y[(size_t)c] = (uint32_t)((y[(size_t)c] + p - sub_val) % p);
          }
        }
        for (int s = 0; s < qv1; ++s)
          qf.at(s, t) = y[(size_t)npiv[(size_t)(v + 1)][(size_t)s]];
      }

      sub.maps.push_back(std::move(sf));
      quot.maps.push_back(std::move(qf));
    }
    return {multisegment_from_matrices(sub), multisegment_from_matrices(quot)};
  }

  // ---- exact interpolation -----------------------------------------

  static qpoly interpolate_integer(const std::vector<uint32_t>& xs,
                                   const std::vector<long long>& ys) {
    size_t m = xs.size();
    std::vector<mpq_class> acc(m, mpq_class(0));
    for (size_t i = 0; i < m; ++i) {
      if (ys[i] == 0) continue;
      // numerator product over the other nodes
      std::vector<mpq_class> num(1, mpq_class(1));
      mpq_class den = 1;
      for (size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        num.push_back(0);
        for (size_t t = num.size() - 1; t >= 1; --t)
          num[t] = num[t - 1] - (long)xs[j] * num[t];
        num[0] *= -(long)xs[j];
        den *= (long)xs[i] - (long)xs[j];
      }
      mpq_class scale = mpq_class((long)ys[i]) / den;
      for (size_t t = 0; t < num.size(); ++t) acc[t] += num[t] * scale;
    }
    std::vector<mpz_class> out(m);
    for (size_t t = 0; t < m; ++t) {
      acc[t].canonicalize();
      if (acc[t].get_den() != 1)
        fail(errkind::non_integer_interp,
             "coefficient " + acc[t].get_str() + " at degree " + std::to_string(t));
      out[t] = acc[t].get_num();
    }
    return qpoly(std::move(out));
  }
};

}  // namespace vocic

#endif
