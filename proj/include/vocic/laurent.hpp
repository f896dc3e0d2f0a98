#ifndef VOCIC_LAURENT_HPP
#define VOCIC_LAURENT_HPP

#include <gmpxx.h>

#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vocic/errors.hpp"

namespace vocic {

// Laurent polynomial in v with integer coefficients, stored sparsely as
// exponent -> coefficient.  The map never holds a zero coefficient.
class laurent {
 public:
  laurent() = default;
  laurent(long c) {
    if (c != 0) coeffs_[0] = c;
  }
  laurent(const mpz_class& c) {
    if (c != 0) coeffs_[0] = c;
  }

  static laurent monomial(const mpz_class& c, long e) {
    laurent r;
    if (c != 0) r.coeffs_[e] = c;
    return r;
  }
  static laurent v_power(long e) { return monomial(1, e); }

  bool is_zero() const { return coeffs_.empty(); }
  const std::map<long, mpz_class>& terms() const { return coeffs_; }

  mpz_class coeff(long e) const {
    auto it = coeffs_.find(e);
    return it == coeffs_.end() ? mpz_class(0) : it->second;
  }
  long min_exp() const {
    if (is_zero()) fail(errkind::internal, "min_exp of zero polynomial");
    return coeffs_.begin()->first;
  }
  long max_exp() const {
    if (is_zero()) fail(errkind::internal, "max_exp of zero polynomial");
    return coeffs_.rbegin()->first;
  }

  laurent& operator+=(const laurent& o) {
    for (const auto& [e, c] : o.coeffs_) add_term(e, c);
    return *this;
  }
  laurent& operator-=(const laurent& o) {
    for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
    return *this;
  }
  friend laurent operator+(laurent a, const laurent& b) { return a += b; }
  friend laurent operator-(laurent a, const laurent& b) { return a -= b; }
  laurent operator-() const {
    laurent r;
    for (const auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
    return r;
  }

  friend laurent operator*(const laurent& a, const laurent& b) {
    laurent r;
    for (const auto& [ea, ca] : a.coeffs_)
      for (const auto& [eb, cb] : b.coeffs_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  laurent& operator*=(const laurent& o) { return *this = *this * o; }

  // multiplication by v^e
  laurent shifted(long e) const {
    laurent r;
    for (const auto& [ex, c] : coeffs_) r.coeffs_[ex + e] = c;
    return r;
  }

  // the involution v -> v^{-1}
  laurent bar() const {
    laurent r;
    for (const auto& [e, c] : coeffs_) r.coeffs_[-e] = c;
    return r;
  }

  laurent pow(long m) const {
    if (m < 0) fail(errkind::index_range, "negative power of a Laurent polynomial");
    laurent r(1);
    for (long i = 0; i < m; ++i) r *= *this;
    return r;
  }

  bool operator==(const laurent& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const laurent& o) const { return !(*this == o); }
  bool operator<(const laurent& o) const { return cmp(o) < 0; }

  // Exact division.  Shifts both operands to ordinary polynomials and runs
  // classical long division with exact integer steps; if b divides a every
  // step divides exactly and the remainder vanishes.
  static laurent divide_exact(const laurent& a, const laurent& b) {
    if (b.is_zero()) fail(errkind::non_divisible, "division by zero");
    if (a.is_zero()) return laurent();
    long la = a.min_exp(), lb = b.min_exp();
    std::vector<mpz_class> A(a.max_exp() - la + 1), B(b.max_exp() - lb + 1);
    for (const auto& [e, c] : a.coeffs_) A[e - la] = c;
    for (const auto& [e, c] : b.coeffs_) B[e - lb] = c;
    long degB = (long)B.size() - 1;
    laurent q;
    for (long d = (long)A.size() - 1; d >= degB; --d) {
      if (A[d] == 0) continue;
      mpz_class qc, rc;
      mpz_tdiv_qr(qc.get_mpz_t(), rc.get_mpz_t(), A[d].get_mpz_t(),
                  B[degB].get_mpz_t());
      if (rc != 0) fail(errkind::non_divisible, "leading coefficient does not divide");
      long shift = d - degB;
      for (long j = 0; j <= degB; ++j) A[shift + j] -= qc * B[j];
      q.add_term(shift + la - lb, qc);
    }
    for (const auto& c : A)
      if (c != 0) fail(errkind::non_divisible, "nonzero remainder");
    return q;
  }

  mpq_class evaluate(const mpq_class& x) const {
    if (x == 0) {
      if (!is_zero() && min_exp() < 0)
        fail(errkind::zero_base, "negative exponents evaluated at 0");
      return mpq_class(coeff(0));
    }
    mpq_class inv = 1 / x;
    mpq_class acc = 0;
    for (const auto& [e, c] : coeffs_) {
      const mpq_class& base = e >= 0 ? x : inv;
      unsigned long k = e >= 0 ? (unsigned long)e : (unsigned long)(-e);
      mpq_class p;
      mpz_pow_ui(p.get_num_mpz_t(), base.get_num().get_mpz_t(), k);
      mpz_pow_ui(p.get_den_mpz_t(), base.get_den().get_mpz_t(), k);
      p.canonicalize();
      acc += c * p;
    }
    return acc;
  }

  // true when every exponent is <= -1 (vacuously for 0)
  bool in_v_inverse_lattice() const {
    return is_zero() || max_exp() <= -1;
  }

  laurent strictly_negative_part() const {
    laurent r;
    for (const auto& [e, c] : coeffs_)
      if (e <= -1) r.coeffs_[e] = c;
    return r;
  }

  // Rendering: descending exponents, "c*v^e" pieces, "v^0" omitted,
  // exponent 1 printed as "v", terms joined sign-aware with spaces.
  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      const auto& [e, c] = *it;
      mpz_class a = abs(c);
      bool neg = c < 0;
      if (first) {
        if (neg) os << "-";
        first = false;
      } else {
        os << (neg ? " - " : " + ");
      }
      if (e == 0) {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        if (e == 1)
          os << "v";
        else
          os << "v^" << e;
      }
    }
    return os.str();
  }

 private:
  std::map<long, mpz_class> coeffs_;

  void add_term(long e, const mpz_class& c) {
    if (c == 0) return;
    auto it = coeffs_.find(e);
    if (it == coeffs_.end()) {
      coeffs_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  int cmp(const laurent& o) const {
    auto i = coeffs_.begin();
    auto j = o.coeffs_.begin();
    for (; i != coeffs_.end() && j != o.coeffs_.end(); ++i, ++j) {
      if (i->first != j->first) return i->first < j->first ? -1 : 1;
      int s = ::cmp(i->second, j->second);
      if (s != 0) return s;
    }
    if (i != coeffs_.end()) return 1;
    if (j != o.coeffs_.end()) return -1;
    return 0;
  }
};

// Polynomial in q with integer coefficients, ascending coefficient vector,
// trailing coefficient nonzero unless the polynomial is zero.
class qpoly {
 public:
  qpoly() = default;
  qpoly(long c) {
    if (c != 0) coeffs_.push_back(c);
  }
  qpoly(const mpz_class& c) {
    if (c != 0) coeffs_.push_back(c);
  }
  explicit qpoly(std::vector<mpz_class> cs) : coeffs_(std::move(cs)) { normalize(); }

  // Reinterprets a Laurent polynomial with even nonnegative exponents as a
  // polynomial in q = v^2.  The two error kinds distinguish an odd exponent
  // from a negative one.
  static qpoly from_even_laurent(const laurent& p, errkind odd_err, errkind neg_err) {
    qpoly r;
    if (p.is_zero()) return r;
    if (p.min_exp() < 0) fail(neg_err, "negative exponent " + std::to_string(p.min_exp()));
    r.coeffs_.assign((size_t)(p.max_exp() / 2 + 1), mpz_class(0));
    for (const auto& [e, c] : p.terms()) {
      if (e % 2 != 0) fail(odd_err, "odd exponent " + std::to_string(e));
      r.coeffs_[(size_t)(e / 2)] = c;
    }
    r.normalize();
    return r;
  }

  bool is_zero() const { return coeffs_.empty(); }
  // degree of the zero polynomial reported as -1
  long degree() const { return (long)coeffs_.size() - 1; }
  const std::vector<mpz_class>& coeffs() const { return coeffs_; }
  mpz_class coeff(size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : mpz_class(0);
  }

  qpoly& operator+=(const qpoly& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    normalize();
    return *this;
  }
  qpoly& operator-=(const qpoly& o) {
    if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    normalize();
    return *this;
  }
  friend qpoly operator+(qpoly a, const qpoly& b) { return a += b; }
  friend qpoly operator-(qpoly a, const qpoly& b) { return a -= b; }
  friend qpoly operator*(const qpoly& a, const qpoly& b) {
    if (a.is_zero() || b.is_zero()) return qpoly();
    std::vector<mpz_class> r(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (size_t i = 0; i < a.coeffs_.size(); ++i)
      for (size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return qpoly(std::move(r));
  }
  qpoly& operator*=(const qpoly& o) { return *this = *this * o; }

  bool operator==(const qpoly& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const qpoly& o) const { return !(*this == o); }
  bool operator<(const qpoly& o) const {
    if (coeffs_.size() != o.coeffs_.size()) return coeffs_.size() < o.coeffs_.size();
    for (size_t i = 0; i < coeffs_.size(); ++i) {
      int s = ::cmp(coeffs_[i], o.coeffs_[i]);
      if (s != 0) return s < 0;
    }
    return false;
  }

  mpz_class evaluate(const mpz_class& x) const {
    mpz_class acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  // substitutes q = v^2
  laurent as_laurent_v2() const {
    laurent r;
    for (size_t i = 0; i < coeffs_.size(); ++i)
      r += laurent::monomial(coeffs_[i], 2 * (long)i);
    return r;
  }

  // ascending "1+q+2*q^2" style
  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t k = 0; k < coeffs_.size(); ++k) {
      const mpz_class& c = coeffs_[k];
      if (c == 0) continue;
      mpz_class a = abs(c);
      bool neg = c < 0;
      if (first) {
        if (neg) os << "-";
        first = false;
      } else {
        os << (neg ? "-" : "+");
      }
      if (k == 0) {
        os << a.get_str();
      } else {
        if (a != 1) os << a.get_str() << "*";
        if (k == 1)
          os << "q";
        else
          os << "q^" << k;
      }
    }
    return os.str();
  }

 private:
  std::vector<mpz_class> coeffs_;
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
};

// [n] = (v^n - v^{-n}) / (v - v^{-1}); expanded directly, antisymmetric in n
inline laurent quantum_integer(long n) {
  if (n < 0) return -quantum_integer(-n);
  laurent r;
  for (long e = n - 1; e >= -(n - 1); e -= 2) r += laurent::v_power(e);
  return r;
}

inline laurent quantum_factorial(long n) {
  if (n < 0) fail(errkind::index_range, "factorial of a negative integer");
  laurent r(1);
  for (long k = 2; k <= n; ++k) r *= quantum_integer(k);
  return r;
}

// Gaussian binomial [a over n] for arbitrary integer a and n >= 0, computed
// by the defining product formula: the full numerator is expanded and then
// divided exactly by the denominator.
inline laurent gauss_binomial(long a, long n) {
  if (n < 0) fail(errkind::index_range, "binomial with negative lower index");
  static std::map<std::pair<long, long>, laurent> memo;
  static std::mutex mu;
  std::pair<long, long> key(a, n);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  laurent num(1), den(1);
  for (long i = 1; i <= n; ++i) {
    num *= laurent::v_power(a + 1 - i) - laurent::v_power(-(a + 1 - i));
    den *= laurent::v_power(i) - laurent::v_power(-i);
  }
  laurent r = laurent::divide_exact(num, den);
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, r);
  return r;
}

// (a over n)_q = v^{n(a-n)} [a over n], a polynomial in q with nonnegative
// coefficients; zero when n > a.
inline qpoly normalized_binomial(long a, long n) {
  if (a < 0) fail(errkind::index_range, "normalized binomial needs a >= 0");
  if (n < 0) fail(errkind::index_range, "binomial with negative lower index");
  if (n > a) return qpoly();
  static std::map<std::pair<long, long>, qpoly> memo;
  static std::mutex mu;
  std::pair<long, long> key(a, n);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  laurent shifted = gauss_binomial(a, n).shifted(n * (a - n));
  qpoly r = qpoly::from_even_laurent(shifted, errkind::shift_not_even,
                                     errkind::shift_not_even);
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, r);
  return r;
}

}  // namespace vocic

#endif
