#ifndef VOCIC_MULTISEGMENT_HPP
#define VOCIC_MULTISEGMENT_HPP

#include <cctype>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "vocic/errors.hpp"

namespace vocic {

using dimvec = std::vector<int>;

inline int total(const dimvec& d) {
  return std::accumulate(d.begin(), d.end(), 0);
}

// Formal nonnegative combination of segments [i..j], 1 <= i <= j <= n.
// Multiplicities are stored flat in lexicographic (i, j) order, which is
// also the order used for printing and for comparisons.
class multisegment {
 public:
  explicit multisegment(int n) : n_(n), m_((size_t)(n * (n + 1) / 2), 0) {
    if (n < 1) fail(errkind::index_range, "rank must be at least 1");
  }

  static multisegment simple(int i, int n) { return interval(i, i, n); }
  static multisegment interval(int i, int j, int n) {
    multisegment m(n);
    m.add(i, j, 1);
    return m;
  }

  int rank() const { return n_; }

  int mult(int i, int j) const { return m_[idx(i, j)]; }
  void set_mult(int i, int j, int m) {
    if (m < 0) fail(errkind::index_range, "negative multiplicity");
    m_[idx(i, j)] = m;
  }
  void add(int i, int j, int delta) {
    size_t k = idx(i, j);
    if (m_[k] + delta < 0) fail(errkind::index_range, "negative multiplicity");
    m_[k] += delta;
  }

  dimvec dim() const {
    dimvec d((size_t)n_, 0);
    for (int i = 1; i <= n_; ++i)
      for (int j = i; j <= n_; ++j) {
        int m = mult(i, j);
        if (m == 0) continue;
        for (int t = i; t <= j; ++t) d[(size_t)(t - 1)] += m;
      }
    return d;
  }
  int total_dim() const { return total(dim()); }
  bool is_zero() const {
    for (int x : m_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const multisegment& o) const { return n_ == o.n_ && m_ == o.m_; }
  bool operator!=(const multisegment& o) const { return !(*this == o); }
  bool operator<(const multisegment& o) const {
    if (n_ != o.n_) return n_ < o.n_;
    return m_ < o.m_;
  }

  // "[1..2]^3+[3..3]"; the zero multisegment prints as "0"
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (int i = 1; i <= n_; ++i)
      for (int j = i; j <= n_; ++j) {
        int m = mult(i, j);
        if (m == 0) continue;
        if (!first) os << "+";
        first = false;
        os << "[" << i << ".." << j << "]";
        if (m != 1) os << "^" << m;
      }
    if (first) return "0";
    return os.str();
  }

  static multisegment parse(const std::string& text, int n) {
    multisegment out(n);
    size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    };
    auto want = [&](char c) {
      if (pos >= text.size() || text[pos] != c)
        fail(errkind::parse, std::string("expected '") + c + "' at position " +
                                 std::to_string(pos) + " in \"" + text + "\"");
      ++pos;
    };
    auto number = [&]() -> int {
      skip_ws();
      size_t start = pos;
      while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
      if (pos == start)
        fail(errkind::parse, "expected a number at position " +
                                 std::to_string(pos) + " in \"" + text + "\"");
      long v = std::stol(text.substr(start, pos - start));
      if (v > 1000000) fail(errkind::parse, "number too large at position " +
                                                std::to_string(start));
      return (int)v;
    };
    skip_ws();
    if (pos < text.size() && text[pos] == '0') {
      ++pos;
      skip_ws();
      if (pos != text.size())
        fail(errkind::parse, "trailing input after \"0\" at position " +
                                 std::to_string(pos));
      return out;
    }
    while (true) {
      skip_ws();
      want('[');
      int i = number();
      skip_ws();
      want('.');
      want('.');
      int j = number();
      skip_ws();
      want(']');
      int m = 1;
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        m = number();
      }
      if (i < 1 || i > j || j > n)
        fail(errkind::parse, "segment [" + std::to_string(i) + ".." +
                                 std::to_string(j) + "] out of range for rank " +
                                 std::to_string(n));
      out.add(i, j, m);
      skip_ws();
      if (pos == text.size()) break;
      want('+');
    }
    return out;
  }

 private:
  int n_;
  std::vector<int> m_;

  size_t idx(int i, int j) const {
    if (i < 1 || j < i || j > n_)
      fail(errkind::index_range, "segment [" + std::to_string(i) + ".." +
                                     std::to_string(j) + "] out of range");
    return (size_t)((i - 1) * n_ - (i - 1) * (i - 2) / 2 + (j - i));
  }
};

// All multisegments with a prescribed dimension vector, ascending in the
// ordering of multisegment::operator<.  Complete and duplicate free: the
// recursion walks segments in lexicographic order and a vertex that no
// later segment can cover must already be saturated.
inline std::vector<multisegment> enumerate_multisegments(const dimvec& d) {
  int n = (int)d.size();
  std::vector<multisegment> out;
  multisegment cur(n);
  dimvec rem = d;
  for (int x : d)
    if (x < 0) fail(errkind::infeasible, "negative dimension");

  // segment (i, j); recursion advances j, then i
  auto rec = [&](auto&& self, int i, int j) -> void {
    if (i > n) {
      out.push_back(cur);
      return;
    }
    int maxm = rem[(size_t)(i - 1)];
    for (int t = i; t <= j; ++t) maxm = std::min(maxm, rem[(size_t)(t - 1)]);
    int ni = (j < n) ? i : i + 1;
    int nj = (j < n) ? j + 1 : i + 1;
    for (int m = 0; m <= maxm; ++m) {
      if (m > 0)
        for (int t = i; t <= j; ++t) rem[(size_t)(t - 1)] -= 1;
      cur.set_mult(i, j, m);
      if (j == n && rem[(size_t)(i - 1)] != 0) {
        // vertex i can no longer be covered
      } else {
        self(self, ni, nj);
      }
    }
    for (int t = i; t <= j; ++t) rem[(size_t)(t - 1)] += maxm;
    cur.set_mult(i, j, 0);
  };
  rec(rec, 1, 1);
  return out;
}

}  // namespace vocic

#endif
