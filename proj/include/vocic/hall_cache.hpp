#ifndef VOCIC_HALL_CACHE_HPP
#define VOCIC_HALL_CACHE_HPP

#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vocic/laurent.hpp"
#include "vocic/multisegment.hpp"

namespace vocic {

// Smallest ambient rank a multisegment fits into (at least 1).
inline int support_rank(const multisegment& m) {
  int top = 1;
  for (int i = 1; i <= m.rank(); ++i)
    for (int j = i; j <= m.rank(); ++j)
      if (m.mult(i, j) != 0 && j > top) top = j;
  return top;
}

inline multisegment with_rank(const multisegment& m, int n) {
  multisegment out(n);
  for (int i = 1; i <= m.rank(); ++i)
    for (int j = i; j <= m.rank(); ++j) {
      int mm = m.mult(i, j);
      if (mm != 0) out.set_mult(i, j, mm);
    }
  return out;
}

// Persistent store of structure constants keyed by the triple (quotient,
// sub, extension).  The counts do not depend on the ambient rank, so keys
// are normalized to the smallest rank the triple fits into; that makes the
// file format "M|N|X|c0,c1,..." unambiguous.
class hall_cache {
 public:
  struct key {
    multisegment M, N, X;
    bool operator<(const key& o) const {
      if (!(M == o.M)) return M < o.M;
      if (!(N == o.N)) return N < o.N;
      return X < o.X;
    }
  };

  static key make_key(const multisegment& M, const multisegment& N,
                      const multisegment& X) {
    int n = std::max({support_rank(M), support_rank(N), support_rank(X)});
    return key{with_rank(M, n), with_rank(N, n), with_rank(X, n)};
  }

  std::optional<qpoly> find(const key& k) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(k);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void insert(const key& k, const qpoly& value) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(k);
    if (it != map_.end()) {
      if (!(it->second == value))
        fail(errkind::cache_corrupt,
             "conflicting values for " + key_str(k));
      return;
    }
    map_.emplace(k, value);
    dirty_.insert(k);
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
  }

  // Reads a cache file.  A missing file is fine; a repeated key must carry
  // the same payload, anything else is corruption.
  void load(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;
    std::lock_guard<std::mutex> lock(mu_);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<std::string> parts;
      std::stringstream ss(line);
      std::string item;
      while (std::getline(ss, item, '|')) parts.push_back(item);
      if (parts.size() != 4)
        fail(errkind::cache_corrupt,
             path + ":" + std::to_string(lineno) + ": expected 4 fields");
      int n = 1;
      for (int f = 0; f < 3; ++f) n = std::max(n, max_segment_end(parts[(size_t)f]));
      std::optional<key> k;
      try {
        k = key{multisegment::parse(parts[0], n), multisegment::parse(parts[1], n),
                multisegment::parse(parts[2], n)};
      } catch (const error& e) {
        fail(errkind::cache_corrupt,
             path + ":" + std::to_string(lineno) + ": " + e.what());
      }
      qpoly value = parse_coeffs(parts[3], path, lineno);
      auto it = map_.find(*k);
      if (it != map_.end()) {
        if (!(it->second == value))
          fail(errkind::cache_corrupt, path + ":" + std::to_string(lineno) +
                                           ": conflicting entry for " + key_str(*k));
        continue;
      }
      map_.emplace(*k, value);
    }
  }

  // Appends entries added since the last save, in key order.
  void save_new(const std::string& path) {
    std::lock_guard<std::mutex> lock(mu_);
    if (dirty_.empty()) return;
    std::ofstream out(path, std::ios::app);
    if (!out) fail(errkind::cache_corrupt, "cannot open cache file " + path);
    for (const auto& k : dirty_) {
      out << key_str(k) << "|" << coeff_str(map_.at(k)) << "\n";
    }
    dirty_.clear();
  }

  static std::string key_str(const key& k) {
    return k.M.str() + "|" + k.N.str() + "|" + k.X.str();
  }
  static std::string coeff_str(const qpoly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    for (size_t i = 0; i < p.coeffs().size(); ++i) {
      if (i) s += ",";
      s += p.coeffs()[i].get_str();
    }
    return s;
  }

 private:
  mutable std::mutex mu_;
  std::map<key, qpoly> map_;
  std::set<key> dirty_;

  static int max_segment_end(const std::string& text) {
    // largest j in any "..j]" occurrence; 1 for the zero multisegment
    int best = 1;
    for (size_t i = 0; i + 1 < text.size(); ++i) {
      if (text[i] == '.' && text[i + 1] == '.') {
        size_t k = i + 2;
        long v = 0;
        bool any = false;
        while (k < text.size() && isdigit((unsigned char)text[k])) {
          v = v * 10 + (text[k] - '0');
          any = true;
          ++k;
        }
        if (any && v > best) best = (int)v;
      }
    }
    return best;
  }

  static qpoly parse_coeffs(const std::string& text, const std::string& path,
                            size_t lineno) {
    std::vector<mpz_class> cs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      // trim spaces
      size_t b = item.find_first_not_of(" \t");
      size_t e = item.find_last_not_of(" \t\r");
      if (b == std::string::npos)
        fail(errkind::cache_corrupt,
             path + ":" + std::to_string(lineno) + ": empty coefficient");
      item = item.substr(b, e - b + 1);
      try {
        cs.emplace_back(item);
      } catch (const std::invalid_argument&) {
        fail(errkind::cache_corrupt, path + ":" + std::to_string(lineno) +
                                         ": bad coefficient \"" + item + "\"");
      }
    }
    return qpoly(std::move(cs));
  }
};

}  // namespace vocic

#endif
