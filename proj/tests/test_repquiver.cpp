#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "oracles.hpp"
#include "vocic/repquiver.hpp"

using namespace vocic;

TEST_CASE("euler form", "[repquiver]") {
  REQUIRE(euler_form({1, 1}, {1, 1}) == 1);
  REQUIRE(euler_form({1, 0}, {0, 1}) == -1);
  REQUIRE(euler_form({0, 1}, {1, 0}) == 0);
  REQUIRE(euler_form({2, 3, 1}, {1, 1, 4}) == 2 + 3 + 4 - 2 - 12);
  REQUIRE_THROWS_AS(euler_form({1}, {1, 2}), error);
  // interval dimension vectors are roots: the form takes value 1 on them
  for (int n = 1; n <= 5; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) {
        dimvec a((size_t)n, 0);
        for (int t = i; t <= j; ++t) a[(size_t)(t - 1)] = 1;
        REQUIRE(euler_form(a, a) == 1);
      }
}

TEST_CASE("multisegment basics", "[repquiver]") {
  multisegment m(3);
  m.add(1, 2, 1);
  m.add(2, 2, 3);
  REQUIRE(m.dim() == dimvec{1, 4, 0});
  REQUIRE(m.total_dim() == 5);
  REQUIRE(m.str() == "[1..2]+[2..2]^3");
  REQUIRE(multisegment::parse("[1..2]^1 + [2..2]^3", 3) == m);
  REQUIRE(multisegment::parse(" [ 1 .. 2 ] + [2..2] ^ 3 ", 3) == m);
  REQUIRE(multisegment::parse("[2..2]^2+[1..2]+[2..2]", 3) == m);
  REQUIRE(multisegment(3).str() == "0");
  REQUIRE(multisegment::parse("0", 3) == multisegment(3));
  REQUIRE(multisegment::parse(" 0 ", 3).is_zero());
  REQUIRE(multisegment::simple(2, 3).dim() == dimvec{0, 1, 0});
  REQUIRE(multisegment::interval(1, 3, 3).dim() == dimvec{1, 1, 1});

  for (auto bad : {"[1..2", "[2..1]", "[1..5]", "[1..2]^", "foo", "", "[1..2]+",
                   "0+[1..1]", "[0..1]"}) {
    try {
      multisegment::parse(bad, 3);
      FAIL(std::string("parse accepted \"") + bad + "\"");
    } catch (const error& e) {
      REQUIRE((e.kind == errkind::parse));
    }
  }
}

TEST_CASE("multisegment round trip", "[repquiver]") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + (int)(rng() % 5);
    multisegment m(n);
    for (int t = 0; t < 4; ++t) {
      int i = 1 + (int)(rng() % (unsigned)n);
      int j = i + (int)(rng() % (unsigned)(n - i + 1));
      m.add(i, j, (int)(rng() % 3));
    }
    REQUIRE(multisegment::parse(m.str(), n) == m);
  }
}

TEST_CASE("enumerate multisegments", "[repquiver]") {
  auto one = enumerate_multisegments({1, 1});
  REQUIRE(one.size() == 2);
  REQUIRE(one[0] == multisegment::interval(1, 2, 2));
  multisegment ss(2);
  ss.add(1, 1, 1);
  ss.add(2, 2, 1);
  REQUIRE(one[1] == ss);

  REQUIRE(enumerate_multisegments({1, 1, 1}).size() == 4);
  REQUIRE(enumerate_multisegments({2, 2}).size() == 3);
  REQUIRE(enumerate_multisegments({0, 0, 0}).size() == 1);
  REQUIRE(enumerate_multisegments({0, 0, 0})[0].is_zero());

  // against a brute force filter over the full multiplicity box
  for (dimvec d : {dimvec{2, 1}, dimvec{1, 2, 1}, dimvec{2, 2, 1}, dimvec{3, 1}}) {
    int n = (int)d.size();
    int cap = *std::max_element(d.begin(), d.end());
    std::set<multisegment> brute;
    std::vector<std::pair<int, int>> segs;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j) segs.emplace_back(i, j);
    std::vector<int> mult(segs.size(), 0);
    auto rec = [&](auto&& self, size_t t) -> void {
      if (t == segs.size()) {
        multisegment m(n);
        for (size_t s = 0; s < segs.size(); ++s)
          m.set_mult(segs[s].first, segs[s].second, mult[s]);
        if (m.dim() == d) brute.insert(m);
        return;
      }
      for (int v = 0; v <= cap; ++v) {
        mult[t] = v;
        self(self, t + 1);
      }
      mult[t] = 0;
    };
    rec(rec, 0);
    auto got = enumerate_multisegments(d);
    REQUIRE(got.size() == brute.size());
    REQUIRE(std::set<multisegment>(got.begin(), got.end()) == brute);
    REQUIRE(std::is_sorted(got.begin(), got.end()));
    for (const auto& m : got) REQUIRE(m.dim() == d);
  }
}

TEST_CASE("normal form and classification", "[repquiver]") {
  auto rep = normal_form(multisegment::interval(1, 2, 2), 5);
  REQUIRE(rep.dims == dimvec{1, 1});
  REQUIRE(rep.maps[0].at(0, 0) == 1);

  // rank-one map on d = (1,1) is the length two interval
  matrix_rep custom;
  custom.p = 3;
  custom.dims = {1, 1};
  custom.maps.emplace_back(1, 1);
  custom.maps[0].at(0, 0) = 2;
  REQUIRE(multisegment_from_matrices(custom) == multisegment::interval(1, 2, 2));
  custom.maps[0].at(0, 0) = 0;
  multisegment ss(2);
  ss.add(1, 1, 1);
  ss.add(2, 2, 1);
  REQUIRE(multisegment_from_matrices(custom) == ss);

  matrix_rep three;
  three.p = 2;
  three.dims = {1, 1, 1};
  three.maps.emplace_back(1, 1);
  three.maps.emplace_back(1, 1);
  three.maps[0].at(0, 0) = 1;
  multisegment expect(3);
  expect.add(1, 2, 1);
  expect.add(3, 3, 1);
  REQUIRE(multisegment_from_matrices(three) == expect);

  // round trip through the normal form at two primes
  for (int n = 1; n <= 4; ++n) {
    std::vector<dimvec> dims;
    dimvec d((size_t)n, 0);
    auto gen = [&](auto&& self, int i, int left) -> void {
      if (i == n) {
        dims.push_back(d);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        d[(size_t)i] = v;
        self(self, i + 1, left - v);
      }
      d[(size_t)i] = 0;
    };
    gen(gen, 0, 6 - n);
    for (const auto& dd : dims)
      for (const auto& m : enumerate_multisegments(dd)) {
        REQUIRE(multisegment_from_matrices(normal_form(m, 2)) == m);
        REQUIRE(multisegment_from_matrices(normal_form(m, 5)) == m);
      }
  }
}

TEST_CASE("hom dimensions", "[repquiver]") {
  auto U12 = multisegment::interval(1, 2, 2);
  auto S1 = multisegment::simple(1, 2);
  auto S2 = multisegment::simple(2, 2);
  REQUIRE(hom_dim(U12, S1) == 1);
  REQUIRE(hom_dim(S1, U12) == 0);
  REQUIRE(hom_dim(S1, S1) == 1);
  REQUIRE(hom_dim(S1, S2) == 0);
  REQUIRE(hom_dim(U12, U12) == 1);

  // intervals against the closed form
  for (int n = 1; n <= 4; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          for (int l = k; l <= n; ++l)
            REQUIRE(hom_dim(multisegment::interval(i, j, n),
                            multisegment::interval(k, l, n)) ==
                    oracles::interval_hom(i, j, k, l));
}

TEST_CASE("hom additivity", "[repquiver]") {
  auto oracle = [](const multisegment& M, const multisegment& N) {
    int n = M.rank();
    int s = 0;
    for (int i = 1; i <= n; ++i)
      for (int j = i; j <= n; ++j)
        for (int k = 1; k <= n; ++k)
          for (int l = k; l <= n; ++l)
            s += M.mult(i, j) * N.mult(k, l) * oracles::interval_hom(i, j, k, l);
    return s;
  };
  for (int n = 1; n <= 3; ++n) {
    std::vector<multisegment> classes;
    dimvec d((size_t)n, 0);
    auto gen = [&](auto&& self, int i, int left) -> void {
      if (i == n) {
        for (const auto& m : enumerate_multisegments(d)) classes.push_back(m);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        d[(size_t)i] = v;
        self(self, i + 1, left - v);
      }
      d[(size_t)i] = 0;
    };
    gen(gen, 0, 4);
    for (const auto& M : classes)
      for (const auto& N : classes) REQUIRE(hom_dim(M, N) == oracle(M, N));
  }
  // a deterministic sample at rank 4, total dimension 5
  auto sample = enumerate_multisegments({1, 2, 1, 1});
  for (const auto& M : sample)
    for (const auto& N : sample) REQUIRE(hom_dim(M, N) == oracle(M, N));
}

TEST_CASE("complex types", "[repquiver]") {
  auto c = make_complex({1, 1, 1}, {1, 0});
  REQUIRE(c.h == std::vector<int>{0, 0, 1});
  REQUIRE(omega(c) == std::vector<int>{3});
  REQUIRE_THROWS_AS(make_complex({1, 1, 1}, {1, 1}), error);
  try {
    make_complex({1, 1, 1}, {1, 1});
  } catch (const error& e) {
    REQUIRE(e.kind == errkind::infeasible);
  }
  REQUIRE_THROWS_AS(make_complex({1, 1}, {-1}), error);
  REQUIRE_THROWS_AS(make_complex({1, 1}, {1, 0}), error);

  auto mid = make_complex({1, 2, 1}, {1, 1});
  REQUIRE(mid.h == std::vector<int>{0, 0, 0});
  multisegment mm(3);
  mm.add(1, 2, 1);
  mm.add(2, 3, 1);
  REQUIRE(complex_to_multisegment(mid) == mm);

  auto cc = make_complex({1, 2, 1}, {1, 0});
  multisegment expect(3);
  expect.add(1, 2, 1);
  expect.add(2, 2, 1);
  expect.add(3, 3, 1);
  REQUIRE(complex_to_multisegment(cc) == expect);

  REQUIRE(is_sparse({1, 3}));
  REQUIRE(is_sparse({}));
  REQUIRE(!is_sparse({1, 2}));
  REQUIRE(is_sparse({2, 4, 6}));
  REQUIRE(!is_sparse({2, 4, 5}));

  REQUIRE(dotplus({0, 1, 0}, {1, 1}) == std::vector<int>{1, 3, 1});
  REQUIRE(dotplus({2}, {}) == std::vector<int>{2});

  auto base = make_complex({1, 2, 1}, {1, 1});
  auto down = deform(base, {1, 1});
  REQUIRE(down.r == std::vector<int>{0, 0});
  REQUIRE(down.d == base.d);
  REQUIRE(down.h == dotplus(base.h, {1, 1}));
  REQUIRE_THROWS_AS(deform(base, {2, 0}), error);
}

TEST_CASE("dimension formulas", "[repquiver]") {
  auto mid = make_complex({1, 3, 1}, {1, 1});
  REQUIRE(mid.h == std::vector<int>{0, 1, 0});
  REQUIRE(mm_dim(mid) == 6);
  REQUIRE(codim_shift(mid, {1, 1}) == 5);
  REQUIRE(codim_shift(mid, {0, 0}) == 0);

  // the all zero corank case one dimension down
  auto c0 = make_complex({1, 2, 1}, {1, 1});
  REQUIRE(c0.h == std::vector<int>{0, 0, 0});
  REQUIRE(codim_shift(c0, {1, 1}) == 3);

  // closed forms match intertwiner dimensions on a grid
  for (int n = 2; n <= 3; ++n) {
    std::vector<int> r((size_t)(n - 1), 0);
    dimvec h((size_t)n, 0);
    auto loop_r = [&](auto&& self, size_t i) -> void {
      if (i == r.size()) {
        auto loop_h = [&](auto&& self2, size_t j) -> void {
          if (j == h.size()) {
            dimvec d((size_t)n);
            for (int t = 1; t <= n; ++t) {
              int rp = (t >= 2) ? r[(size_t)(t - 2)] : 0;
              int rt = (t <= n - 1) ? r[(size_t)(t - 1)] : 0;
              d[(size_t)(t - 1)] = rp + rt + h[(size_t)(t - 1)];
            }
            auto c = make_complex(d, r);
            auto M = complex_to_multisegment(c);
            REQUIRE(mm_dim(c) == hom_dim(M, M));
            for (const auto& k : enumerate_shifts(r)) {
              auto N = complex_to_multisegment(deform(c, k));
              REQUIRE(codim_shift(c, k) == hom_dim(N, N) - hom_dim(M, M));
            }
            return;
          }
          for (int v = 0; v <= 2; ++v) {
            h[j] = v;
            self2(self2, j + 1);
          }
          h[j] = 0;
        };
        loop_h(loop_h, 0);
        return;
      }
      for (int v = 0; v <= 2; ++v) {
        r[i] = v;
        self(self, i + 1);
      }
      r[i] = 0;
    };
    loop_r(loop_r, 0);
  }
}

TEST_CASE("orbit enumeration", "[repquiver]") {
  auto orbits = enumerate_orbits({1, 1, 1});
  REQUIRE(orbits.size() == 3);
  REQUIRE(orbits[0].r == std::vector<int>{1, 0});
  REQUIRE(orbits[1].r == std::vector<int>{0, 1});
  REQUIRE(orbits[2].r == std::vector<int>{0, 0});

  // brute force oracle over the rank box
  for (dimvec d : {dimvec{1, 1, 1}, dimvec{2, 2}, dimvec{1, 2, 1}, dimvec{2, 1, 2},
                   dimvec{1, 1, 1, 1}}) {
    int n = (int)d.size();
    int cap = *std::max_element(d.begin(), d.end());
    std::set<std::vector<int>> brute;
    std::vector<int> r((size_t)(n - 1), 0);
    auto rec = [&](auto&& self, size_t i) -> void {
      if (i == r.size()) {
        bool ok = true;
        for (int t = 1; t <= n; ++t) {
          int rp = (t >= 2) ? r[(size_t)(t - 2)] : 0;
          int rt = (t <= n - 1) ? r[(size_t)(t - 1)] : 0;
          if (d[(size_t)(t - 1)] - rp - rt < 0) ok = false;
        }
        if (ok) brute.insert(r);
        return;
      }
      for (int v = 0; v <= cap; ++v) {
        r[i] = v;
        self(self, i + 1);
      }
      r[i] = 0;
    };
    rec(rec, 0);
    auto got = enumerate_orbits(d);
    REQUIRE(got.size() == brute.size());
    std::set<std::vector<int>> seen;
    for (const auto& c : got) seen.insert(c.r);
    REQUIRE(seen == brute);
    // descending lexicographic order
    for (size_t t = 0; t + 1 < got.size(); ++t) REQUIRE(got[t + 1].r < got[t].r);
  }
}

TEST_CASE("component enumeration", "[repquiver]") {
  auto comps = enumerate_components({1, 1, 1});
  REQUIRE(comps.size() == 2);
  REQUIRE(comps[0].r == std::vector<int>{1, 0});
  REQUIRE(comps[1].r == std::vector<int>{0, 1});

  auto mid = enumerate_components({1, 2, 1});
  REQUIRE(mid.size() == 1);
  REQUIRE(mid[0].r == std::vector<int>{1, 1});

  auto two = enumerate_components({2, 2});
  REQUIRE(two.size() == 1);
  REQUIRE(two[0].r == std::vector<int>{2});

  // independent filter: sparse means no two adjacent support vertices
  for (dimvec d : {dimvec{2, 2, 2}, dimvec{1, 1, 1, 1}, dimvec{3, 1, 2}}) {
    auto all = enumerate_orbits(d);
    auto got = enumerate_components(d);
    size_t expect = 0;
    for (const auto& c : all) {
      bool sparse = true;
      for (int i = 1; i + 1 <= c.rank(); ++i)
        if (c.h_at(i) != 0 && c.h_at(i + 1) != 0) sparse = false;
      if (sparse) ++expect;
    }
    REQUIRE(got.size() == expect);
  }
}

TEST_CASE("closure order", "[repquiver]") {
  auto orbits = enumerate_orbits({2, 2});
  // r = (2), (1), (0) in descending order
  REQUIRE(closure_leq(orbits[2], orbits[0]));
  REQUIRE(closure_leq(orbits[1], orbits[0]));
  REQUIRE(!closure_leq(orbits[0], orbits[1]));
  for (const auto& a : orbits) REQUIRE(closure_leq(a, a));
  auto big = enumerate_orbits({2, 3, 2});
  for (const auto& a : big)
    for (const auto& b : big) {
      if (closure_leq(a, b) && closure_leq(b, a)) REQUIRE(a.r == b.r);
      for (const auto& c : big)
        if (closure_leq(a, b) && closure_leq(b, c)) REQUIRE(closure_leq(a, c));
    }
}

TEST_CASE("shift enumeration", "[repquiver]") {
  auto ks = enumerate_shifts({1, 1});
  REQUIRE(ks.size() == 4);
  REQUIRE(ks[0] == std::vector<int>{0, 0});
  REQUIRE(ks[3] == std::vector<int>{1, 1});
  REQUIRE(enumerate_shifts({}).size() == 1);
  REQUIRE(enumerate_shifts({2, 0, 1}).size() == 6);
}
