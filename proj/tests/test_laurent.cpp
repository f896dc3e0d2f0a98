#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "vocic/laurent.hpp"

using vocic::errkind;
using vocic::gauss_binomial;
using vocic::laurent;
using vocic::normalized_binomial;
using vocic::qpoly;
using vocic::quantum_factorial;
using vocic::quantum_integer;

static laurent V(long e) { return laurent::v_power(e); }

TEST_CASE("ring operations", "[laurent]") {
  laurent a = V(1) - V(-1);
  laurent b = V(1) + V(-1);
  REQUIRE(a * b == V(2) - V(-2));
  REQUIRE(laurent::divide_exact(V(2) - V(-2), a) == b);
  REQUIRE(laurent::divide_exact(a * a, a) == a);
  REQUIRE(laurent::divide_exact(laurent(), a).is_zero());
  REQUIRE_THROWS_AS(laurent::divide_exact(V(2) + laurent(1), V(1) + laurent(1)),
                    vocic::error);
  try {
    laurent::divide_exact(V(2) + laurent(1), V(1) + laurent(1));
  } catch (const vocic::error& e) {
    REQUIRE(e.kind == errkind::non_divisible);
  }
  REQUIRE((a + b - a) == b);
  REQUIRE((-a) + a == laurent());
  REQUIRE(a.pow(0) == laurent(1));
  REQUIRE(a.pow(2) == a * a);
  REQUIRE(b.shifted(3) == V(4) + V(2));
}

TEST_CASE("bar involution", "[laurent]") {
  laurent p = V(2) + laurent::monomial(3, -1);
  REQUIRE(p.bar() == V(-2) + laurent::monomial(3, 1));
  REQUIRE(p.bar().bar() == p);
  laurent q = laurent::monomial(-2, 5) + laurent(7) + V(-3);
  REQUIRE(q.bar().bar() == q);
  REQUIRE((p * q).bar() == p.bar() * q.bar());
}

TEST_CASE("evaluation", "[laurent]") {
  laurent b = V(1) + V(-1);
  REQUIRE(b.evaluate(2) == mpq_class(5, 2));
  REQUIRE(quantum_integer(3).evaluate(1) == 3);
  REQUIRE(laurent(7).evaluate(0) == 7);
  REQUIRE((V(2) + laurent(4)).evaluate(0) == 4);
  REQUIRE_THROWS_AS(b.evaluate(0), vocic::error);
  try {
    b.evaluate(0);
  } catch (const vocic::error& e) {
    REQUIRE(e.kind == errkind::zero_base);
  }
  mpq_class x(3, 7);
  laurent p = laurent::monomial(2, 3) + laurent::monomial(-1, 0) + V(-2);
  REQUIRE(p.evaluate(x) == 2 * x * x * x - 1 + 1 / (x * x));
}

TEST_CASE("quantum integers and factorials", "[laurent]") {
  REQUIRE(quantum_integer(0).is_zero());
  REQUIRE(quantum_integer(1) == laurent(1));
  REQUIRE(quantum_integer(2) == V(1) + V(-1));
  REQUIRE(quantum_integer(3) == V(2) + laurent(1) + V(-2));
  REQUIRE(quantum_integer(-3) == -quantum_integer(3));
  REQUIRE(quantum_factorial(0) == laurent(1));
  REQUIRE(quantum_factorial(2) == V(1) + V(-1));
  REQUIRE(quantum_factorial(3) == quantum_integer(3) * quantum_integer(2));
  for (long n = 0; n <= 6; ++n) {
    REQUIRE(quantum_integer(n).bar() == quantum_integer(n));
    REQUIRE(quantum_factorial(n).bar() == quantum_factorial(n));
    REQUIRE(quantum_integer(n).evaluate(1) == n);
  }
}

TEST_CASE("gauss binomial values", "[laurent]") {
  REQUIRE(gauss_binomial(4, 2) ==
          V(4) + V(2) + laurent(2) + V(-2) + V(-4));
  REQUIRE(gauss_binomial(-1, 2) == laurent(1));
  REQUIRE(gauss_binomial(5, 0) == laurent(1));
  REQUIRE(gauss_binomial(-7, 0) == laurent(1));
  REQUIRE(gauss_binomial(3, 5).is_zero());
  REQUIRE(gauss_binomial(0, 1).is_zero());
  REQUIRE(gauss_binomial(2, 1) == quantum_integer(2));
}

TEST_CASE("gauss binomial against Pascal recurrence", "[laurent]") {
  for (long a = 0; a <= 8; ++a)
    for (long n = 0; n <= a; ++n)
      REQUIRE(gauss_binomial(a, n) == oracles::pascal_binomial(a, n));
}

TEST_CASE("gauss binomial identities", "[laurent]") {
  // Pascal recurrence holds on the full grid, negative upper index included
  for (long a = -5; a <= 8; ++a)
    for (long n = 1; n <= 6; ++n)
      REQUIRE(gauss_binomial(a, n) ==
              gauss_binomial(a - 1, n).shifted(n) +
                  gauss_binomial(a - 1, n - 1).shifted(n - a));
  // symmetry and classical specialization
  for (long a = 0; a <= 8; ++a)
    for (long n = 0; n <= a; ++n) {
      REQUIRE(gauss_binomial(a, n) == gauss_binomial(a, a - n));
      REQUIRE(gauss_binomial(a, n).bar() == gauss_binomial(a, n));
      mpz_class expect;
      mpz_bin_uiui(expect.get_mpz_t(), (unsigned long)a, (unsigned long)n);
      REQUIRE(gauss_binomial(a, n).evaluate(1) == mpq_class(expect));
    }
  // negative upper index reduces to a sign times a shifted binomial
  for (long a = 0; a <= 6; ++a)
    for (long n = 0; n <= 6; ++n) {
      laurent rhs = gauss_binomial(a + n - 1, n);
      if (n % 2 == 1) rhs = -rhs;
      REQUIRE(gauss_binomial(-a, n) == rhs);
    }
}

TEST_CASE("three way binomial exchange", "[laurent]") {
  // sum over t = t1 + t23 of
  //   v^{(c2-c3) t1 - c1 t23} [c1 over t1] [c2+c3 over t23]
  // equals the same expression with the roles of the outer indices swapped
  for (long c1 = -4; c1 <= 4; ++c1)
    for (long c2 = -4; c2 <= 4; ++c2)
      for (long c3 = -4; c3 <= 4; ++c3)
        for (long t = 0; t <= 6; ++t) {
          laurent lhs, rhs;
          for (long t1 = 0; t1 <= t; ++t1) {
            long t23 = t - t1;
            lhs += (gauss_binomial(c1, t1) * gauss_binomial(c2 + c3, t23))
                       .shifted((c2 - c3) * t1 - c1 * t23);
          }
          for (long t3 = 0; t3 <= t; ++t3) {
            long t12 = t - t3;
            rhs += (gauss_binomial(c1 + c2, t12) * gauss_binomial(c3, t3))
                       .shifted((c2 - c1) * t3 - c3 * t12);
          }
          REQUIRE(lhs == rhs);
        }
}

TEST_CASE("normalized binomial", "[laurent]") {
  qpoly b42 = normalized_binomial(4, 2);
  REQUIRE(b42.coeffs() == std::vector<mpz_class>{1, 1, 2, 1, 1});
  REQUIRE(normalized_binomial(2, 1).coeffs() == std::vector<mpz_class>{1, 1});
  REQUIRE(normalized_binomial(3, 5).is_zero());
  REQUIRE(normalized_binomial(0, 0) == qpoly(1));
  for (long a = 0; a <= 8; ++a)
    for (long n = 0; n <= a; ++n) {
      qpoly p = normalized_binomial(a, n);
      REQUIRE(p.coeff(0) == 1);
      long d = p.degree();
      REQUIRE(d == n * (a - n));
      for (long k = 0; k <= d; ++k) {
        REQUIRE(p.coeff((size_t)k) >= 0);
        REQUIRE(p.coeff((size_t)k) == p.coeff((size_t)(d - k)));
      }
    }
}

TEST_CASE("qpoly conversions", "[laurent]") {
  laurent even = V(4) + laurent::monomial(2, 2) + laurent(1);
  qpoly p = qpoly::from_even_laurent(even, errkind::odd_power, errkind::negative_power);
  REQUIRE(p.coeffs() == std::vector<mpz_class>{1, 2, 1});
  REQUIRE(p.as_laurent_v2() == even);
  try {
    qpoly::from_even_laurent(V(3), errkind::odd_power, errkind::negative_power);
    FAIL("expected a trap");
  } catch (const vocic::error& e) {
    REQUIRE(e.kind == errkind::odd_power);
  }
  try {
    qpoly::from_even_laurent(V(-2), errkind::odd_power, errkind::negative_power);
    FAIL("expected a trap");
  } catch (const vocic::error& e) {
    REQUIRE(e.kind == errkind::negative_power);
  }
  REQUIRE(p.evaluate(3) == 1 + 2 * 3 + 9);
  qpoly prod = p * qpoly(std::vector<mpz_class>{1, 1});
  REQUIRE(prod.coeffs() == std::vector<mpz_class>{1, 3, 3, 1});
  REQUIRE((prod - prod).is_zero());
  REQUIRE(prod.degree() == 3);
}

TEST_CASE("rendering", "[laurent]") {
  REQUIRE((V(4) + laurent(2) + V(-4)).str() == "v^4 + 2 + v^-4");
  REQUIRE((V(1) - V(-1)).str() == "v - v^-1");
  REQUIRE(V(-1).str() == "v^-1");
  REQUIRE(laurent().str() == "0");
  REQUIRE((-V(1) + laurent(1)).str() == "-v + 1");
  REQUIRE(laurent::monomial(2, 3).str() == "2*v^3");
  REQUIRE(laurent::monomial(-2, 3).str() == "-2*v^3");
  REQUIRE(gauss_binomial(4, 2).str() == "v^4 + v^2 + 2 + v^-2 + v^-4");
  REQUIRE(normalized_binomial(4, 2).str() == "1+q+2*q^2+q^3+q^4");
  REQUIRE(qpoly().str() == "0");
  REQUIRE((qpoly(std::vector<mpz_class>{0, 1}) - qpoly(1)).str() == "-1+q");
}

TEST_CASE("lattice helpers", "[laurent]") {
  laurent g = V(-1) - V(1);
  REQUIRE(g.strictly_negative_part() == V(-1));
  REQUIRE(V(-1).in_v_inverse_lattice());
  REQUIRE(laurent().in_v_inverse_lattice());
  REQUIRE(!laurent(1).in_v_inverse_lattice());
  REQUIRE(!(V(-3) + V(2)).in_v_inverse_lattice());
}
