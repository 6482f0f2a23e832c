#include <doctest.h>

#include <cstdint>
#include <stdexcept>

#include "evograph/rational.hpp"

using evograph::BigRational;
using evograph::Rational;

TEST_SUITE("rational") {
  TEST_CASE("normalises sign and common factors") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(3, -6) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(1, 3).to_string() == "1/3");
    CHECK(Rational(4, 2).to_string() == "2");
  }

  TEST_CASE("arithmetic and ordering") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK_THROWS_AS(Rational(INT64_MAX) * Rational(2), std::overflow_error);
    CHECK_THROWS_AS(Rational::parse("1/x"), std::invalid_argument);
    CHECK_THROWS_AS(Rational::parse(""), std::invalid_argument);
  }

  TEST_CASE("parse round trip") {
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("5") == Rational(5));
    CHECK(Rational::parse(Rational(-7, 9).to_string()) == Rational(-7, 9));
  }

  TEST_CASE("exact doubles") {
    CHECK(evograph::exact_rational(0.5) == BigRational(1, 2));
    CHECK(evograph::exact_rational(0.1) != BigRational(1, 10));
    CHECK(evograph::exact_rational(0.1).get_d() == 0.1);
    CHECK(evograph::to_big(Rational(3, 8)) == BigRational(3, 8));
    CHECK_THROWS(evograph::exact_rational(1.0 / 0.0));
  }

  TEST_CASE("binomial conventions") {
    using evograph::binomial;
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(0, 0) == 1);
    CHECK(binomial(-1, 0) == 1);
    CHECK(binomial(-3, 0) == 1);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(4, -1) == 0);
    CHECK(binomial(-1, -1) == 0);
    CHECK_THROWS_AS(binomial(-2, 1), std::domain_error);
    CHECK(binomial(100, 50) == mpz_class("100891344545564193334812497256"));
    // Pascal's rule over a block of the table.
    for (long n = 1; n < 40; ++n) {
      for (long k = 1; k <= n; ++k) CHECK(binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k));
    }
  }
}
