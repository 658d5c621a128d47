#include <doctest.h>

#include "growthlab/error.hpp"
#include "growthlab/rational.hpp"
#include "growthlab/rng.hpp"

using namespace growthlab;

TEST_CASE("rational canonical form and printing") {
  CHECK(Rational(2, 4).str() == "1/2");
  CHECK(Rational(-2, 4).str() == "-1/2");
  CHECK(Rational(3, -6).str() == "-1/2");
  CHECK(Rational(0).str() == "0/1");
  CHECK(Rational(7).str() == "7/1");
}

TEST_CASE("rational parsing round trip") {
  for (const char* text : {"0/1", "1/2", "-3/7", "22/7", "5/1"}) {
    CHECK(Rational::parse(text).str() == text);
  }
  CHECK(Rational::parse("4/8") == Rational(1, 2));
  CHECK(Rational::parse("3") == Rational(3));
  CHECK_THROWS_AS(Rational::parse("1/0"), Error);
  CHECK_THROWS_AS(Rational::parse("a/b"), Error);
  CHECK_THROWS_AS(Rational::parse(""), Error);
}

TEST_CASE("arithmetic is exact") {
  Rational third(1, 3);
  CHECK(third + third + third == Rational(1));
  CHECK(Rational(1, 6) + Rational(1, 10) == Rational(4, 15));
  CHECK(Rational::pow2(-3) == Rational(1, 8));
  CHECK(Rational::pow2(5) == Rational(32));
  CHECK(Rational::factorial(5) == Rational(120));
  CHECK(Rational::inv_factorial(4) == Rational(1, 24));
  CHECK(Rational(2, 3).pow(3) == Rational(8, 27));
  CHECK(Rational(2, 3).pow(0) == Rational(1));
}

TEST_CASE("field laws on random values") {
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    auto draw = [&] {
      long long num = static_cast<long long>(rng.below(2000)) - 1000;
      long long den = 1 + static_cast<long long>(rng.below(50));
      return Rational(num, den);
    };
    Rational a = draw(), b = draw(), c = draw();
    CHECK(a + b == b + a);
    CHECK((a + b) + c == a + (b + c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == Rational(0));
    if (!b.is_zero()) CHECK((a / b) * b == a);
  }
}

TEST_CASE("common denominator and integer extraction") {
  Rational q = Rational::common_denominator(
      {Rational(1, 6), Rational(3, 4), Rational(2)});
  CHECK(q == Rational(12));
  CHECK((Rational(3, 4) * q).to_uint64() == 9);
  CHECK_THROWS_AS(Rational(1, 2).to_uint64(), Error);
}
