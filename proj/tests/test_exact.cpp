#include <doctest.h>

#include <cmath>

#include "kronpair/constructions.hpp"
#include "kronpair/error.hpp"
#include "kronpair/exact.hpp"
#include "support.hpp"

using namespace kronpair;
using namespace kptest;

TEST_CASE("denominator of reduced rationals") {
  CHECK(denominator(R("6/4")) == 2);
  CHECK(denominator(BigRational(0)) == 1);
  CHECK(denominator(R("-5/35")) == 7);
  CHECK(R("6/4").to_string() == "3/2");
  CHECK(BigRational(0).to_string() == "0/1");
}

TEST_CASE("rational parsing rejects junk") {
  CHECK(R("-3").to_string() == "-3/1");
  CHECK_THROWS_AS(BigRational::parse("1/0"), Error);
  CHECK_THROWS_AS(BigRational::parse("abc"), Error);
  CHECK_THROWS_AS(BigRational::parse(""), Error);
}

TEST_CASE("unit angles reduce into [0, 1)") {
  CHECK(A("5/4").to_string() == "1/4");
  CHECK(A("-1/4").to_string() == "3/4");
  CHECK((A("3/4") + A("1/2")).to_string() == "1/4");
  CHECK(A("1/3").scaled(I(4)).to_string() == "1/3");
}

TEST_CASE("circular distance") {
  CHECK(circular_distance(A("0"), A("1/2")) == R("1/2"));
  CHECK(circular_distance(A("1/8"), A("7/8")) == R("1/4"));
  CHECK(circular_distance(A("2/7"), A("2/7")) == BigRational(0));
  CHECK(chord_approx(R("1/2")) == doctest::Approx(2.0));
  CHECK(chord_approx(R("1/4")) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("chord_within boundary cases") {
  CHECK_FALSE(chord_within(A("0"), A("1/4"), R("1/4"), true));
  CHECK(chord_within(A("0"), A("1/4"), R("1/4"), false));
  CHECK(chord_within(A("0"), A("1/6"), R("1/4"), true));
  CHECK(chord_within(A("1/12"), A("11/12"), R("1/5"), true));
  CHECK_THROWS_AS(chord_within(A("0"), A("1/6"), R("3/4"), true), Error);
}

TEST_CASE("circular distance agrees with a direct computation on random angles") {
  SeededRng rng{11, 1};
  for (int i = 0; i < 500; ++i) {
    const UnitAngle a = rng.angle(97), b = rng.angle(97);
    const BigRational d = circular_distance(a, b);
    CHECK(d.raw() == oracle_circ(a.turns().raw(), b.turns().raw()));
    CHECK(d == circular_distance(b, a));
    CHECK(d >= BigRational(0));
    CHECK(d <= R("1/2"));
  }
}

TEST_CASE("chord thresholds decide exactly") {
  ChordThreshold one(BigRational(1));
  REQUIRE(one.exact_turns().has_value());
  CHECK(*one.exact_turns() == R("1/6"));
  CHECK_FALSE(one.admits(R("1/6"), true));
  CHECK(one.admits(R("1/6"), false));

  ChordThreshold half(R("1/2"));
  CHECK_FALSE(half.exact_turns().has_value());
  // asin(1/4)/pi = 0.080431...
  CHECK(half.admits(R("8043/100000")));
  CHECK_FALSE(half.admits(R("8044/100000")));

  SeededRng rng{5, 2};
  for (int i = 0; i < 300; ++i) {
    const BigRational d = rng.angle(1000).turns() / BigRational(2);
    const BigRational c(BigInt(1), BigInt(1 + static_cast<long>(rng.below(6))));
    const long double exact = chord_of(static_cast<long double>(d.to_double()));
    const long double bound = static_cast<long double>(c.to_double());
    if (std::fabs(exact - bound) > 1e-12L) CHECK(ChordThreshold(c).admits(d) == (exact < bound));
  }
}
