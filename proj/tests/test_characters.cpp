#include <doctest.h>

#include "kronpair/characters.hpp"
#include "kronpair/constructions.hpp"
#include "kronpair/error.hpp"
#include "support.hpp"

using namespace kronpair;
using namespace kptest;

namespace {

LadderCharacter sample_ladder() {
  return LadderCharacter::from_rungs(BigRational(1), {{I(1), A("0")}, {I(2), A("1/2")}, {I(6), A("1/6")}});
}

}  // namespace

TEST_CASE("ladder evaluation") {
  const auto g = sample_ladder();
  CHECK(ladder_evaluate(g, R("5/6")) == A("5/6"));
  CHECK(ladder_evaluate(g, R("1/2")) == A("1/2"));
  CHECK(ladder_evaluate(g, R("7")) == A("0"));
  try {
    ladder_evaluate(g, R("1/5"));
    FAIL("expected LevelNotCovered");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LevelNotCovered);
  }
}

TEST_CASE("ladder extension") {
  const auto g = LadderCharacter::from_rungs(BigRational(1), {{I(1), A("0")}, {I(2), A("1/2")}});
  CHECK(ladder_extend(g, I(6), I(0)).top() == Rung{I(6), A("1/6")});
  CHECK(ladder_extend(g, I(6), I(1)).top() == Rung{I(6), A("1/2")});
  CHECK(ladder_extend(g, I(6), I(2)).top() == Rung{I(6), A("5/6")});
  CHECK(ladder_extend(g, I(2), I(0)) == g);
  CHECK_THROWS_AS(ladder_extend(g, I(5), I(0)), Error);
}

TEST_CASE("inconsistent rungs are rejected") {
  CHECK_THROWS_AS(LadderCharacter::from_rungs(BigRational(1), {{I(1), A("0")}, {I(2), A("1/3")}}), Error);
  CHECK_THROWS_AS(LadderCharacter::from_rungs(BigRational(1), {{I(2), A("0")}}), Error);
  CHECK_THROWS_AS(LadderCharacter::from_rungs(BigRational(1), {{I(1), A("0")}, {I(4), A("1/4")}, {I(6), A("0")}}), Error);
}

TEST_CASE("consistency holds along random extension chains") {
  SeededRng rng{8, 1};
  for (int trial = 0; trial < 50; ++trial) {
    LadderCharacter g = LadderCharacter::generated_by(BigRational(1), rng.angle(12));
    for (int step = 0; step < 4; ++step) {
      const BigInt j(2 + static_cast<long>(rng.below(5)));
      g = g.extended(g.top().level * j, rng.below(j));
    }
    const auto& r = g.rungs();
    for (std::size_t k = 0; k + 1 < r.size(); ++k) {
      const BigInt ratio = r[k + 1].level / r[k].level;
      CHECK(r[k + 1].value.scaled(ratio) == r[k].value);
    }
    // every covered point gives the same value through every rung that covers it
    const BigInt top = g.top().level;
    for (int s = 0; s < 10; ++s) {
      const BigRational x(BigInt(static_cast<long>(rng.below(200))) - 100, top);
      const UnitAngle v = g.evaluate(x);
      const BigInt d = denominator(x);
      for (const auto& rung : r) {
        if (rung.level % d == 0) CHECK(rung.value.scaled((x * BigRational(rung.level)).numerator()) == v);
      }
    }
    CHECK(g.evaluate(BigRational(1)) == r.front().value);
    CHECK(g.truncated(r[1].level).rungs().size() == 2);
  }
}

TEST_CASE("ladders are homomorphisms on their covered group") {
  SeededRng rng{9, 2};
  LadderCharacter g = LadderCharacter::generated_by(R("1/3"), A("2/5"));
  g = g.extended(I(4), I(3)).extended(I(36), I(7));
  for (int i = 0; i < 100; ++i) {
    const BigRational x(BigInt(static_cast<long>(rng.below(400))) - 200, I(108));
    const BigRational y(BigInt(static_cast<long>(rng.below(400))) - 200, I(108));
    CHECK(g.evaluate(x + y) == g.evaluate(x) + g.evaluate(y));
  }
  CHECK(g.evaluate(R("1/3")) == A("2/5"));
}

TEST_CASE("covering extends with K = 0 only where needed") {
  const auto g = LadderCharacter::pinned();
  CHECK(g.covering(R("3")) == g);
  const auto c = g.covering(R("1/6"));
  CHECK(c.covers(R("1/6")));
  CHECK(c.top().level == 6);
  CHECK(c.evaluate(R("1/6")) == A("0"));
}

TEST_CASE("level characters") {
  LevelCharacter c(I(2));
  c = c.extended(I(4), I(1));
  CHECK(c.evaluate(R("1/4")) == A("1/4"));
  CHECK(c.evaluate(R("5/4")) == A("1/4"));
  CHECK_THROWS_AS(c.extended(I(12), I(0)), Error);
  CHECK_THROWS_AS(LevelCharacter(I(6)), Error);
  CHECK(c.covering(R("1/16")).covers(R("1/16")));
}

TEST_CASE("product evaluation") {
  auto a = make_ambient({{0, FactorSignature::cyclic(I(3))}, {1, FactorSignature::cyclic(I(2))}});
  ProductCharacter g;
  g.set_component(0, LadderCharacter::pinned().extended(I(3), I(1)));
  g.set_component(1, LadderCharacter::pinned().extended(I(2), I(1)));
  CHECK(product_evaluate(g, GroupElement(a)) == A("0"));
  CHECK(product_evaluate(g, GroupElement::unit(a, 0, R("1/3"))) == A("1/3"));
  CHECK(product_evaluate(g, GroupElement(a, {{0, R("1/3")}, {1, R("1/2")}})) == A("5/6"));
  ProductCharacter empty;
  CHECK(product_evaluate(empty, GroupElement(a, {{0, R("1/3")}})) == A("0"));
}

TEST_CASE("torus points act through the scale") {
  TorusPoint t{A("1/4"), I(2)};
  CHECK(t.evaluate(R("3/2")) == A("3/4"));
  CHECK_THROWS_AS(t.evaluate(R("1/3")), Error);
}
