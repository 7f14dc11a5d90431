#include <doctest.h>

#include "kronpair/constructions.hpp"
#include "kronpair/error.hpp"
#include "kronpair/groups.hpp"
#include "support.hpp"

using namespace kronpair;
using namespace kptest;

namespace {

AmbientPtr mixed() {
  return make_ambient({{0, FactorSignature::rationals()},
                       {1, FactorSignature::prufer(I(2))},
                       {2, FactorSignature::cyclic(I(5))},
                       {3, FactorSignature::cyclic(I(3))}});
}

GroupElement random_element(const AmbientPtr& a, SeededRng& rng) {
  std::vector<Coordinate> c;
  if (rng.below(2)) c.emplace_back(0, BigRational(BigInt(static_cast<long>(rng.below(41)) - 20), BigInt(1 + static_cast<long>(rng.below(6)))));
  if (rng.below(2)) c.emplace_back(1, BigRational(BigInt(static_cast<long>(rng.below(16))), BigInt(16)));
  if (rng.below(2)) c.emplace_back(2, BigRational(BigInt(static_cast<long>(rng.below(5))), BigInt(5)));
  if (rng.below(2)) c.emplace_back(3, BigRational(BigInt(static_cast<long>(rng.below(3))), BigInt(3)));
  return GroupElement(a, std::move(c));
}

}  // namespace

TEST_CASE("factor signatures validate coordinates") {
  const auto p2 = FactorSignature::prufer(I(2));
  CHECK(p2.normalize(R("5/4")) == R("1/4"));
  CHECK_THROWS_AS(p2.normalize(R("1/3")), Error);
  const auto z6 = FactorSignature::cyclic(I(6));
  CHECK(z6.normalize(R("-1/3")) == R("2/3"));
  CHECK_THROWS_AS(z6.normalize(R("1/4")), Error);
  CHECK_THROWS_AS(FactorSignature::prufer(I(4)), Error);
  CHECK_THROWS_AS(FactorSignature::cyclic(I(1)), Error);
}

TEST_CASE("projection") {
  auto a = make_ambient({}, FactorSignature::rationals());
  const GroupElement x(a, {{2, R("3/5")}});
  CHECK(project(x, 2) == R("3/5"));
  CHECK(project(x, 7) == BigRational(0));
  CHECK(project(x - x, 2) == BigRational(0));
}

TEST_CASE("addition on mixed factors") {
  auto a = make_ambient({{1, FactorSignature::prufer(I(2))}, {2, FactorSignature::cyclic(I(5))}},
                        FactorSignature::cyclic(I(3)));
  const GroupElement h = GroupElement::unit(a, 1, R("1/2"));
  CHECK((h + h).is_zero());
  const GroupElement x(a, {{3, R("2/3")}}), y(a, {{2, R("1/5")}});
  const GroupElement s = x + y;
  REQUIRE(s.support().size() == 2);
  CHECK(s.support()[0] == Coordinate{2, R("1/5")});
  CHECK(s.support()[1] == Coordinate{3, R("2/3")});
  CHECK((x + negate(x)).is_zero());
  CHECK_THROWS_AS(GroupElement(a, {{3, R("1/3")}, {3, R("2/3")}}), Error);
}

TEST_CASE("group laws on random elements") {
  const auto a = mixed();
  SeededRng rng{3, 3};
  for (int i = 0; i < 200; ++i) {
    const GroupElement x = random_element(a, rng), y = random_element(a, rng), z = random_element(a, rng);
    CHECK(x + y == y + x);
    CHECK((x + y) + z == x + (y + z));
    CHECK((x - x).is_zero());
    CHECK(x - y == x + negate(y));
    CHECK(x.scaled(I(3)) == x + x + x);
    for (FactorIndex k = 0; k < 4; ++k) {
      const BigRational expect = a->factor(k).normalize(project(x, k) + project(y, k));
      CHECK(project(x + y, k) == expect);
    }
  }
}

TEST_CASE("element orders") {
  auto a = make_ambient({{0, FactorSignature::rationals()}, {1, FactorSignature::prufer(I(2))},
                         {2, FactorSignature::cyclic(I(3))}});
  CHECK(*element_order(GroupElement::unit(a, 1, R("1/2"))).finite == 2);
  CHECK(element_order(GroupElement::unit(a, 0, R("3/2"))).infinite());
  CHECK(*element_order(GroupElement(a, {{1, R("1/2")}, {2, R("1/3")}})).finite == 6);
  CHECK(*element_order(GroupElement(a)).finite == 1);
  CHECK(element_order(GroupElement(a, {{1, R("1/4")}})).at_least(I(4)));
  CHECK_FALSE(element_order(GroupElement(a, {{1, R("1/4")}})).at_least(I(5)));
}

TEST_CASE("order annihilates random torsion elements") {
  const auto a = make_ambient({{1, FactorSignature::prufer(I(2))}, {2, FactorSignature::cyclic(I(5))},
                               {3, FactorSignature::cyclic(I(3))}});
  SeededRng rng{4, 4};
  for (int i = 0; i < 100; ++i) {
    std::vector<Coordinate> c{{1, BigRational(BigInt(static_cast<long>(rng.below(16))), BigInt(16))},
                              {2, BigRational(BigInt(static_cast<long>(rng.below(5))), BigInt(5))},
                              {3, BigRational(BigInt(static_cast<long>(rng.below(3))), BigInt(3))}};
    const GroupElement x(a, c);
    const BigInt n = *element_order(x).finite;
    CHECK(x.scaled(n).is_zero());
    for (BigInt k = 1; k < n; ++k) CHECK_FALSE(x.scaled(k).is_zero());
  }
}

TEST_CASE("difference stream") {
  const auto a = integers();
  const auto f = ElementStream::from_list(a, {Z(a, 0), Z(a, 1), Z(a, 3)});
  std::vector<std::string> got;
  for (const auto& d : difference_stream(f, 3)) got.push_back(project(d.value, 0).to_string());
  CHECK(got == std::vector<std::string>{"1/1", "-1/1", "3/1", "-3/1", "2/1", "-2/1"});

  CHECK(difference_stream(ElementStream::from_list(a, {Z(a, 5)}), 10).empty());

  const auto g = geometric_stream(a, 0, I(3));
  bool six = false;
  for (const auto& d : difference_stream(g, 4)) six = six || d.value == Z(a, 6);
  CHECK(six);
}

TEST_CASE("difference sweep flags repeats and skips zero") {
  const auto a = integers();
  const auto f = ElementStream::from_list(a, {Z(a, 0), Z(a, 1), Z(a, 2)});
  std::size_t dup = 0;
  for (const auto& d : difference_stream(f, 3)) {
    CHECK_FALSE(d.value.is_zero());
    dup += d.duplicate ? 1 : 0;
  }
  CHECK(dup > 0);
}

TEST_CASE("triple sums") {
  const auto a = integers();
  const auto t = triple_sum_contains(ElementStream::from_list(a, {Z(a, 1), Z(a, 3), Z(a, 9)}), Z(a, 11), 3);
  CHECK(t.f1 + t.f2 - t.f3 == Z(a, 11));
  CHECK(((t.f1 == Z(a, 3) && t.f2 == Z(a, 9)) || (t.f1 == Z(a, 9) && t.f2 == Z(a, 3))));
  CHECK(t.f3 == Z(a, 1));
  const auto u = triple_sum_contains(ElementStream::from_list(a, {Z(a, 1)}), Z(a, 1), 1);
  CHECK(u.f1 == Z(a, 1));
  try {
    triple_sum_contains(ElementStream::from_list(a, {Z(a, 2), Z(a, 4)}), Z(a, 3), 2);
    FAIL("expected BudgetExhausted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BudgetExhausted);
  }
}

TEST_CASE("named streams") {
  const auto a = integers();
  CHECK(geometric_stream(a, 0, I(3)).prefix(3) == std::vector<GroupElement>{Z(a, 3), Z(a, 9), Z(a, 27)});
  CHECK(naturals_stream(a, 0).prefix(3) == std::vector<GroupElement>{Z(a, 0), Z(a, 1), Z(a, 2)});
  CHECK(nth_prime(0) == 2);
  CHECK(nth_prime(9) == 29);
  const auto pr = prime_reciprocal_stream(a, 0).prefix(3);
  CHECK(project(pr[2], 0) == R("1/5"));
  auto g = make_ambient({}, FactorSignature::cyclic(I(2)));
  const auto u = unit_generator_stream(g).prefix(2);
  CHECK(u[1] == GroupElement::unit(g, 1, R("1/2")));
  auto p = make_ambient({{0, FactorSignature::prufer(I(2))}});
  CHECK(project(prime_power_reciprocal_stream(p, 0, I(2)).prefix(3)[2], 0) == R("1/8"));
}
