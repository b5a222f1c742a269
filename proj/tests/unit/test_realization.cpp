#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "isocirc/realization.hpp"

using namespace isocirc;

namespace {

ExactRational q(long a, long b) {
  ExactRational r(a, b);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("exact ord3") {
  CHECK(ord3_exact(q(0, 1), q(1, 4), q(1, 2)) == 1);
  CHECK(ord3_exact(q(0, 1), q(1, 2), q(1, 4)) == -1);
  CHECK(ord3_exact(q(3, 4), q(5, 4), q(3, 2)) == 1);  // 3/4, 1/4, 1/2 mod 1
  CHECK(ord3_exact(q(1, 3), q(4, 3), q(1, 2)) == 0);
}

TEST_CASE("midpoint placement") {
  const Group g(GroupSpec::parse("0,2,2,3"));
  const ExactRational x0 = q(1, 8);

  FiniteOrderTable two({g.identity(), g.e(1)});
  auto iota = realize(two, x0);
  REQUIRE(iota.size() == 2);
  CHECK(iota[0] == x0);
  CHECK(iota[1] == q(5, 8));

  for (int sign : {1, -1}) {
    FiniteOrderTable three({g.identity(), g.e(1), g.e(2)});
    three.set(0, 1, 2, sign);
    CHECK(three.value(1, 0, 2) == -sign);
    CHECK(three.value(2, 0, 1) == sign);
    iota = realize(three, x0);
    // counterclockwise (x0, x0 + 1/2, iota(g2)) puts g2 on the far half
    CHECK(iota[2] == (sign > 0 ? q(7, 8) : q(3, 8)));
    CHECK(ord3_exact(iota[0], iota[1], iota[2]) == sign);
  }
}

TEST_CASE("tables that are not circular orders are rejected with the failing index") {
  const Group g(GroupSpec::parse("0,2,2,3"));
  FiniteOrderTable t({g.identity(), g.e(1), g.e(2), g.e(2, 2)});
  t.set(0, 1, 2, 1);
  t.set(0, 1, 3, 1);
  t.set(0, 2, 3, 1);
  t.set(1, 2, 3, -1);  // 3 would sit after 2 seen from 0 but before 2 seen from 1
  try {
    realize(t, q(0, 1));
    FAIL("expected a RealizationError");
  } catch (const RealizationError& e) {
    CHECK(e.index() == 3);
  }
  CHECK_THROWS_AS(FiniteOrderTable({g.e(1)}), std::invalid_argument);
  CHECK_THROWS_AS(t.set(2, 1, 3, 1), std::invalid_argument);
}

TEST_CASE("breadth-first enumeration") {
  const Group g(GroupSpec::parse("1,1,2"));
  const auto els = enumerate_elements(g, 40);
  REQUIRE(els.size() == 40);
  CHECK(els[0].is_identity());
  // letters order: e1, h1, h1^-1, h2, h2^-1 (e1 is its own inverse)
  CHECK(els[1] == g.e(1));
  CHECK(els[2] == g.h(1));
  CHECK(els[3] == g.h(1, -1));
  std::set<Word> distinct(els.begin(), els.end());
  CHECK(distinct.size() == els.size());
  // lengths never decrease along the enumeration
  for (std::size_t i = 1; i < els.size(); ++i) {
    auto len = [](const Word& w) {
      std::int64_t n = 0;
      for (const auto& s : w.syllables()) n += s.gen.kind == GenKind::H ? std::abs(s.exp) : 1;
      return n;
    };
    CHECK(len(els[i - 1]) <= len(els[i]));
  }
}

TEST_CASE("round trip reproduces the order") {
  for (long d : {1L, 7L}) {
    const OrderHandle h = fixtures::order("0,2,2,3", d);
    const RoundtripReport r = roundtrip(h, 30, 2);
    CHECK(r.triples == 30 * 29 * 28 / 6);
    CHECK_MESSAGE(r.mismatches == 0, r.render());
    CHECK(r.dyadic);
    CHECK(r.angles.size() == 30);
  }
  const OrderHandle h = fixtures::order("1,1,2", 5);
  CHECK(roundtrip(h, 2).mismatches == 0);
  CHECK_THROWS_AS(roundtrip(h, 0), std::invalid_argument);
}

TEST_CASE("tables from an order are consistent with direct evaluation") {
  const OrderHandle h = fixtures::order("1,1,2", 1);
  const auto els = enumerate_elements(h.group(), 12);
  const auto t1 = FiniteOrderTable::from_order(h, els, 1);
  const auto t3 = FiniteOrderTable::from_order(h, els, 3);
  for (std::size_t i = 0; i < els.size(); ++i)
    for (std::size_t j = 0; j < els.size(); ++j)
      for (std::size_t k = 0; k < els.size(); ++k) {
        CHECK(t1.value(i, j, k) == t3.value(i, j, k));
        if (i < j && j < k) CHECK(t1.value(i, j, k) == eval_c(h, els[i], els[j], els[k]));
      }
}
