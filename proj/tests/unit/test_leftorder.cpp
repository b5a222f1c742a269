#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "isocirc/leftorder.hpp"

using namespace isocirc;

namespace {

HatWord raw(const Group& g, std::initializer_list<Syllable> s, std::int64_t z = 0) {
  return hat_reduce(g, std::vector<Syllable>(s), z);
}

constexpr Gen E1{GenKind::E, 1}, E2{GenKind::E, 2}, H1{GenKind::H, 1}, H2{GenKind::H, 2};

}  // namespace

TEST_CASE("extension word arithmetic") {
  const Group g(GroupSpec::parse("1,2,2,3"));
  CHECK(raw(g, {{E1, 2}}) == HatWord{g.identity(), 1});
  CHECK(raw(g, {{E1, 3}}) == HatWord{g.e(1), 1});
  CHECK(raw(g, {{E1, -1}}) == HatWord{g.e(1), -1});
  CHECK(raw(g, {{E2, 7}}) == HatWord{g.e(2), 2});
  // h1 z h1^-1 = z
  const HatWord h1 = hat_gen(g, H1);
  CHECK(hat_multiply(g, hat_multiply(g, h1, hat_central(1)), hat_invert(g, h1)) == hat_central(1));
  // carries propagate through cancellation: e1 h1 h1^-1 e1 = z
  CHECK(raw(g, {{E1, 1}, {H1, 1}, {H1, -1}, {E1, 1}}) == hat_central(1));
  CHECK(hat_power(g, hat_gen(g, E2), 3) == hat_central(1));
  CHECK(hat_power(g, hat_gen(g, E2), -3) == hat_central(-1));
  CHECK(format_hat(g, raw(g, {{E1, 1}, {H2, -2}}, 3)) == "e1 h2^-2 z^3");
  CHECK(format_hat(g, hat_central(1)) == "z");
  CHECK(format_hat(g, HatWord{g.identity(), 0}) == "1");
  CHECK_THROWS_AS(raw(g, {{H2, 1}, {{GenKind::H, 3}, 1}}), std::out_of_range);
}

TEST_CASE("extension group laws and the projection homomorphism") {
  const Group g(GroupSpec::parse("1,2,2,3"));
  std::mt19937_64 rng(8);
  const auto words = random_hat_words(g, 300, 21);
  for (std::size_t i = 0; i + 2 < words.size(); i += 3) {
    const HatWord &a = words[i], &b = words[i + 1], &c = words[i + 2];
    CHECK(hat_multiply(g, hat_multiply(g, a, b), c) == hat_multiply(g, a, hat_multiply(g, b, c)));
    CHECK(hat_multiply(g, a, hat_invert(g, a)) == HatWord{g.identity(), 0});
    CHECK(hat_multiply(g, hat_invert(g, a), a) == HatWord{g.identity(), 0});
    CHECK(hat_multiply(g, a, b).base == g.multiply(a.base, b.base));
    // z is central
    CHECK(hat_multiply(g, a, hat_central(2)) == hat_multiply(g, hat_central(2), a));
  }
}

TEST_CASE("lifted actions compose with the carry") {
  // lift(a) o lift(b) = lift(base(ab)) + d * carry, in base units
  for (long d : {1L, 7L}) {
    const OrderHandle h = fixtures::order("0,2,2,3", d);
    const Configuration& c = h.config();
    const Group& g = h.group();
    const auto words = random_hat_words(g, 120, 3, 6, 0);
    const auto shifts = h.shifts();
    for (std::size_t i = 0; i + 1 < words.size(); i += 2) {
      const HatWord prod = hat_multiply(g, words[i], words[i + 1]);
      const Ball y = Ball::from_rational(ExactRational(1, 5), 192);
      const Ball composed = c.lift(words[i].base, c.lift(words[i + 1].base, y, shifts), shifts);
      const Ball direct = c.lift(prod.base, y, shifts) + static_cast<long>(d * prod.z_exp);
      CHECK(compare(abs(composed - direct), Ball::from_rational(ExactRational(1, 1L << 50), 192)) ==
            std::optional<int>(-1));
    }
  }
}

TEST_CASE("basic comparisons and cofinal bounds") {
  const LeftOrderHandle h(fixtures::order("0,2,2,3", 7));
  const Group& g = h.group();
  const HatWord one{g.identity(), 0};
  CHECK(hat_compare(h, one, hat_central(1)) == Order::Less);
  CHECK(hat_compare(h, hat_central(1), one) == Order::Greater);
  CHECK(hat_compare(h, hat_gen(g, E1, 2), hat_central(1)) == Order::Equal);
  const auto b5 = cofinal_bounds(h, hat_central(5));
  CHECK(b5.low == 4);
  CHECK(b5.high == 6);
  const auto b0 = cofinal_bounds(h, one);
  CHECK(b0.low == -1);
  CHECK(b0.high == 1);
  for (const auto& w : random_hat_words(g, 100, 4)) {
    CHECK(hat_compare(h, w, hat_multiply(g, w, hat_central(1))) == Order::Less);
    const auto b = cofinal_bounds(h, w);
    CHECK(hat_compare(h, hat_central(b.low), w) == Order::Less);
    CHECK(hat_compare(h, w, hat_central(b.high)) == Order::Less);
  }
}

TEST_CASE("cofinal bounds of e1 h1 in (1,1,(2))") {
  const LeftOrderHandle h(fixtures::order("1,1,2", 1));
  const Group& g = h.group();
  const HatWord w = hat_multiply(g, hat_gen(g, E1), hat_gen(g, H1));
  const auto b = cofinal_bounds(h, w);
  CHECK(b.high - b.low == 1);
  // the position lies strictly between the bounds
  const Ball p = h.position(w, 128) - Ball::from_rational(h.basepoint(), 128);
  CHECK(compare(Ball(b.low, 128), p) == std::optional<int>(-1));
  CHECK(compare(p, Ball(b.high, 128)) == std::optional<int>(-1));
}

TEST_CASE("window lifts are unique") {
  const LeftOrderHandle h(fixtures::order("1,1,2", 5));
  const Group& g = h.group();
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const Word w = g.random_word(rng, 8);
    const HatWord l = window_lift(h, w);
    const HatWord one{g.identity(), 0};
    // 1 <= l < z and the neighbours fall outside
    CHECK(hat_compare(h, one, l) != Order::Greater);
    CHECK(hat_compare(h, l, hat_central(1)) == Order::Less);
    CHECK(hat_compare(h, hat_multiply(g, l, hat_central(-1)), one) == Order::Less);
    CHECK(hat_compare(h, hat_multiply(g, l, hat_central(1)), hat_central(1)) != Order::Less);
  }
}

TEST_CASE("projection recovers the circular order") {
  for (long d : {1L, 7L}) {
    const LeftOrderHandle h(fixtures::order("0,2,2,3", d));
    const Group& g = h.group();
    std::mt19937_64 rng(31);
    CHECK(project_order(h, g.e(1), g.e(1), g.e(2)) == 0);
    for (int i = 0; i < 150; ++i) {
      const Word a = g.random_word(rng, 8), b = g.random_word(rng, 8), c = g.random_word(rng, 8);
      CHECK(project_order(h, a, b, c) == eval_c(h.circular(), a, b, c));
    }
  }
}

TEST_CASE("left-order suite") {
  for (const auto& [spec, d] : std::vector<std::pair<std::string, long>>{{"0,2,2,3", 7}, {"1,1,2", 1}}) {
    const LeftOrderHandle h(fixtures::order(spec, d));
    const LeftOrderReport r = check_left_order(h, 120, 77, 2);
    CHECK_MESSAGE(r.violations() == 0, spec << "\n" << r.render());
    CHECK(r.inconclusive == 0);
  }
}

TEST_CASE("automorphism compatibility") {
  const LeftOrderHandle h(fixtures::order("0,2,2,3", 1));
  const Group& g = h.group();
  std::vector<std::array<Word, 3>> sample;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 80; ++i) sample.push_back({g.random_word(rng, 6), g.random_word(rng, 6), g.random_word(rng, 6)});

  CHECK(automorphism_compat_check(h, HatMap::identity(g), HatMap::identity(g), sample).mismatches == 0);
  const HatWord e1 = hat_gen(g, E1);
  const HatMap inner = HatMap::inner(g, e1);
  CHECK(inner.center_sign(g) == 1);
  const CompatReport r = automorphism_compat_check(h, inner, HatMap::inner(g, hat_invert(g, e1)), sample);
  CHECK_MESSAGE(r.mismatches == 0, r.render());
  CHECK(r.triples == sample.size());

  // e1 -> e1^-1, e2 -> e2^-1 sends z to z^-1; the supplied inverse must be the same map
  HatMap flip{{hat_gen(g, E1, -1), hat_gen(g, E2, -1)}, {}};
  CHECK(flip.center_sign(g) == -1);
  CHECK_THROWS_AS(automorphism_compat_check(h, flip, HatMap::identity(g), sample), std::invalid_argument);
  // a map that does not preserve the center
  HatMap broken{{hat_gen(g, E1), hat_gen(g, E1)}, {}};
  CHECK(broken.center_sign(g) == 0);
  CHECK_THROWS_AS(automorphism_compat_check(h, broken, broken, sample), std::invalid_argument);
}
