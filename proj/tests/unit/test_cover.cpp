#include <doctest.h>

#include <numeric>

#include "fixtures.hpp"
#include "isocirc/cover.hpp"

using namespace isocirc;

namespace {

struct Brute {
  long d;
  std::vector<long> lifts;
  long num;
};

// Direct scan over d = M a + 1 with plain divisibility and gcd.
std::vector<Brute> brute_force(const GroupSpec& spec, std::size_t count) {
  std::vector<Brute> out;
  const long M = spec.torsion_product();
  for (long a = 0; out.size() < count; ++a) {
    const long d = M * a + 1;
    Brute b{d, {}, 2L * spec.n - 1 + spec.k()};
    bool ok = true;
    if (d > 1) {
      for (int m : spec.m) {
        long i = 0;
        while (i < d && (m * i + 1) % d != 0) ++i;
        if (i == d) {
          ok = false;
          break;
        }
        b.lifts.push_back(i);
        b.num += i;
      }
    }
    if (ok && std::gcd(b.num, d) == 1) out.push_back(b);
  }
  return out;
}

}  // namespace

TEST_CASE("first valid degrees for (0,2,(2,3))") {
  const auto found = search_valid_d(GroupSpec::parse("0,2,2,3"), 3);
  REQUIRE(found.size() == 3);
  CHECK(found[0].d == 1);
  CHECK(found[0].lifts.empty());
  CHECK(found[0].rot_alpha == 1);
  CHECK(found[1].d == 7);
  CHECK(found[1].lifts == std::vector<long>{3, 2});
  CHECK(found[1].rot_alpha == ExactRational(6, 7));
  CHECK(found[2].d == 13);
  CHECK(found[2].lifts == std::vector<long>{6, 4});
  CHECK(found[2].rot_alpha == ExactRational(11, 13));
}

TEST_CASE("degree search agrees with a brute-force scan") {
  for (const char* s : {"0,2,2,3", "1,1,2", "0,3,2,2,2", "1,2,2,3", "0,2,3,4", "2,1,5"}) {
    const auto spec = GroupSpec::parse(s);
    const auto found = search_valid_d(spec, 12);
    const auto expect = brute_force(spec, 12);
    REQUIRE(found.size() == expect.size());
    for (std::size_t i = 0; i < found.size(); ++i) {
      CHECK_MESSAGE(found[i].d == expect[i].d, s);
      CHECK(found[i].lifts == expect[i].lifts);
      ExactRational r(expect[i].num, expect[i].d);
      r.canonicalize();
      CHECK(found[i].rot_alpha == r);
      CHECK(found[i].alpha_numerator(spec) == expect[i].num);
    }
  }
}

TEST_CASE("first nontrivial degrees of the other standard specs") {
  CHECK(search_valid_d(GroupSpec::parse("1,1,2"), 3)[1].d == 5);
  CHECK(search_valid_d(GroupSpec::parse("1,1,2"), 3)[2].d == 7);
  CHECK(search_valid_d(GroupSpec::parse("0,3,2,2,2"), 3)[1].d == 9);
  CHECK(search_valid_d(GroupSpec::parse("0,3,2,2,2"), 3)[2].d == 17);
}

TEST_CASE("degree search is independent of the job count and respects the cap") {
  const auto spec = GroupSpec::parse("0,3,2,2,2");
  const auto a = search_valid_d(spec, 40, 10000, 1);
  const auto b = search_valid_d(spec, 40, 10000, 3);
  CHECK(a == b);
  CHECK_THROWS_AS(search_valid_d(spec, 1000, 5), std::runtime_error);
  CHECK_THROWS_AS(search_valid_d(GroupSpec::parse("0,2,2,2"), 1), std::invalid_argument);
}

TEST_CASE("cover data validation") {
  const auto spec = GroupSpec::parse("0,2,2,3");
  auto c = fixtures::datum("0,2,2,3", 7);
  CHECK_NOTHROW(validate_cover(spec, c));
  c.lifts[0] = 4;
  CHECK_THROWS_AS(validate_cover(spec, c), std::invalid_argument);
  // (1,1,(2)) at d = 3: i = 1 and the alpha numerator 2 - 1 + 1 + 1 = 3 shares a factor with d
  CHECK_FALSE(cover_datum(GroupSpec::parse("1,1,2"), 1).has_value());
  CHECK(cover_datum(GroupSpec::parse("1,1,2"), 2)->d == 5);
}

TEST_CASE("Np0 - p1 witnesses") {
  CHECK(np0_minus_p1(GroupSpec::parse("0,2,2,3")) == 1);
  CHECK(np0_minus_p1(GroupSpec::parse("0,2,2,2")) == 0);
  CHECK(np0_minus_p1(GroupSpec::parse("1,1,2")) == 3);
  // exact-rational oracle: N p0 - p1 = p0 (N - sum 1/m_i)
  for (int n = 0; n <= 2; ++n)
    for (int m1 = 2; m1 <= 5; ++m1)
      for (int m2 = 2; m2 <= 5; ++m2) {
        GroupSpec s{n, {m1, m2}};
        ExactRational v = ExactRational(s.k() + 2 * n - 1) - ExactRational(1, m1) - ExactRational(1, m2);
        v *= m1 * m2;
        CHECK(v == ExactRational(np0_minus_p1(s)));
      }
}

TEST_CASE("e_l^{m_l} lifts to translation by one turn of the cover") {
  for (const auto& [spec, d] : std::vector<std::pair<std::string, long>>{{"0,2,2,3", 1}, {"0,2,2,3", 7}, {"0,2,2,3", 13}, {"1,1,2", 5}}) {
    const auto cfg = fixtures::config(spec);
    const auto datum = fixtures::datum(spec, d);
    const Group& g = cfg->group();
    for (int l = 1; l <= g.k(); ++l) {
      const LiftedMap lm = lift_generator(*cfg, datum, {GenKind::E, l});
      CHECK(lm.translation_number == ExactRational(1, g.order_of(l)));
      for (const auto& y0 : {ExactRational(1, 3), ExactRational(-5, 7), ExactRational(11, 4)}) {
        Ball y = Ball::from_rational(y0, 128);
        for (int i = 0; i < g.order_of(l); ++i) y = evaluate_lift(*cfg, datum, g.e(l), y);
        const Ball expect = Ball::from_rational(y0 + d, 128);
        const Ball diff = abs(y - expect);
        CHECK(compare(diff, Ball::from_rational(ExactRational(1, 1L << 40), 128)) == std::optional<int>(-1));
      }
    }
    // identity lift is the identity
    const Ball y = Ball::from_rational(ExactRational(2, 9), 128);
    CHECK(compare(abs(evaluate_lift(*cfg, datum, g.identity(), y) - y), Ball::from_rational(ExactRational(1, 1L << 60), 128)) ==
          std::optional<int>(-1));
  }
}

TEST_CASE("orbit-tracked rotation number of alpha equals the formula") {
  for (const auto& [spec, d] : std::vector<std::pair<std::string, long>>{
           {"0,2,2,3", 1}, {"0,2,2,3", 7}, {"0,2,2,3", 13}, {"1,1,2", 1}, {"1,1,2", 5}, {"0,3,2,2,2", 9}}) {
    const auto cfg = fixtures::config(spec);
    const auto datum = fixtures::datum(spec, d);
    const OrbitRotation r = orbit_rotation_number(*cfg, datum);
    CHECK_MESSAGE(r.certified, spec << " d=" << d);
    CHECK(r.value == datum.rot_alpha);
  }
}

TEST_CASE("gap orbit") {
  for (long d : {1L, 7L, 13L}) {
    const CheckReport r = gap_orbit_check(*fixtures::config("0,2,2,3"), fixtures::datum("0,2,2,3", d), {});
    CHECK_MESSAGE(r.passed(), r.render(true));
    CHECK(r.lines.size() == static_cast<std::size_t>(3 + d - 1));
  }
}
