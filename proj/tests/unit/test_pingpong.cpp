#include <doctest.h>

#include <map>
#include <random>

#include "isocirc/pingpong.hpp"

using namespace isocirc;

namespace {

const Configuration& built(const std::string& spec) {
  static std::map<std::string, Configuration> cache;
  auto it = cache.find(spec);
  if (it == cache.end()) it = cache.emplace(spec, Configuration::build(GroupSpec::parse(spec))).first;
  return it->second;
}

PointLabel orbit_label(const Configuration& c, const OrbitPoint& p) {
  const Group& g = c.group();
  Word w = g.multiply(c.basis().expand(p.word), coset_representative(g, p.tuple));
  return translate(g, w, c.basepoint());
}

OrbitPoint random_orbit_point(std::mt19937_64& rng, const Configuration& c, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::uint32_t> gen(0, static_cast<std::uint32_t>(c.basis().size() - 1));
  std::bernoulli_distribution sign;
  OrbitPoint p;
  const int n = len(rng);
  while (static_cast<int>(p.word.size()) < n) {
    SLetter l{gen(rng), sign(rng) ? 1 : -1};
    if (!p.word.empty() && p.word.back().index == l.index && p.word.back().sign == -l.sign) continue;
    p.word.push_back(l);
  }
  auto tuples = all_coset_tuples(c.spec());
  std::uniform_int_distribution<std::size_t> pick(0, tuples.size() - 1);
  p.tuple = tuples[pick(rng)];
  return p;
}

}  // namespace

TEST_CASE("configurations certify for the standard specs") {
  for (const char* s : {"0,2,2,3", "1,1,2", "0,3,2,2,2", "1,2,2,3"}) {
    const Configuration& c = built(s);
    CHECK_MESSAGE(c.verified(), s);
    for (const auto& r : c.reports()) {
      CHECK_MESSAGE(r.passed(), r.render());
      CHECK(r.count(CertStatus::Inconclusive) == 0);
    }
    CHECK(c.domains().size() == 2 * c.basis().size());
    CHECK(c.epsilon() > 0);
  }
}

TEST_CASE("excluded specs are rejected") {
  CHECK_THROWS_AS(Configuration::build(GroupSpec::parse("0,2,2,2")), std::invalid_argument);
  CHECK_THROWS_AS(Configuration::build(GroupSpec::parse("0,1,5")), std::invalid_argument);
}

TEST_CASE("named intervals") {
  const Configuration& c = built("1,1,2");
  const Group& g = c.group();
  auto jk = c.interval_J(1);
  CHECK(jk.right == label_of(MarkedPoint{MarkedKind::PlusPoint, 1}, g.h(1)));
  CHECK(jk.left == label_of(MarkedPoint{MarkedKind::ElementPoint, 1}, g.e(1, -1)));
  CHECK_THROWS(c.interval_J(2));
  auto k2 = c.interval_K(2, -1);
  CHECK(k2.right == c.basepoint());
  auto jh = c.interval_Jh(1, 1);
  CHECK(jh.left == label_of(MarkedPoint{MarkedKind::PlusPoint, 1}, g.h(1)));
  CHECK(jh.right == label_of(MarkedPoint{MarkedKind::MinusPoint, 1}, g.h(1)));
  CHECK(c.interval_J(0).left == c.interval_K(2, -1).left);

  const Configuration& c2 = built("0,2,2,3");
  const Group& g2 = c2.group();
  auto jl = c2.interval_Jlambda(2, {1, 1}, -1);
  CHECK(jl.left == label_of(MarkedPoint{MarkedKind::ElementPoint, 2}, g2.e(1)));
  CHECK(jl.right == label_of(MarkedPoint{MarkedKind::ElementPoint, 2}, g2.multiply(g2.e(1), g2.e(2))));
  CHECK_THROWS(c2.interval_Jlambda(2, {2, 1}, 1));  // prefix is all-max
  CHECK_THROWS(c2.interval_Jlambda(2, {1, 3}, 1));  // u_t = m_t
  // n = 0: J_0 is J_k, whose right end is x_e1
  CHECK(c2.interval_J(0).right == c2.basepoint());
}

TEST_CASE("generator lifts project to the boundary action") {
  std::mt19937_64 rng(5);
  for (const char* s : {"0,2,2,3", "1,1,2"}) {
    const Configuration& c = built(s);
    for (int it = 0; it < 40; ++it) {
      Word w = c.group().random_word(rng, 6);
      Ball x = Ball::from_rational(rational(static_cast<long>(rng() % 997), 997), 128);
      Ball lifted = reduce_angle(c.lift(w, x));
      Ball direct = act(c.image(w, 128), x);
      Ball d = lifted - direct;
      Ball half = Ball::from_rational(rational(1, 2), 128);
      CHECK((d - (d + half).floor_of_mid()).contains_zero());
    }
  }
}

TEST_CASE("verdicts are stable at doubled precision") {
  const Configuration& c = built("0,3,2,2,2");
  PrecisionPolicy doubled{2 * c.precision().start_bits, c.precision().cap_bits};
  auto a = c.check_intersections(c.precision());
  auto b = c.check_intersections(doubled);
  REQUIRE(a.lines.size() == b.lines.size());
  for (std::size_t i = 0; i < a.lines.size(); ++i) CHECK(a.lines[i].ok == b.lines[i].ok);
  CHECK(c.check_pingpong(doubled).passed());
  CHECK(c.check_gap(doubled).passed());
}

TEST_CASE("parallel checks match sequential ones") {
  const Configuration& c = built("1,2,2,3");
  auto a = c.check_pingpong(c.precision(), 1);
  auto b = c.check_pingpong(c.precision(), 3);
  CHECK(a.render(true) == b.render(true));
}

TEST_CASE("reduced S-words land in the domain of their first letter") {
  std::mt19937_64 rng(17);
  for (const char* s : {"0,2,2,3", "1,1,2", "0,3,2,2,2"}) {
    const Configuration& c = built(s);
    PointEvaluator ev(c, c.epsilon());
    for (int it = 0; it < 60; ++it) {
      OrbitPoint p = random_orbit_point(rng, c, 6);
      if (p.word.empty()) continue;
      const auto& D = c.domain(p.word.front().index, p.word.front().sign);
      auto in = ev.strictly_inside(orbit_label(c, p), D.arc, c.precision());
      REQUIRE(in.has_value());
      CHECK(*in);
    }
  }
}

TEST_CASE("combinatorial cyclic order agrees with the analytic one") {
  std::mt19937_64 rng(2024);
  for (const char* s : {"0,2,2,3", "1,1,2"}) {
    const Configuration& c = built(s);
    PointEvaluator ev(c);
    int nonzero = 0;
    for (int it = 0; it < 300; ++it) {
      OrbitPoint a = random_orbit_point(rng, c, 4), b = random_orbit_point(rng, c, 4),
                 d = random_orbit_point(rng, c, 4);
      if (it % 10 == 0) b = a;
      int comb = combinatorial_cyclic_order(c.cyclic_data(), a, b, d);
      auto ana = ev.ord3(orbit_label(c, a), orbit_label(c, b), orbit_label(c, d), c.precision());
      REQUIRE(ana.has_value());
      CHECK(comb == *ana);
      nonzero += comb != 0;
    }
    CHECK(nonzero > 200);
  }
  // base case: three markers with empty words
  const Configuration& c = built("0,2,2,3");
  OrbitPoint a{{}, {1, 1}}, b{{}, {2, 1}}, d{{}, {1, 2}};
  CHECK(combinatorial_cyclic_order(c.cyclic_data(), a, b, d) == -combinatorial_cyclic_order(c.cyclic_data(), b, a, d));
  CHECK_THROWS(combinatorial_cyclic_order(c.cyclic_data(), OrbitPoint{{{0, 1}, {0, -1}}, {1, 1}}, a, b));
}

TEST_CASE("configuration text round trip") {
  const Configuration& c = built("0,2,2,3");
  std::string text = write_configuration_text(c);
  Configuration back = read_configuration_text(text);
  CHECK(write_configuration_text(back) == text);
  CHECK(back.verified());

  std::string tampered = text;
  auto pos = tampered.find("digest=");
  tampered[pos + 7] = tampered[pos + 7] == '0' ? '1' : '0';
  CHECK_THROWS_AS(read_configuration_text(tampered), ConfigurationError);
  CHECK_THROWS(read_configuration_text("spec=0,2,2,3\n"));
}
