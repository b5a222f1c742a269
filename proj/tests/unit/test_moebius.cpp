#include <doctest.h>

#include <random>

#include "isocirc/moebius.hpp"

using namespace isocirc;

namespace {

constexpr mpfr_prec_t kP = 128;

Ball q(long a, long b) { return Ball::from_rational(rational(a, b), kP); }

CirclePoint point(long a, long b, int id) { return {q(a, b), label_of(MarkedPoint{MarkedKind::Free, id})}; }

bool near(const Ball& x, const ExactRational& v) { return (x - Ball::from_rational(v, x.precision())).contains_zero(); }

// Equality of angles mod 1.
bool near_angle(const Ball& x, const ExactRational& v) {
  Ball d = x - Ball::from_rational(v, x.precision());
  Ball half = Ball::from_rational(rational(1, 2), x.precision());
  return (d - (d + half).floor_of_mid()).contains_zero();
}

}  // namespace

TEST_CASE("compose with inverse") {
  Moebius f = hyperbolic_with(q(1, 10), q(3, 5), Ball(2, kP));
  CHECK(compose(f, inverse(f)).contains_identity());
  Moebius r = Moebius::rotation(q(1, 3));
  CHECK(compose(compose(r, r), r).contains_identity());
}

TEST_CASE("classification") {
  Moebius half_turn(Ball(0, kP), Ball(-1, kP), Ball(1, kP), Ball(0, kP));
  CHECK(classify(half_turn) == MoebiusKind::Elliptic);
  Moebius diag(Ball(2, kP), Ball(0, kP), Ball(0, kP), q(1, 2));
  CHECK(classify(diag) == MoebiusKind::Hyperbolic);
  CHECK(classify(Moebius::identity(kP)) == MoebiusKind::ParabolicOrUnresolved);
}

TEST_CASE("boundary action") {
  Ball theta = q(3, 10);
  CHECK(near(act(Moebius::identity(kP), theta), rational(3, 10)));
  CHECK(near(act(Moebius::rotation(q(1, 4)), theta), rational(11, 20)));
  CHECK(near(act(Moebius::rotation(q(1, 4)), q(9, 10)), rational(3, 20)));
  // dilation attracts towards 0 and fixes 1/2
  Moebius d = Moebius::dilation(Ball(1, kP));
  CHECK(near(act(d, q(1, 2)), rational(1, 2)));
  Ball moved = act(d, q(1, 4));
  CHECK(compare(moved, q(1, 4)) == -1);
}

TEST_CASE("fixed points") {
  Moebius d = Moebius::dilation(Ball(2, kP));
  auto fp = fixed_points(d);
  CHECK(near_angle(fp.attracting, rational(0)));
  CHECK(near(fp.repelling, rational(1, 2)));

  Moebius r = Moebius::rotation(q(1, 5));
  Moebius conj = compose(compose(r, d), inverse(r));
  auto fc = fixed_points(conj);
  CHECK(near(fc.attracting, rational(1, 5)));
  CHECK(near(fc.repelling, rational(7, 10)));
  CHECK_THROWS(fixed_points(Moebius::rotation(q(1, 3))));

  Moebius h = hyperbolic_with(q(1, 8), q(5, 8), q(3, 2));
  auto fh = fixed_points(h);
  CHECK(near(fh.attracting, rational(1, 8)));
  CHECK(near(fh.repelling, rational(5, 8)));
  // forward orbits converge to the attracting point
  for (long s : {0L, 2L, 3L, 7L, 9L}) {
    Ball x = q(s, 10);
    if (s == 0) x = q(1, 100);
    for (int i = 0; i < 50; ++i) x = act(h, x);
    CHECK(std::abs(x.mid_double() - 0.125) < 1e-9);
  }
}

TEST_CASE("elliptic and hyperbolic constructors") {
  Moebius e = elliptic_about(Ball(0, kP), Ball(0, kP), 2);
  CHECK(near(act(e, q(1, 10)), rational(3, 5)));
  for (int m : {2, 3, 5}) {
    Moebius f = elliptic_about(q(3, 2), q(2, 7), m);
    Moebius acc = Moebius::identity(kP);
    for (int i = 0; i < m; ++i) acc = compose(acc, f);
    CHECK(acc.contains_identity());
    CHECK(classify(f) == MoebiusKind::Elliptic);
    // no boundary point is fixed
    for (int s = 0; s < 10; ++s) {
      Ball x = q(s, 10);
      auto o = ord3_angles(x, act(f, x), x + q(1, 2));
      Ball d = act(f, x) - x;
      d = d - d.floor_of_mid();
      CHECK_FALSE(d.contains_zero());
      (void)o;
    }
  }
  Moebius h = hyperbolic_with(Ball(0, kP), q(1, 2), Ball(1, kP));
  CHECK(near_angle(fixed_points(h).attracting, rational(0)));
  CHECK_THROWS(hyperbolic_with(q(1, 3), q(1, 3), Ball(1, kP)));
  CHECK_THROWS(hyperbolic_with(q(1, 3), q(1, 2), Ball(-1, kP)));
}

TEST_CASE("ord3") {
  auto a = point(1, 10, 1), b = point(4, 10, 2), c = point(7, 10, 3);
  CHECK(ord3(a, b, c) == 1);
  CHECK(ord3(a, c, b) == -1);
  CHECK(ord3(a, a, b) == 0);
  CHECK(ord3(c, a, b) == 1);
}

TEST_CASE("ord3 invariance and determinant stability") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> u(1, 999);
  std::vector<Moebius> gens{hyperbolic_with(q(1, 8), q(5, 8), Ball(1, kP)), elliptic_about(Ball(1, kP), q(1, 3), 3),
                            hyperbolic_with(q(3, 4), q(2, 5), q(1, 2))};
  for (int it = 0; it < 200; ++it) {
    Ball x = q(u(rng), 1000), y = q(u(rng), 1000), z = q(u(rng), 1000);
    auto before = ord3_angles(x, y, z);
    if (!before) continue;
    const Moebius& g = gens[static_cast<std::size_t>(it) % gens.size()];
    CHECK(ord3_angles(act(g, x), act(g, y), act(g, z)) == before);
  }
}

TEST_CASE("determinant survives long random compositions") {
  // Near-identity generators keep the product norm moderate, so 512 bits suffice.
  const mpfr_prec_t p = 512;
  auto r = [&](long a, long b) { return Ball::from_rational(rational(a, b), p); };
  std::vector<Moebius> gens{hyperbolic_with(r(1, 8), r(5, 8), r(1, 100)), elliptic_about(r(1, 10), r(1, 3), 97),
                            hyperbolic_with(r(3, 4), r(2, 5), r(1, 200))};
  gens.push_back(inverse(gens[0]));
  std::mt19937_64 rng(9);
  Moebius acc = Moebius::identity(p);
  for (int i = 0; i < 10000; ++i) acc = compose(acc, gens[rng() % gens.size()]);
  Moebius n = acc.renormalized();
  CHECK(n.determinant().contains(rational(1)));
  CHECK(acc.determinant().contains(rational(1)));
}

TEST_CASE("real-line lifts") {
  // dilation lift fixes half integers and commutes with unit translation
  Ball qq = q(1, 3);
  CHECK(near(dilation_lift(q(1, 2), qq), rational(1, 2)));
  CHECK(near(dilation_lift(Ball(-3, kP), qq), rational(-3)));
  Ball x = q(1, 5);
  CHECK((dilation_lift(x + 1, qq) - dilation_lift(x, qq) - 1).contains_zero());

  // elliptic lift projects to the matrix action, and m-fold power is translation by 1
  Ball phi = q(1, 7), r = q(5, 4);
  const int m = 3;
  Moebius e = elliptic_about(r, phi, m);
  LiftProgram prog;
  append_elliptic_lift(prog, phi, exp(-r), m, 1);
  for (int s = 0; s < 10; ++s) {
    Ball t = q(s, 10) + q(1, 97);
    Ball lifted = apply_lift(prog, t);
    Ball diff = lifted - act(e, t);
    CHECK(near(diff - (diff + q(1, 2)).floor_of_mid(), rational(0)));
    Ball y = t;
    for (int i = 0; i < m; ++i) y = apply_lift(prog, y);
    CHECK(near(y - t, rational(1)));
  }

  // hyperbolic lift has fixed points and projects to the matrix action
  Ball p = q(1, 8), qq2 = q(5, 8), ell = q(3, 2);
  Moebius h = hyperbolic_with(p, qq2, ell);
  LiftProgram hp;
  append_hyperbolic_lift(hp, axis_parameters(p, qq2, ell), 1);
  CHECK(near(apply_lift(hp, p), rational(1, 8)));
  CHECK(near(apply_lift(hp, qq2), rational(5, 8)));
  for (int s = 0; s < 10; ++s) {
    Ball t = q(s, 10) + q(1, 97);
    Ball diff = apply_lift(hp, t) - act(h, t);
    CHECK(near(diff - (diff + q(1, 2)).floor_of_mid(), rational(0)));
  }
}
