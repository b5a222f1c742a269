#include "isocirc/cover.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "isocirc/parallel.hpp"

namespace isocirc {

long CoverDatum::alpha_numerator(const GroupSpec& spec) const {
  return 2L * spec.n - 1 + spec.k() + std::accumulate(lifts.begin(), lifts.end(), 0L);
}

std::optional<CoverDatum> cover_datum(const GroupSpec& spec, long a) {
  spec.validate();
  if (a < 0) throw std::invalid_argument("cover_datum: a must be non-negative");
  const mpz_class d = mpz_class(spec.torsion_product()) * a + 1;
  if (!d.fits_slong_p()) throw std::overflow_error("cover_datum: degree overflows");
  CoverDatum out;
  out.a = a;
  out.d = d.get_si();
  // the trivial cover has no lift data
  for (int m : spec.m) {
    if (out.d == 1) break;
    // m i = -1 mod d; m is a unit mod d since d = 1 mod m
    mpz_class inv, mm = m;
    if (mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), d.get_mpz_t()) == 0) return std::nullopt;
    mpz_class i = (d - inv) % d;
    out.lifts.push_back(i.get_si());
  }
  const long num = out.alpha_numerator(spec);
  if (std::gcd(num, out.d) != 1) return std::nullopt;
  out.rot_alpha = ExactRational(num, out.d);
  out.rot_alpha.canonicalize();
  return out;
}

void validate_cover(const GroupSpec& spec, const CoverDatum& datum) {
  auto fresh = cover_datum(spec, datum.a);
  if (!fresh) throw std::invalid_argument("cover datum: a = " + std::to_string(datum.a) + " is not valid");
  if (!(*fresh == datum)) throw std::invalid_argument("cover datum: fields do not match a = " + std::to_string(datum.a));
}

std::vector<CoverDatum> search_valid_d(const GroupSpec& spec, std::size_t count, long a_cap, unsigned jobs) {
  if (spec.excluded()) throw std::invalid_argument("search_valid_d: excluded spec " + spec.to_string());
  std::vector<CoverDatum> out;
  if (count == 0) return out;
  // Scan in blocks so the result does not depend on the job count.
  const long block = 64;
  for (long start = 0; start <= a_cap; start += block) {
    const long end = std::min(a_cap + 1, start + block);
    std::vector<std::optional<CoverDatum>> found(static_cast<std::size_t>(end - start));
    parallel_for(found.size(), jobs, [&](unsigned, std::size_t i) {
      found[i] = cover_datum(spec, start + static_cast<long>(i));
    });
    for (auto& f : found) {
      if (!f) continue;
      out.push_back(std::move(*f));
      if (out.size() == count) return out;
    }
  }
  throw std::runtime_error("search_valid_d: only " + std::to_string(out.size()) + " valid degrees with a <= " +
                           std::to_string(a_cap));
}

std::int64_t np0_minus_p1(const GroupSpec& spec) {
  spec.validate();
  const std::int64_t N = spec.k() + 2 * spec.n - 1;
  const std::int64_t p0 = spec.torsion_product();
  std::int64_t p1 = 0;
  if (spec.k() == 1) {
    p1 = 1;
  } else {
    for (int l = 0; l < spec.k(); ++l) {
      std::int64_t prod = 1;
      for (int i = 0; i < spec.k(); ++i)
        if (i != l) prod *= spec.m[static_cast<std::size_t>(i)];
      p1 += prod;
    }
  }
  return N * p0 - p1;
}

LiftedMap lift_generator(const Configuration& config, const CoverDatum& datum, Gen g) {
  validate_cover(config.spec(), datum);
  LiftedMap out{g, 0, ExactRational(0)};
  if (g.kind == GenKind::E) {
    const int m = config.group().order_of(g.index);
    out.shift = datum.lifts.empty() ? 0 : datum.lifts.at(static_cast<std::size_t>(g.index - 1));
    out.translation_number = ExactRational(m * out.shift + 1, m * datum.d);
    out.translation_number.canonicalize();
  } else if (g.index < 1 || g.index > 2 * config.spec().n) {
    throw std::out_of_range("lift_generator: generator out of range");
  }
  return out;
}

Ball evaluate_lift(const Configuration& config, const CoverDatum& datum, const Word& w, const Ball& y) {
  return config.lift(w, y, datum.lifts);
}

OrbitRotation orbit_rotation_number(const Configuration& config, const CoverDatum& datum, long iterations,
                                    mpfr_prec_t prec) {
  if (iterations < 1) throw std::invalid_argument("orbit_rotation_number: need at least one iteration");
  const Word alpha = config.group().alpha();
  const Ball x0 = Ball::from_rational(config.element_point(1), prec);
  Ball y = x0;
  for (long i = 0; i < iterations; ++i) y = config.lift(alpha, y, datum.lifts);
  // |F^N(x) - x - N tau| < 1 for a lift F with translation number tau
  Ball est = (y - x0) / Ball(iterations, prec);
  Ball slack = Ball::from_rational(ExactRational(1, iterations), prec);
  mpfr_t lo, hi;
  mpfr_inits2(prec, lo, hi, static_cast<mpfr_ptr>(nullptr));
  (est - slack).lower(lo);
  (est + slack).upper(hi);
  OrbitRotation out;
  out.enclosure = Ball::from_bounds(lo, hi, prec);
  // tau is an integer j in base units (alpha fixes a point downstairs); candidates with
  // denominator <= d in cover units are 1/d apart in base units.
  const long j = (est + Ball::from_rational(ExactRational(1, 2), prec)).floor_of_mid();
  Ball window_lo = Ball::from_rational(ExactRational(j) - ExactRational(1, 2 * datum.d), prec);
  Ball window_hi = Ball::from_rational(ExactRational(j) + ExactRational(1, 2 * datum.d), prec);
  Ball lo_b = Ball::from_bounds(lo, lo, prec), hi_b = Ball::from_bounds(hi, hi, prec);
  out.certified = compare(window_lo, lo_b) == -1 && compare(hi_b, window_hi) == -1;
  out.value = ExactRational(j, datum.d);
  out.value.canonicalize();
  mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
  return out;
}

CheckReport gap_orbit_check(const Configuration& config, const CoverDatum& datum, const PrecisionPolicy& policy) {
  validate_cover(config.spec(), datum);
  if (!config.verified()) throw std::invalid_argument("gap_orbit_check: configuration not verified");
  const Group& g = config.group();
  CheckReport rep;
  rep.name = "gap-orbit d=" + std::to_string(datum.d);
  const long d = datum.d;
  const long step = datum.alpha_numerator(config.spec()) % d;
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  long pos = 0;
  for (long j = 0; j < d; ++j, pos = (pos + step) % d) seen[static_cast<std::size_t>(pos)] = true;
  const bool bijective = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  rep.add("step " + std::to_string(step) + " generates Z/" + std::to_string(d), CertStatus::Symbolic, bijective);

  const CircleInterval& gap = config.basepoint_gap();
  const Word alpha_d = g.power(g.alpha(), d);
  const bool fixed = config.same_point(translate(g, alpha_d, gap.left), gap.left, d) &&
                     config.same_point(translate(g, alpha_d, gap.right), gap.right, d);
  rep.add("alpha^" + std::to_string(d) + " fixes both endpoints of the gap lift", CertStatus::Symbolic, fixed);

  PointEvaluator ev(config, 0, datum.lifts, d);
  auto inside = ev.strictly_inside(config.basepoint(), gap, policy);
  rep.add("gap lift contains the basepoint lift", inside ? CertStatus::Certified : CertStatus::Inconclusive,
          inside.value_or(false));
  for (long j = 1; j < d; ++j) {
    const Word aj = g.power(g.alpha(), j);
    CircleInterval moved{translate(g, aj, gap.left), translate(g, aj, gap.right)};
    auto disj = ev.disjoint(moved, gap, policy);
    rep.add("alpha^" + std::to_string(j) + " moves the gap lift off itself",
            disj ? CertStatus::Certified : CertStatus::Inconclusive, disj.value_or(false));
  }
  return rep;
}

}  // namespace isocirc
