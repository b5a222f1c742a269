#include "isocirc/certarith.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace isocirc {

ExactRational rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  ExactRational q(num, den);
  q.canonicalize();
  return q;
}

std::string to_string(const ExactRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::vector<mpfr_prec_t> PrecisionPolicy::ladder() const {
  validate();
  std::vector<mpfr_prec_t> out;
  for (mpfr_prec_t p = start_bits; p < cap_bits; p *= 2) out.push_back(p);
  out.push_back(cap_bits);
  return out;
}

void PrecisionPolicy::validate() const {
  if (start_bits < 16) throw std::invalid_argument("precision: start must be at least 16 bits");
  if (cap_bits < start_bits) throw std::invalid_argument("precision: cap below start");
  if (cap_bits > (1 << 20)) throw std::invalid_argument("precision: cap above 2^20 bits");
}

namespace {

// RAII scratch value.
struct Tmp {
  mpfr_t v;
  explicit Tmp(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Tmp() { mpfr_clear(v); }
  Tmp(const Tmp&) = delete;
  Tmp& operator=(const Tmp&) = delete;
  operator mpfr_ptr() { return v; }
  operator mpfr_srcptr() const { return v; }
};

// |x| rounded up into radius precision.
void abs_up(mpfr_ptr out, mpfr_srcptr x) { mpfr_abs(out, x, MPFR_RNDU); }

using Fn = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

// Enclosure of f(x) for monotone increasing f.
Ball monotone_up(const Ball& x, Fn f) {
  const mpfr_prec_t p = x.precision();
  Tmp lo(p), hi(p), flo(p), fhi(p);
  x.lower(lo);
  x.upper(hi);
  f(flo, lo, MPFR_RNDD);
  f(fhi, hi, MPFR_RNDU);
  return Ball::from_bounds(flo, fhi, p);
}

}  // namespace

Ball::Ball(mpfr_prec_t prec) {
  mpfr_init2(mid_, prec);
  mpfr_init2(rad_, kRadiusBits);
  mpfr_set_zero(mid_, 1);
  mpfr_set_zero(rad_, 1);
}

Ball::Ball(long value, mpfr_prec_t prec) : Ball(prec) {
  int t = mpfr_set_si(mid_, value, MPFR_RNDN);
  add_rounding_error(t);
}

Ball::Ball(const Ball& o) {
  mpfr_init2(mid_, o.precision());
  mpfr_init2(rad_, kRadiusBits);
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept : Ball(o.precision()) {
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
}

Ball& Ball::operator=(const Ball& o) {
  if (this == &o) return *this;
  mpfr_set_prec(mid_, o.precision());
  mpfr_set(mid_, o.mid_, MPFR_RNDN);
  mpfr_set(rad_, o.rad_, MPFR_RNDU);
  return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
  mpfr_swap(mid_, o.mid_);
  mpfr_swap(rad_, o.rad_);
  return *this;
}

Ball::~Ball() {
  mpfr_clear(mid_);
  mpfr_clear(rad_);
}

void Ball::add_rounding_error(int ternary) {
  if (ternary == 0) return;
  if (mpfr_zero_p(mid_)) {
    // Only reachable on underflow; widen by the smallest positive value.
    Tmp tiny(kRadiusBits);
    mpfr_set_ui_2exp(tiny, 1, mpfr_get_emin(), MPFR_RNDU);
    mpfr_add(rad_, rad_, tiny, MPFR_RNDU);
    return;
  }
  Tmp ulp(kRadiusBits);
  mpfr_set_ui_2exp(ulp, 1, mpfr_get_exp(mid_) - precision(), MPFR_RNDU);
  mpfr_add(rad_, rad_, ulp, MPFR_RNDU);
}

void Ball::inflate(mpfr_srcptr delta) {
  Tmp d(kRadiusBits);
  abs_up(d, delta);
  mpfr_add(rad_, rad_, d, MPFR_RNDU);
}

Ball Ball::from_rational(const ExactRational& q, mpfr_prec_t prec) {
  Ball b(prec);
  int t = mpfr_set_q(b.mid_, q.get_mpq_t(), MPFR_RNDN);
  b.add_rounding_error(t);
  return b;
}

Ball Ball::from_bounds(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec) {
  if (mpfr_cmp(lo, hi) > 0) throw std::logic_error("Ball::from_bounds: lo > hi");
  Ball b(prec);
  Tmp sum(std::max(mpfr_get_prec(lo), mpfr_get_prec(hi)) + 1);
  mpfr_add(sum, lo, hi, MPFR_RNDN);
  mpfr_div_2ui(b.mid_, sum, 1, MPFR_RNDN);
  Tmp r1(kRadiusBits), r2(kRadiusBits);
  mpfr_sub(r1, hi, b.mid_, MPFR_RNDU);
  mpfr_sub(r2, b.mid_, lo, MPFR_RNDU);
  mpfr_max(b.rad_, r1, r2, MPFR_RNDU);
  if (mpfr_sgn(b.rad_) < 0) mpfr_set_zero(b.rad_, 1);
  return b;
}

Ball Ball::pi(mpfr_prec_t prec) {
  Tmp lo(prec), hi(prec);
  mpfr_const_pi(lo, MPFR_RNDD);
  mpfr_const_pi(hi, MPFR_RNDU);
  return from_bounds(lo, hi, prec);
}

void Ball::lower(mpfr_ptr out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
void Ball::upper(mpfr_ptr out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

bool Ball::contains(const ExactRational& q) const {
  Tmp lo(precision()), hi(precision());
  lower(lo);
  upper(hi);
  return mpfr_cmp_q(lo, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi, q.get_mpq_t()) >= 0;
}

bool Ball::contains_zero() const { return !sign().has_value(); }

std::optional<int> Ball::sign() const {
  Tmp lo(precision()), hi(precision());
  lower(lo);
  upper(hi);
  if (mpfr_sgn(lo.v) > 0) return 1;
  if (mpfr_sgn(hi.v) < 0) return -1;
  return std::nullopt;
}

std::optional<long> Ball::floor_if_determined() const {
  Tmp lo(precision()), hi(precision());
  lower(lo);
  upper(hi);
  mpfr_floor(lo, lo);
  mpfr_floor(hi, hi);
  if (!mpfr_equal_p(lo, hi)) return std::nullopt;
  return mpfr_get_si(lo, MPFR_RNDN);
}

long Ball::floor_of_mid() const {
  Tmp f(precision());
  mpfr_floor(f, mid_);
  return mpfr_get_si(f, MPFR_RNDN);
}

std::string Ball::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg +/- %.3Rg", digits, mid_, rad_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

Ball Ball::operator-() const {
  Ball r(*this);
  mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
  return r;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  Tmp am(Ball::kRadiusBits), bm(Ball::kRadiusBits), x(Ball::kRadiusBits);
  abs_up(am, a.mid_);
  abs_up(bm, b.mid_);
  // |a| rb + |b| ra + ra rb
  mpfr_mul(x, am, b.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, x, MPFR_RNDU);
  mpfr_mul(x, bm, a.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, x, MPFR_RNDU);
  mpfr_mul(x, a.rad_, b.rad_, MPFR_RNDU);
  mpfr_add(r.rad_, r.rad_, x, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  if (b.contains_zero()) throw BallDomainError("ball division by an interval containing zero");
  Ball r(std::max(a.precision(), b.precision()));
  int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
  // |a/b - am/bm| <= (|am| rb + |bm| ra) / (|bm| (|bm| - rb))
  Tmp am(Ball::kRadiusBits), bm(Ball::kRadiusBits), bl(Ball::kRadiusBits), num(Ball::kRadiusBits),
      x(Ball::kRadiusBits), den(Ball::kRadiusBits);
  abs_up(am, a.mid_);
  mpfr_abs(bl, b.mid_, MPFR_RNDD);
  mpfr_mul(num, am, b.rad_, MPFR_RNDU);
  abs_up(bm, b.mid_);
  mpfr_mul(x, bm, a.rad_, MPFR_RNDU);
  mpfr_add(num, num, x, MPFR_RNDU);
  mpfr_sub(den, bl, b.rad_, MPFR_RNDD);
  mpfr_mul(den, den, bl, MPFR_RNDD);
  if (mpfr_sgn(den.v) <= 0) throw BallDomainError("ball division: denominator too close to zero");
  mpfr_div(r.rad_, num, den, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball operator+(const Ball& a, long b) {
  Ball r(a);
  int t = mpfr_add_si(r.mid_, a.mid_, b, MPFR_RNDN);
  r.add_rounding_error(t);
  return r;
}

Ball operator-(const Ball& a, long b) { return a + (-b); }

Ball operator*(const Ball& a, long b) {
  Ball r(a.precision());
  int t = mpfr_mul_si(r.mid_, a.mid_, b, MPFR_RNDN);
  Tmp bb(Ball::kRadiusBits);
  mpfr_set_si(bb, b, MPFR_RNDU);
  mpfr_abs(bb, bb, MPFR_RNDU);
  mpfr_mul(r.rad_, a.rad_, bb, MPFR_RNDU);
  r.add_rounding_error(t);
  return r;
}

Ball sqrt(const Ball& x) {
  Tmp lo(x.precision());
  x.lower(lo);
  if (mpfr_sgn(lo.v) < 0) throw BallDomainError("sqrt of a ball reaching negative values");
  return monotone_up(x, mpfr_sqrt);
}

Ball exp(const Ball& x) { return monotone_up(x, mpfr_exp); }

Ball log(const Ball& x) {
  Tmp lo(x.precision());
  x.lower(lo);
  if (mpfr_sgn(lo.v) <= 0) throw BallDomainError("log of a ball reaching non-positive values");
  return monotone_up(x, mpfr_log);
}

namespace {

// 1-Lipschitz bounded functions: bracket f(mid), then widen by the radius.
Ball lipschitz_one(const Ball& x, Fn f) {
  const mpfr_prec_t p = x.precision();
  Tmp flo(p), fhi(p);
  f(flo, x.mid(), MPFR_RNDD);
  f(fhi, x.mid(), MPFR_RNDU);
  mpfr_sub(flo, flo, x.rad(), MPFR_RNDD);
  mpfr_add(fhi, fhi, x.rad(), MPFR_RNDU);
  if (mpfr_cmp_si(flo, -1) < 0) mpfr_set_si(flo, -1, MPFR_RNDD);
  if (mpfr_cmp_si(fhi, 1) > 0) mpfr_set_si(fhi, 1, MPFR_RNDU);
  return Ball::from_bounds(flo, fhi, p);
}

}  // namespace

Ball sin(const Ball& x) { return lipschitz_one(x, mpfr_sin); }
Ball cos(const Ball& x) { return lipschitz_one(x, mpfr_cos); }

Ball tan(const Ball& x) {
  const mpfr_prec_t p = x.precision();
  Tmp half_pi(p), lo(p), hi(p);
  mpfr_const_pi(half_pi, MPFR_RNDD);
  mpfr_div_2ui(half_pi, half_pi, 1, MPFR_RNDD);
  x.lower(lo);
  x.upper(hi);
  mpfr_abs(lo, lo, MPFR_RNDU);
  mpfr_abs(hi, hi, MPFR_RNDU);
  if (mpfr_cmp(lo, half_pi) >= 0 || mpfr_cmp(hi, half_pi) >= 0)
    throw BallDomainError("tan of a ball reaching a pole");
  return monotone_up(x, mpfr_tan);
}

Ball atan(const Ball& x) { return monotone_up(x, mpfr_atan); }

Ball atan2(const Ball& y, const Ball& x) {
  const mpfr_prec_t p = std::max(x.precision(), y.precision());
  auto sx = x.sign();
  auto sy = y.sign();
  if (sx && *sx > 0) return atan(y / x);
  if (sy) {
    // pi/2 - atan(x/y) for y > 0, -pi/2 - atan(x/y) for y < 0
    Ball h = Ball::pi(p) / Ball(2, p);
    Ball t = atan(x / y);
    return *sy > 0 ? h - t : -h - t;
  }
  if (sx && *sx < 0) return atan(y / x) + Ball::pi(p);
  throw BallDomainError("atan2 at a ball containing the origin");
}

Ball abs(const Ball& x) {
  auto s = x.sign();
  if (s) return *s > 0 ? x : -x;
  const mpfr_prec_t p = x.precision();
  Tmp lo(p), hi(p), z(p);
  x.lower(lo);
  x.upper(hi);
  mpfr_abs(lo, lo, MPFR_RNDU);
  mpfr_abs(hi, hi, MPFR_RNDU);
  mpfr_max(hi, hi, lo, MPFR_RNDU);
  mpfr_set_zero(z, 1);
  return Ball::from_bounds(z, hi, p);
}

Ball pow(const Ball& x, long e) {
  if (e < 0) return Ball(1, x.precision()) / pow(x, -e);
  Ball result(1, x.precision());
  Ball base(x);
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::optional<int> compare(const Ball& a, const Ball& b) { return (a - b).sign(); }

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::Less: return "less";
    case Comparison::Greater: return "greater";
    case Comparison::EqualAsWords: return "equal-as-words";
    case Comparison::Inconclusive: return "inconclusive";
  }
  return "?";
}

Comparison certified_compare(const Ball& a, const Ball& b, const RefineFn& refine,
                             const PrecisionPolicy& policy, bool equal_as_words) {
  if (equal_as_words) return Comparison::EqualAsWords;
  if (auto s = compare(a, b)) return *s < 0 ? Comparison::Less : Comparison::Greater;
  if (!refine) return Comparison::Inconclusive;
  const mpfr_prec_t have = std::max(a.precision(), b.precision());
  for (mpfr_prec_t p : policy.ladder()) {
    if (p <= have) continue;
    auto [ra, rb] = refine(p);
    if (auto s = compare(ra, rb)) return *s < 0 ? Comparison::Less : Comparison::Greater;
  }
  return Comparison::Inconclusive;
}

}  // namespace isocirc
