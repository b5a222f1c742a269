#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace isocirc {

using ExactRational = mpq_class;

// Reduced p/q.
ExactRational rational(long num, long den = 1);
std::string to_string(const ExactRational& q);

struct PrecisionPolicy {
  mpfr_prec_t start_bits = 64;
  mpfr_prec_t cap_bits = 8192;

  // start, 2*start, ... up to and including cap.
  std::vector<mpfr_prec_t> ladder() const;
  void validate() const;

  bool operator==(const PrecisionPolicy&) const = default;
};

// Argument outside the domain of an operation (division by a ball containing 0, ...).
class BallDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Midpoint-radius enclosure of a real number. The midpoint carries the working precision;
// the radius is kept at a short fixed precision and always rounded upward.
class Ball {
 public:
  static constexpr mpfr_prec_t kRadiusBits = 32;

  explicit Ball(mpfr_prec_t prec = 64);
  Ball(long value, mpfr_prec_t prec);
  Ball(const Ball& o);
  Ball(Ball&& o) noexcept;
  Ball& operator=(const Ball& o);
  Ball& operator=(Ball&& o) noexcept;
  ~Ball();

  static Ball from_rational(const ExactRational& q, mpfr_prec_t prec);
  // Ball containing [lo, hi].
  static Ball from_bounds(mpfr_srcptr lo, mpfr_srcptr hi, mpfr_prec_t prec);
  static Ball pi(mpfr_prec_t prec);

  mpfr_prec_t precision() const { return mpfr_get_prec(mid_); }
  mpfr_srcptr mid() const { return mid_; }
  mpfr_srcptr rad() const { return rad_; }
  double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
  double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }

  // Outward-rounded endpoints at the working precision.
  void lower(mpfr_ptr out) const;
  void upper(mpfr_ptr out) const;

  bool contains(const ExactRational& q) const;
  bool contains_zero() const;
  // -1 / +1 when the ball excludes zero.
  std::optional<int> sign() const;
  // Integer part when the whole ball lies in [j, j+1).
  std::optional<long> floor_if_determined() const;
  long floor_of_mid() const;

  // Widen the radius by |delta| (upward).
  void inflate(mpfr_srcptr delta);

  std::string to_string(int digits = 20) const;

  Ball operator-() const;
  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  friend Ball operator/(const Ball& a, const Ball& b);
  friend Ball operator+(const Ball& a, long b);
  friend Ball operator-(const Ball& a, long b);
  friend Ball operator*(const Ball& a, long b);

 private:
  // Accounts for the rounding of mid_ given MPFR's ternary value.
  void add_rounding_error(int ternary);

  mpfr_t mid_;
  mpfr_t rad_;
};

Ball sqrt(const Ball& x);
Ball exp(const Ball& x);
Ball log(const Ball& x);
Ball sin(const Ball& x);
Ball cos(const Ball& x);
// Requires |x| < pi/2 on the whole ball.
Ball tan(const Ball& x);
Ball atan(const Ball& x);
// Angle of (x, y) in (-pi, pi]; when the ball straddles the negative x-axis the
// enclosure is centred near pi and may extend past it (the angle is then meant mod 2 pi).
Ball atan2(const Ball& y, const Ball& x);
Ball abs(const Ball& x);
Ball pow(const Ball& x, long e);

// -1 / +1 when a and b are separated, nullopt when the balls overlap.
std::optional<int> compare(const Ball& a, const Ball& b);

enum class Comparison { Less, Greater, EqualAsWords, Inconclusive };
const char* to_string(Comparison c);

using RefineFn = std::function<std::pair<Ball, Ball>(mpfr_prec_t)>;

// Equality is never decided numerically: callers pass equal_as_words after checking the
// symbolic provenance. Otherwise the comparison climbs the precision ladder via refine
// until the balls separate or the cap is reached.
Comparison certified_compare(const Ball& a, const Ball& b, const RefineFn& refine,
                             const PrecisionPolicy& policy, bool equal_as_words = false);

}  // namespace isocirc
