#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isocirc/certarith.hpp"
#include "isocirc/pingpong.hpp"
#include "isocirc/words.hpp"

namespace isocirc {

// Degree d = M a + 1 (M = m_1...m_k) together with the lift data of the e_l.
struct CoverDatum {
  long a = 0;
  long d = 1;
  std::vector<long> lifts;  // i_l: minimal i >= 0 with d | m_l i + 1; empty when d = 1
  ExactRational rot_alpha;  // (2n - 1 + k + sum i_l) / d, reduced

  // 2n - 1 + k + sum i_l
  long alpha_numerator(const GroupSpec& spec) const;
  bool operator==(const CoverDatum&) const = default;
};

// The datum for a, or nullopt when gcd(d, 2n-1+k+sum i_l) != 1.
std::optional<CoverDatum> cover_datum(const GroupSpec& spec, long a);
// Rechecks every field of a datum against the group it was computed for; throws std::invalid_argument.
void validate_cover(const GroupSpec& spec, const CoverDatum& datum);

// First `count` valid a in increasing order (a = 0 always qualifies). Throws
// std::runtime_error when a_cap is passed first.
std::vector<CoverDatum> search_valid_d(const GroupSpec& spec, std::size_t count, long a_cap = 10'000,
                                       unsigned jobs = 1);

// N p_0 - p_1 with N = k+2n-1, p_0 = m_1...m_k and p_1 the sum of the products with one
// factor omitted (1 when k = 1).
std::int64_t np0_minus_p1(const GroupSpec& spec);

// Lift of one generator to the line, in base units (the cover circle is R / dZ).
struct LiftedMap {
  Gen generator;
  long shift = 0;                     // extra integer translation per application
  ExactRational translation_number;  // in cover units
};
LiftedMap lift_generator(const Configuration& config, const CoverDatum& datum, Gen g);

// Lifted action of a word on the line (base units).
Ball evaluate_lift(const Configuration& config, const CoverDatum& datum, const Word& w, const Ball& y);

// Translation number of the alpha lift measured along the orbit of x_{e_1}, as a rational
// with denominator d in cover units.
struct OrbitRotation {
  ExactRational value;
  Ball enclosure;       // translation number in base units
  bool certified = false;  // enclosure excludes every other candidate with denominator <= d
};
OrbitRotation orbit_rotation_number(const Configuration& config, const CoverDatum& datum, long iterations = 1000,
                                    mpfr_prec_t prec = 256);

// The d lifts of the basepoint gap form one alpha-orbit; alpha^d fixes the gap endpoints
// symbolically and alpha^j (0 < j < d) moves the gap off itself (certified).
CheckReport gap_orbit_check(const Configuration& config, const CoverDatum& datum, const PrecisionPolicy& policy);

}  // namespace isocirc
