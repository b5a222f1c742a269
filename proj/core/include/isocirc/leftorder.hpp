#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "isocirc/certarith.hpp"
#include "isocirc/circular.hpp"
#include "isocirc/words.hpp"

namespace isocirc {

// Element of the central extension: base in G's normal form times z^z_exp, where
// e_i^{m_i} = z for every i and z is central.
struct HatWord {
  Word base;
  std::int64_t z_exp = 0;

  bool operator==(const HatWord& o) const { return base == o.base && z_exp == o.z_exp; }
};

// Reduces an arbitrary syllable string; e-exponent overflow is carried into z.
HatWord hat_reduce(const Group& g, std::span<const Syllable> raw, std::int64_t z_exp = 0);
HatWord hat_multiply(const Group& g, const HatWord& a, const HatWord& b);
HatWord hat_invert(const Group& g, const HatWord& a);
HatWord hat_power(const Group& g, const HatWord& a, std::int64_t p);
HatWord hat_central(std::int64_t p);
// Generator images: e_i and h_j with zero central part.
HatWord hat_gen(const Group& g, Gen gen, std::int64_t exp = 1);
// "e1 h1^-2 z^3"; "1" for the identity.
std::string format_hat(const Group& g, const HatWord& w);

enum class Order { Less, Equal, Greater };
const char* to_string(Order o);

// The left order on the extension pulled back from the lifted action on the line. Positions
// are in cover units, where z translates by exactly 1.
class LeftOrderHandle {
 public:
  explicit LeftOrderHandle(OrderHandle circular);

  const OrderHandle& circular() const { return circular_; }
  const Group& group() const { return circular_.group(); }
  // x_{e_1} / d
  const ExactRational& basepoint() const { return basepoint_; }

  Ball position(const HatWord& w, mpfr_prec_t prec) const;
  // Letter-by-letter lift of a raw syllable string; positive e-exponents are applied as
  // repeated single steps, so no carry rule is used.
  Ball raw_position(std::span<const Syllable> raw, mpfr_prec_t prec) const;

  // floor(position - basepoint), certified; nullopt at the precision cap.
  std::optional<long> window_index(const HatWord& w) const;

 private:
  OrderHandle circular_;
  ExactRational basepoint_;
};

Order hat_compare(const LeftOrderHandle& h, const HatWord& a, const HatWord& b);

struct CofinalBounds {
  std::int64_t low = 0;
  std::int64_t high = 0;
};
// z^low < w < z^high; the gap is 2 for central w and 1 otherwise.
CofinalBounds cofinal_bounds(const LeftOrderHandle& h, const HatWord& w);

// The lift of g with 1 <= lift < z.
HatWord window_lift(const LeftOrderHandle& h, const Word& g);
// Sign of the permutation sorting the window lifts of g1, g2, g3; 0 on repeats.
int project_order(const LeftOrderHandle& h, const Word& g1, const Word& g2, const Word& g3);

// Endomorphism of the extension given on e_1..e_k, h_1..h_2n; z goes to the common value of
// image(e_i)^{m_i}.
struct HatMap {
  std::vector<HatWord> e_images;
  std::vector<HatWord> h_images;

  HatWord apply(const Group& g, const HatWord& w) const;
  // +1 or -1 when every image(e_i)^{m_i} equals z^{+1} or every one equals z^{-1}, else 0.
  int center_sign(const Group& g) const;
  // Drop the central parts.
  GeneratorMap project() const;
  static HatMap identity(const Group& g);
  static HatMap inner(const Group& g, const HatWord& by);
};

struct CompatReport {
  std::size_t triples = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> details;
  std::string render() const;
};

// Compares the projection of the pulled-back order with the pulled-back projection on the
// sampled triples. Throws std::invalid_argument if phi does not preserve the center or the
// inverse does not compose to the identity on generators.
CompatReport automorphism_compat_check(const LeftOrderHandle& h, const HatMap& phi, const HatMap& inverse,
                                       const std::vector<std::array<Word, 3>>& sample);

struct LeftOrderReport {
  std::size_t samples = 0;
  std::size_t antisymmetry = 0;
  std::size_t transitivity = 0;
  std::size_t totality = 0;
  std::size_t invariance = 0;
  std::size_t cofinality = 0;
  std::size_t winding = 0;
  std::size_t projection = 0;
  std::size_t inconclusive = 0;
  std::vector<std::string> details;

  std::size_t violations() const {
    return antisymmetry + transitivity + totality + invariance + cofinality + winding + projection;
  }
  std::string render() const;
};

std::vector<HatWord> random_hat_words(const Group& g, std::size_t count, std::uint64_t seed, int max_syllables = 8,
                                      int max_z = 3);

// Order axioms, cofinality, winding and projection on seeded samples.
LeftOrderReport check_left_order(const LeftOrderHandle& h, std::size_t samples, std::uint64_t seed,
                                 unsigned jobs = 1);

}  // namespace isocirc
