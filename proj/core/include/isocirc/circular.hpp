#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "isocirc/cover.hpp"
#include "isocirc/pingpong.hpp"

namespace isocirc {

// Thrown when a certified comparison reaches the precision cap.
class InconclusiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The circular order read off the orbit of x_{e_1} (degree 1) or of its lift to the
// degree-d cover.
class OrderHandle {
 public:
  explicit OrderHandle(std::shared_ptr<const Configuration> config, std::optional<CoverDatum> cover = {});

  const Configuration& config() const { return *config_; }
  std::shared_ptr<const Configuration> config_ptr() const { return config_; }
  const Group& group() const { return config_->group(); }
  long degree() const { return cover_ ? cover_->d : 1; }
  // Lift data; the trivial datum (a = 0) when degree is 1.
  const CoverDatum& cover() const { return datum_; }
  std::vector<long> shifts() const;

  // g . x_{e_1}
  PointLabel point(const Word& g) const;
  PointEvaluator evaluator() const;

 private:
  std::shared_ptr<const Configuration> config_;
  std::optional<CoverDatum> cover_;
  CoverDatum datum_;
};

// +1 / -1 / 0; nullopt when the precision cap is hit.
std::optional<int> try_eval_c(const OrderHandle& h, PointEvaluator& ev, const Word& g1, const Word& g2,
                              const Word& g3);
// Throws InconclusiveError instead of returning nullopt.
int eval_c(const OrderHandle& h, PointEvaluator& ev, const Word& g1, const Word& g2, const Word& g3);
int eval_c(const OrderHandle& h, const Word& g1, const Word& g2, const Word& g3);

using Quadruple = std::array<Word, 4>;

// Seeded quadruples of words with at most max_syllables syllables; about one in eight
// repeats an entry so the degenerate branch is exercised.
std::vector<Quadruple> random_quadruples(const Group& g, std::size_t count, std::uint64_t seed,
                                         int max_syllables = 12);

struct AxiomReport {
  std::size_t quadruples = 0;
  std::size_t evaluations = 0;
  std::size_t degenerate_violations = 0;  // value 0 exactly on repeated arguments
  std::size_t cocycle_violations = 0;
  std::size_t invariance_violations = 0;  // c(g4 g1, g4 g2, g4 g3) = c(g1, g2, g3)
  std::size_t inconclusive = 0;
  std::vector<std::string> details;  // first few violations

  std::size_t violations() const { return degenerate_violations + cocycle_violations + invariance_violations; }
  std::string render() const;
};

AxiomReport check_axioms(const OrderHandle& h, const std::vector<Quadruple>& sample, unsigned jobs = 1);

// Endomorphism of G given on generators (e_1..e_k, then h_1..h_2n).
struct GeneratorMap {
  std::vector<Word> e_images;
  std::vector<Word> h_images;

  Word apply(const Group& g, const Word& w) const;
  static GeneratorMap identity(const Group& g);
};

// Circular order (g1, g2, g3) -> c(phi g1, phi g2, phi g3). The map must respect the
// relations and come with an inverse that composes to the identity on generators.
class AutomorphicOrder {
 public:
  AutomorphicOrder(const OrderHandle& base, GeneratorMap phi, GeneratorMap inverse);

  const GeneratorMap& map() const { return phi_; }
  int eval(PointEvaluator& ev, const Word& g1, const Word& g2, const Word& g3) const;

 private:
  OrderHandle base_;
  GeneratorMap phi_;
  GeneratorMap inverse_;
};

struct LinearPart {
  Word generator;   // alpha^d
  long exponent = 1;  // d
  CheckReport certificate;
};

LinearPart linear_part(const OrderHandle& h, const PrecisionPolicy& policy);

}  // namespace isocirc
