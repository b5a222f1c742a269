#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "isocirc/certarith.hpp"
#include "isocirc/circular.hpp"
#include "isocirc/words.hpp"

namespace isocirc {

// Values of a circular order on a finite list of elements, g_0 = 1.
class FiniteOrderTable {
 public:
  explicit FiniteOrderTable(std::vector<Word> elements);

  std::size_t size() const { return elements_.size(); }
  const std::vector<Word>& elements() const { return elements_; }
  int value(std::size_t i, std::size_t j, std::size_t k) const;
  // Sets c(i,j,k) for i<j<k distinct and fills the other orderings by permutation sign.
  void set(std::size_t i, std::size_t j, std::size_t k, int v);

  // Table from an order handle; throws InconclusiveError on a precision-cap failure.
  static FiniteOrderTable from_order(const OrderHandle& h, std::vector<Word> elements, unsigned jobs = 1);

 private:
  std::size_t at(std::size_t i, std::size_t j, std::size_t k) const { return (i * n_ + j) * n_ + k; }
  std::vector<Word> elements_;
  std::size_t n_;
  std::vector<std::int8_t> values_;
};

class RealizationError : public std::runtime_error {
 public:
  RealizationError(std::size_t index, const std::string& what)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// Midpoint construction: iota(g_0) = x0, iota(g_1) = x0 + 1/2, and each further element
// goes to the midpoint of the unique gap between placed points that the table allows.
// Angles are in [0, 1).
std::vector<ExactRational> realize(const FiniteOrderTable& table, const ExactRational& x0);

// Exact cyclic order of three rationals mod 1 (0 on coincidence).
int ord3_exact(const ExactRational& x, const ExactRational& y, const ExactRational& z);

// The first `count` elements of G in breadth-first order from the identity, multiplying
// on the right by letters in Group::letters() order.
std::vector<Word> enumerate_elements(const Group& g, std::size_t count);

struct RoundtripReport {
  std::size_t depth = 0;
  std::size_t triples = 0;
  std::size_t mismatches = 0;
  bool dyadic = true;  // every angle offset from x0 is a dyadic rational
  std::vector<ExactRational> angles;

  std::string render() const;
};

RoundtripReport roundtrip(const OrderHandle& h, std::size_t depth, unsigned jobs = 1);

}  // namespace isocirc
