#include "isocirc/realization.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "isocirc/parallel.hpp"

namespace isocirc {

FiniteOrderTable::FiniteOrderTable(std::vector<Word> elements)
    : elements_(std::move(elements)), n_(elements_.size()), values_(n_ * n_ * n_, 0) {
  if (elements_.empty() || !elements_.front().is_identity())
    throw std::invalid_argument("FiniteOrderTable: the first element must be the identity");
}

int FiniteOrderTable::value(std::size_t i, std::size_t j, std::size_t k) const {
  if (i >= n_ || j >= n_ || k >= n_) throw std::out_of_range("FiniteOrderTable: index out of range");
  return values_[at(i, j, k)];
}

void FiniteOrderTable::set(std::size_t i, std::size_t j, std::size_t k, int v) {
  if (!(i < j && j < k && k < n_)) throw std::invalid_argument("FiniteOrderTable::set: need i < j < k");
  if (v != 1 && v != -1) throw std::invalid_argument("FiniteOrderTable::set: value must be +1 or -1");
  const auto s = static_cast<std::int8_t>(v);
  values_[at(i, j, k)] = s;
  values_[at(j, k, i)] = s;
  values_[at(k, i, j)] = s;
  values_[at(j, i, k)] = static_cast<std::int8_t>(-s);
  values_[at(i, k, j)] = static_cast<std::int8_t>(-s);
  values_[at(k, j, i)] = static_cast<std::int8_t>(-s);
}

FiniteOrderTable FiniteOrderTable::from_order(const OrderHandle& h, std::vector<Word> elements, unsigned jobs) {
  FiniteOrderTable t(std::move(elements));
  const std::size_t n = t.size();
  // one task per first index; rows write disjoint cells
  std::vector<std::unique_ptr<PointEvaluator>> evs(std::max(1u, jobs));
  for (auto& e : evs) e = std::make_unique<PointEvaluator>(h.evaluator());
  parallel_for(n, jobs, [&](unsigned worker, std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        int v = eval_c(h, *evs[worker], t.elements_[i], t.elements_[j], t.elements_[k]);
        if (v == 0) throw std::invalid_argument("FiniteOrderTable: repeated element in the enumeration");
        const auto s = static_cast<std::int8_t>(v);
        t.values_[t.at(i, j, k)] = s;
        t.values_[t.at(j, k, i)] = s;
        t.values_[t.at(k, i, j)] = s;
        t.values_[t.at(j, i, k)] = static_cast<std::int8_t>(-s);
        t.values_[t.at(i, k, j)] = static_cast<std::int8_t>(-s);
        t.values_[t.at(k, j, i)] = static_cast<std::int8_t>(-s);
      }
  });
  return t;
}

namespace {

ExactRational frac(const ExactRational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - f;
}

}  // namespace

int ord3_exact(const ExactRational& x, const ExactRational& y, const ExactRational& z) {
  const ExactRational u = frac(y - x), v = frac(z - x);
  if (u == 0 || v == 0 || u == v) return 0;
  return u < v ? 1 : -1;
}

std::vector<ExactRational> realize(const FiniteOrderTable& table, const ExactRational& x0) {
  const std::size_t n = table.size();
  std::vector<ExactRational> iota;
  iota.push_back(frac(x0));
  if (n > 1) iota.push_back(frac(x0 + ExactRational(1, 2)));
  // indices of placed elements in counterclockwise order starting at g_0
  std::vector<std::size_t> ring{0};
  if (n > 1) ring.push_back(1);
  for (std::size_t next = 2; next < n; ++next) {
    std::size_t slot = ring.size();
    int hits = 0;
    for (std::size_t r = 0; r < ring.size(); ++r) {
      const std::size_t a = ring[r], b = ring[(r + 1) % ring.size()];
      if (table.value(a, next, b) == 1) {
        ++hits;
        slot = r;
      }
    }
    if (hits != 1)
      throw RealizationError(next, "realize: element " + std::to_string(next) + " fits " + std::to_string(hits) +
                                       " gaps; the table is not a circular order");
    const ExactRational& lo = iota[ring[slot]];
    const ExactRational& hi = iota[ring[(slot + 1) % ring.size()]];
    ExactRational width = frac(hi - lo);
    if (width == 0) width = 1;
    iota.push_back(frac(lo + width / 2));
    ring.insert(ring.begin() + static_cast<std::ptrdiff_t>(slot + 1), next);
  }
  return iota;
}

std::vector<Word> enumerate_elements(const Group& g, std::size_t count) {
  std::vector<Word> out;
  if (count == 0) return out;
  std::set<Word> seen;
  std::vector<Word> letters;
  for (const auto& s : g.letters()) letters.push_back(g.gen(s.gen, s.exp));
  out.push_back(g.identity());
  seen.insert(out.back());
  for (std::size_t head = 0; out.size() < count && head < out.size(); ++head) {
    for (const auto& l : letters) {
      Word w = g.multiply(out[head], l);
      if (seen.insert(w).second) {
        out.push_back(std::move(w));
        if (out.size() == count) break;
      }
    }
  }
  return out;
}

std::string RoundtripReport::render() const {
  std::ostringstream os;
  os << "depth " << depth << ": " << triples << " triples, " << mismatches << " mismatches, angles "
     << (dyadic ? "dyadic" : "NOT dyadic") << "\n";
  return os.str();
}

RoundtripReport roundtrip(const OrderHandle& h, std::size_t depth, unsigned jobs) {
  if (depth == 0) throw std::invalid_argument("roundtrip: depth must be positive");
  RoundtripReport rep;
  rep.depth = depth;
  auto table = FiniteOrderTable::from_order(h, enumerate_elements(h.group(), depth), jobs);
  const ExactRational x0 = h.config().element_point(1);
  rep.angles = realize(table, x0);
  for (const auto& a : rep.angles) {
    ExactRational off = frac(a - x0);
    const mpz_class& den = off.get_den();
    rep.dyadic = rep.dyadic && mpz_popcount(den.get_mpz_t()) == 1;
  }
  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        ++rep.triples;
        if (ord3_exact(rep.angles[i], rep.angles[j], rep.angles[k]) != table.value(i, j, k)) ++rep.mismatches;
      }
  return rep;
}

}  // namespace isocirc
