#include "isocirc/circular.hpp"

#include <sstream>

#include "isocirc/parallel.hpp"

namespace isocirc {

OrderHandle::OrderHandle(std::shared_ptr<const Configuration> config, std::optional<CoverDatum> cover)
    : config_(std::move(config)), cover_(std::move(cover)) {
  if (!config_) throw std::invalid_argument("OrderHandle: null configuration");
  if (!config_->verified()) throw std::invalid_argument("OrderHandle: configuration is not verified");
  if (cover_) {
    validate_cover(config_->spec(), *cover_);
    datum_ = *cover_;
    if (cover_->d == 1) cover_.reset();
  } else {
    datum_ = *cover_datum(config_->spec(), 0);
  }
}

std::vector<long> OrderHandle::shifts() const {
  if (!cover_) return {};
  return datum_.lifts;
}

PointLabel OrderHandle::point(const Word& g) const { return translate(group(), g, config_->basepoint()); }

PointEvaluator OrderHandle::evaluator() const { return PointEvaluator(*config_, 0, shifts(), degree()); }

std::optional<int> try_eval_c(const OrderHandle& h, PointEvaluator& ev, const Word& g1, const Word& g2,
                              const Word& g3) {
  // zero exactly when two words coincide: the orbit of the basepoint is free
  if (g1 == g2 || g2 == g3 || g1 == g3) return 0;
  return ev.ord3(h.point(g1), h.point(g2), h.point(g3), h.config().precision());
}

int eval_c(const OrderHandle& h, PointEvaluator& ev, const Word& g1, const Word& g2, const Word& g3) {
  auto v = try_eval_c(h, ev, g1, g2, g3);
  if (!v) {
    const Group& g = h.group();
    throw InconclusiveError("eval_c: precision cap reached on (" + g.format(g1) + "; " + g.format(g2) + "; " +
                            g.format(g3) + ")");
  }
  return *v;
}

int eval_c(const OrderHandle& h, const Word& g1, const Word& g2, const Word& g3) {
  PointEvaluator ev = h.evaluator();
  return eval_c(h, ev, g1, g2, g3);
}

std::vector<Quadruple> random_quadruples(const Group& g, std::size_t count, std::uint64_t seed, int max_syllables) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> repeat(0, 7), slot(0, 3);
  std::vector<Quadruple> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Quadruple q;
    for (auto& w : q) w = g.random_word(rng, max_syllables);
    if (repeat(rng) == 0) {
      int a = slot(rng), b = slot(rng);
      q[static_cast<std::size_t>(a)] = q[static_cast<std::size_t>(b)];
    }
    out.push_back(std::move(q));
  }
  return out;
}

std::string AxiomReport::render() const {
  std::ostringstream os;
  os << quadruples << " quadruples, " << evaluations << " evaluations: " << violations() << " violations ("
     << degenerate_violations << " degenerate, " << cocycle_violations << " cocycle, " << invariance_violations
     << " invariance), " << inconclusive << " inconclusive\n";
  for (const auto& d : details) os << "  " << d << "\n";
  return os.str();
}

namespace {

struct QuadResult {
  std::size_t evaluations = 0;
  bool degenerate = false, cocycle = false, invariance = false, inconclusive = false;
  std::string detail;
};

}  // namespace

AxiomReport check_axioms(const OrderHandle& h, const std::vector<Quadruple>& sample, unsigned jobs) {
  const Group& g = h.group();
  std::vector<QuadResult> results(sample.size());
  std::vector<std::unique_ptr<PointEvaluator>> evs(std::max(1u, jobs));
  parallel_for(sample.size(), jobs, [&](unsigned worker, std::size_t i) {
    // fresh caches keep memory bounded on long runs
    if (!evs[worker] || i % 256 == 0) evs[worker] = std::make_unique<PointEvaluator>(h.evaluator());
    PointEvaluator& ev = *evs[worker];
    const Quadruple& q = sample[i];
    QuadResult& r = results[i];
    auto c = [&](const Word& a, const Word& b, const Word& d) {
      ++r.evaluations;
      return try_eval_c(h, ev, a, b, d);
    };
    auto c234 = c(q[1], q[2], q[3]), c134 = c(q[0], q[2], q[3]), c124 = c(q[0], q[1], q[3]),
         c123 = c(q[0], q[1], q[2]);
    const Word& s = q[3];
    auto shifted = c(g.multiply(s, q[0]), g.multiply(s, q[1]), g.multiply(s, q[2]));
    if (!c234 || !c134 || !c124 || !c123 || !shifted) {
      r.inconclusive = true;
      return;
    }
    // degeneracy: the word route and the point-label route must agree
    const bool repeated = q[0] == q[1] || q[1] == q[2] || q[0] == q[2];
    if (repeated != (*c123 == 0)) r.degenerate = true;
    auto labels = ev.ord3(h.point(q[0]), h.point(q[1]), h.point(q[2]), h.config().precision());
    if (!labels || *labels != *c123) r.degenerate = true;
    if (*c234 - *c134 + *c124 - *c123 != 0) r.cocycle = true;
    if (*shifted != *c123) r.invariance = true;
    if (r.degenerate || r.cocycle || r.invariance)
      r.detail = "(" + g.format(q[0]) + "; " + g.format(q[1]) + "; " + g.format(q[2]) + "; " + g.format(q[3]) + ")";
  });
  AxiomReport rep;
  rep.quadruples = sample.size();
  for (const auto& r : results) {
    rep.evaluations += r.evaluations;
    rep.degenerate_violations += r.degenerate;
    rep.cocycle_violations += r.cocycle;
    rep.invariance_violations += r.invariance;
    rep.inconclusive += r.inconclusive;
    if (!r.detail.empty() && rep.details.size() < 10) rep.details.push_back(r.detail);
  }
  return rep;
}

Word GeneratorMap::apply(const Group& g, const Word& w) const {
  if (e_images.size() != static_cast<std::size_t>(g.k()) || h_images.size() != static_cast<std::size_t>(2 * g.n()))
    throw std::invalid_argument("GeneratorMap: one image per generator required");
  Word out = g.identity();
  for (const auto& s : w.syllables()) {
    const Word& img = s.gen.kind == GenKind::E ? e_images[static_cast<std::size_t>(s.gen.index - 1)]
                                               : h_images[static_cast<std::size_t>(s.gen.index - 1)];
    out = g.multiply(out, g.power(img, s.exp));
  }
  return out;
}

GeneratorMap GeneratorMap::identity(const Group& g) {
  GeneratorMap m;
  for (int i = 1; i <= g.k(); ++i) m.e_images.push_back(g.e(i));
  for (int j = 1; j <= 2 * g.n(); ++j) m.h_images.push_back(g.h(j));
  return m;
}

AutomorphicOrder::AutomorphicOrder(const OrderHandle& base, GeneratorMap phi, GeneratorMap inverse)
    : base_(base), phi_(std::move(phi)), inverse_(std::move(inverse)) {
  const Group& g = base.group();
  for (const GeneratorMap* m : {&phi_, &inverse_}) {
    if (m->e_images.size() != static_cast<std::size_t>(g.k()) ||
        m->h_images.size() != static_cast<std::size_t>(2 * g.n()))
      throw std::invalid_argument("automorphism: one image per generator required");
    for (int i = 1; i <= g.k(); ++i) {
      const Word& img = m->e_images[static_cast<std::size_t>(i - 1)];
      const int order = g.order_of(i);
      if (!g.power(img, order).is_identity())
        throw std::invalid_argument("automorphism: image of " + g.format(g.e(i)) + " does not have order dividing " +
                                    std::to_string(order));
    }
  }
  auto check_inverse = [&](const GeneratorMap& outer, const GeneratorMap& inner) {
    for (int i = 1; i <= g.k(); ++i)
      if (!(outer.apply(g, inner.apply(g, g.e(i))) == g.e(i)))
        throw std::invalid_argument("automorphism: supplied inverse fails on " + g.format(g.e(i)));
    for (int j = 1; j <= 2 * g.n(); ++j)
      if (!(outer.apply(g, inner.apply(g, g.h(j))) == g.h(j)))
        throw std::invalid_argument("automorphism: supplied inverse fails on " + g.format(g.h(j)));
  };
  check_inverse(inverse_, phi_);
  check_inverse(phi_, inverse_);
}

int AutomorphicOrder::eval(PointEvaluator& ev, const Word& g1, const Word& g2, const Word& g3) const {
  const Group& g = base_.group();
  return eval_c(base_, ev, phi_.apply(g, g1), phi_.apply(g, g2), phi_.apply(g, g3));
}

LinearPart linear_part(const OrderHandle& h, const PrecisionPolicy& policy) {
  const Group& g = h.group();
  LinearPart out;
  out.exponent = h.degree();
  out.generator = g.power(g.alpha(), out.exponent);
  out.certificate = gap_orbit_check(h.config(), h.cover(), policy);
  out.certificate.name = "linear part";
  return out;
}

}  // namespace isocirc
