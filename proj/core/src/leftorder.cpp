#include "isocirc/leftorder.hpp"

#include <algorithm>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>

#include "isocirc/parallel.hpp"

namespace isocirc {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

void check_syllable(const Group& g, const Syllable& s) {
  const int hi = s.gen.kind == GenKind::E ? g.k() : 2 * g.n();
  if (s.gen.index < 1 || s.gen.index > hi)
    throw std::out_of_range("generator " + std::string(s.gen.kind == GenKind::E ? "e" : "h") +
                            std::to_string(s.gen.index) + " out of range");
}

}  // namespace

HatWord hat_reduce(const Group& g, std::span<const Syllable> raw, std::int64_t z_exp) {
  std::vector<Syllable> stack;
  stack.reserve(raw.size());
  for (const Syllable& in : raw) {
    check_syllable(g, in);
    if (in.exp == 0) continue;
    Syllable s = in;
    if (!stack.empty() && stack.back().gen == s.gen) {
      s.exp += stack.back().exp;
      stack.pop_back();
    }
    if (s.gen.kind == GenKind::E) {
      const std::int64_t m = g.order_of(s.gen.index);
      z_exp += floor_div(s.exp, m);
      s.exp -= floor_div(s.exp, m) * m;
    }
    if (s.exp != 0) stack.push_back(s);
  }
  return {g.reduce(stack), z_exp};
}

HatWord hat_multiply(const Group& g, const HatWord& a, const HatWord& b) {
  g.check_same(a.base);
  g.check_same(b.base);
  std::vector<Syllable> raw(a.base.syllables());
  raw.insert(raw.end(), b.base.syllables().begin(), b.base.syllables().end());
  return hat_reduce(g, raw, a.z_exp + b.z_exp);
}

HatWord hat_invert(const Group& g, const HatWord& a) {
  g.check_same(a.base);
  std::vector<Syllable> raw;
  raw.reserve(a.base.size());
  for (auto it = a.base.syllables().rbegin(); it != a.base.syllables().rend(); ++it) raw.push_back({it->gen, -it->exp});
  return hat_reduce(g, raw, -a.z_exp);
}

HatWord hat_power(const Group& g, const HatWord& a, std::int64_t p) {
  HatWord base = p < 0 ? hat_invert(g, a) : a;
  std::uint64_t e = p < 0 ? static_cast<std::uint64_t>(-(p + 1)) + 1 : static_cast<std::uint64_t>(p);
  HatWord out{g.identity(), 0};
  while (e != 0) {
    if (e & 1) out = hat_multiply(g, out, base);
    e >>= 1;
    if (e != 0) base = hat_multiply(g, base, base);
  }
  return out;
}

HatWord hat_central(std::int64_t p) { return {Word(), p}; }

HatWord hat_gen(const Group& g, Gen gen, std::int64_t exp) {
  const Syllable s{gen, exp};
  return hat_reduce(g, std::span<const Syllable>(&s, 1));
}

std::string format_hat(const Group& g, const HatWord& w) {
  if (w.z_exp == 0) return g.format(w.base);
  const std::string z = w.z_exp == 1 ? "z" : "z^" + std::to_string(w.z_exp);
  if (w.base.is_identity()) return z;
  return g.format(w.base) + " " + z;
}

const char* to_string(Order o) {
  switch (o) {
    case Order::Less: return "less";
    case Order::Equal: return "equal";
    case Order::Greater: return "greater";
  }
  return "?";
}

LeftOrderHandle::LeftOrderHandle(OrderHandle circular) : circular_(std::move(circular)) {
  if (circular_.group().k() == 0) throw std::invalid_argument("left order: the extension needs k >= 1");
  basepoint_ = circular_.config().element_point(1) / circular_.degree();
  basepoint_.canonicalize();
}

Ball LeftOrderHandle::position(const HatWord& w, mpfr_prec_t prec) const {
  const Configuration& c = circular_.config();
  const Ball x = Ball::from_rational(c.element_point(1), prec);
  const Ball y = c.lift(w.base, x, circular_.shifts());
  return y / Ball(circular_.degree(), prec) + static_cast<long>(w.z_exp);
}

Ball LeftOrderHandle::raw_position(std::span<const Syllable> raw, mpfr_prec_t prec) const {
  const Configuration& c = circular_.config();
  const Group& g = group();
  const auto shifts = circular_.shifts();
  Ball y = Ball::from_rational(c.element_point(1), prec);
  for (auto it = raw.rbegin(); it != raw.rend(); ++it) {
    check_syllable(g, *it);
    if (it->gen.kind == GenKind::E) {
      if (it->exp < 0) throw std::invalid_argument("raw_position: e-exponents must be non-negative");
      const Word step = g.e(it->gen.index);
      for (std::int64_t i = 0; i < it->exp; ++i) y = c.lift(step, y, shifts);
    } else if (it->exp != 0) {
      y = c.lift(g.h(it->gen.index, it->exp), y, shifts);
    }
  }
  return y / Ball(circular_.degree(), prec);
}

std::optional<long> LeftOrderHandle::window_index(const HatWord& w) const {
  if (w.base.is_identity()) return static_cast<long>(w.z_exp);
  for (mpfr_prec_t prec : circular_.config().precision().ladder()) {
    const Ball delta = position(w, prec) - Ball::from_rational(basepoint_, prec);
    if (auto f = delta.floor_if_determined()) return f;
  }
  return std::nullopt;
}

Order hat_compare(const LeftOrderHandle& h, const HatWord& a, const HatWord& b) {
  if (a == b) return Order::Equal;
  if (a.base == b.base) return a.z_exp < b.z_exp ? Order::Less : Order::Greater;
  for (mpfr_prec_t prec : h.circular().config().precision().ladder()) {
    if (auto c = compare(h.position(a, prec), h.position(b, prec))) return *c < 0 ? Order::Less : Order::Greater;
  }
  const Group& g = h.group();
  throw InconclusiveError("hat_compare: precision cap reached on " + format_hat(g, a) + " vs " + format_hat(g, b));
}

CofinalBounds cofinal_bounds(const LeftOrderHandle& h, const HatWord& w) {
  if (w.base.is_identity()) return {w.z_exp - 1, w.z_exp + 1};
  auto f = h.window_index(w);
  if (!f) throw InconclusiveError("cofinal_bounds: precision cap reached on " + format_hat(h.group(), w));
  // the position is never an integer translate of the basepoint here
  return {*f, *f + 1};
}

HatWord window_lift(const LeftOrderHandle& h, const Word& g) {
  HatWord w{g, 0};
  auto f = h.window_index(w);
  if (!f) throw InconclusiveError("window_lift: precision cap reached on " + h.group().format(g));
  w.z_exp = -*f;
  return w;
}

namespace {

// Sign of the permutation that sorts three distinct items under less.
template <typename Less>
int sort_sign(const Less& less) {
  int inversions = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (less(j, i)) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

}  // namespace

int project_order(const LeftOrderHandle& h, const Word& g1, const Word& g2, const Word& g3) {
  if (g1 == g2 || g2 == g3 || g1 == g3) return 0;
  const std::array<HatWord, 3> lifts{window_lift(h, g1), window_lift(h, g2), window_lift(h, g3)};
  return sort_sign([&](int i, int j) {
    return hat_compare(h, lifts[static_cast<std::size_t>(i)], lifts[static_cast<std::size_t>(j)]) == Order::Less;
  });
}

HatWord HatMap::apply(const Group& g, const HatWord& w) const {
  if (e_images.size() != static_cast<std::size_t>(g.k()) || h_images.size() != static_cast<std::size_t>(2 * g.n()))
    throw std::invalid_argument("HatMap: one image per generator required");
  HatWord out{g.identity(), 0};
  for (const auto& s : w.base.syllables()) {
    const HatWord& img = s.gen.kind == GenKind::E ? e_images[static_cast<std::size_t>(s.gen.index - 1)]
                                                  : h_images[static_cast<std::size_t>(s.gen.index - 1)];
    out = hat_multiply(g, out, hat_power(g, img, s.exp));
  }
  if (w.z_exp != 0) {
    const HatWord z_image = hat_power(g, e_images.front(), g.order_of(1));
    out = hat_multiply(g, out, hat_power(g, z_image, w.z_exp));
  }
  return out;
}

int HatMap::center_sign(const Group& g) const {
  if (e_images.size() != static_cast<std::size_t>(g.k()) || g.k() == 0) return 0;
  int sign = 0;
  for (int i = 1; i <= g.k(); ++i) {
    const HatWord p = hat_power(g, e_images[static_cast<std::size_t>(i - 1)], g.order_of(i));
    if (!p.base.is_identity() || (p.z_exp != 1 && p.z_exp != -1)) return 0;
    if (sign != 0 && p.z_exp != sign) return 0;
    sign = static_cast<int>(p.z_exp);
  }
  return sign;
}

GeneratorMap HatMap::project() const {
  GeneratorMap m;
  for (const auto& w : e_images) m.e_images.push_back(w.base);
  for (const auto& w : h_images) m.h_images.push_back(w.base);
  return m;
}

HatMap HatMap::identity(const Group& g) {
  HatMap m;
  for (int i = 1; i <= g.k(); ++i) m.e_images.push_back(hat_gen(g, {GenKind::E, i}));
  for (int j = 1; j <= 2 * g.n(); ++j) m.h_images.push_back(hat_gen(g, {GenKind::H, j}));
  return m;
}

HatMap HatMap::inner(const Group& g, const HatWord& by) {
  const HatWord inv = hat_invert(g, by);
  HatMap m = identity(g);
  for (auto* images : {&m.e_images, &m.h_images})
    for (auto& w : *images) w = hat_multiply(g, hat_multiply(g, by, w), inv);
  return m;
}

std::string CompatReport::render() const {
  std::ostringstream os;
  os << triples << " triples: " << mismatches << " mismatches\n";
  for (const auto& d : details) os << "  " << d << "\n";
  return os.str();
}

CompatReport automorphism_compat_check(const LeftOrderHandle& h, const HatMap& phi, const HatMap& inverse,
                                       const std::vector<std::array<Word, 3>>& sample) {
  const Group& g = h.group();
  const int eps = phi.center_sign(g);
  if (eps == 0) throw std::invalid_argument("automorphism: image of z is not z or z^-1");
  if (inverse.center_sign(g) != eps) throw std::invalid_argument("automorphism: inverse does not preserve the center");
  auto check_inverse = [&](const HatMap& outer, const HatMap& inner) {
    for (int i = 1; i <= g.k(); ++i) {
      const HatWord x = hat_gen(g, {GenKind::E, i});
      if (!(outer.apply(g, inner.apply(g, x)) == x))
        throw std::invalid_argument("automorphism: supplied inverse fails on " + format_hat(g, x));
    }
    for (int j = 1; j <= 2 * g.n(); ++j) {
      const HatWord x = hat_gen(g, {GenKind::H, j});
      if (!(outer.apply(g, inner.apply(g, x)) == x))
        throw std::invalid_argument("automorphism: supplied inverse fails on " + format_hat(g, x));
    }
  };
  check_inverse(inverse, phi);
  check_inverse(phi, inverse);

  const GeneratorMap base_map = phi.project();
  CompatReport rep;
  for (const auto& t : sample) {
    ++rep.triples;
    // projection of the pulled-back order: window lifts for phi^* <, whose positive
    // central generator is z^eps
    int lhs = 0;
    if (!(t[0] == t[1] || t[1] == t[2] || t[0] == t[2])) {
      std::array<HatWord, 3> images;
      for (std::size_t i = 0; i < 3; ++i) {
        const HatWord moved = phi.apply(g, HatWord{t[i], 0});
        auto f = h.window_index(moved);
        if (!f) throw InconclusiveError("automorphism_compat_check: precision cap reached");
        images[i] = phi.apply(g, HatWord{t[i], -eps * *f});
      }
      lhs = sort_sign([&](int i, int j) {
        return hat_compare(h, images[static_cast<std::size_t>(i)], images[static_cast<std::size_t>(j)]) == Order::Less;
      });
    }
    const int rhs = project_order(h, base_map.apply(g, t[0]), base_map.apply(g, t[1]), base_map.apply(g, t[2]));
    if (lhs != rhs) {
      ++rep.mismatches;
      if (rep.details.size() < 10)
        rep.details.push_back("(" + g.format(t[0]) + "; " + g.format(t[1]) + "; " + g.format(t[2]) + ")");
    }
  }
  return rep;
}

std::string LeftOrderReport::render() const {
  std::ostringstream os;
  os << samples << " samples: " << violations() << " violations (" << antisymmetry << " antisymmetry, " << totality
     << " totality, " << transitivity << " transitivity, " << invariance << " invariance, " << cofinality
     << " cofinality, " << winding << " winding, " << projection << " projection), " << inconclusive
     << " inconclusive\n";
  for (const auto& d : details) os << "  " << d << "\n";
  return os.str();
}

std::vector<HatWord> random_hat_words(const Group& g, std::size_t count, std::uint64_t seed, int max_syllables,
                                      int max_z) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> zd(-max_z, max_z);
  std::vector<HatWord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Word b = g.random_word(rng, max_syllables);
    out.push_back({std::move(b), zd(rng)});
  }
  return out;
}

namespace {

// Unreduced syllable string with non-negative e-exponents that may overflow m_i.
std::vector<Syllable> random_raw(const Group& g, std::mt19937_64& rng, int max_syllables) {
  std::uniform_int_distribution<int> len(0, max_syllables), coin(0, 1), hexp(1, 2);
  std::vector<Syllable> raw;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    const bool use_e = g.n() == 0 || coin(rng) == 0;
    if (use_e) {
      std::uniform_int_distribution<int> idx(1, g.k());
      const int e = idx(rng);
      std::uniform_int_distribution<int> ex(1, 2 * g.order_of(e) + 1);
      raw.push_back({{GenKind::E, e}, ex(rng)});
    } else {
      std::uniform_int_distribution<int> idx(1, 2 * g.n());
      raw.push_back({{GenKind::H, idx(rng)}, coin(rng) == 0 ? hexp(rng) : -hexp(rng)});
    }
  }
  return raw;
}

struct SampleResult {
  bool antisymmetry = false, totality = false, transitivity = false, invariance = false, cofinality = false,
       winding = false, projection = false, inconclusive = false;
  std::string detail;
};

}  // namespace

LeftOrderReport check_left_order(const LeftOrderHandle& h, std::size_t samples, std::uint64_t seed, unsigned jobs) {
  const Group& g = h.group();
  const OrderHandle& circ = h.circular();
  // four words per sample; the fourth is the left multiplier
  const auto words = random_hat_words(g, 4 * samples, seed);
  std::vector<std::vector<Syllable>> raws;
  {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (std::size_t i = 0; i < samples; ++i) raws.push_back(random_raw(g, rng, 8));
  }
  std::vector<SampleResult> results(samples);
  std::vector<std::unique_ptr<PointEvaluator>> evs(std::max(1u, jobs));
  parallel_for(samples, jobs, [&](unsigned worker, std::size_t i) {
    if (!evs[worker] || i % 256 == 0) evs[worker] = std::make_unique<PointEvaluator>(circ.evaluator());
    SampleResult& r = results[i];
    const HatWord& a = words[4 * i];
    HatWord b = words[4 * i + 1];
    const HatWord& c = words[4 * i + 2];
    const HatWord& s = words[4 * i + 3];
    // exercise the equal branch now and then
    if (i % 16 == 0) b = a;
    try {
      const Order ab = hat_compare(h, a, b), ba = hat_compare(h, b, a), bc = hat_compare(h, b, c),
                  ac = hat_compare(h, a, c);
      auto flip = [](Order o) { return o == Order::Less ? Order::Greater : o == Order::Greater ? Order::Less : o; };
      if (ba != flip(ab)) r.antisymmetry = true;
      if ((ab == Order::Equal) != (a == b) || (ac == Order::Equal) != (a == c) || (bc == Order::Equal) != (b == c))
        r.totality = true;
      if (ab == Order::Equal ? ac != bc : bc == Order::Equal ? ac != ab : ab == bc && ac != ab) r.transitivity = true;
      if (hat_compare(h, hat_multiply(g, s, a), hat_multiply(g, s, b)) != ab) r.invariance = true;

      const CofinalBounds cb = cofinal_bounds(h, a);
      if (hat_compare(h, hat_central(cb.low), a) != Order::Less || hat_compare(h, a, hat_central(cb.high)) != Order::Less)
        r.cofinality = true;

      // the central coordinate is the winding of the letter-by-letter lift
      const HatWord reduced = hat_reduce(g, raws[i]);
      std::optional<long> wound;
      for (mpfr_prec_t p : circ.config().precision().ladder()) {
        const Ball diff = h.raw_position(raws[i], p) - h.position({reduced.base, 0}, p);
        wound = (diff + Ball::from_rational(ExactRational(1, 2), p)).floor_if_determined();
        if (wound) break;
      }
      if (!wound) {
        r.inconclusive = true;
      } else if (*wound != reduced.z_exp) {
        r.winding = true;
      }

      if (project_order(h, a.base, b.base, c.base) != eval_c(circ, *evs[worker], a.base, b.base, c.base))
        r.projection = true;
    } catch (const InconclusiveError&) {
      r.inconclusive = true;
    }
    if (r.antisymmetry || r.totality || r.transitivity || r.invariance || r.cofinality || r.winding || r.projection)
      r.detail = "(" + format_hat(g, a) + "; " + format_hat(g, b) + "; " + format_hat(g, c) + "; " + format_hat(g, s) +
                 ")";
  });
  LeftOrderReport rep;
  rep.samples = samples;
  for (const auto& r : results) {
    rep.antisymmetry += r.antisymmetry;
    rep.totality += r.totality;
    rep.transitivity += r.transitivity;
    rep.invariance += r.invariance;
    rep.cofinality += r.cofinality;
    rep.winding += r.winding;
    rep.projection += r.projection;
    rep.inconclusive += r.inconclusive;
    if (!r.detail.empty() && rep.details.size() < 10) rep.details.push_back(r.detail);
  }
  return rep;
}

}  // namespace isocirc
