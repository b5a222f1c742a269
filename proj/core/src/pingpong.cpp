#include "isocirc/pingpong.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <sstream>

#include "isocirc/parallel.hpp"

namespace isocirc {

// ---- Reports ---------------------------------------------------------------------

const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Symbolic: return "symbolic";
    case CertStatus::Certified: return "certified";
    case CertStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

void CheckReport::add(std::string text, CertStatus status, bool ok) {
  lines.push_back(CheckLine{std::move(text), status, ok});
}

bool CheckReport::passed() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(std::count_if(lines.begin(), lines.end(), [](const CheckLine& l) { return !l.ok; }));
}

std::size_t CheckReport::count(CertStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(lines.begin(), lines.end(), [s](const CheckLine& l) { return l.status == s; }));
}

const CheckLine* CheckReport::first_failure() const {
  for (const auto& l : lines)
    if (!l.ok) return &l;
  return nullptr;
}

std::string CheckReport::render(bool verbose) const {
  std::ostringstream os;
  os << (passed() ? "PASS " : "FAIL ") << name << " (" << lines.size() << " items: " << count(CertStatus::Symbolic)
     << " symbolic, " << count(CertStatus::Certified) << " certified, " << count(CertStatus::Inconclusive)
     << " inconclusive)\n";
  for (const auto& l : lines) {
    if (!verbose && l.ok) continue;
    os << "  " << (l.ok ? "ok   " : "FAIL ") << "[" << to_string(l.status) << "] " << l.text << "\n";
  }
  return os.str();
}

// ---- Layout ----------------------------------------------------------------------

Layout Layout::make(const GroupSpec& spec, const ExactRational& half_width) {
  Layout out;
  out.slots = spec.k() + 4 * spec.n;
  out.half_width = half_width;
  auto centre = [&](int s) {
    ExactRational c(2 * s + 1, 2 * out.slots);
    c.canonicalize();
    return c;
  };
  for (int i = 0; i < spec.k(); ++i) out.e_centre.push_back(centre(i));
  out.h_plus_centre.resize(static_cast<std::size_t>(2 * spec.n));
  out.h_minus_centre.resize(static_cast<std::size_t>(2 * spec.n));
  for (int p = 0; p < spec.n; ++p) {
    const int b = spec.k() + 4 * p;
    const auto odd = static_cast<std::size_t>(2 * p);
    const auto even = odd + 1;
    out.h_plus_centre[odd] = centre(b);
    out.h_minus_centre[odd] = centre(b + 2);
    out.h_minus_centre[even] = centre(b + 1);
    out.h_plus_centre[even] = centre(b + 3);
  }
  return out;
}

std::uint32_t CyclicData::marker_index(const CosetTuple& t) const {
  auto it = std::find(tuples.begin(), tuples.end(), t);
  if (it == tuples.end()) throw std::invalid_argument("marker_index: unknown coset tuple");
  return static_cast<std::uint32_t>(it - tuples.begin());
}

// ---- Numbers per precision -------------------------------------------------------

struct Configuration::Numbers {
  struct Element {
    Ball phi, q, inv_q;
    std::vector<Ball> steps;  // a/m for a = 0..m-1
    Moebius image;
  };
  struct Axis {
    AxisParameters axis;
    Ball inv_squeeze;
    std::vector<Ball> powers;  // contraction^b for b = -4..4
    Moebius image;
  };
  mpfr_prec_t prec;
  Ball quarter;
  std::vector<Element> e;
  std::vector<Axis> h;
  std::optional<FixedPoints> alpha_fix;
};

struct Configuration::Cache {
  std::mutex mu;
  std::map<mpfr_prec_t, std::shared_ptr<const Numbers>> by_prec;
};

namespace {

constexpr long kPowerSpan = 4;

ExactRational frac_part(ExactRational q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  q -= f;
  return q;
}

}  // namespace

Configuration::Configuration(GroupSpec spec, ExactRational half_width, PrecisionPolicy precision)
    : spec_(std::move(spec)), precision_(precision), cache_(std::make_shared<Cache>()) {
  spec_.validate();
  precision_.validate();
  if (spec_.excluded()) throw std::invalid_argument("configuration: excluded spec " + spec_.to_string());
  const int slots = spec_.k() + 4 * spec_.n;
  if (half_width <= 0 || half_width >= ExactRational(1, 2 * slots))
    throw std::invalid_argument("configuration: petal half-width must lie in (0, 1/(2T))");
  basis_ = std::make_shared<const SBasis>(Group(spec_));
  layout_ = Layout::make(spec_, half_width);
}

std::shared_ptr<const Configuration::Numbers> Configuration::numbers(mpfr_prec_t prec) const {
  {
    std::lock_guard lock(cache_->mu);
    auto it = cache_->by_prec.find(prec);
    if (it != cache_->by_prec.end()) return it->second;
  }
  auto num = std::make_shared<Numbers>();
  num->prec = prec;
  num->quarter = Ball::from_rational(rational(1, 4), prec);
  const Ball pi = Ball::pi(prec);
  const Ball w = Ball::from_rational(layout_.half_width, prec);
  const Ball tan_w = tan(pi * w);
  for (int i = 1; i <= spec_.k(); ++i) {
    const int m = spec_.m[static_cast<std::size_t>(i - 1)];
    Numbers::Element el{Ball(prec), Ball(prec), Ball(prec), {}, Moebius::identity(prec)};
    el.phi = Ball::from_rational(layout_.e_centre[static_cast<std::size_t>(i - 1)], prec);
    el.q = tan_w * tan(pi / Ball(2 * m, prec));
    el.inv_q = Ball(1, prec) / el.q;
    for (int a = 0; a < m; ++a) el.steps.push_back(Ball::from_rational(rational(a, m), prec));
    el.image = elliptic_about(-log(el.q), el.phi, m);
    el.image.set_provenance(group().e(i));
    num->e.push_back(std::move(el));
  }
  for (int j = 1; j <= 2 * spec_.n; ++j) {
    const auto ji = static_cast<std::size_t>(j - 1);
    const ExactRational& fp = layout_.h_plus_centre[ji];
    const ExactRational& fm = layout_.h_minus_centre[ji];
    ExactRational sigma = frac_part(fm - fp);
    ExactRational centre = fp + sigma / 2;
    ExactRational up = sigma / 2 + layout_.half_width;
    ExactRational um = sigma / 2 - layout_.half_width;
    Ball tp = tan(pi * Ball::from_rational(up, prec));
    Ball tm = tan(pi * Ball::from_rational(um, prec));
    Ball squeeze = sqrt(tp * tm);
    Ball delta = atan(sqrt(tp / tm)) / pi - num->quarter;
    Ball half_contraction = tan(pi * delta);
    Ball contraction = half_contraction * half_contraction;
    Ball c = Ball::from_rational(centre, prec);
    Ball u0 = atan(squeeze) / pi;
    Moebius img = hyperbolic_with(c - u0, c + u0, -log(contraction));
    img.set_provenance(group().h(j));
    Numbers::Axis ax{AxisParameters{c, squeeze, contraction}, Ball(1, prec) / squeeze, {}, std::move(img)};
    for (long b = -kPowerSpan; b <= kPowerSpan; ++b) ax.powers.push_back(pow(contraction, b));
    num->h.push_back(std::move(ax));
  }
  {
    Moebius alpha = Moebius::identity(prec);
    const Word alpha_word = group().alpha();
    for (const auto& s : alpha_word.syllables()) {
      const Moebius& g = s.gen.kind == GenKind::E ? num->e[static_cast<std::size_t>(s.gen.index - 1)].image
                                                  : num->h[static_cast<std::size_t>(s.gen.index - 1)].image;
      Moebius f = s.exp > 0 ? g : inverse(g);
      for (std::int64_t r = 0; r < (s.exp > 0 ? s.exp : -s.exp); ++r) alpha = compose(alpha, f);
    }
    if (classify(alpha) == MoebiusKind::Hyperbolic) num->alpha_fix = fixed_points(alpha);
  }
  std::lock_guard lock(cache_->mu);
  auto [it, inserted] = cache_->by_prec.emplace(prec, std::move(num));
  return it->second;
}

ExactRational Configuration::element_point(int i) const {
  return layout_.e_centre.at(static_cast<std::size_t>(i - 1)) - layout_.half_width;
}

ExactRational Configuration::plus_point(int j) const {
  return layout_.h_minus_centre.at(static_cast<std::size_t>(j - 1)) + layout_.half_width;
}

ExactRational Configuration::minus_point(int j) const {
  return layout_.h_minus_centre.at(static_cast<std::size_t>(j - 1)) - layout_.half_width;
}

Moebius Configuration::image(Gen g, mpfr_prec_t prec) const {
  auto num = numbers(prec);
  return g.kind == GenKind::E ? num->e.at(static_cast<std::size_t>(g.index - 1)).image
                              : num->h.at(static_cast<std::size_t>(g.index - 1)).image;
}

Moebius Configuration::image(const Word& w, mpfr_prec_t prec) const {
  Moebius out = Moebius::identity(prec);
  for (const auto& s : w.syllables()) {
    Moebius g = image(s.gen, prec);
    Moebius f = s.exp > 0 ? g : inverse(g);
    for (std::int64_t r = 0; r < (s.exp > 0 ? s.exp : -s.exp); ++r) out = compose(out, f, &group());
  }
  out.set_provenance(w);
  return out;
}

Ball Configuration::lift(const Word& w, const Ball& x, std::span<const long> shifts) const {
  auto num = numbers(x.precision());
  Ball y = x;
  const auto& syl = w.syllables();
  for (auto it = syl.rbegin(); it != syl.rend(); ++it) {
    const auto idx = static_cast<std::size_t>(it->gen.index - 1);
    if (it->gen.kind == GenKind::E) {
      const auto& el = num->e[idx];
      const auto a = static_cast<std::size_t>(it->exp);
      y = y - el.phi;
      y = dilation_lift(y, el.inv_q);
      y = y + el.steps[a];
      y = dilation_lift(y, el.q);
      y = y + el.phi;
      if (!shifts.empty() && shifts[idx] != 0) y = y + static_cast<long>(it->exp) * shifts[idx];
    } else {
      const auto& ax = num->h[idx];
      y = y - ax.axis.centre;
      y = dilation_lift(y, ax.inv_squeeze);
      y = y + num->quarter;
      if (it->exp >= -kPowerSpan && it->exp <= kPowerSpan)
        y = dilation_lift(y, ax.powers[static_cast<std::size_t>(it->exp + kPowerSpan)]);
      else
        y = dilation_lift(y, pow(ax.axis.contraction, static_cast<long>(it->exp)));
      y = y - num->quarter;
      y = dilation_lift(y, ax.axis.squeeze);
      y = y + ax.axis.centre;
    }
  }
  return y;
}

Ball Configuration::base_value(const MarkedPoint& p, mpfr_prec_t prec) const {
  switch (p.kind) {
    case MarkedKind::ElementPoint: return Ball::from_rational(element_point(p.index), prec);
    case MarkedKind::PlusPoint: return Ball::from_rational(plus_point(p.index), prec);
    case MarkedKind::MinusPoint: return Ball::from_rational(minus_point(p.index), prec);
    case MarkedKind::FixAttracting:
    case MarkedKind::FixRepelling: {
      auto num = numbers(prec);
      if (!num->alpha_fix) throw BallDomainError("alpha not certified hyperbolic at this precision");
      Ball r = reduce_angle(p.kind == MarkedKind::FixAttracting ? num->alpha_fix->attracting
                                                                 : num->alpha_fix->repelling);
      if (gap_.left.base.kind == MarkedKind::Free) return r;
      // Once the gap is known, pick the real representatives that bracket x_{e_1}, so that
      // lifts of the gap to covers start from the copy containing the basepoint.
      auto c = compare(r, Ball::from_rational(element_point(1), prec));
      if (!c) throw BallDomainError("fixed point of alpha not separated from the basepoint");
      const bool is_left = p.kind == gap_.left.base.kind;
      if (is_left && *c > 0) return r - 1;
      if (!is_left && *c < 0) return r + 1;
      return r;
    }
    case MarkedKind::Free: break;
  }
  throw std::invalid_argument("base_value: free points have no value");
}

bool Configuration::same_point(const PointLabel& a, const PointLabel& b, long degree) const {
  const bool fix = a.base.kind == MarkedKind::FixAttracting || a.base.kind == MarkedKind::FixRepelling;
  if (!fix || a.offset != 0 || b.offset != 0) return a == b;
  if (a.base != b.base) return false;
  auto j = group().alpha_exponent(group().multiply(group().invert(a.word), b.word));
  return j.has_value() && *j % degree == 0;
}

PointLabel Configuration::basepoint() const { return label_of(MarkedPoint{MarkedKind::ElementPoint, 1}); }

// ---- Intervals -------------------------------------------------------------------

namespace {

PointLabel pt(MarkedKind kind, int index, Word w = {}) { return label_of(MarkedPoint{kind, index}, std::move(w)); }

}  // namespace

CircleInterval Configuration::interval_J(int i) const {
  const int k = spec_.k();
  const int n = spec_.n;
  if (i < 0 || i > k) throw std::out_of_range("interval_J: index out of range");
  if (i == 0) return n > 0 ? interval_K(2 * n, -1) : interval_J(k);
  const Group& g = group();
  CircleInterval out;
  out.left = pt(MarkedKind::ElementPoint, i, g.e(i, -1));
  if (i < k)
    out.right = pt(MarkedKind::ElementPoint, i + 1, g.identity());
  else if (n > 0)
    out.right = pt(MarkedKind::PlusPoint, 1, g.h(1));
  else
    out.right = pt(MarkedKind::ElementPoint, 1, g.identity());
  return out;
}

CircleInterval Configuration::interval_K(int i, int sign) const {
  const int n2 = 2 * spec_.n;
  if (i < 0 || i > n2 || (sign != 1 && sign != -1) || (i == 0 && spec_.n == 0))
    throw std::out_of_range("interval_K: index out of range");
  if (i == 0) return interval_J(spec_.k());
  const Group& g = group();
  CircleInterval out;
  const bool odd = i % 2 == 1;
  if (sign > 0) {
    out.left = pt(MarkedKind::PlusPoint, i, g.identity());
    out.right = odd ? pt(MarkedKind::PlusPoint, i + 1, g.h(i + 1)) : pt(MarkedKind::MinusPoint, i - 1, g.identity());
  } else {
    out.left = pt(MarkedKind::MinusPoint, i, g.h(i));
    if (odd)
      out.right = pt(MarkedKind::MinusPoint, i + 1, g.identity());
    else if (i < n2)
      out.right = pt(MarkedKind::PlusPoint, i + 1, g.h(i + 1));
    else
      out.right = pt(MarkedKind::ElementPoint, 1, g.identity());
  }
  return out;
}

CircleInterval Configuration::interval_Jlambda(int t, const std::vector<int>& lambda, int sign) const {
  const auto& m = spec_.m;
  if (t < 2 || t > spec_.k() || lambda.size() != static_cast<std::size_t>(t) || (sign != 1 && sign != -1))
    throw std::invalid_argument("interval_Jlambda: malformed lambda");
  bool all_max = true;
  for (int l = 0; l < t; ++l) {
    const auto li = static_cast<std::size_t>(l);
    if (lambda[li] < 1 || lambda[li] > m[li]) throw std::invalid_argument("interval_Jlambda: malformed lambda");
    if (l < t - 1) all_max = all_max && lambda[li] == m[li];
  }
  const int u = lambda[static_cast<std::size_t>(t - 1)];
  if (all_max || u == m[static_cast<std::size_t>(t - 1)])
    throw std::invalid_argument("interval_Jlambda: lambda not in Lambda_t");
  const Group& g = group();
  Word w = prefix_word(g, lambda, t - 1);
  CircleInterval out;
  if (sign < 0) {
    out.left = pt(MarkedKind::ElementPoint, t, g.multiply(w, g.e(t, u - 1)));
    out.right = pt(MarkedKind::ElementPoint, t, g.multiply(w, g.e(t, u)));
  } else {
    Word ew = g.multiply(g.e(t, u), w);
    out.left = pt(MarkedKind::ElementPoint, t, ew);
    out.right = pt(MarkedKind::ElementPoint, t, g.multiply(ew, g.e(t, -1)));
  }
  return out;
}

CircleInterval Configuration::interval_Jh(int l, int sign) const {
  if (l < 1 || l > 2 * spec_.n || (sign != 1 && sign != -1)) throw std::out_of_range("interval_Jh: index out of range");
  const Group& g = group();
  if (sign < 0) return {pt(MarkedKind::MinusPoint, l), pt(MarkedKind::PlusPoint, l)};
  return {pt(MarkedKind::PlusPoint, l, g.h(l)), pt(MarkedKind::MinusPoint, l, g.h(l))};
}

namespace {

CircleInterval translate(const Group& g, const Word& w, const CircleInterval& arc) {
  return {translate(g, w, arc.left), translate(g, w, arc.right)};
}

std::string describe(const Group& g, const CircleInterval& arc) {
  return "[" + to_string(g, arc.left) + ", " + to_string(g, arc.right) + "]";
}

}  // namespace

std::vector<AttractingDomain> Configuration::domains_for(const ExactRational& eps) const {
  const Group& g = group();
  std::vector<AttractingDomain> out;
  const auto& gens = basis().generators();
  out.reserve(2 * gens.size());
  for (std::uint32_t i = 0; i < gens.size(); ++i) {
    const auto& s = gens[i];
    const Word inv = g.invert(s.word);
    AttractingDomain plus{i, 1, {}, s.label};
    AttractingDomain minus{i, -1, {}, s.label + "^-1"};
    if (s.kind == SGenerator::Kind::S1) {
      CircleInterval jp = translate(g, xi_word(g, s.t, s.xi), interval_Jlambda(s.t, s.lambda, 1));
      if (eps == 0) {
        plus.arc = jp;
        minus.arc = {translate(g, inv, jp.right), translate(g, inv, jp.left)};
      } else {
        PointLabel a = shifted(jp.left, -1);
        PointLabel b = shifted(jp.right, 1);
        plus.arc = {a, b};
        minus.arc = {translate(g, inv, b), translate(g, inv, a)};
      }
    } else {
      Word gamma = coset_representative(g, s.tuple);
      plus.arc = translate(g, gamma, interval_Jh(s.l, 1));
      minus.arc = translate(g, gamma, interval_Jh(s.l, -1));
    }
    out.push_back(std::move(plus));
    out.push_back(std::move(minus));
  }
  return out;
}

std::vector<PointLabel> Configuration::markers() const {
  std::vector<PointLabel> out;
  for (const auto& t : all_coset_tuples(spec_)) out.push_back(translate(group(), coset_representative(group(), t), basepoint()));
  return out;
}

// ---- Point evaluation ------------------------------------------------------------

PointEvaluator::PointEvaluator(const Configuration& config, ExactRational eps, std::vector<long> shifts, long degree)
    : config_(&config), eps_(std::move(eps)), shifts_(std::move(shifts)), degree_(degree) {
  if (degree_ < 1) throw std::invalid_argument("PointEvaluator: degree must be positive");
  if (!shifts_.empty() && shifts_.size() != static_cast<std::size_t>(config.spec().k()))
    throw std::invalid_argument("PointEvaluator: one shift per finite cyclic factor");
}

Ball PointEvaluator::value(const PointLabel& p, mpfr_prec_t prec) {
  auto key = std::make_pair(p, prec);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  max_prec_ = std::max(max_prec_, prec);
  Ball x = config_->base_value(p.base, prec);
  if (p.offset != 0) {
    x = config_->lift(p.inner, x, shifts_);
    x = x + Ball::from_rational(eps_, prec) * static_cast<long>(p.offset);
  }
  x = config_->lift(p.word, x, shifts_);
  cache_.emplace(std::move(key), x);
  return x;
}

Ball PointEvaluator::angle(const PointLabel& p, mpfr_prec_t prec) {
  Ball v = value(p, prec);
  if (degree_ > 1) v = v / Ball(degree_, prec);
  return reduce_angle(v);
}

std::optional<int> PointEvaluator::ord3(const PointLabel& a, const PointLabel& b, const PointLabel& c,
                                        const PrecisionPolicy& policy) {
  if (same(a, b) || same(b, c) || same(a, c)) return 0;
  for (mpfr_prec_t p : policy.ladder()) {
    try {
      auto o = ord3_angles(angle(a, p), angle(b, p), angle(c, p));
      if (o) return o;
    } catch (const BallDomainError&) {
    }
  }
  return std::nullopt;
}

std::optional<bool> PointEvaluator::strictly_inside(const PointLabel& p, const CircleInterval& arc,
                                                    const PrecisionPolicy& policy) {
  if (same(p, arc.left) || same(p, arc.right)) return false;
  auto o = ord3(arc.left, p, arc.right, policy);
  if (!o) return std::nullopt;
  return *o == 1;
}

std::optional<bool> PointEvaluator::disjoint(const CircleInterval& a, const CircleInterval& b,
                                             const PrecisionPolicy& policy) {
  if (same(a.left, b.left) || same(a.left, b.right) || same(a.right, b.left) || same(a.right, b.right)) return false;
  auto c_in_a = strictly_inside(b.left, a, policy);
  if (!c_in_a) return std::nullopt;
  if (*c_in_a) return false;
  auto a_in_b = strictly_inside(a.left, b, policy);
  if (!a_in_b) return std::nullopt;
  return !*a_in_b;
}

std::optional<bool> PointEvaluator::interiors_disjoint(const CircleInterval& a, const CircleInterval& b,
                                                       const PrecisionPolicy& policy) {
  if (same(a.left, b.left) || same(a.right, b.right)) return false;
  const bool ab = same(a.right, b.left);
  const bool ba = same(b.right, a.left);
  if (ab && ba) return true;
  if (ab) {
    auto o = ord3(a.right, b.right, a.left, policy);
    if (!o) return std::nullopt;
    return *o == 1;
  }
  if (ba) {
    auto o = ord3(b.right, a.right, b.left, policy);
    if (!o) return std::nullopt;
    return *o == 1;
  }
  return disjoint(a, b, policy);
}

// ---- Checks ----------------------------------------------------------------------

namespace {

CertStatus status_of(const std::optional<bool>& r) { return r ? CertStatus::Certified : CertStatus::Inconclusive; }

}  // namespace

CheckReport Configuration::check_transitions() const {
  const Group& g = group();
  CheckReport rep;
  rep.name = "transitions";
  const int k = spec_.k();
  const int n = spec_.n;

  auto identity_line = [&](const std::string& name, const PointLabel& lhs, const PointLabel& rhs) {
    const bool ok = lhs == rhs;
    rep.add(name + ": " + to_string(g, lhs) + (ok ? " == " : " != ") + to_string(g, rhs), CertStatus::Symbolic, ok);
  };

  struct Piece {
    std::string name;
    Word letter;
    CircleInterval arc;
  };
  std::vector<Piece> pieces;
  const std::string j0 = n > 0 ? "K" + std::to_string(2 * n) + "-" : "J" + std::to_string(k);
  for (int i = 1; i <= k; ++i) pieces.push_back({"J" + std::to_string(i), g.e(i), interval_J(i)});
  for (int p = 1; p <= n; ++p) {
    const int a = 2 * p - 1, b = 2 * p;
    pieces.push_back({"K" + std::to_string(a) + "+", g.h(a), interval_K(a, 1)});
    pieces.push_back({"K" + std::to_string(b) + "+", g.h(b), interval_K(b, 1)});
    pieces.push_back({"K" + std::to_string(a) + "-", g.h(a, -1), interval_K(a, -1)});
    pieces.push_back({"K" + std::to_string(b) + "-", g.h(b, -1), interval_K(b, -1)});
  }

  // Local identities d+(prev) = d-(letter . next), then the same along the chain.
  CircleInterval prev = interval_J(0);
  std::string prev_name = j0;
  Word cumulative = g.identity();
  CircleInterval first = prev;
  CircleInterval last_translated = prev;
  for (const auto& piece : pieces) {
    identity_line("d+(" + prev_name + ") = d-(" + g.format(piece.letter) + " " + piece.name + ")", prev.right,
                  translate(g, piece.letter, piece.arc.left));
    cumulative = g.multiply(cumulative, piece.letter);
    CircleInterval here = translate(g, cumulative, piece.arc);
    const bool contiguous = last_translated.right == here.left;
    rep.add("chain continues at " + g.format(cumulative) + " " + piece.name, CertStatus::Symbolic, contiguous);
    last_translated = here;
    prev = piece.arc;
    prev_name = piece.name;
  }
  const bool is_alpha = cumulative == g.alpha();
  rep.add("chain letters multiply to alpha = " + g.format(g.alpha()) + " (got " + g.format(cumulative) + ")",
          CertStatus::Symbolic, is_alpha);
  const bool closes = last_translated.left == translate(g, g.alpha(), first.left) &&
                      last_translated.right == translate(g, g.alpha(), first.right);
  rep.add("last piece is alpha " + j0 + " = " + describe(g, translate(g, g.alpha(), first)), CertStatus::Symbolic,
          closes);
  return rep;
}


CheckReport Configuration::check_generators(const PrecisionPolicy& policy) const {
  const Group& g = group();
  CheckReport rep;
  rep.name = "generators";
  for (int i = 1; i <= spec_.k(); ++i) {
    const int m = g.order_of(i);
    bool ok = false, decided = false;
    for (mpfr_prec_t p : policy.ladder()) {
      Moebius f = image(g.e(i), p);
      Moebius power = Moebius::identity(p);
      for (int r = 0; r < m; ++r) power = compose(power, f);
      if (classify(f) == MoebiusKind::Elliptic) {
        ok = power.contains_identity();
        decided = true;
        break;
      }
    }
    rep.add(g.format(g.e(i)) + " elliptic with order " + std::to_string(m),
            decided ? CertStatus::Certified : CertStatus::Inconclusive, ok);
  }
  for (int j = 1; j <= 2 * spec_.n; ++j) {
    std::optional<bool> ok;
    for (mpfr_prec_t p : policy.ladder()) {
      try {
        Moebius f = image(g.h(j), p);
        if (classify(f) != MoebiusKind::Hyperbolic) continue;
        FixedPoints fp = fixed_points(f);
        Ball lo = Ball::from_rational(minus_point(j), p);
        Ball hi = Ball::from_rational(plus_point(j), p);
        auto rep_in = ord3_angles(lo, fp.repelling, hi);
        // the attracting point sits between h(x+) and h(x-)
        Ball alo = act(f, hi);
        Ball ahi = act(f, lo);
        auto att_in = ord3_angles(alo, fp.attracting, ahi);
        if (rep_in && att_in) {
          ok = *rep_in == 1 && *att_in == 1;
          break;
        }
      } catch (const BallDomainError&) {
      }
    }
    rep.add(g.format(g.h(j)) + " hyperbolic, repelling point in [x-, x+], attracting point in h[x+, x-]",
            status_of(ok), ok.value_or(false));
  }
  return rep;
}

CheckReport Configuration::check_gap(const PrecisionPolicy& policy, CircleInterval* gap_out) const {
  const Group& g = group();
  CheckReport rep;
  rep.name = "gap";
  const PointLabel lo = label_of(MarkedPoint{MarkedKind::FixRepelling, 0});
  const PointLabel hi = label_of(MarkedPoint{MarkedKind::FixAttracting, 0});
  const Word alpha = g.alpha();
  rep.add("alpha fixes both gap endpoints", CertStatus::Symbolic,
          same_point(translate(g, alpha, lo), lo) && same_point(translate(g, alpha, hi), hi));

  PointEvaluator ev(*this);
  const PointLabel x = basepoint();
  auto orient = ev.ord3(lo, x, hi, policy);
  if (!orient) {
    rep.add("basepoint separated from the fixed points of alpha", CertStatus::Inconclusive, false);
    return rep;
  }
  CircleInterval gap = *orient == 1 ? CircleInterval{lo, hi} : CircleInterval{hi, lo};
  rep.add("gap " + describe(g, gap) + " contains the basepoint", CertStatus::Certified, true);
  for (const auto& [name, w] : {std::pair<std::string, Word>{"alpha", alpha}, {"alpha^-1", g.invert(alpha)}}) {
    auto in = ev.strictly_inside(translate(g, w, x), gap, policy);
    rep.add(name + " x_e1 inside the gap", status_of(in), in.value_or(false));
  }
  if (gap_out && rep.passed()) *gap_out = gap;
  return rep;
}

namespace {

enum class ArcFamily : std::uint8_t { JlambdaPlus, JlambdaMinus, JhPlus, JhMinus };

struct FamilyArc {
  ArcFamily family;
  std::uint32_t generator;
  CircleInterval arc;
};

const char* family_name(ArcFamily f) {
  switch (f) {
    case ArcFamily::JlambdaPlus: return "F1";
    case ArcFamily::JlambdaMinus: return "F2";
    case ArcFamily::JhPlus: return "F3";
    case ArcFamily::JhMinus: return "F4";
  }
  return "?";
}

}  // namespace

CheckReport Configuration::check_intersections(const PrecisionPolicy& policy, unsigned jobs) const {
  const Group& g = group();
  CheckReport rep;
  rep.name = "intersections";
  std::vector<FamilyArc> arcs;
  const auto& gens = basis().generators();
  for (std::uint32_t i = 0; i < gens.size(); ++i) {
    const auto& s = gens[i];
    if (s.kind == SGenerator::Kind::S1) {
      Word xi = xi_word(g, s.t, s.xi);
      arcs.push_back({ArcFamily::JlambdaPlus, i, translate(g, xi, interval_Jlambda(s.t, s.lambda, 1))});
      arcs.push_back({ArcFamily::JlambdaMinus, i, translate(g, xi, interval_Jlambda(s.t, s.lambda, -1))});
    } else {
      Word gamma = coset_representative(g, s.tuple);
      arcs.push_back({ArcFamily::JhPlus, i, translate(g, gamma, interval_Jh(s.l, 1))});
      arcs.push_back({ArcFamily::JhMinus, i, translate(g, gamma, interval_Jh(s.l, -1))});
    }
  }
  // Several S1 generators share J_lambda^- translates; keep each arc once.
  std::vector<FamilyArc> unique;
  for (const auto& a : arcs) {
    bool dup = std::any_of(unique.begin(), unique.end(), [&](const FamilyArc& u) {
      return u.family == a.family && u.arc.left == a.arc.left && u.arc.right == a.arc.right;
    });
    if (!dup) unique.push_back(a);
  }
  arcs = std::move(unique);

  struct Task {
    std::size_t a, b;  // b == npos: marker a against arc index in `arc`
    std::size_t marker = 0;
  };
  const auto marks = markers();
  std::vector<Task> tasks;
  for (std::size_t a = 0; a < arcs.size(); ++a)
    for (std::size_t b = a + 1; b < arcs.size(); ++b) tasks.push_back({a, b});
  for (std::size_t mk = 0; mk < marks.size(); ++mk)
    for (std::size_t a = 0; a < arcs.size(); ++a) tasks.push_back({a, std::string::npos, mk});

  std::vector<CheckLine> lines(tasks.size());
  std::vector<std::unique_ptr<PointEvaluator>> evs(std::max(1u, jobs));
  for (auto& e : evs) e = std::make_unique<PointEvaluator>(*this);
  parallel_for(tasks.size(), jobs, [&](unsigned worker, std::size_t t) {
    PointEvaluator& ev = *evs[worker];
    const Task& task = tasks[t];
    const FamilyArc& A = arcs[task.a];
    if (task.b == std::string::npos) {
      auto in = ev.strictly_inside(marks[task.marker], A.arc, policy);
      const bool on_end = ev.same(marks[task.marker], A.arc.left) || ev.same(marks[task.marker], A.arc.right);
      std::optional<bool> outside = on_end ? std::optional<bool>(false) : (in ? std::optional<bool>(!*in) : in);
      lines[t] = {"marker " + to_string(g, marks[task.marker]) + " outside " + family_name(A.family) + " " +
                      describe(g, A.arc),
                  status_of(outside), outside.value_or(false)};
      return;
    }
    const FamilyArc& B = arcs[task.b];
    const bool same_family = A.family == B.family;
    std::optional<bool> ok;
    std::string relation;
    if (same_family && A.family == ArcFamily::JlambdaMinus) {
      ok = ev.interiors_disjoint(A.arc, B.arc, policy);
      relation = "interiors disjoint";
    } else {
      ok = ev.disjoint(A.arc, B.arc, policy);
      relation = "disjoint";
    }
    lines[t] = {std::string(family_name(A.family)) + " " + describe(g, A.arc) + " and " + family_name(B.family) + " " +
                    describe(g, B.arc) + " " + relation,
                status_of(ok), ok.value_or(false)};
  });
  for (auto& l : lines) rep.lines.push_back(std::move(l));
  return rep;
}

std::optional<CyclicData> Configuration::order_items(const std::vector<AttractingDomain>& domains,
                                                     const ExactRational& eps, const PrecisionPolicy& policy) const {
  const auto tuples = all_coset_tuples(spec_);
  const auto marks = markers();
  const std::size_t nd = domains.size();
  const std::size_t n_items = nd + marks.size();
  const std::size_t identity_marker = marks.size() - 1;

  struct Entry {
    CyclicItem item;
    PointLabel left, right;
  };
  std::vector<Entry> entries;
  for (std::size_t d = 0; d < nd; ++d)
    entries.push_back({{CyclicItem::Kind::Domain, static_cast<std::uint32_t>(d)}, domains[d].arc.left, domains[d].arc.right});
  for (std::size_t m = 0; m < marks.size(); ++m)
    entries.push_back({{CyclicItem::Kind::Marker, static_cast<std::uint32_t>(m)}, marks[m], marks[m]});

  PointEvaluator ev(*this, eps);
  for (mpfr_prec_t p : policy.ladder()) {
    bool undecided = false;
    try {
      const Ball origin = ev.angle(marks[identity_marker], p);
      auto rel = [&](const PointLabel& x) -> Ball {
        if (x == marks[identity_marker]) return Ball(0, p);
        return reduce_angle(ev.angle(x, p) - origin);
      };
      std::vector<std::pair<Ball, Ball>> pos;
      pos.reserve(n_items);
      for (const auto& e : entries) pos.emplace_back(rel(e.left), rel(e.right));
      std::vector<std::size_t> order(n_items);
      for (std::size_t i = 0; i < n_items; ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return mpfr_less_p(pos[a].first.mid(), pos[b].first.mid()) != 0;
      });
      if (order.front() != nd + identity_marker) return std::nullopt;
      // x < y certified; nullopt when undecided
      auto less = [&](const Ball& x, const Ball& y) -> std::optional<bool> {
        auto c = compare(x, y);
        if (!c) return std::nullopt;
        return *c < 0;
      };
      const Ball one(1, p);
      for (std::size_t r = 0; r < n_items && !undecided; ++r) {
        const Entry& e = entries[order[r]];
        const auto& [l, rt] = pos[order[r]];
        std::vector<std::optional<bool>> conds;
        if (e.item.kind == CyclicItem::Kind::Domain) conds.push_back(less(l, rt));
        if (r > 0 && e.item.kind == CyclicItem::Kind::Domain) conds.push_back(less(Ball(0, p), l));
        if (r + 1 < n_items) {
          const Entry& nx = entries[order[r + 1]];
          if (ev.same(e.right, nx.left)) return std::nullopt;
          conds.push_back(less(rt, pos[order[r + 1]].first));
        } else {
          conds.push_back(less(rt, one));
        }
        for (const auto& c : conds) {
          if (!c) undecided = true;
          else if (!*c) return std::nullopt;
        }
      }
      if (undecided) continue;
      CyclicData data;
      data.tuples = tuples;
      data.generator_count = nd / 2;
      data.position_of_domain.assign(nd, 0);
      data.position_of_marker.assign(marks.size(), 0);
      for (std::size_t r = 0; r < n_items; ++r) {
        const CyclicItem it = entries[order[r]].item;
        data.items.push_back(it);
        (it.kind == CyclicItem::Kind::Domain ? data.position_of_domain : data.position_of_marker)[it.index] =
            static_cast<std::uint32_t>(r);
      }
      return data;
    } catch (const BallDomainError&) {
      continue;
    }
  }
  return std::nullopt;
}

CheckReport Configuration::fit_domains(const PrecisionPolicy& policy) {
  CheckReport rep;
  rep.name = "domains";
  const std::size_t nd = 2 * basis().size();
  const ExactRational hi(1, static_cast<long>(8 * nd));
  auto admissible = [&](const ExactRational& eps) -> std::optional<CyclicData> {
    return order_items(domains_for(eps), eps, policy);
  };
  auto dyadic = [](int e) {
    mpz_class den = 1;
    den <<= e;
    return ExactRational(mpz_class(1), den);
  };

  ExactRational best = 0;
  std::optional<CyclicData> data = admissible(hi);
  if (data) {
    best = hi;
  } else {
    // smallest exponent e with 2^-e admissible, assuming admissibility is monotone in eps
    int lo_e = 0;
    while (dyadic(lo_e) > hi) ++lo_e;
    int hi_e = kEpsilonMinExponent;
    auto at_cap = admissible(dyadic(hi_e));
    if (!at_cap) {
      rep.add("no admissible thickening down to 2^-" + std::to_string(kEpsilonMinExponent), CertStatus::Certified,
              false);
      return rep;
    }
    data = at_cap;
    while (hi_e - lo_e > 1) {
      const int mid = (lo_e + hi_e) / 2;
      auto d = admissible(dyadic(mid));
      if (d) {
        hi_e = mid;
        data = d;
      } else {
        lo_e = mid;
      }
    }
    best = dyadic(hi_e);
    ExactRational bad = std::min(dyadic(hi_e - 1), hi);
    for (int step = 0; step < kEpsilonRefineSteps; ++step) {
      ExactRational mid = (best + bad) / 2;
      auto d = admissible(mid);
      if (d) {
        best = mid;
        data = d;
      } else {
        bad = mid;
      }
    }
  }
  epsilon_ = best;
  domains_ = domains_for(best);
  cyclic_ = std::move(*data);
  rep.add("thickening eps = " + to_string(best), CertStatus::Certified, true);
  rep.add(std::to_string(domains_.size()) + " domains and " + std::to_string(cyclic_.tuples.size()) +
              " coset markers pairwise disjoint in a certified cyclic order",
          CertStatus::Certified, true);
  return rep;
}

CheckReport Configuration::check_pingpong(const PrecisionPolicy& policy, unsigned jobs) const {
  const Group& g = group();
  CheckReport rep;
  rep.name = "pingpong";
  if (domains_.empty()) {
    rep.add("domains not fitted", CertStatus::Symbolic, false);
    return rep;
  }
  const auto& gens = basis().generators();
  for (std::uint32_t s = 0; s < gens.size(); ++s) {
    const AttractingDomain& plus = domain(s, 1);
    const AttractingDomain& minus = domain(s, -1);
    const Word& w = gens[s].word;
    const Word wi = g.invert(w);
    bool ok = translate(g, w, minus.arc.left) == plus.arc.right && translate(g, w, minus.arc.right) == plus.arc.left;
    rep.add(plus.owner + " maps the complement of D(" + minus.owner + ") onto the interior of D(" + plus.owner + ")",
            CertStatus::Symbolic, ok);
    ok = translate(g, wi, plus.arc.left) == minus.arc.right && translate(g, wi, plus.arc.right) == minus.arc.left;
    rep.add(minus.owner + " maps the complement of D(" + plus.owner + ") onto the interior of D(" + minus.owner + ")",
            CertStatus::Symbolic, ok);
  }

  // Data (2): every other item is carried strictly inside D(t) by t.
  const auto marks = markers();
  struct Task {
    std::uint32_t owner;
    CyclicItem item;
  };
  std::vector<Task> tasks;
  for (std::uint32_t t = 0; t < domains_.size(); ++t) {
    const std::uint32_t opposite = t ^ 1u;
    for (std::uint32_t x = 0; x < domains_.size(); ++x)
      if (x != opposite) tasks.push_back({t, {CyclicItem::Kind::Domain, x}});
    for (std::uint32_t m = 0; m < marks.size(); ++m) tasks.push_back({t, {CyclicItem::Kind::Marker, m}});
  }
  std::vector<CheckLine> lines(tasks.size());
  std::vector<std::unique_ptr<PointEvaluator>> evs(std::max(1u, jobs));
  for (auto& e : evs) e = std::make_unique<PointEvaluator>(*this, epsilon_);
  parallel_for(tasks.size(), jobs, [&](unsigned worker, std::size_t i) {
    PointEvaluator& ev = *evs[worker];
    const Task& task = tasks[i];
    const AttractingDomain& D = domains_[task.owner];
    const Word& word = D.sign > 0 ? gens[D.generator].word : g.invert(gens[D.generator].word);
    std::optional<bool> ok;
    std::string what;
    if (task.item.kind == CyclicItem::Kind::Marker) {
      ok = ev.strictly_inside(translate(g, word, marks[task.item.index]), D.arc, policy);
      what = "marker " + std::to_string(task.item.index);
    } else {
      const CircleInterval img = translate(g, word, domains_[task.item.index].arc);
      auto a = ev.strictly_inside(img.left, D.arc, policy);
      auto b = ev.strictly_inside(img.right, D.arc, policy);
      auto o = ev.ord3(D.arc.left, img.left, img.right, policy);
      if (a && b && o) ok = *a && *b && *o == 1;
      what = "D(" + domains_[task.item.index].owner + ")";
    }
    lines[i] = {D.owner + " carries " + what + " into D(" + D.owner + ")", status_of(ok), ok.value_or(false)};
  });
  for (auto& l : lines) rep.lines.push_back(std::move(l));
  return rep;
}

void Configuration::run_suite(const BuildParams& params) {
  reports_.clear();
  verified_ = false;
  domains_.clear();
  epsilon_ = 0;
  auto record = [&](CheckReport r) {
    const bool ok = r.passed();
    reports_.push_back(std::move(r));
    return ok;
  };
  const auto& pol = precision_;
  if (!record(check_generators(pol))) return;
  if (!record(check_transitions())) return;
  if (!record(check_gap(pol, &gap_))) return;
  if (!record(check_intersections(pol, params.jobs))) return;
  if (!record(fit_domains(pol))) return;
  if (!record(check_pingpong(pol, params.jobs))) return;
  verified_ = true;
}

Configuration Configuration::build(const GroupSpec& spec, const BuildParams& params) {
  if (spec.excluded()) throw std::invalid_argument("configuration: excluded spec " + spec.to_string());
  spec.validate();
  if (params.petal_fraction <= 0 || params.petal_fraction >= 1)
    throw std::invalid_argument("build: petal fraction must lie in (0, 1)");
  const int slots = spec.k() + 4 * spec.n;
  ExactRational w = params.petal_fraction / (2 * slots);
  std::string last_check = "none", last_detail;
  for (int shrink = 0; shrink <= params.max_shrink; ++shrink, w /= 2) {
    Configuration c(spec, w, params.precision);
    c.run_suite(params);
    if (c.verified()) return c;
    const CheckReport& failed = c.reports_.back();
    last_check = failed.name;
    last_detail = failed.first_failure() ? failed.first_failure()->text : "failed";
  }
  throw ConfigurationError(last_check, last_detail);
}

std::string Configuration::status_digest() const {
  std::ostringstream os;
  os << "spec " << spec_.to_string() << "\nhalf_width " << to_string(layout_.half_width) << "\nepsilon "
     << to_string(epsilon_) << "\nprecision " << precision_.start_bits << " " << precision_.cap_bits << "\n";
  for (const auto& r : reports_)
    os << r.name << " " << r.passed() << " " << r.lines.size() << " " << r.count(CertStatus::Symbolic) << " "
       << r.count(CertStatus::Certified) << " " << r.count(CertStatus::Inconclusive) << "\n";
  for (const auto& it : cyclic_.items) os << (it.kind == CyclicItem::Kind::Domain ? 'D' : 'M') << it.index << " ";
  const std::string text = os.str();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---- Combinatorial cyclic order --------------------------------------------------

namespace {

struct ItemRef {
  bool marker;
  std::uint32_t index;  // domain index or tuple index
};

ItemRef item_of(const CyclicData& data, const OrbitPoint& p, std::size_t from) {
  if (from < p.word.size())
    return {false, Configuration::domain_index(p.word[from].index, p.word[from].sign)};
  return {true, data.marker_index(p.tuple)};
}

std::uint32_t position(const CyclicData& data, ItemRef r) {
  return r.marker ? data.position_of_marker[r.index] : data.position_of_domain[r.index];
}

// p before q in the circle cut just after the item at position `cut`; the words are read
// from offset `depth`, which both share as a common prefix.
bool lin_less(const CyclicData& data, std::uint32_t cut, const OrbitPoint& p, const OrbitPoint& q, std::size_t depth) {
  const auto n = static_cast<std::uint32_t>(data.items.size());
  for (;;) {
    ItemRef a = item_of(data, p, depth), b = item_of(data, q, depth);
    const std::uint32_t pa = position(data, a), pb = position(data, b);
    if (pa != pb) return (pa + n - cut) % n < (pb + n - cut) % n;
    if (a.marker) return false;  // equal points
    const SLetter l = p.word[depth];
    cut = data.position_of_domain[Configuration::domain_index(l.index, -l.sign)];
    ++depth;
  }
}

}  // namespace

int combinatorial_cyclic_order(const CyclicData& data, const OrbitPoint& a, const OrbitPoint& b, const OrbitPoint& c) {
  for (const OrbitPoint* p : {&a, &b, &c}) {
    if (free_reduce(p->word) != p->word) throw std::invalid_argument("combinatorial order: word not freely reduced");
    for (const auto& l : p->word)
      if (l.index >= data.generator_count || (l.sign != 1 && l.sign != -1))
        throw std::invalid_argument("combinatorial order: letter out of range");
    data.marker_index(p->tuple);
  }
  if (a == b || b == c || a == c) return 0;
  std::uint32_t held[3] = {position(data, item_of(data, a, 0)), position(data, item_of(data, b, 0)),
                           position(data, item_of(data, c, 0))};
  std::uint32_t cut = 0;
  while (cut == held[0] || cut == held[1] || cut == held[2]) ++cut;
  // rank the three points in the linear order after the cut
  const bool ab = lin_less(data, cut, a, b, 0);
  const bool bc = lin_less(data, cut, b, c, 0);
  const bool ac = lin_less(data, cut, a, c, 0);
  const int ra = !ab + !ac, rb = ab + !bc;
  // counterclockwise exactly when (a, b, c) is a cyclic rotation of the sorted triple
  return (rb - ra + 3) % 3 == 1 ? 1 : -1;
}

// ---- Text form -------------------------------------------------------------------

std::string write_configuration_text(const Configuration& config) {
  std::ostringstream os;
  os << "spec=" << config.spec().to_string() << "\n";
  os << "half_width=" << to_string(config.layout().half_width) << "\n";
  os << "precision_bits=" << config.precision().start_bits << "\n";
  os << "precision_cap=" << config.precision().cap_bits << "\n";
  os << "epsilon=" << to_string(config.epsilon()) << "\n";
  os << "verified=" << (config.verified() ? 1 : 0) << "\n";
  os << "digest=" << config.status_digest() << "\n";
  return os.str();
}

Configuration read_configuration_text(const std::string& text, unsigned jobs) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("configuration text line " + std::to_string(lineno) + ": expected key=value");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument(std::string("configuration text: missing ") + key);
    return it->second;
  };
  PrecisionPolicy pol;
  pol.start_bits = std::stol(need("precision_bits"));
  pol.cap_bits = std::stol(need("precision_cap"));
  ExactRational w(need("half_width"));
  w.canonicalize();
  Configuration c(GroupSpec::parse(need("spec")), w, pol);
  BuildParams params;
  params.precision = pol;
  params.jobs = jobs;
  c.run_suite(params);
  if (to_string(c.epsilon()) != need("epsilon"))
    throw ConfigurationError("load", "epsilon mismatch: stored " + need("epsilon") + ", recomputed " + to_string(c.epsilon()));
  if (c.status_digest() != need("digest"))
    throw ConfigurationError("load", "status digest mismatch");
  return c;
}

}  // namespace isocirc
