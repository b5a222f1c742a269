#include "isocirc/moebius.hpp"

#include <stdexcept>

namespace isocirc {

std::string to_string(const MarkedPoint& p) {
  switch (p.kind) {
    case MarkedKind::ElementPoint: return "x_e" + std::to_string(p.index);
    case MarkedKind::PlusPoint: return "x" + std::to_string(p.index) + "+";
    case MarkedKind::MinusPoint: return "x" + std::to_string(p.index) + "-";
    case MarkedKind::FixAttracting: return "fix+(alpha)";
    case MarkedKind::FixRepelling: return "fix-(alpha)";
    case MarkedKind::Free: return "p" + std::to_string(p.index);
  }
  return "?";
}

bool PointLabel::operator<(const PointLabel& o) const {
  if (base != o.base) return base < o.base;
  if (offset != o.offset) return offset < o.offset;
  if (!(word == o.word)) return word < o.word;
  return inner < o.inner;
}

PointLabel label_of(MarkedPoint base, Word word) {
  PointLabel l;
  l.base = base;
  l.word = std::move(word);
  return l;
}

PointLabel translate(const Group& group, const Word& g, const PointLabel& label) {
  PointLabel out = label;
  out.word = group.multiply(g, label.word);
  return out;
}

PointLabel shifted(const PointLabel& label, int offset) {
  if (label.offset != 0) throw std::invalid_argument("shifted: label already carries an offset");
  PointLabel out;
  out.base = label.base;
  out.inner = label.word;
  out.offset = offset;
  return out;
}

std::string to_string(const Group& group, const PointLabel& label) {
  std::string core = to_string(label.base);
  if (label.offset != 0) {
    if (!label.inner.is_identity()) core = group.format(label.inner) + " . " + core;
    core = "(" + core + (label.offset > 0 ? " + eps)" : " - eps)");
  }
  if (label.word.is_identity()) return core;
  return group.format(label.word) + " . " + core;
}

namespace {

Ball pi_times(const Ball& t) { return Ball::pi(t.precision()) * t; }

Ball half(mpfr_prec_t p) { return Ball::from_rational(rational(1, 2), p); }

}  // namespace

Moebius::Moebius(Ball a, Ball b, Ball c, Ball d, Word provenance)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), word_(std::move(provenance)) {}

Moebius Moebius::identity(mpfr_prec_t prec) {
  return Moebius(Ball(1, prec), Ball(0, prec), Ball(0, prec), Ball(1, prec));
}

Moebius Moebius::rotation(const Ball& t) {
  Ball angle = pi_times(t);
  Ball c = cos(angle);
  Ball s = sin(angle);
  return Moebius(c, -s, s, c);
}

Moebius Moebius::dilation(const Ball& r) {
  Ball h = r * half(r.precision());
  return Moebius(exp(h), Ball(0, r.precision()), Ball(0, r.precision()), exp(-h));
}

Moebius Moebius::renormalized() const {
  Ball s = sqrt(determinant());
  Moebius out(a_ / s, b_ / s, c_ / s, d_ / s, word_);
  return out;
}

bool Moebius::contains_identity() const {
  auto near = [](const Ball& x, long v) { return x.contains(rational(v)); };
  bool plus = near(a_, 1) && near(d_, 1) && near(b_, 0) && near(c_, 0);
  bool minus = near(a_, -1) && near(d_, -1) && near(b_, 0) && near(c_, 0);
  return plus || minus;
}

Moebius compose(const Moebius& f, const Moebius& g, const Group* group) {
  Moebius out(f.a_ * g.a_ + f.b_ * g.c_, f.a_ * g.b_ + f.b_ * g.d_, f.c_ * g.a_ + f.d_ * g.c_,
              f.c_ * g.b_ + f.d_ * g.d_);
  if (group) out.word_ = group->multiply(f.word_, g.word_);
  out.depth_ = std::max(f.depth_, g.depth_) + 1;
  if (out.depth_ >= 32) {
    Word w = out.word_;
    out = out.renormalized();
    out.word_ = std::move(w);
    out.depth_ = 0;
  }
  return out;
}

Moebius inverse(const Moebius& f, const Group* group) {
  Moebius out(f.d(), -f.b(), -f.c(), f.a());
  if (group) out.set_provenance(group->invert(f.provenance()));
  return out;
}

const char* to_string(MoebiusKind k) {
  switch (k) {
    case MoebiusKind::Elliptic: return "elliptic";
    case MoebiusKind::ParabolicOrUnresolved: return "parabolic-or-unresolved";
    case MoebiusKind::Hyperbolic: return "hyperbolic";
  }
  return "?";
}

MoebiusKind classify(const Moebius& f) {
  Ball t = abs(f.trace());
  auto s = compare(t, Ball(2, t.precision()));
  if (!s) return MoebiusKind::ParabolicOrUnresolved;
  return *s < 0 ? MoebiusKind::Elliptic : MoebiusKind::Hyperbolic;
}

namespace {

// Angle in R of the line through (x, y), not yet reduced.
Ball line_angle(const Ball& x, const Ball& y) {
  const mpfr_prec_t p = std::max(x.precision(), y.precision());
  Ball pi = Ball::pi(p);
  if (!x.contains_zero()) return atan(y / x) / pi;
  if (!y.contains_zero()) return half(p) - atan(x / y) / pi;
  throw BallDomainError("line direction undetermined at this precision");
}

}  // namespace

Ball reduce_angle(const Ball& theta) { return theta - theta.floor_of_mid(); }

Ball act(const Moebius& f, const Ball& theta) {
  Ball angle = pi_times(theta);
  Ball c = cos(angle);
  Ball s = sin(angle);
  return reduce_angle(line_angle(f.a() * c + f.b() * s, f.c() * c + f.d() * s));
}

CirclePoint act(const Moebius& f, const CirclePoint& x, const Group& group) {
  return CirclePoint{act(f, x.angle), translate(group, f.provenance(), x.label)};
}

FixedPoints fixed_points(const Moebius& f0) {
  if (classify(f0) != MoebiusKind::Hyperbolic) throw std::invalid_argument("fixed_points: not hyperbolic");
  Moebius f = f0;
  if (*f.trace().sign() < 0) f = Moebius(-f0.a(), -f0.b(), -f0.c(), -f0.d());
  const mpfr_prec_t p = f.precision();
  Ball tr = f.trace();
  Ball disc = sqrt(tr * tr - Ball(4, p));
  Ball two(2, p);
  Ball big = (tr + disc) / two;
  Ball small = (tr - disc) / two;
  auto eigen_angle = [&](const Ball& lam) {
    Ball x1 = f.b(), y1 = lam - f.a();
    Ball x2 = lam - f.d(), y2 = f.c();
    // Pick the representation whose components are certainly not both zero.
    Ball n1 = abs(x1) + abs(y1);
    Ball n2 = abs(x2) + abs(y2);
    auto cmp = compare(n1, n2);
    if (cmp && *cmp > 0) return reduce_angle(line_angle(x1, y1));
    if (!n2.contains_zero()) return reduce_angle(line_angle(x2, y2));
    return reduce_angle(line_angle(x1, y1));
  };
  return FixedPoints{eigen_angle(big), eigen_angle(small)};
}

Moebius elliptic_about(const Ball& r, const Ball& phi, int m) {
  if (m < 2) throw std::invalid_argument("elliptic_about: order must be at least 2");
  const mpfr_prec_t p = std::max(r.precision(), phi.precision());
  Moebius k = compose(Moebius::rotation(phi), Moebius::dilation(r));
  Moebius kinv = compose(Moebius::dilation(-r), Moebius::rotation(-phi));
  Moebius rot = Moebius::rotation(Ball::from_rational(rational(1, m), p));
  return compose(compose(k, rot), kinv);
}

AxisParameters axis_parameters(const Ball& p, const Ball& q, const Ball& ell) {
  const mpfr_prec_t prec = std::max({p.precision(), q.precision(), ell.precision()});
  Ball delta = q - p;
  auto fl = delta.floor_if_determined();
  if (!fl) throw BallDomainError("hyperbolic_with: endpoints too close to separate");
  delta = delta - *fl;
  if (delta.contains_zero()) throw std::invalid_argument("hyperbolic_with: p and q coincide");
  if (!ell.sign() || *ell.sign() <= 0) throw std::invalid_argument("hyperbolic_with: translation length must be positive");
  Ball u = delta * half(prec);
  Ball pi = Ball::pi(prec);
  return AxisParameters{p + u, tan(pi * u), exp(-ell)};
}

Moebius hyperbolic_with(const Ball& p, const Ball& q, const Ball& ell) {
  AxisParameters ax = axis_parameters(p, q, ell);
  const mpfr_prec_t prec = ax.centre.precision();
  Ball s = -log(ax.squeeze);
  Ball quarter = Ball::from_rational(rational(1, 4), prec);
  Moebius k = compose(compose(Moebius::rotation(ax.centre), Moebius::dilation(s)), Moebius::rotation(-quarter));
  Moebius kinv = compose(compose(Moebius::rotation(quarter), Moebius::dilation(-s)), Moebius::rotation(-ax.centre));
  return compose(compose(k, Moebius::dilation(ell)), kinv);
}

std::optional<int> ord3_angles(const Ball& x, const Ball& y, const Ball& z) {
  Ball u = y - x;
  Ball v = z - x;
  auto fu = u.floor_if_determined();
  auto fv = v.floor_if_determined();
  if (!fu || !fv) return std::nullopt;
  u = u - *fu;
  v = v - *fv;
  if (u.contains_zero() || v.contains_zero()) return std::nullopt;
  auto c = compare(u, v);
  if (!c) return std::nullopt;
  return *c < 0 ? 1 : -1;
}

std::optional<int> ord3(const CirclePoint& x, const CirclePoint& y, const CirclePoint& z) {
  if (x.label == y.label || y.label == z.label || x.label == z.label) return 0;
  return ord3_angles(x.angle, y.angle, z.angle);
}

Ball dilation_lift(const Ball& x, const Ball& q) {
  const mpfr_prec_t p = std::max(x.precision(), q.precision());
  Ball two_x = x * 2;
  // nearest half-integer N/2
  Ball shifted = two_x + half(p);
  long n = shifted.floor_of_mid();
  Ball base = Ball::from_rational(rational(n, 2), p);
  Ball f = x - base;
  Ball pi = Ball::pi(p);
  Ball t = tan(pi * f);
  Ball image = (n % 2 == 0) ? atan(q * t) : atan(t / q);
  return base + image / pi;
}

Ball apply_lift(const LiftProgram& program, const Ball& x) {
  Ball y = x;
  for (const auto& s : program) {
    if (s.kind == LiftStep::Kind::Translate)
      y = y + s.value;
    else
      y = dilation_lift(y, s.value);
  }
  return y;
}

void append_elliptic_lift(LiftProgram& out, const Ball& phi, const Ball& q, int m, long power) {
  const mpfr_prec_t p = std::max(phi.precision(), q.precision());
  Ball one(1, p);
  out.push_back({LiftStep::Kind::Translate, -phi});
  out.push_back({LiftStep::Kind::Dilate, one / q});
  out.push_back({LiftStep::Kind::Translate, Ball::from_rational(rational(power, m), p)});
  out.push_back({LiftStep::Kind::Dilate, q});
  out.push_back({LiftStep::Kind::Translate, phi});
}

void append_hyperbolic_lift(LiftProgram& out, const AxisParameters& axis, long power) {
  const mpfr_prec_t p = axis.centre.precision();
  Ball one(1, p);
  Ball quarter = Ball::from_rational(rational(1, 4), p);
  out.push_back({LiftStep::Kind::Translate, -axis.centre});
  out.push_back({LiftStep::Kind::Dilate, one / axis.squeeze});
  out.push_back({LiftStep::Kind::Translate, quarter});
  out.push_back({LiftStep::Kind::Dilate, pow(axis.contraction, power)});
  out.push_back({LiftStep::Kind::Translate, -quarter});
  out.push_back({LiftStep::Kind::Dilate, axis.squeeze});
  out.push_back({LiftStep::Kind::Translate, axis.centre});
}

}  // namespace isocirc
