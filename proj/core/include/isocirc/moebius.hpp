#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isocirc/certarith.hpp"
#include "isocirc/words.hpp"

namespace isocirc {

// Boundary points are angles theta in R/Z; theta is the projective line through
// (cos pi theta, sin pi theta), and counterclockwise means increasing theta.
// The rotation matrix by pi*t fixes the centre of the disk and acts as theta -> theta + t.

enum class MarkedKind : std::uint8_t {
  ElementPoint,    // x_{e_i}
  PlusPoint,       // x_j^+
  MinusPoint,      // x_j^-
  FixAttracting,   // attracting fixed point of alpha
  FixRepelling,    // repelling fixed point of alpha
  Free,            // ad hoc point with no group meaning
};

struct MarkedPoint {
  MarkedKind kind = MarkedKind::Free;
  int index = 0;

  bool operator==(const MarkedPoint&) const = default;
  auto operator<=>(const MarkedPoint&) const = default;
};

std::string to_string(const MarkedPoint& p);

// word . ((inner . base) + offset * eps). The offset form only appears for thickened
// domain endpoints; otherwise inner is the identity and offset is 0.
struct PointLabel {
  MarkedPoint base;
  Word word;
  Word inner;
  int offset = 0;

  bool operator==(const PointLabel&) const = default;
  bool operator<(const PointLabel& o) const;
};

PointLabel label_of(MarkedPoint base, Word word = {});
// g . label
PointLabel translate(const Group& group, const Word& g, const PointLabel& label);
// The point (label) shifted by offset * eps; label must not already carry an offset.
PointLabel shifted(const PointLabel& label, int offset);
std::string to_string(const Group& group, const PointLabel& label);

struct CirclePoint {
  Ball angle;
  PointLabel label;
};

// Closed counterclockwise arc from left to right.
struct CircleInterval {
  PointLabel left;
  PointLabel right;
};

class Moebius {
 public:
  Moebius(Ball a, Ball b, Ball c, Ball d, Word provenance = {});

  static Moebius identity(mpfr_prec_t prec);
  // theta -> theta + t
  static Moebius rotation(const Ball& t);
  // diag(e^{r/2}, e^{-r/2}); attracting at theta = 0 for r > 0.
  static Moebius dilation(const Ball& r);

  const Ball& a() const { return a_; }
  const Ball& b() const { return b_; }
  const Ball& c() const { return c_; }
  const Ball& d() const { return d_; }
  const Word& provenance() const { return word_; }
  mpfr_prec_t precision() const { return a_.precision(); }

  Ball trace() const { return a_ + d_; }
  Ball determinant() const { return a_ * d_ - b_ * c_; }
  // Divides by sqrt(det).
  Moebius renormalized() const;
  bool contains_identity() const;
  void set_provenance(Word w) { word_ = std::move(w); }

 private:
  friend Moebius compose(const Moebius& f, const Moebius& g, const Group* group);
  Ball a_, b_, c_, d_;
  Word word_;
  int depth_ = 0;
};

// f o g; provenance words are multiplied when a group is given.
Moebius compose(const Moebius& f, const Moebius& g, const Group* group = nullptr);
Moebius inverse(const Moebius& f, const Group* group = nullptr);

enum class MoebiusKind { Elliptic, ParabolicOrUnresolved, Hyperbolic };
const char* to_string(MoebiusKind k);
MoebiusKind classify(const Moebius& f);

// Projective boundary action on an angle; result reduced to [0, 1).
Ball act(const Moebius& f, const Ball& theta);
CirclePoint act(const Moebius& f, const CirclePoint& x, const Group& group);

struct FixedPoints {
  Ball attracting;
  Ball repelling;
};
// Throws std::invalid_argument unless classify(f) == Hyperbolic.
FixedPoints fixed_points(const Moebius& f);

// Elliptic of order m about the point at hyperbolic distance r from the centre in the
// direction of boundary angle phi: K R_{1/m} K^{-1} with K = R_phi D_r.
Moebius elliptic_about(const Ball& r, const Ball& phi, int m);
// Hyperbolic with attracting p, repelling q and translation length ell.
Moebius hyperbolic_with(const Ball& p, const Ball& q, const Ball& ell);

// Reduce an angle to [0,1) by subtracting floor(midpoint).
Ball reduce_angle(const Ball& theta);

// +1 when (x, y, z) are counterclockwise, -1 when clockwise; nullopt if the balls do not
// separate. Angles are read mod 1. Callers handle coincident points symbolically.
std::optional<int> ord3_angles(const Ball& x, const Ball& y, const Ball& z);
// Same with symbolic zero: 0 when two labels coincide.
std::optional<int> ord3(const CirclePoint& x, const CirclePoint& y, const CirclePoint& z);

// ---- Real-line lifts -------------------------------------------------------------
// Every map used here lifts to R as a chain of translations and dilation lifts. The
// dilation lift with parameter q solves tan(pi x') = q tan(pi x) and fixes Z/2 pointwise.

struct LiftStep {
  enum class Kind : std::uint8_t { Translate, Dilate } kind = Kind::Translate;
  Ball value;
};
using LiftProgram = std::vector<LiftStep>;

Ball dilation_lift(const Ball& x, const Ball& q);
// Applies the steps in order (first step first).
Ball apply_lift(const LiftProgram& program, const Ball& x);

// Steps of elliptic_about(r, phi, m)^power (power may be any integer, giving the
// lift with translation number power/m), expressed with q = e^{-r}.
void append_elliptic_lift(LiftProgram& out, const Ball& phi, const Ball& q, int m, long power);

struct AxisParameters {
  Ball centre;     // c
  Ball squeeze;    // e^{-s}
  Ball contraction;  // e^{-ell}
};
AxisParameters axis_parameters(const Ball& p, const Ball& q, const Ball& ell);
// Steps of hyperbolic^power with the lift that has fixed points.
void append_hyperbolic_lift(LiftProgram& out, const AxisParameters& axis, long power);

}  // namespace isocirc
