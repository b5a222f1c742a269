#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "isocirc/certarith.hpp"
#include "isocirc/moebius.hpp"
#include "isocirc/words.hpp"

namespace isocirc {

// ---- Reports ---------------------------------------------------------------------

enum class CertStatus : std::uint8_t { Symbolic, Certified, Inconclusive };
const char* to_string(CertStatus s);

struct CheckLine {
  std::string text;
  CertStatus status = CertStatus::Symbolic;
  bool ok = true;
};

struct CheckReport {
  std::string name;
  std::vector<CheckLine> lines;

  void add(std::string text, CertStatus status, bool ok);
  bool passed() const;
  std::size_t failures() const;
  std::size_t count(CertStatus s) const;
  // First failing line, if any.
  const CheckLine* first_failure() const;
  // "PASS name (a symbolic, b certified)" followed by failing lines, or every line when verbose.
  std::string render(bool verbose = false) const;
};

class ConfigurationError : public std::runtime_error {
 public:
  ConfigurationError(std::string check, const std::string& detail)
      : std::runtime_error(check + ": " + detail), check_(std::move(check)) {}
  const std::string& check() const { return check_; }

 private:
  std::string check_;
};

// ---- Geometry --------------------------------------------------------------------

// The boundary circle is cut into k + 4n equal slots. Slot i-1 holds the petal of e_i;
// each pair (h_{2p-1}, h_{2p}) uses four consecutive slots for its two attracting and two
// repelling petals. A petal is the arc of half-width w around its slot centre.
struct Layout {
  int slots = 0;
  ExactRational half_width;
  std::vector<ExactRational> e_centre;        // per e_i
  std::vector<ExactRational> h_plus_centre;   // attracting petal of h_j
  std::vector<ExactRational> h_minus_centre;  // repelling petal of h_j

  static Layout make(const GroupSpec& spec, const ExactRational& half_width);
};

struct BuildParams {
  // Initial petal half-width as a fraction of the half-slot 1/(2T).
  ExactRational petal_fraction = rational(1, 2);
  // Number of times the petals may be halved before giving up.
  int max_shrink = 6;
  PrecisionPolicy precision;
  unsigned jobs = 1;
};

// Thickening search bounds for the S1 domains.
constexpr int kEpsilonMinExponent = 40;
constexpr int kEpsilonRefineSteps = 8;

struct AttractingDomain {
  std::uint32_t generator = 0;  // index into SBasis::generators()
  int sign = 1;                 // +1: D(s), -1: D(s^-1)
  CircleInterval arc;           // single closed arc
  std::string owner;            // e.g. "h[1;1,1]^-1"
};

// Items of the combinatorial data, in counterclockwise order starting from the marker
// of the identity coset.
struct CyclicItem {
  enum class Kind : std::uint8_t { Domain, Marker } kind = Kind::Domain;
  std::uint32_t index = 0;  // domain index (2*s + (sign<0)) or coset-tuple index
};

struct CyclicData {
  std::vector<CyclicItem> items;
  std::vector<std::uint32_t> position_of_domain;  // by domain index
  std::vector<std::uint32_t> position_of_marker;  // by coset-tuple index
  std::vector<CosetTuple> tuples;                 // all_coset_tuples order
  std::size_t generator_count = 0;

  std::uint32_t marker_index(const CosetTuple& t) const;
};

class PointEvaluator;

class Configuration {
 public:
  // Unverified candidate with the given petal half-width. Throws std::invalid_argument
  // for excluded specs.
  Configuration(GroupSpec spec, ExactRational half_width, PrecisionPolicy precision = {});

  // Builds candidates with shrinking petals until the whole certification suite passes.
  static Configuration build(const GroupSpec& spec, const BuildParams& params = {});

  const GroupSpec& spec() const { return spec_; }
  const Group& group() const { return basis_->group(); }
  const SBasis& basis() const { return *basis_; }
  const Layout& layout() const { return layout_; }
  const PrecisionPolicy& precision() const { return precision_; }
  const ExactRational& epsilon() const { return epsilon_; }
  bool verified() const { return verified_; }
  const std::vector<CheckReport>& reports() const { return reports_; }
  const std::vector<AttractingDomain>& domains() const { return domains_; }
  const CyclicData& cyclic_data() const { return cyclic_; }

  // Exact coordinates of the marked points.
  ExactRational element_point(int i) const;  // x_{e_i}
  ExactRational plus_point(int j) const;     // x_j^+
  ExactRational minus_point(int j) const;    // x_j^-

  Moebius image(Gen g, mpfr_prec_t prec) const;
  Moebius image(const Word& w, mpfr_prec_t prec) const;

  // Lift of the action of w to R. shifts[i-1] is added once per unit of e_i, selecting
  // the lift of e_i with translation number 1/m_i + shifts[i-1]; h_j use the lift with
  // fixed points.
  Ball lift(const Word& w, const Ball& x, std::span<const long> shifts = {}) const;
  Ball base_value(const MarkedPoint& p, mpfr_prec_t prec) const;

  // Symbolic equality. Fixed points of alpha are identified along alpha-powers, or
  // alpha^(degree*j) in a degree-fold cover.
  bool same_point(const PointLabel& a, const PointLabel& b, long degree = 1) const;

  PointLabel basepoint() const;  // x_{e_1}
  // Gap of the limit set containing the basepoint, as a counterclockwise arc between the
  // fixed points of alpha. Set by the gap check.
  const CircleInterval& basepoint_gap() const { return gap_; }

  // Named intervals. J_0 is K_{2n}^- (J_k when n = 0); K_0 is J_k.
  CircleInterval interval_J(int i) const;
  CircleInterval interval_K(int i, int sign) const;
  // lambda = (u_1..u_t) in Lambda_t.
  CircleInterval interval_Jlambda(int t, const std::vector<int>& lambda, int sign) const;
  CircleInterval interval_Jh(int l, int sign) const;

  // Domain index helpers.
  static std::uint32_t domain_index(std::uint32_t generator, int sign) {
    return 2 * generator + (sign < 0 ? 1u : 0u);
  }
  const AttractingDomain& domain(std::uint32_t generator, int sign) const {
    return domains_.at(domain_index(generator, sign));
  }

  // Domains for an arbitrary thickening (used by the epsilon search).
  std::vector<AttractingDomain> domains_for(const ExactRational& eps) const;
  // Markers gamma . x_{e_1} in all_coset_tuples order.
  std::vector<PointLabel> markers() const;

  // Certification steps, each appending one report. They are public so callers can
  // rerun them at other precisions.
  CheckReport check_generators(const PrecisionPolicy& policy) const;
  CheckReport check_transitions() const;
  // gap_out receives the certified gap when the check passes.
  CheckReport check_gap(const PrecisionPolicy& policy, CircleInterval* gap_out = nullptr) const;
  CheckReport check_intersections(const PrecisionPolicy& policy, unsigned jobs = 1) const;
  // Searches epsilon; on success fills domains and cyclic data.
  CheckReport fit_domains(const PrecisionPolicy& policy);
  CheckReport check_pingpong(const PrecisionPolicy& policy, unsigned jobs = 1) const;

  // Hex digest of a canonical text describing geometry, precision, report status and
  // cyclic data.
  std::string status_digest() const;

 private:
  friend class PointEvaluator;
  friend Configuration read_configuration_text(const std::string& text, unsigned jobs);
  struct Numbers;
  struct Cache;

  std::shared_ptr<const Numbers> numbers(mpfr_prec_t prec) const;
  // cyclic data from a certified ordering of domains and markers
  std::optional<CyclicData> order_items(const std::vector<AttractingDomain>& domains, const ExactRational& eps,
                                        const PrecisionPolicy& policy) const;
  void run_suite(const BuildParams& params);

  GroupSpec spec_;
  std::shared_ptr<const SBasis> basis_;
  Layout layout_;
  PrecisionPolicy precision_;
  ExactRational epsilon_ = 0;
  bool verified_ = false;
  std::vector<CheckReport> reports_;
  std::vector<AttractingDomain> domains_;
  CyclicData cyclic_;
  CircleInterval gap_;
  std::shared_ptr<Cache> cache_;
};

// Evaluates labelled points with caching. Not thread-safe; use one per thread.
// Angles live on R/Z, or on the degree-fold cover R/(degree Z) rescaled to R/Z when
// e-shifts are supplied.
class PointEvaluator {
 public:
  explicit PointEvaluator(const Configuration& config, ExactRational eps = 0, std::vector<long> shifts = {},
                          long degree = 1);

  const Configuration& config() const { return *config_; }
  long degree() const { return degree_; }

  // Position on R before reduction (units of the base circle).
  Ball value(const PointLabel& p, mpfr_prec_t prec);
  // Angle in [0,1) of the (cover) circle.
  Ball angle(const PointLabel& p, mpfr_prec_t prec);

  // Cyclic order with symbolic zero and precision escalation; nullopt when the
  // precision cap is reached.
  std::optional<int> ord3(const PointLabel& a, const PointLabel& b, const PointLabel& c,
                          const PrecisionPolicy& policy);
  bool same(const PointLabel& a, const PointLabel& b) const { return config_->same_point(a, b, degree_); }

  // p strictly inside the closed arc (p distinct from its endpoints).
  std::optional<bool> strictly_inside(const PointLabel& p, const CircleInterval& arc, const PrecisionPolicy& policy);
  // Closed arcs are disjoint.
  std::optional<bool> disjoint(const CircleInterval& a, const CircleInterval& b, const PrecisionPolicy& policy);
  // Open arcs are disjoint (shared endpoints allowed).
  std::optional<bool> interiors_disjoint(const CircleInterval& a, const CircleInterval& b,
                                         const PrecisionPolicy& policy);

  mpfr_prec_t max_precision_used() const { return max_prec_; }

 private:
  const Configuration* config_;
  ExactRational eps_;
  std::vector<long> shifts_;
  long degree_;
  std::map<std::pair<PointLabel, mpfr_prec_t>, Ball> cache_;
  mpfr_prec_t max_prec_ = 0;
};

// A point of the orbit of x_{e_1} written as (F-word) . (coset representative).
struct OrbitPoint {
  SWord word;
  CosetTuple tuple;

  bool operator==(const OrbitPoint&) const = default;
};

// Cyclic order of three orbit points read off the combinatorial data alone.
int combinatorial_cyclic_order(const CyclicData& data, const OrbitPoint& a, const OrbitPoint& b,
                               const OrbitPoint& c);

// Configuration as key=value text (spec, geometry, precision, digest) and back. Loading
// rebuilds the candidate, reruns every check and refuses a digest mismatch.
std::string write_configuration_text(const Configuration& config);
Configuration read_configuration_text(const std::string& text, unsigned jobs = 1);

}  // namespace isocirc
