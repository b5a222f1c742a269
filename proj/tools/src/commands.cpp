#include <functional>
#include <memory>
#include <sstream>

#include "isocirc/circular.hpp"
#include "isocirc/cli.hpp"
#include "isocirc/cover.hpp"
#include "isocirc/leftorder.hpp"
#include "isocirc/pingpong.hpp"
#include "isocirc/realization.hpp"
#include "isocirc/svg.hpp"

namespace isocirc::cli {

using nlohmann::json;

const std::string& Outcome::render(bool as_json) const {
  if (!as_json) return text;
  json_text_ = data.dump(2) + "\n";
  return json_text_;
}

namespace {

class ExcludedSpec : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

void require_included(const GroupSpec& spec) {
  spec.validate();
  if (spec.excluded())
    throw ExcludedSpec("spec " + spec.to_string() + " is excluded: it carries no isolated circular order of this kind");
}

std::shared_ptr<const Configuration> build(const RunConfig& cfg, unsigned jobs) {
  require_included(cfg.spec);
  BuildParams p;
  p.petal_fraction = cfg.petal_fraction;
  p.max_shrink = cfg.max_shrink;
  p.precision = cfg.precision;
  p.jobs = jobs;
  return std::make_shared<const Configuration>(Configuration::build(cfg.spec, p));
}

CoverDatum datum_for(const GroupSpec& spec, long d) {
  if (d < 1) throw std::invalid_argument("d must be positive");
  const std::int64_t m = spec.torsion_product();
  if ((d - 1) % m != 0)
    throw std::invalid_argument("d = " + std::to_string(d) + " is not 1 mod " + std::to_string(m));
  auto c = cover_datum(spec, (d - 1) / m);
  if (!c) throw std::invalid_argument("d = " + std::to_string(d) + " is not a valid degree (gcd condition fails)");
  return *c;
}

OrderHandle handle(const RunConfig& cfg, unsigned jobs) {
  auto config = build(cfg, jobs);
  return OrderHandle(config, datum_for(cfg.spec, cfg.d));
}

std::string lifts_text(const std::vector<long>& lifts) {
  std::string s = "(";
  for (std::size_t i = 0; i < lifts.size(); ++i) s += (i ? "," : "") + std::to_string(lifts[i]);
  return s + ")";
}

Outcome failure(const std::string& command, int code, const std::string& kind, const std::string& message) {
  Outcome o;
  o.exit_code = code;
  o.text = "error (" + kind + "): " + message + "\n";
  o.data = {{"command", command}, {"status", kind}, {"error", message}, {"exit_code", code}};
  return o;
}

Outcome guarded(const std::string& command, const std::function<Outcome()>& body) {
  try {
    Outcome o = body();
    o.data["command"] = command;
    o.data["exit_code"] = o.exit_code;
    return o;
  } catch (const ExcludedSpec& e) {
    return failure(command, kExitExcluded, "excluded", e.what());
  } catch (const ParseError& e) {
    return failure(command, kExitUsage, "parse", e.what());
  } catch (const ConfigurationError& e) {
    return failure(command, kExitCheckFailed, "not-certified", e.what());
  } catch (const InconclusiveError& e) {
    return failure(command, kExitInconclusive, "inconclusive", e.what());
  } catch (const std::invalid_argument& e) {
    return failure(command, kExitUsage, "usage", e.what());
  } catch (const std::out_of_range& e) {
    return failure(command, kExitUsage, "usage", e.what());
  } catch (const std::exception& e) {
    return failure(command, kExitCheckFailed, "failed", e.what());
  }
}

const char* verdict(bool ok) { return ok ? "ok" : "failed"; }

json check_json(const CheckReport& r) {
  json failures = json::array();
  for (const auto& l : r.lines)
    if (!l.ok) failures.push_back({{"text", l.text}, {"status", to_string(l.status)}});
  return {{"name", r.name},
          {"passed", r.passed()},
          {"items", r.lines.size()},
          {"symbolic", r.count(CertStatus::Symbolic)},
          {"certified", r.count(CertStatus::Certified)},
          {"inconclusive", r.count(CertStatus::Inconclusive)},
          {"failures", failures}};
}

SvgOptions svg_options(const RunConfig& cfg, const OrderHandle* h) {
  SvgOptions o;
  o.domains = cfg.domains;
  o.intervals = cfg.intervals;
  o.orbit = cfg.orbit;
  if (h && h->degree() > 1) o.cover = h->cover();
  return o;
}

}  // namespace

Outcome run_verify(const RunConfig& cfg, unsigned jobs) {
  return guarded("verify", [&] {
    auto config = build(cfg, jobs);
    Outcome o;
    std::ostringstream os;
    os << "spec " << cfg.spec.to_string() << "\n"
       << "half_width " << to_string(config->layout().half_width) << "\n"
       << "epsilon " << to_string(config->epsilon()) << "\n";
    json checks = json::array();
    for (const auto& r : config->reports()) {
      os << r.render();
      checks.push_back(check_json(r));
    }
    os << "verified " << (config->verified() ? "true" : "false") << "\n"
       << "digest " << config->status_digest() << "\n";
    o.text = os.str();
    o.exit_code = config->verified() ? kExitOk : kExitCheckFailed;
    o.data = {{"spec", cfg.spec.to_string()},
              {"half_width", to_string(config->layout().half_width)},
              {"epsilon", to_string(config->epsilon())},
              {"checks", checks},
              {"verified", config->verified()},
              {"digest", config->status_digest()},
              {"status", verdict(config->verified())}};
    if (!cfg.svg.empty()) o.svg = export_svg(*config, svg_options(cfg, nullptr));
    return o;
  });
}

Outcome run_eval(const RunConfig& cfg, const std::vector<std::string>& words, unsigned jobs) {
  return guarded("eval", [&] {
    if (words.size() != 3) throw std::invalid_argument("eval needs exactly three words");
    OrderHandle h = handle(cfg, jobs);
    const Group& hg = h.group();
    std::vector<Word> ws;
    for (const auto& s : words) ws.push_back(parse_word(hg, s));
    const int v = eval_c(h, ws[0], ws[1], ws[2]);
    const char* status = v == 0 ? "symbolic" : "certified";
    Outcome o;
    o.text = "c(" + hg.format(ws[0]) + "; " + hg.format(ws[1]) + "; " + hg.format(ws[2]) + ") = " +
             (v > 0 ? "+1" : v < 0 ? "-1" : "0") + " [" + status + "] d=" + std::to_string(h.degree()) + "\n";
    o.data = {{"spec", cfg.spec.to_string()},
              {"d", h.degree()},
              {"words", {hg.format(ws[0]), hg.format(ws[1]), hg.format(ws[2])}},
              {"value", v},
              {"certification", status},
              {"status", "ok"}};
    return o;
  });
}

Outcome run_axioms(const RunConfig& cfg, unsigned jobs) {
  return guarded("axioms", [&] {
    OrderHandle h = handle(cfg, jobs);
    const auto sample = random_quadruples(h.group(), cfg.samples, cfg.seed);
    const AxiomReport r = check_axioms(h, sample, jobs);
    Outcome o;
    o.text = "spec " + cfg.spec.to_string() + " d=" + std::to_string(h.degree()) + " seed " +
             std::to_string(cfg.seed) + "\n" + r.render();
    o.exit_code = r.violations() > 0 ? kExitCheckFailed : r.inconclusive > 0 ? kExitInconclusive : kExitOk;
    o.data = {{"spec", cfg.spec.to_string()},
              {"d", h.degree()},
              {"seed", cfg.seed},
              {"quadruples", r.quadruples},
              {"evaluations", r.evaluations},
              {"violations", r.violations()},
              {"degenerate", r.degenerate_violations},
              {"cocycle", r.cocycle_violations},
              {"invariance", r.invariance_violations},
              {"inconclusive", r.inconclusive},
              {"details", r.details},
              {"certification", "certified"},
              {"status", verdict(o.exit_code == kExitOk)}};
    return o;
  });
}

Outcome run_search_d(const RunConfig& cfg, unsigned jobs) {
  return guarded("search-d", [&] {
    require_included(cfg.spec);
    const auto found = search_valid_d(cfg.spec, cfg.count, cfg.a_cap, jobs);
    Outcome o;
    std::ostringstream os;
    json rows = json::array();
    for (const auto& c : found) {
      os << "d = " << c.d << "  a = " << c.a << "  lifts = " << lifts_text(c.lifts)
         << "  rot_alpha = " << to_string(c.rot_alpha) << " [symbolic]\n";
      rows.push_back({{"d", c.d}, {"a", c.a}, {"lifts", c.lifts}, {"rot_alpha", to_string(c.rot_alpha)}});
    }
    o.text = os.str();
    o.data = {{"spec", cfg.spec.to_string()}, {"degrees", rows}, {"certification", "symbolic"}, {"status", "ok"}};
    return o;
  });
}

Outcome run_realize(const RunConfig& cfg, unsigned jobs) {
  return guarded("realize", [&] {
    OrderHandle h = handle(cfg, jobs);
    const Group& g = h.group();
    const RoundtripReport r = roundtrip(h, cfg.depth, jobs);
    const auto elements = enumerate_elements(g, cfg.depth);
    Outcome o;
    std::ostringstream os;
    os << "spec " << cfg.spec.to_string() << " d=" << h.degree() << "\n" << r.render();
    json pts = json::array();
    SvgOptions svg = svg_options(cfg, &h);
    for (std::size_t i = 0; i < r.angles.size(); ++i) {
      os << "  " << i << "  " << g.format(elements[i]) << "  " << to_string(r.angles[i]) << "\n";
      pts.push_back({{"element", g.format(elements[i])}, {"angle", to_string(r.angles[i])}});
      svg.points.emplace_back(r.angles[i], g.format(elements[i]));
    }
    o.text = os.str();
    const bool ok = r.mismatches == 0 && r.dyadic;
    o.exit_code = ok ? kExitOk : kExitCheckFailed;
    o.data = {{"spec", cfg.spec.to_string()},
              {"d", h.degree()},
              {"depth", r.depth},
              {"triples", r.triples},
              {"mismatches", r.mismatches},
              {"dyadic", r.dyadic},
              {"points", pts},
              {"certification", "symbolic"},
              {"status", verdict(ok)}};
    if (!cfg.svg.empty()) o.svg = export_svg(h.config(), svg);
    return o;
  });
}

Outcome run_leftorder_compare(const RunConfig& cfg, const std::string& a, const std::string& b, unsigned jobs) {
  return guarded("leftorder compare", [&] {
    LeftOrderHandle h(handle(cfg, jobs));
    const Group& g = h.group();
    const HatWord x = parse_hat_word(g, a), y = parse_hat_word(g, b);
    const Order r = hat_compare(h, x, y);
    const CofinalBounds bx = cofinal_bounds(h, x), by = cofinal_bounds(h, y);
    const char* sym = r == Order::Less ? "<" : r == Order::Greater ? ">" : "=";
    const char* status = r == Order::Equal || x.base == y.base ? "symbolic" : "certified";
    Outcome o;
    std::ostringstream os;
    os << format_hat(g, x) << " " << sym << " " << format_hat(g, y) << " [" << status << "] d=" << h.circular().degree()
       << "\n"
       << "bounds z^" << bx.low << " < " << format_hat(g, x) << " < z^" << bx.high << "\n"
       << "bounds z^" << by.low << " < " << format_hat(g, y) << " < z^" << by.high << "\n";
    o.text = os.str();
    o.data = {{"spec", cfg.spec.to_string()},
              {"d", h.circular().degree()},
              {"a", format_hat(g, x)},
              {"b", format_hat(g, y)},
              {"order", to_string(r)},
              {"bounds_a", {bx.low, bx.high}},
              {"bounds_b", {by.low, by.high}},
              {"certification", status},
              {"status", "ok"}};
    return o;
  });
}

Outcome run_leftorder_project(const RunConfig& cfg, const std::vector<std::string>& triple, unsigned jobs) {
  return guarded("leftorder project", [&] {
    if (triple.size() != 3) throw std::invalid_argument("project needs exactly three words");
    LeftOrderHandle h(handle(cfg, jobs));
    const Group& g = h.group();
    std::vector<Word> w;
    for (const auto& s : triple) w.push_back(parse_word(g, s));
    const int p = project_order(h, w[0], w[1], w[2]);
    const int c = eval_c(h.circular(), w[0], w[1], w[2]);
    Outcome o;
    std::ostringstream os;
    os << "projected (" << g.format(w[0]) << "; " << g.format(w[1]) << "; " << g.format(w[2]) << ") = " << p
       << "\n"
       << "circular order = " << c << "\n"
       << (p == c ? "agree" : "DISAGREE") << " [certified] d=" << h.circular().degree() << "\n";
    json lifts = json::array();
    for (const auto& x : w) lifts.push_back(format_hat(g, window_lift(h, x)));
    o.text = os.str();
    o.exit_code = p == c ? kExitOk : kExitCheckFailed;
    o.data = {{"spec", cfg.spec.to_string()},
              {"d", h.circular().degree()},
              {"words", {g.format(w[0]), g.format(w[1]), g.format(w[2])}},
              {"window_lifts", lifts},
              {"projected", p},
              {"circular", c},
              {"certification", "certified"},
              {"status", verdict(p == c)}};
    return o;
  });
}

Outcome run_leftorder_check(const RunConfig& cfg, unsigned jobs) {
  return guarded("leftorder check", [&] {
    LeftOrderHandle h(handle(cfg, jobs));
    const LeftOrderReport r = check_left_order(h, cfg.samples, cfg.seed, jobs);
    Outcome o;
    o.text = "spec " + cfg.spec.to_string() + " d=" + std::to_string(h.circular().degree()) + " seed " +
             std::to_string(cfg.seed) + "\n" + r.render();
    o.exit_code = r.violations() > 0 ? kExitCheckFailed : r.inconclusive > 0 ? kExitInconclusive : kExitOk;
    o.data = {{"spec", cfg.spec.to_string()},
              {"d", h.circular().degree()},
              {"samples", r.samples},
              {"violations", r.violations()},
              {"antisymmetry", r.antisymmetry},
              {"totality", r.totality},
              {"transitivity", r.transitivity},
              {"invariance", r.invariance},
              {"cofinality", r.cofinality},
              {"winding", r.winding},
              {"projection", r.projection},
              {"inconclusive", r.inconclusive},
              {"details", r.details},
              {"certification", "certified"},
              {"status", verdict(o.exit_code == kExitOk)}};
    return o;
  });
}

Outcome run_export_svg(const RunConfig& cfg, unsigned jobs) {
  return guarded("export-svg", [&] {
    OrderHandle h = handle(cfg, jobs);
    Outcome o;
    o.svg = export_svg(h.config(), svg_options(cfg, &h));
    o.text = cfg.svg.empty() ? *o.svg : "svg " + cfg.svg + "\n";
    o.data = {{"spec", cfg.spec.to_string()},
              {"d", h.degree()},
              {"svg", cfg.svg},
              {"domains", cfg.domains},
              {"intervals", cfg.intervals},
              {"orbit", cfg.orbit},
              {"status", "ok"}};
    if (cfg.svg.empty()) o.data["document"] = *o.svg;
    return o;
  });
}

}  // namespace isocirc::cli
