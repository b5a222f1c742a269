#include "isocirc/svg.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "isocirc/realization.hpp"

namespace isocirc {

namespace {

constexpr double kCentre = 512.0;
constexpr double kRadius = 400.0;
constexpr mpfr_prec_t kDrawBits = 128;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  // avoid "-0.000"
  if (std::string(buf) == "-0.000") return "0.000";
  return buf;
}

double wrap(double t) {
  t -= std::floor(t);
  return t >= 1.0 ? 0.0 : t;
}

std::pair<double, double> at(double theta, double r = kRadius) {
  const double a = 2.0 * std::numbers::pi * theta;
  return {kCentre + r * std::cos(a), kCentre - r * std::sin(a)};
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Counterclockwise arc from theta0 to theta1, drawn as a thick stroke.
void arc(std::ostringstream& os, double theta0, double theta1, double r, const char* colour, double width,
         const std::string& title) {
  double len = wrap(theta1 - theta0);
  if (len == 0.0) len = 1e-6;
  const auto [x0, y0] = at(theta0, r);
  const auto [x1, y1] = at(theta0 + len, r);
  os << "<path d=\"M " << fmt(x0) << " " << fmt(y0) << " A " << fmt(r) << " " << fmt(r) << " 0 "
     << (len > 0.5 ? 1 : 0) << " 0 " << fmt(x1) << " " << fmt(y1) << "\" fill=\"none\" stroke=\"" << colour
     << "\" stroke-width=\"" << fmt(width) << "\"><title>" << escape(title) << "</title></path>\n";
}

void dot(std::ostringstream& os, double theta, double r, double size, const char* colour, const std::string& title) {
  const auto [x, y] = at(theta, r);
  os << "<circle cx=\"" << fmt(x) << "\" cy=\"" << fmt(y) << "\" r=\"" << fmt(size) << "\" fill=\"" << colour
     << "\"><title>" << escape(title) << "</title></circle>\n";
}

double to_double(const ExactRational& q) { return wrap(q.get_d()); }

}  // namespace

std::string export_svg(const Configuration& config, const SvgOptions& options) {
  const Group& g = config.group();
  const GroupSpec& spec = config.spec();
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1024\" height=\"1024\" viewBox=\"0 0 1024 1024\">\n"
     << "<title>" << escape(spec.to_string()) << "</title>\n"
     << "<rect width=\"1024\" height=\"1024\" fill=\"white\"/>\n"
     << "<circle cx=\"512.000\" cy=\"512.000\" r=\"400.000\" fill=\"none\" stroke=\"black\" stroke-width=\"1.500\"/>\n";

  if (options.intervals) {
    os << "<g id=\"intervals\">\n";
    PointEvaluator ev(config);
    auto draw = [&](const CircleInterval& iv, double r, const char* colour, const std::string& name) {
      const double a = wrap(ev.angle(iv.left, kDrawBits).mid_double());
      const double b = wrap(ev.angle(iv.right, kDrawBits).mid_double());
      arc(os, a, b, r, colour, 4.0, name);
    };
    for (int i = 1; i <= spec.k(); ++i) draw(config.interval_J(i), 430.0, "#4477aa", "J" + std::to_string(i));
    for (int j = 1; j <= 2 * spec.n; ++j) {
      draw(config.interval_K(j, 1), 440.0, "#228833", "K" + std::to_string(j) + "+");
      draw(config.interval_K(j, -1), 440.0, "#aa3377", "K" + std::to_string(j) + "-");
    }
    os << "</g>\n";
  }

  if (options.domains) {
    os << "<g id=\"domains\">\n";
    PointEvaluator ev(config, config.epsilon());
    for (const auto& d : config.domains()) {
      const double a = wrap(ev.angle(d.arc.left, kDrawBits).mid_double());
      const double b = wrap(ev.angle(d.arc.right, kDrawBits).mid_double());
      arc(os, a, b, 385.0, d.sign > 0 ? "#ee6677" : "#66ccee", 12.0, "D(" + d.owner + ")");
    }
    os << "</g>\n";
  }

  os << "<g id=\"marked\">\n";
  for (int i = 1; i <= spec.k(); ++i)
    dot(os, to_double(config.element_point(i)), kRadius, 5.0, "black", "x_e" + std::to_string(i));
  for (int j = 1; j <= 2 * spec.n; ++j) {
    dot(os, to_double(config.plus_point(j)), kRadius, 4.0, "#228833", "x_" + std::to_string(j) + "+");
    dot(os, to_double(config.minus_point(j)), kRadius, 4.0, "#aa3377", "x_" + std::to_string(j) + "-");
  }
  os << "</g>\n";

  if (options.orbit > 0) {
    os << "<g id=\"orbit\">\n";
    const long degree = options.cover ? options.cover->d : 1;
    PointEvaluator ev(config, 0, options.cover && degree > 1 ? options.cover->lifts : std::vector<long>{}, degree);
    for (const auto& w : enumerate_elements(g, options.orbit)) {
      const double t = wrap(ev.angle(translate(g, w, config.basepoint()), kDrawBits).mid_double());
      dot(os, t, 415.0, 2.5, "#ccbb44", g.format(w));
    }
    os << "</g>\n";
  }

  if (!options.points.empty()) {
    os << "<g id=\"points\">\n";
    for (const auto& [theta, label] : options.points) dot(os, to_double(theta), 370.0, 3.0, "#4477aa", label);
    os << "</g>\n";
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace isocirc
