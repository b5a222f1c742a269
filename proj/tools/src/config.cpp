#include <charconv>
#include <sstream>

#include "isocirc/cli.hpp"

namespace isocirc::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T number(std::string_view v, std::size_t line, std::string_view key) {
  T out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc() || ptr != v.data() + v.size())
    throw std::invalid_argument("config line " + std::to_string(line) + ": bad value for " + std::string(key));
  return out;
}

ExactRational fraction(std::string_view v, std::size_t line) {
  ExactRational q;
  if (v.empty() || q.set_str(std::string(v), 10) != 0)
    throw std::invalid_argument("config line " + std::to_string(line) + ": bad fraction '" + std::string(v) + "'");
  q.canonicalize();
  if (q <= 0 || q > 1) throw std::invalid_argument("config line " + std::to_string(line) + ": petal_fraction must lie in (0, 1]");
  return q;
}

bool boolean(std::string_view v, std::size_t line) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw std::invalid_argument("config line " + std::to_string(line) + ": expected true or false");
}

}  // namespace

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "spec = " << spec.to_string() << "\n"
     << "d = " << d << "\n"
     << "petal_fraction = " << to_string(petal_fraction) << "\n"
     << "max_shrink = " << max_shrink << "\n"
     << "precision_bits = " << precision.start_bits << "\n"
     << "precision_cap = " << precision.cap_bits << "\n"
     << "seed = " << seed << "\n"
     << "samples = " << samples << "\n"
     << "count = " << count << "\n"
     << "a_cap = " << a_cap << "\n"
     << "depth = " << depth << "\n"
     << "orbit = " << orbit << "\n"
     << "domains = " << (domains ? "true" : "false") << "\n"
     << "intervals = " << (intervals ? "true" : "false") << "\n"
     << "svg = " << svg << "\n";
  return os.str();
}

void RunConfig::apply_text(std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view val = trim(line.substr(eq + 1));
    if (key == "spec") {
      spec = GroupSpec::parse(val);
    } else if (key == "d") {
      d = number<long>(val, line_no, key);
    } else if (key == "petal_fraction") {
      petal_fraction = fraction(val, line_no);
    } else if (key == "max_shrink") {
      max_shrink = number<int>(val, line_no, key);
    } else if (key == "precision_bits") {
      precision.start_bits = number<mpfr_prec_t>(val, line_no, key);
    } else if (key == "precision_cap") {
      precision.cap_bits = number<mpfr_prec_t>(val, line_no, key);
    } else if (key == "seed") {
      seed = number<std::uint64_t>(val, line_no, key);
    } else if (key == "samples") {
      samples = number<std::size_t>(val, line_no, key);
    } else if (key == "count") {
      count = number<std::size_t>(val, line_no, key);
    } else if (key == "a_cap") {
      a_cap = number<long>(val, line_no, key);
    } else if (key == "depth") {
      depth = number<std::size_t>(val, line_no, key);
    } else if (key == "orbit") {
      orbit = number<std::size_t>(val, line_no, key);
    } else if (key == "domains") {
      domains = boolean(val, line_no);
    } else if (key == "intervals") {
      intervals = boolean(val, line_no);
    } else if (key == "svg") {
      svg = std::string(val);
    } else {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  precision.validate();
}

RunConfig RunConfig::from_text(std::string_view text) {
  RunConfig c;
  c.apply_text(text);
  return c;
}

}  // namespace isocirc::cli
