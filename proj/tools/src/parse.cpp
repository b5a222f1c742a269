#include <cctype>
#include <charconv>

#include "isocirc/cli.hpp"

namespace isocirc::cli {

namespace {

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  void skip_space() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_space();
    return pos >= text.size();
  }
  bool digit() const { return pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])); }

  std::int64_t integer(bool allow_sign) {
    const std::size_t start = pos;
    if (allow_sign && pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    if (!digit()) throw ParseError(pos, "expected an integer");
    while (digit()) ++pos;
    std::string_view tok = text.substr(start, pos - start);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ParseError(start, "integer out of range");
    return v;
  }

  std::int64_t exponent() {
    skip_space();
    if (pos >= text.size() || text[pos] != '^') return 1;
    ++pos;
    skip_space();
    return integer(true);
  }
};

// Raw syllables plus the total exponent of z (hat mode).
std::vector<Syllable> lex(const Group& g, std::string_view text, bool hat, std::int64_t& z) {
  Lexer lx{text};
  std::vector<Syllable> raw;
  z = 0;
  if (lx.done()) throw ParseError(0, "empty word");
  while (!lx.done()) {
    const std::size_t start = lx.pos;
    const char c = text[lx.pos];
    if (c == 'e' || c == 'h') {
      ++lx.pos;
      if (!lx.digit()) throw ParseError(lx.pos, std::string("expected a generator index after '") + c + "'");
      const std::int64_t idx = lx.integer(false);
      const std::int64_t hi = c == 'e' ? g.k() : 2 * g.n();
      if (idx < 1 || idx > hi)
        throw ParseError(start, "generator " + std::string(1, c) + std::to_string(idx) + " out of range (" +
                                    (hi == 0 ? "none available" : std::string(1, c) + "1.." + std::string(1, c) + std::to_string(hi)) + ")");
      const std::int64_t exp = lx.exponent();
      raw.push_back({{c == 'e' ? GenKind::E : GenKind::H, static_cast<int>(idx)}, exp});
    } else if (c == 'z') {
      if (!hat) throw ParseError(start, "'z' is only valid in an extension word");
      ++lx.pos;
      z += lx.exponent();
    } else if (c == '1') {
      ++lx.pos;
      if (lx.digit()) throw ParseError(start, "unexpected integer");
      (void)lx.exponent();
    } else {
      throw ParseError(start, std::string("unexpected character '") + c + "'");
    }
  }
  return raw;
}

}  // namespace

Word parse_word(const Group& g, std::string_view text) {
  std::int64_t z = 0;
  const auto raw = lex(g, text, false, z);
  return g.reduce(raw);
}

HatWord parse_hat_word(const Group& g, std::string_view text) {
  std::int64_t z = 0;
  const auto raw = lex(g, text, true, z);
  return hat_reduce(g, raw, z);
}

}  // namespace isocirc::cli
