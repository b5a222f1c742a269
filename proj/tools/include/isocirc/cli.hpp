#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "isocirc/certarith.hpp"
#include "isocirc/leftorder.hpp"
#include "isocirc/words.hpp"

namespace isocirc::cli {

// ---- Word expressions -------------------------------------------------------------
//
// Tokens e1..ek, h1..h2n, 1 and (hat mode only) z, each with an optional ^ and signed
// integer exponent. Juxtaposition is the product; whitespace is ignored between tokens.

class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t position, const std::string& what)
      : std::invalid_argument("at column " + std::to_string(position + 1) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

Word parse_word(const Group& g, std::string_view text);
HatWord parse_hat_word(const Group& g, std::string_view text);

// ---- Run configuration ------------------------------------------------------------

struct RunConfig {
  GroupSpec spec{0, {2, 3}};
  long d = 1;
  // geometry overrides
  ExactRational petal_fraction = rational(1, 2);
  int max_shrink = 6;
  PrecisionPolicy precision;
  std::uint64_t seed = 42;
  std::size_t samples = 1000;
  std::size_t count = 3;
  long a_cap = 10000;
  std::size_t depth = 50;
  std::size_t orbit = 0;
  bool domains = false;
  bool intervals = false;
  std::string svg;  // output path; empty for none

  // "key = value" lines in a fixed order.
  std::string to_text() const;
  static RunConfig from_text(std::string_view text);
  // Overwrites the keys present in text; '#' comments and blank lines are skipped.
  void apply_text(std::string_view text);

  bool operator==(const RunConfig&) const = default;
};

// ---- Commands ---------------------------------------------------------------------

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitExcluded = 3,
  kExitInconclusive = 4,
};

struct Outcome {
  int exit_code = kExitOk;
  std::string text;          // line-oriented report
  nlohmann::json data;       // same content, structured
  std::optional<std::string> svg;

  const std::string& render(bool json) const;

 private:
  mutable std::string json_text_;
};

// Each command validates its inputs, catches library errors and maps them to exit codes.
// jobs only affects speed.
Outcome run_verify(const RunConfig& cfg, unsigned jobs);
Outcome run_eval(const RunConfig& cfg, const std::vector<std::string>& words, unsigned jobs);
Outcome run_axioms(const RunConfig& cfg, unsigned jobs);
Outcome run_search_d(const RunConfig& cfg, unsigned jobs);
Outcome run_realize(const RunConfig& cfg, unsigned jobs);
Outcome run_leftorder_compare(const RunConfig& cfg, const std::string& a, const std::string& b, unsigned jobs);
Outcome run_leftorder_project(const RunConfig& cfg, const std::vector<std::string>& triple, unsigned jobs);
Outcome run_leftorder_check(const RunConfig& cfg, unsigned jobs);
Outcome run_export_svg(const RunConfig& cfg, unsigned jobs);

}  // namespace isocirc::cli
