#include <doctest.h>

#include "isocirc/cli.hpp"

using namespace isocirc;
using namespace isocirc::cli;

namespace {

RunConfig config_for(const std::string& spec, long d = 1) {
  RunConfig c;
  c.spec = GroupSpec::parse(spec);
  c.d = d;
  return c;
}

}  // namespace

TEST_CASE("word parsing") {
  const Group g(GroupSpec::parse("1,2,2,3"));
  CHECK(parse_word(g, "1").is_identity());
  CHECK(parse_word(g, "  1 ").is_identity());
  const Word w = parse_word(g, "e1 h1^-2");
  CHECK(w.syllables().size() == 2);
  CHECK(w == g.multiply(g.e(1), g.h(1, -2)));
  CHECK(parse_word(g, "e1e1").is_identity());
  CHECK(parse_word(g, "e2^4") == g.e(2));
  CHECK(parse_word(g, "h1 h1^-1 e2^-1") == g.e(2, 2));

  const HatWord z = parse_hat_word(g, "e1^2");
  CHECK(z == hat_central(1));
  CHECK(parse_hat_word(g, "z^-3 e2") == HatWord{g.e(2), -3});
  CHECK(parse_hat_word(g, "e2^-1") == HatWord{g.e(2, 2), -1});
}

TEST_CASE("parse errors carry a position") {
  const Group g(GroupSpec::parse("1,2,2,3"));
  auto column_of = [&](const char* text, bool hat) -> std::size_t {
    try {
      if (hat)
        parse_hat_word(g, text);
      else
        parse_word(g, text);
    } catch (const ParseError& e) {
      return e.position();
    }
    return 999;
  };
  CHECK(column_of("e1 x2", false) == 3);
  CHECK(column_of("e1^", false) == 3);
  CHECK(column_of("", false) == 0);
  CHECK(column_of("z", false) == 0);  // z is only a token of extension words
  CHECK(column_of("e1 e3", false) == 3);
  CHECK(column_of("h3", false) == 0);
  CHECK(column_of("e1 z^x", true) == 5);
  try {
    parse_word(g, "e1 e3");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("out of range") != std::string::npos);
  }
}

TEST_CASE("parse-print-parse is a fixed point") {
  for (const char* spec : {"1,2,2,3", "0,3,2,2,2", "2,1,5"}) {
    const Group g(GroupSpec::parse(spec));
    std::mt19937_64 rng(99);
    for (int i = 0; i < 200; ++i) {
      const Word w = g.random_word(rng, 10);
      const std::string printed = g.format(w);
      const Word back = parse_word(g, printed);
      CHECK(back == w);
      CHECK(g.format(back) == printed);
    }
    for (const HatWord& w : random_hat_words(g, 100, 7)) {
      const std::string printed = format_hat(g, w);
      CHECK(parse_hat_word(g, printed) == w);
    }
  }
}

TEST_CASE("run configuration round trip") {
  RunConfig c = config_for("1,2,2,3", 41);
  c.petal_fraction = rational(3, 8);
  c.max_shrink = 4;
  c.precision.start_bits = 96;
  c.precision.cap_bits = 1536;
  c.seed = 7;
  c.samples = 123;
  c.count = 5;
  c.a_cap = 77;
  c.depth = 12;
  c.orbit = 30;
  c.domains = true;
  c.svg = "out/diagram.svg";
  const std::string text = c.to_text();
  const RunConfig back = RunConfig::from_text(text);
  CHECK(back == c);
  CHECK(back.to_text() == text);
  CHECK(RunConfig{}.to_text() == RunConfig::from_text(RunConfig{}.to_text()).to_text());

  RunConfig partial;
  partial.apply_text("# overrides\n\nseed = 9\nspec = 0,3,2,2,2\n");
  CHECK(partial.seed == 9);
  CHECK(partial.spec == GroupSpec::parse("0,3,2,2,2"));
  CHECK(partial.samples == RunConfig{}.samples);
  CHECK_THROWS_AS(partial.apply_text("colour = blue\n"), std::invalid_argument);
}

TEST_CASE("search-d prints the first degrees") {
  RunConfig c = config_for("0,2,2,3");
  const Outcome o = run_search_d(c, 1);
  CHECK(o.exit_code == kExitOk);
  CHECK(o.text ==
        "d = 1  a = 0  lifts = ()  rot_alpha = 1 [symbolic]\n"
        "d = 7  a = 1  lifts = (3,2)  rot_alpha = 6/7 [symbolic]\n"
        "d = 13  a = 2  lifts = (6,4)  rot_alpha = 11/13 [symbolic]\n");
  CHECK(o.data["degrees"].size() == 3);
}

TEST_CASE("exit codes") {
  CHECK(run_verify(config_for("0,2,2,2"), 1).exit_code == kExitExcluded);
  CHECK(run_search_d(config_for("0,2,2,2"), 1).exit_code == kExitExcluded);
  CHECK(run_verify(config_for("0,2,2,3"), 1).exit_code == kExitOk);
  CHECK(run_eval(config_for("0,2,2,3"), {"e1", "e2 q", "1"}, 1).exit_code == kExitUsage);
  CHECK(run_eval(config_for("0,2,2,3"), {"e1", "e2"}, 1).exit_code == kExitUsage);
  // 2 is not 1 mod 6
  CHECK(run_axioms(config_for("0,2,2,3", 2), 1).exit_code == kExitUsage);

  const Outcome e = run_eval(config_for("0,2,2,3"), {"e1", "e1", "e2"}, 1);
  CHECK(e.exit_code == kExitOk);
  CHECK(e.data["value"] == 0);
  CHECK(e.text.find("[symbolic]") != std::string::npos);

  RunConfig ax = config_for("1,1,2");
  ax.samples = 100;
  const Outcome a = run_axioms(ax, 1);
  CHECK(a.exit_code == kExitOk);
  CHECK(a.text.find("0 violations") != std::string::npos);
  CHECK(a.data["violations"] == 0);
}

TEST_CASE("left-order subcommands") {
  const RunConfig c = config_for("0,2,2,3", 7);
  const Outcome cmp = run_leftorder_compare(c, "1", "e1^2", 1);
  CHECK(cmp.exit_code == kExitOk);
  CHECK(cmp.data["order"] == "less");
  CHECK(cmp.text.rfind("1 < z [symbolic] d=7\n", 0) == 0);
  const Outcome proj = run_leftorder_project(c, {"e1", "e2", "e1 e2"}, 1);
  CHECK(proj.exit_code == kExitOk);
  CHECK(proj.data["projected"] == proj.data["circular"]);
}

TEST_CASE("reports do not depend on the job count") {
  RunConfig c = config_for("1,1,2", 5);
  c.samples = 60;
  c.depth = 10;
  c.orbit = 12;
  c.intervals = true;
  c.domains = true;
  CHECK(run_axioms(c, 1).render(false) == run_axioms(c, 3).render(false));
  CHECK(run_axioms(c, 1).render(true) == run_axioms(c, 3).render(true));
  CHECK(run_realize(c, 1).text == run_realize(c, 2).text);
  CHECK(run_leftorder_check(c, 1).render(true) == run_leftorder_check(c, 3).render(true));
  const Outcome s1 = run_export_svg(c, 1), s3 = run_export_svg(c, 3);
  REQUIRE(s1.svg.has_value());
  CHECK(*s1.svg == *s3.svg);
  CHECK(s1.svg->find("width=\"1024\"") != std::string::npos);
}
