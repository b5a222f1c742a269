#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "isocirc/cli.hpp"

using namespace isocirc;
using namespace isocirc::cli;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isolated circular orders on free products of cyclic groups"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string spec_text = cfg.spec.to_string();
  std::string petal = "1/2";
  std::string config_path;
  unsigned jobs = 1;
  bool as_json = false;
  long precision_bits = cfg.precision.start_bits, precision_cap = cfg.precision.cap_bits;

  app.add_option("--spec", spec_text, "Group as n,k,m1,...,mk")->capture_default_str();
  app.add_option("--d", cfg.d, "Cover degree")->capture_default_str();
  app.add_option("--count", cfg.count, "Number of degrees for search-d")->capture_default_str();
  app.add_option("--a-cap", cfg.a_cap, "Largest a tried by search-d")->capture_default_str();
  app.add_option("--samples", cfg.samples, "Random samples")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--depth", cfg.depth, "Elements realized")->capture_default_str();
  app.add_option("--orbit", cfg.orbit, "Orbit points drawn in SVG output")->capture_default_str();
  app.add_flag("--domains", cfg.domains, "Draw attracting domains");
  app.add_flag("--intervals", cfg.intervals, "Draw the J and K intervals");
  app.add_option("--petal-fraction", petal, "Initial petal half-width as a fraction of the half-slot")
      ->capture_default_str();
  app.add_option("--max-shrink", cfg.max_shrink, "Petal halvings before giving up")->capture_default_str();
  app.add_option("--precision-bits", precision_bits, "Starting precision in bits")->capture_default_str();
  app.add_option("--precision-cap", precision_cap, "Largest precision in bits")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--svg", cfg.svg, "Write an SVG picture to this path");
  app.add_option("--config", config_path, "Configuration file; its keys override flags");
  app.add_flag("--json", as_json, "Structured output");

  auto* verify = app.add_subcommand("verify", "Build and certify the ping-pong configuration");
  std::vector<std::string> eval_words;
  auto* eval = app.add_subcommand("eval", "Evaluate the circular order on three words");
  eval->add_option("words", eval_words, "Three words")->expected(3)->required();
  auto* axioms = app.add_subcommand("axioms", "Check the circular-order axioms on random quadruples");
  auto* search = app.add_subcommand("search-d", "List valid cover degrees");
  auto* realize = app.add_subcommand("realize", "Dynamical realization round trip");
  auto* leftorder = app.add_subcommand("leftorder", "Left order on the central extension");
  leftorder->require_subcommand(1);
  leftorder->fallthrough();
  std::vector<std::string> compare_words, triple;
  auto* compare = leftorder->add_subcommand("compare", "Compare two extension words");
  compare->add_option("words", compare_words, "Two words, z allowed")->expected(2)->required();
  auto* project = leftorder->add_subcommand("project", "Projected circular order of three words");
  project->add_option("--triple", triple, "Three words")->expected(3)->required();
  auto* lcheck = leftorder->add_subcommand("check", "Order axioms, cofinality, winding and projection");
  auto* svg = app.add_subcommand("export-svg", "Draw the configuration");
  for (auto* s : {verify, eval, axioms, search, realize, svg}) s->fallthrough();
  for (auto* s : {compare, project, lcheck}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    cfg.spec = GroupSpec::parse(spec_text);
    cfg.petal_fraction = ExactRational(petal);
    cfg.petal_fraction.canonicalize();
    cfg.precision.start_bits = precision_bits;
    cfg.precision.cap_bits = precision_cap;
    if (!config_path.empty()) cfg.apply_text(read_file(config_path));
    cfg.precision.validate();
  } catch (const std::exception& e) {
    std::cerr << "error (usage): " << e.what() << "\n";
    return kExitUsage;
  }
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());

  Outcome out;
  if (*verify) out = run_verify(cfg, jobs);
  else if (*eval) out = run_eval(cfg, eval_words, jobs);
  else if (*axioms) out = run_axioms(cfg, jobs);
  else if (*search) out = run_search_d(cfg, jobs);
  else if (*realize) out = run_realize(cfg, jobs);
  else if (*compare) out = run_leftorder_compare(cfg, compare_words[0], compare_words[1], jobs);
  else if (*project) out = run_leftorder_project(cfg, triple, jobs);
  else if (*lcheck) out = run_leftorder_check(cfg, jobs);
  else if (*svg) out = run_export_svg(cfg, jobs);

  std::cout << out.render(as_json);
  if (out.svg && !cfg.svg.empty()) {
    std::ofstream f(cfg.svg, std::ios::binary);
    if (!(f << *out.svg)) {
      std::cerr << "error (io): cannot write " << cfg.svg << "\n";
      return kExitUsage;
    }
  }
  return out.exit_code;
}
