// stavi: translate, evaluate, parse and fuzz from the command line.
// Exit status: 0 pass, 1 semantic failure, 2 usage or parse failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stavi/laws.hpp"
#include "stavi/tl_parse.hpp"

using namespace stavi;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// "@path" reads the argument from a file.
std::string input(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw UsageError("cannot read " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "x=0 y=2@1/3": variable = region, with a coordinate inside dense regions.
Assignment parse_assignment(const GappedChain& m, const std::string& text) {
  Assignment a;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("bad assignment '" + item + "'");
    std::string rest = item.substr(eq + 1);
    auto at = rest.find('@');
    Position p;
    try {
      p.region = std::stoul(rest.substr(0, at));
      if (at != std::string::npos) p.coord = Rational(rest.substr(at + 1));
    } catch (const std::exception&) {
      throw UsageError("bad assignment '" + item + "'");
    }
    try {
      check_position(m, p);
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    a[item.substr(0, eq)] = p;
  }
  return a;
}

struct Options {
  std::string formula, fo, tl, model, law = "translate", assign;
  bool check = false;
  FuzzConfig cfg;
};

std::vector<GappedChain> corpus_for(const FuzzConfig& cfg) {
  return default_corpus(cfg.max_points, cfg.max_atoms, 200, 2024, cfg.max_regions);
}

int cmd_translate(const Options& o) {
  const std::string text = input(o.fo.empty() ? o.formula : o.fo);
  if (text.empty()) throw UsageError("translate needs an FO formula");
  const auto f = parse_fo(text);
  const auto g = translate(f);
  std::cout << print_tl(g) << "\nnodes " << tl::dag_size(g) << "\n";
  if (o.check) {
    const auto corpus = corpus_for(o.cfg);
    const auto v = check_equiv(f, g, corpus);
    std::cout << "check " << v.describe(corpus) << "\n";
    if (!v.pass) return 1;
  }
  return 0;
}

int cmd_eval(const Options& o) {
  if (o.model.empty()) throw UsageError("eval needs --model");
  const auto m = parse_model(input(o.model));
  const std::string tl_text = input(o.tl.empty() ? o.formula : o.tl);
  if (!o.fo.empty()) {
    const auto f = parse_fo(input(o.fo));
    const auto fv = free_vars(f);
    if (o.assign.empty() && fv.size() <= 1) {
      std::cout << eval_fo_regions(m, f).str() << "\n";
    } else {
      const auto a = parse_assignment(m, o.assign);
      for (const auto& v : fv)
        if (!a.count(v)) throw UsageError("unassigned free variable '" + v + "'");
      std::cout << (eval_fo(m, f, a) ? "1" : "0") << "\n";
    }
    return 0;
  }
  if (tl_text.empty()) throw UsageError("eval needs --tl or --fo");
  std::cout << eval_tl(m, parse_tl(tl_text)).str() << "\n";
  return 0;
}

int cmd_parse(const Options& o) {
  if (!o.model.empty()) {
    const auto m = parse_model(input(o.model));
    std::cout << "model " << print_model(m) << "\nregions " << m.size() << "\ngaps "
              << m.gaps().size() << "\n";
  }
  if (!o.fo.empty()) {
    const auto f = parse_fo(input(o.fo));
    std::cout << "fo " << print_fo(f) << "\nfree";
    for (const auto& v : free_vars(f)) std::cout << " " << v;
    std::cout << "\ndepth " << quantifier_depth(f) << "\nnodes " << node_count(f) << "\n";
  }
  const std::string tl_text = input(o.tl.empty() ? o.formula : o.tl);
  if (!tl_text.empty()) {
    const auto g = parse_tl(tl_text);
    std::cout << "tl " << print_tl(g) << "\nnodes " << tl::dag_size(g) << "\n";
  }
  if (o.model.empty() && o.fo.empty() && tl_text.empty())
    throw UsageError("parse needs --model, --fo or --tl");
  return 0;
}

int cmd_fuzz(const Options& o) {
  o.cfg.check();
  const std::set<std::string> laws{"translate", "negate",     "normalize",
                                   "exists",    "expansions", "differential"};
  if (!laws.count(o.law)) throw UsageError("unknown law " + o.law);
  std::cout << "command fuzz --law " << o.law << " --seed " << o.cfg.seed << " --trials "
            << o.cfg.trials << "\n";
  std::vector<LawReport> reports;
  if (o.law == "differential") {
    reports.push_back(law_differential(o.cfg));
  } else {
    const auto corpus = corpus_for(o.cfg);
    std::cout << "corpus " << corpus.size() << "\n";
    if (o.law == "translate") {
      reports.push_back(law_translate(o.cfg, corpus));
    } else if (o.law == "negate") {
      reports.push_back(law_negate(o.cfg, corpus));
    } else if (o.law == "normalize") {
      reports.push_back(law_simple_to_normal(o.cfg, corpus));
      reports.push_back(law_pe_conjoin(o.cfg, corpus));
    } else if (o.law == "exists") {
      auto [a, b] = law_exists(o.cfg, corpus);
      reports.push_back(a);
      reports.push_back(b);
    } else {
      reports.push_back(law_expansions(o.cfg, corpus));
    }
  }
  bool pass = true;
  for (const auto& r : reports) {
    std::cout << r.str();
    pass = pass && r.pass();
  }
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"First-order to temporal logic translation over gapped chains"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--model", o.model, "model text, e.g. \"dense{P} gap dense{Q}\"");
    c->add_option("--fo", o.fo, "FO formula");
    c->add_option("--tl", o.tl, "TL formula");
    c->add_option("--seed", o.cfg.seed, "random seed");
    c->add_option("--trials", o.cfg.trials, "number of trials");
    c->add_option("--max-depth", o.cfg.max_quantifier_depth, "quantifier depth bound");
    c->add_option("--atoms", o.cfg.max_atoms, "number of atoms");
    c->add_option("--regions", o.cfg.max_regions, "regions in gapped models");
    c->add_option("--points", o.cfg.max_points, "points in finite chains");
    c->add_flag("--check", o.check, "check the result on the default corpus");
  };

  auto* translate_cmd = app.add_subcommand("translate", "translate an FO formula with one free variable");
  translate_cmd->add_option("formula", o.formula, "FO formula, or @path");
  common(translate_cmd);
  auto* eval_cmd = app.add_subcommand("eval", "truth values per region, '-' at gaps");
  eval_cmd->add_option("formula", o.formula, "TL formula, or @path");
  eval_cmd->add_option("--assign", o.assign, "FO assignment, e.g. \"x=0 y=2@1/3\"");
  common(eval_cmd);
  auto* parse_cmd = app.add_subcommand("parse", "parse and print formulas or a model");
  parse_cmd->add_option("formula", o.formula, "TL formula, or @path");
  common(parse_cmd);
  auto* fuzz_cmd = app.add_subcommand("fuzz", "run a law over generated inputs");
  fuzz_cmd->add_option("--law", o.law, "translate|negate|normalize|exists|expansions|differential");
  common(fuzz_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*translate_cmd) return cmd_translate(o);
    if (*eval_cmd) return cmd_eval(o);
    if (*parse_cmd) return cmd_parse(o);
    return cmd_fuzz(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
