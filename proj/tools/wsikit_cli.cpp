// wsikit_cli: subsumption, wsi model construction, convexity checks and
// bounded oracle search from the command line.
//
// Exit codes: 0 success / subsumed / clean, 1 negative answer, 2 usage,
// parse, fragment or signature error.

#include "wsikit/checker.hpp"
#include "wsikit/error.hpp"
#include "wsikit/json_io.hpp"
#include "wsikit/normal_form.hpp"
#include "wsikit/oracle.hpp"
#include "wsikit/parser.hpp"
#include "wsikit/rules.hpp"
#include "wsikit/wsi_model.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace wsikit;

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kUsage = 2;

struct Common {
  std::string logic;
  bool json = false;
  std::optional<std::size_t> max_states;
  std::optional<std::size_t> max_degree;
  bool rooted = false;
  std::uint64_t seed = 1;
};

void add_logic(CLI::App* cmd, Common& c) {
  cmd->add_option("--logic", c.logic, "k-diamond | k-box | k | kd | m | ms | cl:N | graded")->required();
}

void add_bounds(CLI::App* cmd, Common& c) {
  cmd->add_option("--max-states", c.max_states, "largest model size (default: envelope maximum)");
  cmd->add_option("--max-degree", c.max_degree, "largest multiplicity or action count");
  cmd->add_flag("--rooted", c.rooted, "only models generated by the distinguished state, up to isomorphism");
}

oracle::Bounds bounds(const Common& c, const Signature& sig) {
  auto b = oracle::envelope(sig);
  if (c.max_states) b.max_states = *c.max_states;
  if (c.max_degree) b.max_degree = *c.max_degree;
  b.rooted = c.rooted;
  return b;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text << "\n";
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("wsikit");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* lvl = std::getenv("WSIKIT_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// --- subsume ---------------------------------------------------------------

struct SubsumeArgs {
  std::string lhs, rhs, tbox;
};

int cmd_subsume(const Common& c, const SubsumeArgs& a) {
  auto sig = Signature::parse(c.logic);
  Formula lhs = parse_formula(a.lhs, sig);
  Formula rhs = parse_formula(a.rhs, sig);
  if (!a.tbox.empty()) {
    auto t = parse_tbox(read_file(a.tbox), sig);
    spdlog::debug("tbox with {} definition(s)", t.defs.size());
    std::tie(lhs, rhs) = tbox_to_nu(t, lhs, rhs);
  }
  auto t0 = std::chrono::steady_clock::now();
  auto v = decide_subsumption(lhs, rhs, sig);
  spdlog::info("decided in {:.3f}s over {} wsi state(s)", seconds_since(t0), v.model->size());

  if (c.json) {
    auto j = verdict_to_json(v);
    if (!v.result && v.sig.concretizable())
      j["counter_model"] = explicit_to_json(oracle::concretize(*v.model), v.sig);
    std::cout << j.dump(2) << "\n";
    return v.result ? kYes : kNo;
  }
  if (v.sig.name() != sig.name()) std::cout << "effective signature: " << v.sig.name() << "\n";
  if (v.result) {
    std::cout << "SUBSUMED\n";
  } else if (v.sig.concretizable()) {
    std::cout << "NOT SUBSUMED (wsi counter-model attached)\n";
    std::cout << oracle::describe(oracle::concretize(*v.model), 0);
  } else {
    std::cout << "NOT SUBSUMED (the wsi model, " << v.model->size()
              << " abstract state(s), is the counter-model; use `build` to export it)\n";
  }
  if (v.mu_query) std::cout << "caveat: mu-query\n";
  return v.result ? kYes : kNo;
}

// --- build -----------------------------------------------------------------

struct BuildArgs {
  std::string formula, output;
  bool concrete = false;
  bool stats = false;
  bool dump_rules = false;
};

void print_stats(const AbstractWsiModel& m) {
  auto r = size_report(m);
  std::cout << "states = " << r.states << "\n";
  std::cout << "variables = " << r.variables << "\n";
  std::cout << "bound_k = " << r.bound_k() << "\n";
  std::cout << "polynomial_certificate = " << (r.polynomial_certificate ? "true" : "false") << "\n";
  if (r.size_bound) std::cout << "size_bound = " << *r.size_bound << "\n";
  std::cout << "lasso = " << (r.lasso ? "true" : "false") << "\n";
}

void print_rules(const AbstractWsiModel& m) {
  std::cout << "rules:";
  for (const auto& r : rule_set(m.sig())) std::cout << " " << r.name();
  std::cout << "\n";
  auto namer = m.system().namer();
  for (const auto& s : m.states()) {
    std::cout << varset_to_string(s.vars, namer) << ": " << s.phi.to_string(namer) << "\n";
    MatchOptions mo;
    mo.mode = MatchMode::Maximal;
    for (const auto& match : match_rules(s.phi.literals(), m.sig(), mo))
      std::cout << "  " << match_to_string(match, s.phi.literals(), namer) << "\n";
  }
}

int cmd_build(const Common& c, const BuildArgs& a) {
  auto sig = Signature::parse(c.logic);
  if (a.concrete && !sig.concretizable()) {
    std::cerr << "error: no explicit structure is available for " << sig.name() << "\n";
    return kUsage;
  }
  auto f = parse_formula(a.formula, sig);
  auto t0 = std::chrono::steady_clock::now();
  auto m = build_wsi(f, sig);
  spdlog::info("built {} state(s) in {:.3f}s", m.size(), seconds_since(t0));
  if (a.dump_rules) print_rules(m);
  if (a.stats) print_stats(m);
  // Stats and rule dumps go to stdout; the model then only goes to a file.
  if (!(a.stats || a.dump_rules) || !a.output.empty()) write_output(a.output, model_to_json(m, a.concrete).dump(2));
  return kYes;
}

// --- convexity ---------------------------------------------------------------

int cmd_convexity(const Common& c, std::size_t bound) {
  auto sig = Signature::parse(c.logic);
  auto rep = check_convexity_preservation(sig, bound);
  if (c.json) {
    Json j;
    j["signature"] = sig.name();
    j["bound"] = bound;
    j["preserves_convexity"] = rep.ok;
    j["rules_checked"] = rep.rules_checked;
    if (!rep.ok) {
      j["rule"] = rep.rule;
      j["detail"] = rep.detail;
    }
    std::cout << j.dump(2) << "\n";
  } else if (rep.ok) {
    std::cout << sig.name() << ": rules preserve convexity up to " << bound << " premise literals ("
              << rep.rules_checked << " rule instance(s) checked)\n";
  } else {
    std::cout << sig.name() << ": convexity FAILS\n  rule: " << rep.rule << "\n  " << rep.detail << "\n";
  }
  return rep.ok ? kYes : kNo;
}

// --- oracle ------------------------------------------------------------------

int cmd_counter(const Common& c, const std::string& phi_s, const std::string& psi_s) {
  auto sig = Signature::parse(c.logic);
  auto phi = parse_formula(phi_s, sig);
  auto psi = parse_formula(psi_s, sig);
  auto b = bounds(c, sig);
  auto t0 = std::chrono::steady_clock::now();
  auto cm = oracle::find_counter_model(phi, psi, sig, b);
  spdlog::info("search took {:.3f}s", seconds_since(t0));
  if (c.json) {
    Json j;
    j["signature"] = sig.name();
    j["max_states"] = b.max_states;
    j["max_degree"] = b.max_degree;
    if (cm) {
      j["result"] = "counter-model";
      j["state"] = cm->state;
      j["model"] = explicit_to_json(cm->model, sig);
    } else {
      j["result"] = "confirmed-at-bound";
    }
    std::cout << j.dump(2) << "\n";
  } else if (cm) {
    std::cout << "counter-model found\n" << oracle::describe(cm->model, cm->state);
  } else {
    std::cout << "no counter-model with at most " << b.max_states << " state(s)"
              << (sig.functor() == Functor::Multiset || sig.functor() == Functor::Game
                      ? " and degree " + std::to_string(b.max_degree)
                      : std::string())
              << ": confirmed-at-bound (not a proof)\n";
  }
  return cm ? kNo : kYes;
}

int cmd_verify(const Common& c, const std::string& phi_s) {
  auto sig = Signature::parse(c.logic);
  auto phi = parse_formula(phi_s, sig);
  auto b = bounds(c, sig);
  auto m = build_wsi(phi, sig);
  auto t0 = std::chrono::steady_clock::now();
  auto rep = oracle::verify_wsi(m, phi, b);
  spdlog::info("verification took {:.3f}s", seconds_since(t0));
  if (c.json) {
    Json j;
    j["signature"] = sig.name();
    j["root_satisfies"] = rep.root_satisfies;
    j["models_checked"] = rep.models_checked;
    j["pairs_checked"] = rep.pairs_checked;
    j["violations"] = rep.violations;
    j["clean"] = rep.clean();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "root satisfies formula: " << (rep.root_satisfies ? "yes" : "NO") << "\n";
    std::cout << "models checked: " << rep.models_checked << ", pointed models: " << rep.pairs_checked << "\n";
    for (const auto& v : rep.violations) std::cout << "violation: " << v << "\n";
    std::cout << (rep.clean() ? "clean" : "NOT a wsi model within bounds") << "\n";
  }
  return rep.clean() ? kYes : kNo;
}

std::vector<Modality> parse_modalities(const std::string& list, const Signature& sig) {
  std::vector<Modality> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ';')) {
    auto f = parse_formula(item + " true", sig);
    if (f.kind() != NodeKind::Modal) throw ParseError("expected a modal operator in '" + item + "'", 0);
    out.push_back(f.modality());
  }
  return out;
}

int cmd_simulate(const Common& c, const std::string& from, const std::string& to, const std::string& mods) {
  auto sig = Signature::parse(c.logic);
  auto a = explicit_from_json(Json::parse(read_file(from)), sig);
  auto b = explicit_from_json(Json::parse(read_file(to)), sig);
  auto lambda = mods.empty() ? sig.lambda() : parse_modalities(mods, sig);
  std::set<std::string> props;
  for (const auto& [p, _] : oracle::model_props(a))
    if (oracle::model_props(b).count(p)) props.insert(p);
  auto rel = oracle::greatest_simulation(a, b, lambda, props);
  if (c.json) {
    Json pairs = Json::array();
    for (std::size_t x = 0; x < rel.size(); ++x)
      for (std::size_t y = 0; y < oracle::model_size(b); ++y)
        if ((rel[x] >> y) & 1) pairs.push_back({x, y});
    Json j;
    j["signature"] = sig.name();
    j["pairs"] = pairs;
    std::cout << j.dump(2) << "\n";
  } else {
    for (std::size_t x = 0; x < rel.size(); ++x) {
      std::cout << "s" << x << " ->";
      for (std::size_t y = 0; y < oracle::model_size(b); ++y)
        if ((rel[x] >> y) & 1) std::cout << " t" << y;
      std::cout << "\n";
    }
  }
  return rel.empty() || (rel[0] & 1) ? kYes : kNo;
}

// --- bench -------------------------------------------------------------------

// Random conjunctive chains and diamonds with growing numbers of equations.
int cmd_bench(const Common& c, std::size_t count, std::size_t max_eqs) {
  auto sig = Signature::parse(c.logic);
  std::mt19937_64 rng(c.seed);
  std::vector<Modality> mods;
  for (const auto& m : sig.lambda())
    if (mods.size() < 4) mods.push_back(m);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const auto query = Formula::nu({"x"}, {Formula::modal(mods.front(), Formula::var("x"))});
  std::cout << "equations states seconds\n";
  for (std::size_t eqs = 1; eqs <= max_eqs; eqs *= 2) {
    double total = 0;
    std::size_t states = 0;
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<OneStepFormula> bodies(eqs);
      for (std::size_t k = 0; k < eqs; ++k) {
        if (pick(2)) bodies[k].add_atom(pick(2) ? "p" : "q");
        const std::size_t lits = 1 + pick(3);
        for (std::size_t l = 0; l < lits; ++l)
          bodies[k].add({mods[pick(mods.size())], static_cast<std::uint32_t>(pick(eqs))});
      }
      auto t0 = std::chrono::steady_clock::now();
      auto m = build_wsi(EquationSystem(std::move(bodies)), sig);
      ModelChecker mc(m);
      mc.holds(0, query);
      total += seconds_since(t0);
      states += m.size();
    }
    std::cout << eqs << " " << states / count << " " << total / static_cast<double>(count) << "\n";
  }
  return kYes;
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"wsikit: subsumption of conjunctive fixpoint formulas via weakly initial models"};
  app.require_subcommand(1);
  Common common;

  auto* subsume = app.add_subcommand("subsume", "decide LHS |= RHS");
  SubsumeArgs sa;
  add_logic(subsume, common);
  subsume->add_option("lhs", sa.lhs, "conjunctive nu-sentence (or concept, with --tbox)")->required();
  subsume->add_option("rhs", sa.rhs, "positive sentence")->required();
  subsume->add_option("--tbox", sa.tbox, "file with definitions `name == formula`");
  subsume->add_flag("--json", common.json, "machine-readable verdict");

  auto* build = app.add_subcommand("build", "construct and export the wsi model of a formula");
  BuildArgs ba;
  add_logic(build, common);
  build->add_option("formula", ba.formula, "conjunctive nu-sentence")->required();
  build->add_option("-o,--output", ba.output, "output file (default: stdout)");
  build->add_flag("--concrete", ba.concrete, "add explicit successors / neighbourhoods");
  build->add_flag("--stats", ba.stats, "print the size report");
  build->add_flag("--dump-rules", ba.dump_rules, "print rule matches per state");

  auto* convex = app.add_subcommand("convexity", "check that the rule set preserves convexity");
  std::size_t bound = 4;
  add_logic(convex, common);
  convex->add_option("--bound", bound, "largest premise size checked")->check(CLI::Range(1, 8));
  convex->add_flag("--json", common.json, "machine-readable report");

  auto* oracle_cmd = app.add_subcommand("oracle", "bounded explicit-model search");
  oracle_cmd->require_subcommand(1);
  std::string phi, psi, from, to, mods;
  auto* counter = oracle_cmd->add_subcommand("counter", "search a pointed model of PHI refuting PSI");
  add_logic(counter, common);
  add_bounds(counter, common);
  counter->add_option("phi", phi)->required();
  counter->add_option("psi", psi)->required();
  counter->add_flag("--json", common.json);
  auto* verify = oracle_cmd->add_subcommand("verify-wsi", "check the built model against all bounded models");
  add_logic(verify, common);
  add_bounds(verify, common);
  verify->add_option("phi", phi)->required();
  verify->add_flag("--json", common.json);
  auto* simulate = oracle_cmd->add_subcommand("simulate", "greatest simulation between two JSON models");
  add_logic(simulate, common);
  simulate->add_option("from", from, "explicit model JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("to", to, "explicit model JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--modalities", mods, "operators separated by ';' (default: the signature's)");
  simulate->add_flag("--json", common.json);

  auto* bench = app.add_subcommand("bench", "time construction and checking on random systems");
  std::size_t count = 20;
  std::size_t max_eqs = 16;
  add_logic(bench, common);
  bench->add_option("--count", count, "samples per size")->check(CLI::PositiveNumber);
  bench->add_option("--max-equations", max_eqs)->check(CLI::PositiveNumber);
  bench->add_option("--seed", common.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*subsume) return cmd_subsume(common, sa);
    if (*build) return cmd_build(common, ba);
    if (*convex) return cmd_convexity(common, bound);
    if (*counter) return cmd_counter(common, phi, psi);
    if (*verify) return cmd_verify(common, phi);
    if (*simulate) return cmd_simulate(common, from, to, mods);
    if (*bench) return cmd_bench(common, count, max_eqs);
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  } catch (const WsiError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
