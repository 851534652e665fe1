// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Wall-clock budgets count as part of each criterion.

#include "support.hpp"

#include "wsikit/checker.hpp"
#include "wsikit/error.hpp"
#include "wsikit/oracle.hpp"
#include "wsikit/parser.hpp"
#include "wsikit/rules.hpp"
#include "wsikit/wsi_model.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

using namespace wsikit;
using oracle::Mask;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::string data_dir;

Formula P(const std::string& s, const Signature& sig) { return parse_formula(s, sig); }

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(s < 10 ? 2 : 1);
  os << std::fixed << s << "s";
  return os.str();
}

int failures = 0;
std::set<std::string> only;  // empty: run everything

void criterion(const std::string& id, const std::string& title, double budget, const std::function<Outcome()>& run) {
  if (!only.empty() && !only.count(id)) return;
  auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = run();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (out.pass && secs > budget) {
    out.pass = false;
    out.detail = "over the time budget of " + fmt_seconds(budget) + "; " + out.detail;
  }
  if (!out.pass) ++failures;
  std::cout << id << " " << (out.pass ? "PASS" : "FAIL") << "  " << title << ": " << out.detail << " ["
            << fmt_seconds(secs) << "]\n";
  for (const auto& n : out.notes) std::cout << "      " << n << "\n";
  std::cout.flush();
}

// Variable sets named by the atoms of their (atom-only) equations.
std::set<std::string> atoms_of(const AbstractWsiModel& m, const VarSet& s) {
  std::set<std::string> out;
  for (auto v : s)
    for (const auto& a : m.system().body(v).atoms()) out.insert(a);
  return out;
}

using Named = std::set<std::set<std::string>>;

Named named_onestep(const AbstractWsiModel& m) {
  Named out;
  for (const auto& s : m.state(0).onestep) out.insert(atoms_of(m, s));
  return out;
}

std::string show(const Named& n) {
  std::string s = "{";
  for (const auto& set : n) {
    s += "{";
    for (const auto& a : set) s += (s.back() == '{' ? "" : ",") + a;
    s += "}";
  }
  return s + "}";
}

Outcome featured_models() {
  Outcome o;
  auto a = build_wsi(P("<>p & <>q & <>r", Signature::k_diamond()), Signature::k_diamond());
  o.require(named_onestep(a) == Named{{"p"}, {"q"}, {"r"}}, "three diamonds gave " + show(named_onestep(a)));
  o.require(a.size() == 4, "three diamonds: expected 4 states");

  auto b = build_wsi(P("<>p & <>q & []r & []s", Signature::kd()), Signature::kd());
  o.require(named_onestep(b) == Named{{"p", "r", "s"}, {"q", "r", "s"}, {"r", "s"}},
            "kd mixed gave " + show(named_onestep(b)));

  auto c = build_wsi(P("[]p & []q & <>r & <>s", Signature::ms()), Signature::ms());
  const Named nine{{}, {"r"}, {"s"}, {"p"}, {"p", "r"}, {"p", "s"}, {"q"}, {"q", "r"}, {"q", "s"}};
  o.require(named_onestep(c) == nine, "ms mixed gave " + show(named_onestep(c)));
  auto mc = std::get<oracle::MonotoneModel>(oracle::concretize(c));
  std::set<Named> nbhds;
  for (auto n : mc.nbhd[0]) {
    Named members;
    for (std::size_t i = 0; i < c.size(); ++i)
      if ((n >> i) & 1) members.insert(atoms_of(c, c.state(i).vars));
    nbhds.insert(members);
  }
  const std::set<Named> expected{Named{{"p"}, {"p", "r"}, {"p", "s"}}, Named{{"q"}, {"q", "r"}, {"q", "s"}},
                                 Named{{}, {"r"}, {"s"}}};
  o.require(nbhds == expected, "ms mixed: unexpected minimal neighbourhoods");
  if (o.pass) o.detail = "state sets and ms neighbourhoods match exactly";
  return o;
}

Outcome convexity_verdicts() {
  Outcome o;
  for (const auto& sig : {Signature::kd(), Signature::ms(), Signature::cl(2), Signature::cl(3)}) {
    auto rep = check_convexity_preservation(sig, 6);
    o.require(rep.ok, sig.name() + " should preserve convexity: " + rep.rule + " " + rep.detail);
  }
  auto k = check_convexity_preservation(Signature::k(), 3);
  o.require(!k.ok, "k should fail");
  o.require(k.rule.rfind("K_", 0) == 0 && k.detail.find("D_") != std::string::npos,
            "k: expected a K_n deletion counterexample, got " + k.rule + " / " + k.detail);
  if (o.pass) o.detail = "kd, ms, cl:2, cl:3 ok at bound 6; k fails via " + k.rule + " (" + k.detail + ")";
  return o;
}

// Counter-models for each disjunct and bounded confirmation of the disjunction.
void non_convexity(Outcome& o, const std::string& label, const Signature& sig, const std::string& lhs,
                   const std::vector<std::string>& disjuncts, const oracle::Bounds& b, bool confirm) {
  auto phi = P(lhs, sig);
  std::vector<Formula> ds;
  for (const auto& d : disjuncts) {
    auto psi = P(d, sig);
    ds.push_back(psi);
    auto cm = oracle::find_counter_model(phi, psi, sig, b);
    o.require(cm.has_value(), label + ": no counter-model against " + d);
    if (cm)
      o.require(oracle::sat_explicit(cm->model, cm->state, phi) && !oracle::sat_explicit(cm->model, cm->state, psi),
                label + ": invalid counter-model against " + d);
  }
  if (confirm) {
    auto all = Formula::disj_all(ds);
    o.require(!oracle::find_counter_model(phi, all, sig, b), label + ": the disjunction has a counter-model");
  }
}

Outcome remark_suite() {
  Outcome o;
  const auto graded = Signature::graded();
  const oracle::Bounds mg{3, 3, 1, true};
  non_convexity(o, "graded", graded, "<>_1 a & <>_1 b", {"<>_2 (a | b)", "<>_1 (a & b)"}, mg, true);
  non_convexity(o, "four boxes", graded, "[]_1 (a & b) & []_1 (b & c) & []_1 (c & d) & []_1 (d & a)",
                {"[]_1 (a & b & c)", "[]_1 (b & c & d)", "[]_1 (c & d & a)", "[]_1 (d & a & b)"}, mg, true);
  non_convexity(o, "k", Signature::k(), "true", {"[]<>true", "<>true"}, {4, 3, 1, true}, true);
  // With a plain Kripke box every disjunct already follows.
  const auto kb = Signature::k_box();
  auto lhs = P("[](a & b) & [](b & c) & [](c & d) & [](d & a)", kb);
  bool all = true;
  for (auto d : {"[](a & b & c)", "[](b & c & d)", "[](c & d & a)", "[](d & a & b)"}) all &= subsumes(lhs, P(d, kb), kb);
  o.notes.push_back(std::string("info: read with the plain Kripke box, each disjunct is ") +
                    (all ? "subsumed" : "NOT subsumed") + " (k-box)");
  if (o.pass)
    o.detail = "counter-models for all 8 disjuncts; disjunctions confirmed-at-bound (multigraphs <= 3 states, "
               "multiplicity <= 3; Kripke <= 4 for k)";
  return o;
}

struct CorpusItem {
  Signature sig;
  Formula f;
};

// Distinct random formulas per signature; `accept` can veto (and so regenerate) an item.
std::vector<CorpusItem> corpus(std::size_t conj_per_sig, std::size_t nu_per_sig, const std::vector<Signature>& sigs,
                               std::uint64_t seed, const std::function<bool(const CorpusItem&)>& accept = {}) {
  testing::Gen gen(seed);
  const std::vector<std::string> atoms{"p", "q", "r"};
  std::vector<CorpusItem> out;
  for (const auto& sig : sigs) {
    const auto mods = testing::generation_modalities(sig);
    std::set<std::string> seen;
    for (bool nu : {false, true}) {
      const std::size_t want = nu ? nu_per_sig : conj_per_sig;
      std::size_t got = 0;
      for (int tries = 0; got < want && tries < 100000; ++tries) {
        CorpusItem it{sig, nu ? gen.nu_sentence(mods, 3, atoms) : gen.conjunctive(mods, 3, atoms, 3)};
        if (!seen.insert(print_formula(it.f)).second) continue;
        if (accept && !accept(it)) continue;
        out.push_back(it);
        ++got;
      }
    }
  }
  return out;
}

Outcome wsi_corpus() {
  Outcome o;
  const std::vector<Signature> sigs{Signature::k_diamond(), Signature::k_box(), Signature::kd(), Signature::ms()};
  std::size_t conj = 0, nus = 0, models = 0, violations = 0, skipped = 0;
  corpus(50, 13, sigs, 2024, [&](const CorpusItem& it) {
    AbstractWsiModel m = build_wsi(it.f, it.sig);
    auto b = oracle::envelope(it.sig);
    b.rooted = true;
    oracle::WsiReport rep;
    try {
      rep = oracle::verify_wsi(m, it.f, b);
    } catch (const BoundError&) {
      ++skipped;  // more states than an explicit model can hold
      return false;
    }
    models += rep.models_checked;
    if (!rep.clean()) {
      ++violations;
      o.require(false, it.sig.name() + ": " + print_formula(it.f) +
                           (rep.violations.empty() ? " root fails" : " " + rep.violations.front()));
    }
    (it.f.is_fixpoint() ? nus : conj)++;
    return true;
  });
  o.require(conj == 200, "only " + std::to_string(conj) + " conjunctive formulas checked");
  o.require(nus == 52, "only " + std::to_string(nus) + " nu-sentences checked");
  o.detail = std::to_string(conj) + " conjunctive + " + std::to_string(nus) + " nu-sentences, " +
             std::to_string(models) + " models (Kripke <= 4, monotone <= 3, rooted), " + std::to_string(violations) +
             " violation(s)";
  if (skipped) o.notes.push_back("regenerated " + std::to_string(skipped) + " formula(s) with more than 64 states");
  return o;
}

Outcome onestep_equivalence() {
  Outcome o;
  std::size_t queries = 0, disagreements = 0;
  std::vector<std::string> saturation;
  const auto rhos = oracle::OneStepBrute::all_positive();
  for (const auto& sig : {Signature::k_diamond(), Signature::k_box(), Signature::kd(), Signature::m(), Signature::ms()}) {
    oracle::OneStepBrute brute(sig, 3);
    const auto lambda = sig.lambda();
    std::vector<Literal> pool;
    for (const auto& mod : lambda)
      for (std::uint32_t v = 0; v < oracle::OneStepBrute::kVars; ++v) pool.push_back({mod, v});
    for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
      if (std::popcount(mask) > 3) continue;
      std::vector<Literal> lits;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if ((mask >> i) & 1) lits.push_back(pool[i]);
      OneStepFormula psi(lits);
      for (const auto& heart : lambda)
        for (const auto& rho : rhos) {
          ++queries;
          if (brute.consequence(psi, heart, rho) != one_step_consequence(psi, heart, rho, sig)) {
            ++disagreements;
            o.require(false, sig.name() + ": " + psi.to_string() + " vs " + to_string(heart) + "(" +
                                 rho.to_string() + ")");
          }
        }
    }
    // Larger carriers, every literal subset: a check that carriers of size 3 already saturate.
    oracle::OneStepBrute bigger(sig, 4);
    std::size_t differ = 0;
    for (std::uint32_t mask = 0; mask < (1u << pool.size()); ++mask) {
      std::vector<Literal> lits;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if ((mask >> i) & 1) lits.push_back(pool[i]);
      OneStepFormula psi(lits);
      for (const auto& heart : lambda)
        for (const auto& rho : rhos)
          if (bigger.consequence(psi, heart, rho) != one_step_consequence(psi, heart, rho, sig)) ++differ;
    }
    saturation.push_back(sig.name() + " " + std::to_string(differ));
  }
  o.detail = std::to_string(queries) + " queries over carriers <= 3, " + std::to_string(disagreements) +
             " disagreement(s)";
  std::string sat = "info: disagreements at carriers <= 4 over all literal sets:";
  for (const auto& s : saturation) sat += " " + s + ";";
  o.notes.push_back(sat);
  return o;
}

oracle::Relation inverse(const oracle::Relation& r, std::size_t target_size) {
  oracle::Relation out(target_size, 0);
  for (std::size_t x = 0; x < r.size(); ++x)
    for (std::size_t y = 0; y < target_size; ++y)
      if ((r[x] >> y) & 1) out[y] |= Mask{1} << x;
  return out;
}

oracle::Relation compose(const oracle::Relation& a, const oracle::Relation& b) {
  oracle::Relation out(a.size(), 0);
  for (std::size_t x = 0; x < a.size(); ++x)
    for (std::size_t y = 0; y < b.size(); ++y)
      if ((a[x] >> y) & 1) out[x] |= b[y];
  return out;
}

struct SimTally {
  std::size_t models = 0, pairs = 0, identity = 0, composition = 0, preservation = 0, duality = 0;
};

void simulation_family(const Signature& sig, std::size_t max_states, SimTally& t, std::uint64_t seed) {
  const std::vector<Modality> box{Modality::box()};
  const std::vector<Modality> dia{Modality::diamond()};
  const std::vector<Modality> both{Modality::box(), Modality::diamond()};
  const std::set<std::string> props{"p"};

  std::vector<oracle::ExplicitModel> models;
  oracle::enumerate_models(sig, {max_states, 3, 1, false}, {"p"}, [&](const oracle::ExplicitModel& m) {
    models.push_back(m);
    return true;
  });
  testing::Gen gen(seed);
  std::vector<Formula> pool;
  for (int i = 0; i < 24; ++i) pool.push_back(gen.positive(both, 3, {"p"}));
  for (int i = 0; i < 6; ++i) pool.push_back(gen.fix_query(both, {"p"}));
  std::vector<std::vector<Mask>> sat(models.size());
  for (std::size_t i = 0; i < models.size(); ++i)
    for (const auto& f : pool) sat[i].push_back(oracle::sat_explicit(models[i], f));

  const std::size_t n = models.size();
  t.models += n;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = models[i];
    const std::size_t nc = oracle::model_size(c);
    auto self = oracle::greatest_simulation(c, c, both, props);
    for (std::size_t x = 0; x < nc; ++x)
      if (!((self[x] >> x) & 1)) ++t.identity;
    for (std::size_t j = 0; j < n; ++j) {
      const auto& d = models[j];
      ++t.pairs;
      auto r = oracle::greatest_simulation(c, d, both, props);
      for (std::size_t x = 0; x < nc; ++x)
        for (std::size_t f = 0; f < pool.size(); ++f)
          if (((sat[i][f] >> x) & 1) && (r[x] & ~sat[j][f])) ++t.preservation;
      const auto& e = models[(i * 7 + j * 13 + 5) % n];
      auto r2 = oracle::greatest_simulation(d, e, both, props);
      if (!oracle::is_simulation(c, e, compose(r, r2), both, props)) ++t.composition;
      auto rb = oracle::greatest_simulation(c, d, box, {});
      if (rb != inverse(oracle::greatest_simulation(d, c, dia, {}), nc)) ++t.duality;
    }
  }
}

Outcome simulation_suite() {
  Outcome o;
  SimTally t;
  simulation_family(Signature::k(), 3, t, 7);
  simulation_family(Signature::m(), 2, t, 11);
  const std::size_t bad = t.identity + t.composition + t.preservation + t.duality;
  o.require(bad == 0, "identity " + std::to_string(t.identity) + ", composition " + std::to_string(t.composition) +
                          ", preservation " + std::to_string(t.preservation) + ", duality " +
                          std::to_string(t.duality) + " violation(s)");
  // Monotone three-state models: every pair would be too many, so sources are strided.
  SimTally t3;
  {
    std::vector<oracle::ExplicitModel> ms3;
    oracle::enumerate_models(Signature::m(), {3, 3, 3, false}, {"p"}, [&](const oracle::ExplicitModel& m) {
      ms3.push_back(m);
      return true;
    });
    const std::vector<Modality> both{Modality::box(), Modality::diamond()};
    const std::vector<Modality> box{Modality::box()};
    const std::vector<Modality> dia{Modality::diamond()};
    for (std::size_t i = 0; i < ms3.size(); i += 97)
      for (std::size_t j = 0; j < ms3.size(); j += 89) {
        ++t3.pairs;
        auto r = oracle::greatest_simulation(ms3[i], ms3[j], both, {"p"});
        if (!oracle::is_simulation(ms3[i], ms3[j], r, both, {"p"})) ++t3.composition;
        auto rb = oracle::greatest_simulation(ms3[i], ms3[j], box, {});
        if (rb != inverse(oracle::greatest_simulation(ms3[j], ms3[i], dia, {}), 3)) ++t3.duality;
      }
    o.require(t3.composition + t3.duality == 0, "three-state monotone pairs: violations");
  }
  o.detail = std::to_string(t.pairs) + " ordered pairs of " + std::to_string(t.models) +
             " models (all Kripke <= 3 states, all monotone <= 2, with one proposition) + " +
             std::to_string(t3.pairs) + " strided three-state monotone pairs; " + std::to_string(bad) +
             " violation(s)";
  return o;
}

bool lasso_shape(const AbstractWsiModel& m) {
  std::vector<bool> seen(m.size(), false);
  std::size_t cur = 0;
  for (std::size_t steps = 0; steps < m.size(); ++steps) {
    if (m.state(cur).succ.size() != 1) return false;
    seen[cur] = true;
    cur = m.state(cur).succ[0];
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

Outcome size_bounds() {
  Outcome o;
  std::vector<Signature> sigs{Signature::k_diamond(), Signature::ms(), Signature::cl(2), Signature::cl(3),
                              Signature::k_box()};
  auto items = corpus(100, 100, sigs, 77);
  // cl(N) certificates exclude [{}] and <N>; regenerate those with the restricted operators.
  testing::Gen gen(78);
  for (unsigned agents : {2u, 3u}) {
    auto sig = Signature::cl(agents);
    std::vector<Modality> mods;
    for (const auto& m : sig.lambda())
      if (!(m.kind == ModKind::CoalBox && m.param == 0) &&
          !(m.kind == ModKind::CoalDiamond && m.param == grand_coalition(agents)))
        mods.push_back(m);
    for (int i = 0; i < 100; ++i) items.push_back({sig, gen.nu_sentence(mods, 3, {"p", "q"})});
  }
  std::map<std::string, std::size_t> certified;
  std::size_t lassos = 0;
  for (const auto& it : items) {
    auto m = build_wsi(it.f, it.sig);
    auto r = size_report(m);
    if (r.polynomial_certificate) {
      ++certified[it.sig.name()];
      o.require(r.states <= subsets_up_to(r.variables, r.bound_k()),
                it.sig.name() + ": " + print_formula(it.f) + " exceeds the bound");
    } else if (it.sig.logic() != Logic::KBox && it.sig.logic() != Logic::CL) {
      o.require(false, it.sig.name() + ": no certificate for " + print_formula(it.f));
    }
    if (it.sig.logic() == Logic::KBox) {
      o.require(lasso_shape(m), "k-box: not a lasso: " + print_formula(it.f));
      ++lassos;
    }
  }
  o.require(certified["cl:2"] >= 100 && certified["cl:3"] >= 100, "too few certified coalition sentences");
  std::string counts;
  for (const auto& [k, v] : certified) counts += (counts.empty() ? "" : ", ") + k + " " + std::to_string(v);
  o.detail = "certified and within bound: " + counts + "; k-box lassos: " + std::to_string(lassos);
  return o;
}

Outcome named_verdicts() {
  Outcome o;
  auto check = [&](const std::string& l, const std::string& r, const Signature& sig, bool expected) {
    bool got = subsumes(P(l, sig), P(r, sig), sig);
    o.require(got == expected, sig.name() + ": " + l + " vs " + r + " gave " + (got ? "true" : "false"));
  };
  check("true", "<>true", Signature::kd(), true);
  check("true", "[]true", Signature::ms(), true);
  check("true", "<>true", Signature::ms(), true);
  check("true", "<>true", Signature::k(), false);
  check("[{1}]p & [{2}]q", "[{1,2}](p & q)", Signature::cl(2), true);
  check("nu(x;).(p & [{1}]x)", "nu(x;).([{1}]x)", Signature::cl(2), true);

  auto k = Signature::k();
  auto cm = oracle::find_counter_model(Formula::top(), P("<>true", k), k, oracle::envelope(k));
  o.require(cm && oracle::model_size(cm->model) == 1 && std::get<oracle::KripkeModel>(cm->model).succ[0] == 0,
            "k: expected a one-state deadlock counter-model");
  auto v = decide_subsumption(Formula::top(), P("<>true", k), k);
  auto wsi = std::get<oracle::KripkeModel>(oracle::concretize(*v.model));
  o.require(wsi.n == 1 && wsi.succ[0] == 0, "k: the wsi counter-model is not the deadlock");

  auto cl = Signature::cl(2);
  const oracle::Bounds games{2, 2, 1, false};
  o.require(!oracle::find_counter_model(P("[{1}]p & [{2}]q", cl), P("[{1,2}](p & q)", cl), cl, games),
            "cl:2: game search refutes superadditivity");
  o.require(oracle::find_counter_model(P("[{1}]p & [{1}]q", cl), P("[{}](p & q)", cl), cl, games).has_value(),
            "cl:2: game search misses a refutation");
  o.require(!oracle::find_counter_model(P("nu(x;).(p & [{1}]x)", cl), P("nu(x;).([{1}]x)", cl), cl, games),
            "cl:2: game search refutes the maintenance example");
  if (o.pass) o.detail = "6 verdicts exact; deadlock counter-model; game search (2 agents, <= 2 actions, <= 2 states) agrees";
  return o;
}

struct TBoxCase {
  Signature sig = Signature::kd();
  std::string text;
  std::vector<std::tuple<std::string, std::string, bool>> queries;
};

std::vector<TBoxCase> read_tbox_cases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<TBoxCase> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("logic ", 0) == 0) {
      out.emplace_back();
      out.back().sig = Signature::parse(line.substr(6));
    } else if (line[0] == '?') {
      auto arrow = line.find("=>");
      auto colon = line.rfind(':');
      auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(' '));
        s.erase(s.find_last_not_of(' ') + 1);
        return s;
      };
      out.back().queries.emplace_back(trim(line.substr(1, arrow - 1)), trim(line.substr(arrow + 2, colon - arrow - 2)),
                                      trim(line.substr(colon + 1)) == "yes");
    } else {
      out.back().text += line + "\n";
    }
  }
  return out;
}

Outcome tbox_semantics() {
  Outcome o;
  auto cases = read_tbox_cases(data_dir + "/tbox_regression.txt");
  std::size_t queries = 0;
  for (const auto& c : cases) {
    auto t = parse_tbox(c.text, c.sig);
    std::vector<std::pair<Formula, Formula>> qs;
    std::set<std::string> prim;
    for (const auto& [l, r, _] : c.queries) {
      qs.emplace_back(P(l, c.sig), P(r, c.sig));
      for (const auto& f : {qs.back().first, qs.back().second})
        for (const auto& a : f.atoms()) prim.insert(a);
    }
    for (const auto& [name, body] : t.defs) {
      prim.erase(name);
      for (const auto& a : body.atoms()) prim.insert(a);
    }
    for (const auto& name : t.derived()) prim.erase(name);
    std::vector<bool> refuted(qs.size(), false);
    oracle::enumerate_models(c.sig, {4, 3, 1, true}, {prim.begin(), prim.end()}, [&](const oracle::ExplicitModel& m) {
      auto props = oracle::tbox_gfp(m, t);
      oracle::ExplicitModel full = m;
      std::visit([&](auto& mm) { mm.props.insert(props.begin(), props.end()); }, full);
      for (std::size_t i = 0; i < qs.size(); ++i)
        if (!refuted[i] && oracle::sat_explicit(full, 0, qs[i].first) && !oracle::sat_explicit(full, 0, qs[i].second))
          refuted[i] = true;
      return true;
    });
    for (std::size_t i = 0; i < qs.size(); ++i) {
      ++queries;
      const auto& [l, r, expected] = c.queries[i];
      const bool decided = subsumes_tbox(t, qs[i].first, qs[i].second, c.sig);
      const std::string where = c.sig.name() + " tbox {" + t.defs.front().first + "...}: " + l + " => " + r;
      o.require(decided == !refuted[i], where + ": checker and gfp oracle disagree");
      o.require(decided == expected, where + ": unexpected verdict");
    }
  }
  o.require(cases.size() == 10, "expected 10 TBoxes, found " + std::to_string(cases.size()));
  if (o.pass)
    o.detail = std::to_string(cases.size()) + " TBoxes, " + std::to_string(queries) +
               " queries; checker, gfp oracle (Kripke <= 4 states) and expectations agree";
  return o;
}

Outcome kd_convexity() {
  Outcome o;
  testing::Gen gen(1000);
  const auto sig = Signature::kd();
  const auto mods = testing::generation_modalities(sig);
  std::size_t premises = 0, violations = 0, tries = 0;
  while (premises < 100 && tries < 50000) {
    ++tries;
    auto phi = gen.conjunctive(mods, 2, {"p", "q", "r"});
    auto a = gen.positive(mods, 2, {"p", "q", "r"});
    auto b = gen.positive(mods, 2, {"p", "q", "r"});
    if (!subsumes(phi, Formula::disj(a, b), sig)) continue;
    ++premises;
    if (!subsumes(phi, a, sig) && !subsumes(phi, b, sig)) {
      ++violations;
      o.require(false, print_formula(phi) + " vs " + print_formula(a) + " | " + print_formula(b));
    }
  }
  o.require(premises >= 100, "only " + std::to_string(premises) + " triples with a subsumed disjunction");
  o.detail = std::to_string(premises) + " triples (of " + std::to_string(tries) + " sampled), " +
             std::to_string(violations) + " violation(s)";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // acceptance [DATA_DIR [AC...]]
  data_dir = argc > 1 ? argv[1] : "tests/data";
  for (int i = 2; i < argc; ++i) only.insert(argv[i]);
  criterion("AC1", "featured one-step models", 1, featured_models);
  criterion("AC2", "convexity preservation verdicts", 1, convexity_verdicts);
  criterion("AC3", "non-convexity counter-models", 60, remark_suite);
  criterion("AC4", "wsi soundness and initiality on the corpus", 600, wsi_corpus);
  criterion("AC5", "one-step consequence vs brute force", 300, onestep_equivalence);
  criterion("AC6", "simulation lemmas", 300, simulation_suite);
  criterion("AC7", "size bounds and lassos", 60, size_bounds);
  criterion("AC8", "named subsumption verdicts", 30, named_verdicts);
  criterion("AC9", "TBox greatest fixpoint semantics", 120, tbox_semantics);
  criterion("AC10", "kd convexity", 120, kd_convexity);
  std::cout << (failures ? std::to_string(failures) + " criterion(s) failed" : "all criteria passed") << "\n";
  return failures ? 1 : 0;
}
