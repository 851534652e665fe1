#include "wsikit/onestep_wsi.hpp"

#include "wsikit/error.hpp"
#include "wsikit/rules.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

namespace wsikit {

namespace {

constexpr std::size_t kConvexityBound = 5;

const ConvexityReport& convexity(const Signature& sig) {
  static std::mutex mu;
  static std::map<std::string, ConvexityReport> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(sig.name());
  if (it == cache.end()) it = cache.emplace(sig.name(), check_convexity_preservation(sig, kConvexityBound)).first;
  return it->second;
}

void check_buildable(const OneStepFormula& phi, const Signature& sig) {
  if (!sig.has_rules()) throw UnsupportedError("no wsi construction is available for " + sig.name());
  const auto& rep = convexity(sig);
  if (!rep.ok)
    throw UnsupportedError("the rules of " + sig.name() + " do not preserve convexity (" + rep.rule + "; " +
                           rep.detail + ")");
  for (const auto& l : phi.literals())
    if (!sig.contains(l.mod)) throw SignatureError("modality " + to_string(l.mod) + " is not in " + sig.name());
}

std::vector<VarSet> finish(std::set<VarSet> states) { return {states.begin(), states.end()}; }

}  // namespace

bool preserves_convexity(const Signature& sig) { return sig.has_rules() && convexity(sig).ok; }

OneStepWsiModel build_onestep_wsi_generic(const OneStepFormula& phi, const Signature& sig,
                                          const OneStepOptions& opts) {
  check_buildable(phi, sig);
  const auto& lits = phi.literals();
  MatchOptions mo;
  mo.mode = opts.maximal ? MatchMode::Maximal : MatchMode::All;
  mo.injective = opts.injective;

  std::set<VarSet> states;
  for (const auto& m : match_rules(lits, sig, mo)) states.insert(m.conclusion);

  std::uint32_t fresh = 0;
  std::set<std::uint32_t> labels{0};
  for (const auto& l : lits) {
    fresh = std::max(fresh, l.var + 1);
    labels.insert(l.mod.label);
  }
  std::vector<Modality> lambda = sig.lambda();
  if (sig.functor() == Functor::Kripke || sig.functor() == Functor::Monotone) {
    std::vector<Modality> labelled;
    for (auto label : labels)
      for (auto m : lambda) {
        m.label = label;
        labelled.push_back(m);
      }
    lambda = std::move(labelled);
  }
  for (const auto& heart : lambda) {
    auto ext = lits;
    ext.push_back({dual(heart), fresh});
    mo.required = ext.size() - 1;
    for (const auto& m : match_rules(ext, sig, mo)) {
      VarSet s = m.conclusion;
      s.erase(std::remove(s.begin(), s.end(), fresh), s.end());
      states.insert(std::move(s));
    }
  }
  return {sig, phi, finish(std::move(states))};
}

OneStepWsiModel build_onestep_wsi_special(const OneStepFormula& phi, const Signature& sig) {
  if (sig.logic() == Logic::CL) return build_onestep_wsi_generic(phi, sig);
  check_buildable(phi, sig);
  std::vector<std::uint32_t> boxes;
  std::vector<std::uint32_t> diamonds;
  for (const auto& l : phi.literals()) {
    if (l.mod.label != 0) throw UnsupportedError("closed forms cover the unlabelled signature only");
    (l.mod.kind == ModKind::Box ? boxes : diamonds).push_back(l.var);
  }
  std::set<VarSet> states;
  switch (sig.logic()) {
    case Logic::KDiamond:
      for (auto b : diamonds) states.insert({b});
      break;
    case Logic::KBox: states.insert(make_varset(boxes)); break;
    case Logic::KD: {
      VarSet all = make_varset(boxes);
      states.insert(all);
      for (auto b : diamonds) states.insert(set_union(all, {b}));
      break;
    }
    case Logic::Ms: {
      // At most one box conjunct and at most one diamond conjunct per state.
      std::vector<std::optional<std::uint32_t>> is{std::nullopt};
      std::vector<std::optional<std::uint32_t>> js{std::nullopt};
      for (auto a : boxes) is.emplace_back(a);
      for (auto b : diamonds) js.emplace_back(b);
      for (const auto& i : is)
        for (const auto& j : js) {
          std::vector<std::uint32_t> s;
          if (i) s.push_back(*i);
          if (j) s.push_back(*j);
          states.insert(make_varset(std::move(s)));
        }
      break;
    }
    default: throw UnsupportedError("no closed-form construction for " + sig.name());
  }
  return {sig, phi, finish(std::move(states))};
}

Classification classify(const OneStepWsiModel& m) {
  Classification c;
  std::map<std::uint32_t, int> seen;
  for (const auto& s : m.states) {
    c.bound = std::max(c.bound, s.size());
    for (auto v : s)
      if (++seen[v] > 1) c.linear = false;
  }
  return c;
}

}  // namespace wsikit
