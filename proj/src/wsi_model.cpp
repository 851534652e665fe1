#include "wsikit/wsi_model.hpp"

#include "wsikit/error.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace wsikit {

std::optional<std::size_t> AbstractWsiModel::find(const VarSet& vars) const {
  auto it = index_.find(vars);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t AbstractWsiModel::add_state(WsiState s) {
  auto [it, inserted] = index_.emplace(s.vars, states_.size());
  if (inserted) states_.push_back(std::move(s));
  return it->second;
}

AbstractWsiModel build_wsi(const EquationSystem& sys, const Signature& sig, const BuildOptions& opts) {
  if (!sig.has_rules()) throw UnsupportedError("no wsi construction is available for " + sig.name());
  if (sys.size() == 0) throw FragmentError("empty equation system");
  for (const auto& m : sys.modalities())
    if (!sig.contains(m)) throw SignatureError("modality " + to_string(m) + " is not in " + sig.name());

  AbstractWsiModel model(sig, sys);
  std::deque<std::size_t> work;
  model.add_state({VarSet{0}, {}, {}, {}});
  work.push_back(0);
  while (!work.empty()) {
    const std::size_t i = work.front();
    work.pop_front();
    OneStepFormula phi;
    for (auto v : model.state(i).vars) phi.merge(sys.body(v));
    OneStepWsiModel os = opts.special ? build_onestep_wsi_special(phi, sig)
                                      : build_onestep_wsi_generic(phi, sig, opts.onestep);
    std::vector<std::size_t> succ;
    for (const auto& b : os.states) {
      auto known = model.find(b);
      if (known) {
        succ.push_back(*known);
      } else {
        succ.push_back(model.add_state({b, {}, {}, {}}));
        work.push_back(succ.back());
      }
    }
    // add_state may reallocate, so write the record afterwards.
    auto& st = model.mutable_state(i);
    st.phi = std::move(phi);
    st.onestep = std::move(os.states);
    st.succ = std::move(succ);
  }
  return model;
}

AbstractWsiModel build_wsi(const Formula& f, const Signature& sig, const BuildOptions& opts) {
  check_signature(f, sig);
  return build_wsi(shallow_normal_form(f, opts.normal_form), sig, opts);
}

AbstractWsiModel collapse_dag(const AbstractWsiModel& m, const BuildOptions& opts) {
  const auto& sys = m.system();
  const std::size_t n = sys.size();
  std::vector<std::size_t> cls(n, 0);
  {
    std::map<std::set<std::string>, std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i) cls[i] = ids.emplace(sys.body(i).atoms(), ids.size()).first->second;
  }
  for (;;) {
    using Key = std::pair<std::size_t, std::set<std::pair<Modality, std::size_t>>>;
    std::map<Key, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t i = 0; i < n; ++i) {
      Key k{cls[i], {}};
      for (const auto& l : sys.body(i).literals()) k.second.emplace(l.mod, cls[l.var]);
      next[i] = ids.emplace(k, ids.size()).first->second;
    }
    const std::size_t before = std::set<std::size_t>(cls.begin(), cls.end()).size();
    cls = std::move(next);
    if (ids.size() == before) break;
  }
  // Number classes by first occurrence so the root class stays x0.
  std::map<std::size_t, std::uint32_t> renum;
  std::vector<std::size_t> rep;
  for (std::size_t i = 0; i < n; ++i)
    if (renum.emplace(cls[i], static_cast<std::uint32_t>(renum.size())).second) rep.push_back(i);
  std::vector<OneStepFormula> bodies;
  for (auto r : rep) {
    OneStepFormula b({}, sys.body(r).atoms());
    for (const auto& l : sys.body(r).literals()) b.add({l.mod, renum.at(cls[l.var])});
    bodies.push_back(std::move(b));
  }
  return build_wsi(EquationSystem(std::move(bodies)), m.sig(), opts);
}

std::size_t subsets_up_to(std::size_t n, std::size_t k) {
  std::size_t total = 0;
  std::size_t c = 1;  // C(n, j)
  for (std::size_t j = 0; j <= k && j <= n; ++j) {
    total += c;
    c = c * (n - j) / (j + 1);
  }
  return total;
}

SizeReport size_report(const AbstractWsiModel& m) {
  SizeReport r;
  r.states = m.size();
  r.variables = m.system().size();
  for (const auto& s : m.states()) {
    r.max_state_size = std::max(r.max_state_size, s.vars.size());
    for (const auto& b : s.onestep) r.max_state_size = std::max(r.max_state_size, b.size());
  }
  r.lasso = std::all_of(m.states().begin(), m.states().end(), [](const WsiState& s) { return s.succ.size() == 1; });

  const auto mods = m.system().modalities();
  switch (m.sig().logic()) {
    case Logic::KDiamond: r.known_k = 1; break;
    case Logic::Ms: r.known_k = 2; break;
    case Logic::CL: {
      const std::uint32_t grand = grand_coalition(m.sig().agents());
      bool excluded = std::any_of(mods.begin(), mods.end(), [&](const Modality& mod) {
        return (mod.kind == ModKind::CoalBox && mod.param == 0) ||
               (mod.kind == ModKind::CoalDiamond && mod.param == grand);
      });
      if (!excluded) r.known_k = m.sig().agents();
      break;
    }
    default: break;
  }

  if (r.known_k) {
    const std::size_t k = *r.known_k;
    bool bounded = true;
    for (const auto& s : m.states())
      for (const auto& b : s.onestep) bounded = bounded && b.size() <= k;
    if (bounded) {
      r.polynomial_certificate = true;
      r.size_bound = subsets_up_to(r.variables, k);
    }
  } else if (m.sig().logic() == Logic::KBox && r.lasso) {
    const auto& sys = m.system();
    bool self_boxed = true;
    for (std::uint32_t i = 0; i < sys.size(); ++i) {
      const auto& lits = sys.body(i).literals();
      self_boxed = self_boxed && std::any_of(lits.begin(), lits.end(), [&](const Literal& l) {
                     return l.mod.kind == ModKind::Box && l.var == i;
                   });
    }
    if (self_boxed || sys.acyclic()) {
      r.polynomial_certificate = true;
      r.size_bound = r.variables + 1;
    }
  }
  if (r.size_bound && r.states > *r.size_bound)
    throw std::logic_error("size bound violated: " + std::to_string(r.states) + " states, bound " +
                           std::to_string(*r.size_bound));
  return r;
}

}  // namespace wsikit
