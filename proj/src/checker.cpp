#include "wsikit/checker.hpp"

#include "wsikit/error.hpp"
#include "wsikit/rules.hpp"

#include <stdexcept>

namespace wsikit {

namespace {

bool has_mu(const Formula& f) {
  if (f.kind() == NodeKind::Mu) return true;
  for (const auto& c : f.children())
    if (has_mu(c)) return true;
  return false;
}

}  // namespace

StateSet ModelChecker::extension(const Formula& psi, const Valuation& v) {
  const std::size_t n = m_.size();
  StateSet out(n);
  switch (psi.kind()) {
    case NodeKind::Top: out.set(); break;
    case NodeKind::Bot: break;
    case NodeKind::Atom:
      for (std::size_t i = 0; i < n; ++i) out[i] = m_.state(i).phi.atoms().count(psi.name()) > 0;
      break;
    case NodeKind::And: out = extension(psi.child(0), v) & extension(psi.child(1), v); break;
    case NodeKind::Or: out = extension(psi.child(0), v) | extension(psi.child(1), v); break;
    case NodeKind::Var: {
      auto it = v.find(psi.name());
      if (it == v.end()) throw FragmentError("unbound fixpoint variable '" + psi.name() + "'");
      out = it->second;
      break;
    }
    case NodeKind::Modal:
      if (!m_.sig().contains(psi.modality()))
        throw SignatureError("modality " + to_string(psi.modality()) + " is not in " + m_.sig().name());
      out = modal(psi.modality(), extension(psi.child(0), v));
      break;
    case NodeKind::Nu:
    case NodeKind::Mu: {
      const bool greatest = psi.kind() == NodeKind::Nu;
      const auto& binders = psi.binders();
      std::vector<StateSet> vals(binders.size(), StateSet(n));
      if (greatest)
        for (auto& s : vals) s.set();
      const std::size_t limit = n * binders.size() + 1;
      for (std::size_t round = 0;; ++round) {
        if (round > limit) throw std::logic_error("fixpoint iteration did not converge");
        ++rounds_;
        Valuation env = v;
        for (std::size_t k = 0; k < binders.size(); ++k) env[binders[k]] = vals[k];
        std::vector<StateSet> next;
        for (std::size_t k = 0; k < binders.size(); ++k) next.push_back(extension(psi.child(k), env));
        if (next == vals) break;
        vals = std::move(next);
      }
      out = vals.front();
      break;
    }
  }
  if (opts_.assert_upward_closed) check_upward(out);
  return out;
}

StateSet ModelChecker::modal(const Modality& mod, const StateSet& arg) {
  StateSet out(m_.size());
  for (std::size_t i = 0; i < m_.size(); ++i) {
    const auto& st = m_.state(i);
    std::vector<VarSet> clauses;
    for (std::size_t k = 0; k < st.onestep.size(); ++k)
      if (arg[st.succ[k]]) clauses.push_back(st.onestep[k]);
    PosProp rho = PosProp::from_clauses(std::move(clauses));
    auto key = std::make_tuple(i, mod, rho);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      ++hits_;
      out[i] = it->second;
      continue;
    }
    ++calls_;
    bool r = one_step_consequence(st.phi, mod, rho, m_.sig());
    memo_.emplace(std::move(key), r);
    out[i] = r;
  }
  return out;
}

void ModelChecker::check_upward(const StateSet& e) const {
  for (std::size_t i = 0; i < m_.size(); ++i) {
    if (!e[i]) continue;
    for (std::size_t j = 0; j < m_.size(); ++j)
      if (!e[j] && is_subset(m_.state(i).vars, m_.state(j).vars))
        throw std::logic_error("extension is not upward closed: " + varset_to_string(m_.state(i).vars) + " in, " +
                               varset_to_string(m_.state(j).vars) + " out");
  }
}

bool ModelChecker::holds(std::size_t state, const Formula& psi, const Valuation& v) {
  return extension(psi, v)[state];
}

bool model_check(const AbstractWsiModel& m, std::size_t state, const Formula& psi, const Valuation& v) {
  return ModelChecker(m).holds(state, psi, v);
}

Signature effective_signature(const Formula& phi, const Formula& psi, const Signature& sig) {
  if (!sig.has_rules() || preserves_convexity(sig)) return sig;
  bool box = false;
  bool diamond = false;
  for (const auto* f : {&phi, &psi})
    for (const auto& m : f->modalities()) {
      box = box || m.kind == ModKind::Box;
      diamond = diamond || m.kind == ModKind::Diamond;
    }
  if (!box && !diamond) box = true;
  Signature eff = sig.restricted(box, diamond);
  if (!preserves_convexity(eff)) {
    auto rep = check_convexity_preservation(eff, 4);
    throw UnsupportedError("conjunctive " + sig.name() + " with the operators used here is not convex (" +
                           rep.rule + "; " + rep.detail + ")");
  }
  return eff;
}

Verdict decide_subsumption(const Formula& phi, const Formula& psi, const Signature& sig, const BuildOptions& opts) {
  auto v = validate_conjunctive(phi);
  if (!v.ok) throw FragmentError("left-hand side is not conjunctive: " + v.violations.front());
  if (!phi.is_sentence()) throw FragmentError("left-hand side has free fixpoint variables");
  if (!psi.is_sentence()) throw FragmentError("right-hand side has free fixpoint variables");
  check_signature(phi, sig);
  check_signature(psi, sig);
  if (!sig.has_rules()) throw UnsupportedError("subsumption via wsi models is not available for " + sig.name());
  Verdict out;
  out.sig = effective_signature(phi, psi, sig);
  out.mu_query = has_mu(psi);
  out.model.emplace(build_wsi(phi, out.sig, opts));
  out.result = ModelChecker(*out.model).holds(AbstractWsiModel::root(), psi);
  return out;
}

bool subsumes(const Formula& phi, const Formula& psi, const Signature& sig) {
  return decide_subsumption(phi, psi, sig).result;
}

bool subsumes_tbox(const TBox& t, const Formula& lhs, const Formula& rhs, const Signature& sig) {
  auto [l, r] = tbox_to_nu(t, lhs, rhs);
  return subsumes(l, r, sig);
}

}  // namespace wsikit
