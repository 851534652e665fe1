#include "wsikit/onestep.hpp"

#include <algorithm>

namespace wsikit {

VarSet make_varset(std::vector<std::uint32_t> vs) {
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

bool is_subset(const VarSet& a, const VarSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool contains(const VarSet& s, std::uint32_t v) { return std::binary_search(s.begin(), s.end(), v); }

std::string default_var_name(std::uint32_t v) { return "v" + std::to_string(v); }

std::string varset_to_string(const VarSet& s, const VarNamer& name) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += name(s[i]);
  }
  return out + "}";
}

std::string literal_to_string(const Literal& l, const VarNamer& name) {
  std::string m = to_string(l.mod);
  if (l.mod.label != 0) m += "#" + std::to_string(l.mod.label);
  if (l.mod.kind == ModKind::GradedBox || l.mod.kind == ModKind::GradedDiamond) m += " ";
  return m + name(l.var);
}

OneStepFormula::OneStepFormula(std::vector<Literal> lits, std::set<std::string> atoms)
    : lits_(std::move(lits)), atoms_(std::move(atoms)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

void OneStepFormula::add(const Literal& l) {
  auto it = std::lower_bound(lits_.begin(), lits_.end(), l);
  if (it == lits_.end() || *it != l) lits_.insert(it, l);
}

void OneStepFormula::merge(const OneStepFormula& other) {
  for (const auto& l : other.lits_) add(l);
  atoms_.insert(other.atoms_.begin(), other.atoms_.end());
}

VarSet OneStepFormula::vars() const {
  std::vector<std::uint32_t> vs;
  for (const auto& l : lits_) vs.push_back(l.var);
  return make_varset(std::move(vs));
}

std::set<Modality> OneStepFormula::modalities() const {
  std::set<Modality> out;
  for (const auto& l : lits_) out.insert(l.mod);
  return out;
}

std::string OneStepFormula::to_string(const VarNamer& name) const {
  std::string out;
  for (const auto& a : atoms_) {
    if (!out.empty()) out += " & ";
    out += a;
  }
  for (const auto& l : lits_) {
    if (!out.empty()) out += " & ";
    out += literal_to_string(l, name);
  }
  return out.empty() ? "true" : out;
}

PosProp PosProp::top() {
  PosProp p;
  p.clauses_.push_back({});
  return p;
}

PosProp PosProp::var(std::uint32_t v) {
  PosProp p;
  p.clauses_.push_back({v});
  return p;
}

PosProp PosProp::from_clauses(std::vector<VarSet> clauses) {
  for (auto& c : clauses) c = make_varset(std::move(c));
  std::sort(clauses.begin(), clauses.end(),
            [](const VarSet& a, const VarSet& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  PosProp p;
  for (auto& c : clauses) {
    bool subsumed = std::any_of(p.clauses_.begin(), p.clauses_.end(), [&](const VarSet& k) { return is_subset(k, c); });
    if (!subsumed) p.clauses_.push_back(std::move(c));
  }
  std::sort(p.clauses_.begin(), p.clauses_.end());
  return p;
}

PosProp PosProp::operator|(const PosProp& o) const {
  auto cs = clauses_;
  cs.insert(cs.end(), o.clauses_.begin(), o.clauses_.end());
  return from_clauses(std::move(cs));
}

PosProp PosProp::operator&(const PosProp& o) const {
  std::vector<VarSet> cs;
  for (const auto& a : clauses_)
    for (const auto& b : o.clauses_) cs.push_back(set_union(a, b));
  return from_clauses(std::move(cs));
}

bool PosProp::satisfied_by(const VarSet& a) const {
  return std::any_of(clauses_.begin(), clauses_.end(), [&](const VarSet& c) { return is_subset(c, a); });
}

std::string PosProp::to_string(const VarNamer& name) const {
  if (is_bot()) return "false";
  if (is_top()) return "true";
  std::string out;
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (i) out += " | ";
    const auto& c = clauses_[i];
    bool paren = c.size() > 1 && clauses_.size() > 1;
    if (paren) out += "(";
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j) out += " & ";
      out += name(c[j]);
    }
    if (paren) out += ")";
  }
  return out;
}

}  // namespace wsikit
