#include "wsikit/formula.hpp"

#include "wsikit/error.hpp"

#include <algorithm>

namespace wsikit {

namespace {

const std::shared_ptr<const FormulaNode>& top_node() {
  static const auto n = std::make_shared<const FormulaNode>(FormulaNode{NodeKind::Top, {}, {}, {}, {}});
  return n;
}

void check_fixpoint_shape(const std::vector<std::string>& binders, const std::vector<Formula>& bodies) {
  if (binders.empty() || binders.size() != bodies.size())
    throw FragmentError("fixpoint block needs one body per bound variable");
  std::set<std::string> seen(binders.begin(), binders.end());
  if (seen.size() != binders.size()) throw FragmentError("fixpoint variables must be distinct");
}

}  // namespace

Formula::Formula() : node_(top_node()) {}

Formula Formula::make(FormulaNode n) { return Formula(std::make_shared<const FormulaNode>(std::move(n))); }

Formula Formula::top() { return Formula(); }
Formula Formula::bot() { return make({NodeKind::Bot, {}, {}, {}, {}}); }
Formula Formula::atom(std::string name) { return make({NodeKind::Atom, std::move(name), {}, {}, {}}); }
Formula Formula::var(std::string name) { return make({NodeKind::Var, std::move(name), {}, {}, {}}); }
Formula Formula::conj(Formula l, Formula r) {
  return make({NodeKind::And, {}, {}, {std::move(l), std::move(r)}, {}});
}
Formula Formula::disj(Formula l, Formula r) {
  return make({NodeKind::Or, {}, {}, {std::move(l), std::move(r)}, {}});
}
Formula Formula::modal(Modality m, Formula arg) { return make({NodeKind::Modal, {}, m, {std::move(arg)}, {}}); }
Formula Formula::nu(std::vector<std::string> binders, std::vector<Formula> bodies) {
  check_fixpoint_shape(binders, bodies);
  return make({NodeKind::Nu, {}, {}, std::move(bodies), std::move(binders)});
}
Formula Formula::mu(std::vector<std::string> binders, std::vector<Formula> bodies) {
  check_fixpoint_shape(binders, bodies);
  return make({NodeKind::Mu, {}, {}, std::move(bodies), std::move(binders)});
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.kind == y.kind && x.name == y.name && x.binders == y.binders &&
         (x.kind != NodeKind::Modal || x.modality == y.modality) && x.children == y.children;
}

std::size_t Formula::node_count() const {
  std::size_t n = 1;
  for (const auto& c : children()) n += c.node_count();
  return n;
}

std::size_t Formula::modal_depth() const {
  std::size_t d = 0;
  for (const auto& c : children()) d = std::max(d, c.modal_depth());
  return kind() == NodeKind::Modal ? d + 1 : d;
}

std::set<std::string> Formula::atoms() const {
  std::set<std::string> out;
  if (kind() == NodeKind::Atom) out.insert(name());
  for (const auto& c : children()) {
    auto sub = c.atoms();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::set<std::string> Formula::free_vars() const {
  std::set<std::string> out;
  if (kind() == NodeKind::Var) {
    out.insert(name());
    return out;
  }
  for (const auto& c : children()) {
    auto sub = c.free_vars();
    out.insert(sub.begin(), sub.end());
  }
  if (is_fixpoint())
    for (const auto& b : binders()) out.erase(b);
  return out;
}

std::set<Modality> Formula::modalities() const {
  std::set<Modality> out;
  if (kind() == NodeKind::Modal) out.insert(modality());
  for (const auto& c : children()) {
    auto sub = c.modalities();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

namespace {

void collect_violations(const Formula& f, const std::string& path, std::vector<std::string>& out) {
  switch (f.kind()) {
    case NodeKind::Bot: out.push_back(path + ": false"); break;
    case NodeKind::Or: out.push_back(path + ": Or"); break;
    case NodeKind::Mu: out.push_back(path + ": mu"); break;
    default: break;
  }
  for (std::size_t i = 0; i < f.children().size(); ++i)
    collect_violations(f.child(i), path + "." + std::to_string(i), out);
}

}  // namespace

Validation validate_conjunctive(const Formula& f) {
  Validation v;
  collect_violations(f, "root", v.violations);
  v.ok = v.violations.empty();
  return v;
}

void check_signature(const Formula& f, const Signature& sig) {
  for (const auto& m : f.modalities()) {
    if (!sig.contains(m))
      throw SignatureError("modality " + to_string(m) + " is not in signature " + sig.name());
  }
}

Formula atoms_to_vars(const Formula& f, const std::set<std::string>& names) {
  switch (f.kind()) {
    case NodeKind::Atom: return names.count(f.name()) ? Formula::var(f.name()) : f;
    case NodeKind::Top:
    case NodeKind::Bot:
    case NodeKind::Var: return f;
    case NodeKind::And: return Formula::conj(atoms_to_vars(f.child(0), names), atoms_to_vars(f.child(1), names));
    case NodeKind::Or: return Formula::disj(atoms_to_vars(f.child(0), names), atoms_to_vars(f.child(1), names));
    case NodeKind::Modal: return Formula::modal(f.modality(), atoms_to_vars(f.child(0), names));
    case NodeKind::Nu:
    case NodeKind::Mu: {
      std::set<std::string> inner = names;
      for (const auto& b : f.binders()) inner.erase(b);
      std::vector<Formula> bodies;
      for (const auto& c : f.children()) bodies.push_back(atoms_to_vars(c, inner));
      return f.kind() == NodeKind::Nu ? Formula::nu(f.binders(), bodies) : Formula::mu(f.binders(), bodies);
    }
  }
  return f;
}

}  // namespace wsikit
