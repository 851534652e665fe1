#include "wsikit/normal_form.hpp"

#include "wsikit/error.hpp"
#include "wsikit/parser.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

namespace wsikit {

bool EquationSystem::acyclic() const {
  // 0 = unvisited, 1 = on stack, 2 = done
  std::vector<int> mark(bodies_.size(), 0);
  std::function<bool(std::uint32_t)> dfs = [&](std::uint32_t i) {
    mark[i] = 1;
    for (const auto& l : bodies_[i].literals()) {
      if (mark[l.var] == 1) return false;
      if (mark[l.var] == 0 && !dfs(l.var)) return false;
    }
    mark[i] = 2;
    return true;
  };
  for (std::uint32_t i = 0; i < bodies_.size(); ++i)
    if (mark[i] == 0 && !dfs(i)) return false;
  return true;
}

std::set<Modality> EquationSystem::modalities() const {
  std::set<Modality> out;
  for (const auto& b : bodies_) {
    auto ms = b.modalities();
    out.insert(ms.begin(), ms.end());
  }
  return out;
}

std::string EquationSystem::to_string() const {
  std::string out;
  auto nm = namer();
  for (std::uint32_t i = 0; i < bodies_.size(); ++i) {
    if (i) out += "\n";
    out += var_name(i) + " = " + bodies_[i].to_string(nm);
  }
  return out;
}

namespace {

using Env = std::map<std::string, std::uint32_t>;

// Replaces free fixpoint variables by "#<index>" so that equal keys denote
// equal formulas in the current scope.
Formula close_over(const Formula& f, const Env& env, const std::set<std::string>& bound) {
  switch (f.kind()) {
    case NodeKind::Var:
      if (bound.count(f.name())) return f;
      return Formula::var("#" + std::to_string(env.at(f.name())));
    case NodeKind::Top:
    case NodeKind::Bot:
    case NodeKind::Atom: return f;
    case NodeKind::And: return Formula::conj(close_over(f.child(0), env, bound), close_over(f.child(1), env, bound));
    case NodeKind::Or: return Formula::disj(close_over(f.child(0), env, bound), close_over(f.child(1), env, bound));
    case NodeKind::Modal: return Formula::modal(f.modality(), close_over(f.child(0), env, bound));
    case NodeKind::Nu:
    case NodeKind::Mu: {
      auto inner = bound;
      inner.insert(f.binders().begin(), f.binders().end());
      std::vector<Formula> bodies;
      for (const auto& c : f.children()) bodies.push_back(close_over(c, env, inner));
      return f.kind() == NodeKind::Nu ? Formula::nu(f.binders(), bodies) : Formula::mu(f.binders(), bodies);
    }
  }
  return f;
}

class Normalizer {
 public:
  explicit Normalizer(const NormalFormOptions& opts) : opts_(opts) {}

  EquationSystem run(const Formula& f) {
    if (f.kind() == NodeKind::Nu) {
      block(f, {});
    } else {
      std::uint32_t root = alloc();
      Body b;
      collect(f, {}, b);
      bodies_[root] = std::move(b);
    }
    return resolve();
  }

 private:
  struct Body {
    OneStepFormula f;
    std::vector<std::uint32_t> unguarded;
  };

  std::uint32_t alloc() {
    bodies_.emplace_back();
    return static_cast<std::uint32_t>(bodies_.size() - 1);
  }

  void collect(const Formula& f, const Env& env, Body& out) {
    switch (f.kind()) {
      case NodeKind::Top: return;
      case NodeKind::Atom: out.f.add_atom(f.name()); return;
      case NodeKind::And:
        collect(f.child(0), env, out);
        collect(f.child(1), env, out);
        return;
      case NodeKind::Modal: out.f.add({f.modality(), var_for(f.child(0), env)}); return;
      case NodeKind::Var: {
        auto it = env.find(f.name());
        if (it == env.end()) throw FragmentError("free fixpoint variable '" + f.name() + "'");
        out.unguarded.push_back(it->second);
        return;
      }
      case NodeKind::Nu: out.unguarded.push_back(block(f, env)); return;
      case NodeKind::Bot:
      case NodeKind::Or:
      case NodeKind::Mu: break;
    }
    throw FragmentError("shallow normal form needs a conjunctive nu-sentence");
  }

  std::uint32_t var_for(const Formula& g, const Env& env) {
    if (g.kind() == NodeKind::Var) {
      auto it = env.find(g.name());
      if (it == env.end()) throw FragmentError("free fixpoint variable '" + g.name() + "'");
      return it->second;
    }
    if (g.kind() == NodeKind::Nu) return block(g, env);
    std::string key;
    if (opts_.share) {
      key = print_formula(close_over(g, env, {}));
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    std::uint32_t i = alloc();
    if (opts_.share) memo_.emplace(key, i);
    Body b;
    collect(g, env, b);
    bodies_[i] = std::move(b);
    return i;
  }

  // Allocates the whole block first so that the head gets the lowest index.
  std::uint32_t block(const Formula& nu, const Env& env) {
    Env inner = env;
    std::vector<std::uint32_t> ids;
    for (const auto& b : nu.binders()) {
      ids.push_back(alloc());
      inner[b] = ids.back();
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
      Body b;
      collect(nu.child(k), inner, b);
      bodies_[ids[k]] = std::move(b);
    }
    return ids.front();
  }

  // Inlines unguarded references (transitively; cycles denote true).
  EquationSystem resolve() {
    std::vector<OneStepFormula> out(bodies_.size());
    for (std::size_t i = 0; i < bodies_.size(); ++i) {
      std::vector<bool> seen(bodies_.size(), false);
      std::vector<std::uint32_t> stack{static_cast<std::uint32_t>(i)};
      seen[i] = true;
      while (!stack.empty()) {
        auto j = stack.back();
        stack.pop_back();
        out[i].merge(bodies_[j].f);
        for (auto k : bodies_[j].unguarded)
          if (!seen[k]) {
            seen[k] = true;
            stack.push_back(k);
          }
      }
    }
    return EquationSystem(std::move(out));
  }

  NormalFormOptions opts_;
  std::vector<Body> bodies_;
  std::map<std::string, std::uint32_t> memo_;
};

}  // namespace

EquationSystem shallow_normal_form(const Formula& f, const NormalFormOptions& opts) {
  auto v = validate_conjunctive(f);
  if (!v.ok) throw FragmentError("not a conjunctive nu-formula: " + v.violations.front());
  if (!f.is_sentence()) throw FragmentError("formula has free fixpoint variables");
  return Normalizer(opts).run(f);
}

Formula to_formula(const EquationSystem& sys) {
  std::set<std::string> atoms;
  for (const auto& b : sys.bodies()) atoms.insert(b.atoms().begin(), b.atoms().end());
  std::string prefix = "x";
  auto clashes = [&](const std::string& p) {
    const std::regex re(p + "[0-9]+");
    return std::any_of(atoms.begin(), atoms.end(), [&](const std::string& a) { return std::regex_match(a, re); });
  };
  while (clashes(prefix)) prefix += "_";
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sys.size(); ++i) names.push_back(prefix + std::to_string(i));
  std::vector<Formula> bodies;
  for (const auto& b : sys.bodies()) {
    std::vector<Formula> parts;
    for (const auto& a : b.atoms()) parts.push_back(Formula::atom(a));
    for (const auto& l : b.literals()) parts.push_back(Formula::modal(l.mod, Formula::var(names.at(l.var))));
    bodies.push_back(Formula::conj_all(parts));
  }
  if (bodies.empty()) return Formula::top();
  return Formula::nu(names, bodies);
}

bool TBox::defines(const std::string& a) const { return definition(a) != nullptr; }

const Formula* TBox::definition(const std::string& a) const {
  for (const auto& [name, f] : defs)
    if (name == a) return &f;
  return nullptr;
}

std::vector<std::string> TBox::derived() const {
  std::vector<std::string> out;
  for (const auto& d : defs) out.push_back(d.first);
  return out;
}

namespace {

std::string trim(std::string s) {
  auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && ws(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && ws(s[i])) ++i;
  return s.substr(i);
}

}  // namespace

TBox parse_tbox(std::string_view text, const std::optional<Signature>& sig) {
  TBox t;
  std::size_t offset = 0;
  std::size_t lineno = 0;
  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    std::string line(text.substr(offset, end - offset));
    const std::size_t line_start = offset;
    offset = end + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    auto eq = line.find("==");
    if (eq == std::string::npos) throw ParseError(where + "expected 'name == formula'", line_start);
    std::string name = trim(line.substr(0, eq));
    static const std::regex ident("[A-Za-z][A-Za-z0-9_']*");
    if (!std::regex_match(name, ident) || name == "nu" || name == "mu" || name == "true" || name == "false")
      throw ParseError(where + "invalid defined name '" + name + "'", line_start);
    if (t.defines(name)) throw FragmentError(where + "duplicate definition of '" + name + "'");
    Formula rhs;
    try {
      rhs = parse_formula(line.substr(eq + 2), sig);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what(), line_start + eq + 2 + e.position());
    }
    auto v = validate_conjunctive(rhs);
    if (!v.ok) throw FragmentError(where + "definition of '" + name + "' is not conjunctive (" + v.violations.front() + ")");
    t.defs.emplace_back(name, rhs);
  }
  return t;
}

std::pair<Formula, Formula> tbox_to_nu(const TBox& t, const Formula& lhs, const Formula& rhs) {
  std::set<std::string> used = lhs.atoms();
  for (const auto& a : rhs.atoms()) used.insert(a);
  std::set<std::string> derived;
  for (const auto& [name, f] : t.defs) {
    used.insert(name);
    derived.insert(name);
    for (const auto& a : f.atoms()) used.insert(a);
  }
  std::string z = "z";
  for (int i = 1; used.count(z); ++i) z = "z" + std::to_string(i);
  std::vector<std::string> binders{z};
  std::vector<Formula> aux;
  for (const auto& [name, f] : t.defs) {
    binders.push_back(name);
    aux.push_back(atoms_to_vars(f, derived));
  }
  auto wrap = [&](const Formula& head) {
    std::vector<Formula> bodies{atoms_to_vars(head, derived)};
    bodies.insert(bodies.end(), aux.begin(), aux.end());
    return Formula::nu(binders, bodies);
  };
  return {wrap(lhs), wrap(rhs)};
}

}  // namespace wsikit
