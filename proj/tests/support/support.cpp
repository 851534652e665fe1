#include "support.hpp"

#include "wsikit/error.hpp"
#include "wsikit/onestep_wsi.hpp"
#include "wsikit/parser.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <set>

namespace wsikit::testing {

std::vector<Modality> generation_modalities(const Signature& sig) { return sig.lambda(); }

Formula Gen::conjunctive(const std::vector<Modality>& mods, std::size_t depth, const std::vector<std::string>& atoms,
                         std::size_t max_conjuncts) {
  const std::size_t n = 1 + below(max_conjuncts);
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < n; ++i) {
    if (depth == 0 || mods.empty() || coin(0.3)) {
      parts.push_back(coin(0.1) ? Formula::top() : Formula::atom(atoms[below(atoms.size())]));
    } else {
      parts.push_back(Formula::modal(mods[below(mods.size())], conjunctive(mods, depth - 1, atoms, 2)));
    }
  }
  return Formula::conj_all(parts);
}

Formula Gen::positive(const std::vector<Modality>& mods, std::size_t depth, const std::vector<std::string>& atoms) {
  const std::size_t roll = below(10);
  if (depth == 0 || mods.empty() || roll < 3) {
    if (roll == 0) return coin() ? Formula::top() : Formula::bot();
    return Formula::atom(atoms[below(atoms.size())]);
  }
  if (roll < 5) return Formula::conj(positive(mods, depth, atoms), positive(mods, depth - 1, atoms));
  if (roll < 7) return Formula::disj(positive(mods, depth - 1, atoms), positive(mods, depth, atoms));
  return Formula::modal(mods[below(mods.size())], positive(mods, depth - 1, atoms));
}

Formula Gen::body(const std::vector<Modality>& mods, std::size_t depth, const std::vector<std::string>& atoms,
                  const std::vector<std::string>& vars, bool positive) {
  const std::size_t n = 1 + below(3);
  std::vector<Formula> parts;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t roll = below(10);
    if (depth == 0 || roll < 3) {
      if (!vars.empty() && roll == 0 && depth == 0) {
        parts.push_back(Formula::var(vars[below(vars.size())]));
      } else {
        parts.push_back(Formula::atom(atoms[below(atoms.size())]));
      }
    } else if (!vars.empty() && roll < 7) {
      parts.push_back(Formula::modal(mods[below(mods.size())], Formula::var(vars[below(vars.size())])));
    } else {
      parts.push_back(Formula::modal(mods[below(mods.size())], body(mods, depth - 1, atoms, vars, positive)));
    }
  }
  Formula out = Formula::conj_all(parts);
  if (positive && coin(0.3)) out = Formula::disj(out, Formula::atom(atoms[below(atoms.size())]));
  return out;
}

Formula Gen::nu_sentence(const std::vector<Modality>& mods, std::size_t max_eq, const std::vector<std::string>& atoms) {
  static const std::vector<std::string> names = {"x", "y", "z"};
  const std::size_t k = 1 + below(std::min<std::size_t>(max_eq, names.size()));
  std::vector<std::string> vars(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<Formula> bodies;
  for (std::size_t i = 0; i < k; ++i) bodies.push_back(body(mods, 2, atoms, vars, false));
  return Formula::nu(vars, bodies);
}

Formula Gen::fix_query(const std::vector<Modality>& mods, const std::vector<std::string>& atoms) {
  auto nu_part = [&] {
    return Formula::nu({"u"}, {Formula::conj(positive(mods, 1, atoms),
                                             Formula::modal(mods[below(mods.size())], Formula::var("u")))});
  };
  auto mu_part = [&] {
    return Formula::mu({"w"}, {Formula::disj(positive(mods, 1, atoms),
                                             Formula::modal(mods[below(mods.size())], Formula::var("w")))});
  };
  switch (below(3)) {
    case 0: return nu_part();
    case 1: return mu_part();
    default: return coin() ? Formula::conj(nu_part(), mu_part()) : Formula::disj(nu_part(), mu_part());
  }
}

// ---- tableau ----

namespace {

struct TNode;
using TRef = std::shared_ptr<const TNode>;

struct TNode {
  enum Kind { Top, Bot, Atom, NAtom, And, Or, Box, Dia } kind;
  std::string atom;
  std::vector<TRef> kids;
  std::string key;
};

TRef mk(TNode::Kind k, std::string atom, std::vector<TRef> kids) {
  static const char* tags[] = {"T", "F", "", "~", "&", "|", "[]", "<>"};
  std::string key = std::string(tags[k]) + atom;
  if (!kids.empty()) {
    key += "(";
    for (const auto& c : kids) key += c->key + ",";
    key += ")";
  }
  return std::make_shared<const TNode>(TNode{k, std::move(atom), std::move(kids), std::move(key)});
}

TRef nnf(const Formula& f, bool neg) {
  switch (f.kind()) {
    case NodeKind::Top: return mk(neg ? TNode::Bot : TNode::Top, "", {});
    case NodeKind::Bot: return mk(neg ? TNode::Top : TNode::Bot, "", {});
    case NodeKind::Atom: return mk(neg ? TNode::NAtom : TNode::Atom, f.name(), {});
    case NodeKind::And:
      return mk(neg ? TNode::Or : TNode::And, "", {nnf(f.child(0), neg), nnf(f.child(1), neg)});
    case NodeKind::Or:
      return mk(neg ? TNode::And : TNode::Or, "", {nnf(f.child(0), neg), nnf(f.child(1), neg)});
    case NodeKind::Modal: {
      const bool box = f.modality().kind == ModKind::Box;
      if (!box && f.modality().kind != ModKind::Diamond) throw UnsupportedError("tableau handles [] and <> only");
      return mk((box != neg) ? TNode::Box : TNode::Dia, "", {nnf(f.child(0), neg)});
    }
    default: throw UnsupportedError("tableau handles fixpoint-free formulas only");
  }
}

bool satisfiable(std::map<std::string, TRef> set, bool serial) {
  for (auto it = set.begin(); it != set.end(); ++it) {
    const TRef f = it->second;
    if (f->kind == TNode::And) {
      set.erase(it);
      for (const auto& c : f->kids) set.emplace(c->key, c);
      return satisfiable(std::move(set), serial);
    }
    if (f->kind == TNode::Or) {
      set.erase(it);
      for (const auto& c : f->kids) {
        auto branch = set;
        branch.emplace(c->key, c);
        if (satisfiable(std::move(branch), serial)) return true;
      }
      return false;
    }
  }
  std::map<std::string, TRef> boxes;
  std::vector<TRef> dias;
  for (const auto& [k, f] : set) {
    if (f->kind == TNode::Bot) return false;
    if (f->kind == TNode::Atom && set.count("~" + f->atom)) return false;
    if (f->kind == TNode::Box) boxes.emplace(f->kids[0]->key, f->kids[0]);
    if (f->kind == TNode::Dia) dias.push_back(f->kids[0]);
  }
  for (const auto& d : dias) {
    auto succ = boxes;
    succ.emplace(d->key, d);
    if (!satisfiable(std::move(succ), serial)) return false;
  }
  if (serial && dias.empty() && !boxes.empty()) return satisfiable(boxes, serial);
  return true;
}

}  // namespace

bool k_entails(const Formula& phi, const Formula& psi, bool serial) {
  std::map<std::string, TRef> start;
  auto a = nnf(phi, false);
  auto b = nnf(psi, true);
  start.emplace(a->key, a);
  start.emplace(b->key, b);
  return !satisfiable(std::move(start), serial);
}

// ---- collage ----

namespace {

void flatten(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == NodeKind::And) {
    flatten(f.child(0), out);
    flatten(f.child(1), out);
  } else if (f.kind() != NodeKind::Top) {
    out.push_back(f);
  }
}

struct CollageBuilder {
  const Signature& sig;
  std::vector<oracle::Mask> succ;                  // Kripke
  std::vector<std::vector<oracle::Mask>> nbhd;     // ms
  std::map<std::string, oracle::Mask> props;
  std::optional<std::size_t> top_state;
  bool overflow = false;

  std::size_t fresh() {
    if (succ.size() >= 64) {
      overflow = true;
      return 0;
    }
    succ.push_back(0);
    nbhd.emplace_back();
    return succ.size() - 1;
  }

  std::size_t build(const Formula& f) {
    std::vector<Formula> parts;
    flatten(f, parts);
    if (parts.empty() && top_state) return *top_state;
    const std::size_t me = fresh();
    if (overflow) return 0;
    if (parts.empty()) top_state = me;
    std::vector<Formula> args;
    std::map<std::string, std::uint32_t> arg_index;
    OneStepFormula os;
    for (const auto& p : parts) {
      if (p.kind() == NodeKind::Atom) {
        props[p.name()] |= oracle::Mask{1} << me;
        continue;
      }
      auto [it, fresh_arg] = arg_index.emplace(print_formula(p.child(0)), static_cast<std::uint32_t>(args.size()));
      if (fresh_arg) args.push_back(p.child(0));
      os.add({p.modality(), it->second});
    }
    auto wsi = build_onestep_wsi_special(os, sig);
    std::vector<std::pair<VarSet, std::size_t>> kids;
    for (const auto& b : wsi.states) {
      std::vector<Formula> conj;
      for (auto v : b) conj.push_back(args[v]);
      std::size_t child = build(Formula::conj_all(conj));
      if (overflow) return 0;
      kids.emplace_back(b, child);
    }
    if (sig.functor() == Functor::Kripke) {
      for (const auto& [b, c] : kids) succ[me] |= oracle::Mask{1} << c;
    } else {
      VarSet diamonds;
      for (const auto& l : os.literals())
        if (l.mod.kind == ModKind::Diamond) diamonds.push_back(l.var);
      diamonds = make_varset(diamonds);
      std::vector<oracle::Mask> fam;
      for (const auto& l : os.literals())
        if (l.mod.kind == ModKind::Box) {
          oracle::Mask n = 0;
          for (const auto& [b, c] : kids)
            if (contains(b, l.var)) n |= oracle::Mask{1} << c;
          fam.push_back(n);
        }
      oracle::Mask n = 0;
      for (const auto& [b, c] : kids)
        if (b.size() <= 1 && is_subset(b, diamonds)) n |= oracle::Mask{1} << c;
      fam.push_back(n);
      std::vector<oracle::Mask> minimal;
      for (auto a : fam)
        if (std::none_of(fam.begin(), fam.end(), [&](oracle::Mask x) { return x != a && (x & ~a) == 0; }) &&
            std::find(minimal.begin(), minimal.end(), a) == minimal.end())
          minimal.push_back(a);
      std::sort(minimal.begin(), minimal.end());
      nbhd[me] = minimal;
    }
    return me;
  }
};

}  // namespace

std::optional<oracle::ExplicitModel> collage(const Formula& phi, const Signature& sig) {
  CollageBuilder b{sig, {}, {}, {}, std::nullopt, false};
  b.build(phi);
  if (b.overflow) return std::nullopt;
  const std::size_t n = b.succ.size();
  if (sig.functor() == Functor::Kripke) return oracle::KripkeModel{n, b.succ, b.props, sig.serial()};
  return oracle::MonotoneModel{n, b.nbhd, b.props, sig.serial()};
}

}  // namespace wsikit::testing
