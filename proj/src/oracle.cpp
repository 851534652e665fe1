#include "wsikit/oracle.hpp"

#include "wsikit/error.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace wsikit::oracle {

namespace {

Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : ((Mask{1} << n) - 1); }

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

[[noreturn]] void wrong_kind(const Modality& mod, const char* model) {
  throw SignatureError("modality " + to_string(mod) + " cannot be interpreted over " + model);
}

std::uint32_t sat_add(std::uint32_t a, std::uint32_t b) {
  if (a == kInfinity || b == kInfinity) return kInfinity;
  std::uint64_t s = std::uint64_t{a} + b;
  return s >= kInfinity ? kInfinity : static_cast<std::uint32_t>(s);
}

std::uint32_t weight(const Multigraph& g, std::size_t x, Mask a) {
  std::uint32_t w = 0;
  for (std::size_t y = 0; y < g.n; ++y)
    if (a & (Mask{1} << y)) w = sat_add(w, g.mult[x][y]);
  return w;
}

// [C]A on a game frame: some joint choice of C forces the outcome into A.
bool coalition_forces(const GameFrame& g, std::size_t x, std::uint32_t coalition, Mask a) {
  if ((coalition & ~grand_coalition(g.agents)) != 0)
    throw SignatureError("coalition " + coalition_to_string(coalition) + " exceeds the agents of the frame");
  const auto& loc = g.local[x];
  std::map<std::vector<unsigned>, bool> ok;
  for (std::size_t j = 0; j < loc.outcome.size(); ++j) {
    std::vector<unsigned> key;
    std::size_t rest = j;
    for (unsigned q = 0; q < g.agents; ++q) {
      unsigned act = static_cast<unsigned>(rest % loc.actions[q]);
      rest /= loc.actions[q];
      if (coalition & (1u << q)) key.push_back(act);
    }
    bool in = (a >> loc.outcome[j]) & 1;
    auto [it, fresh] = ok.emplace(key, in);
    if (!fresh) it->second = it->second && in;
  }
  return std::any_of(ok.begin(), ok.end(), [](const auto& kv) { return kv.second; });
}

}  // namespace

std::size_t model_size(const ExplicitModel& m) {
  return std::visit([](const auto& x) { return x.n; }, m);
}

const Props& model_props(const ExplicitModel& m) {
  return std::visit([](const auto& x) -> const Props& { return x.props; }, m);
}

Functor model_functor(const ExplicitModel& m) {
  return std::visit(overloaded{[](const KripkeModel&) { return Functor::Kripke; },
                               [](const MonotoneModel&) { return Functor::Monotone; },
                               [](const Multigraph&) { return Functor::Multiset; },
                               [](const GameFrame&) { return Functor::Game; }},
                    m);
}

bool holds_modal(const ExplicitModel& m, std::size_t x, const Modality& mod, Mask arg) {
  return std::visit(
      overloaded{
          [&](const KripkeModel& k) {
            if (mod.kind == ModKind::Box) return (k.succ[x] & ~arg) == 0;
            if (mod.kind == ModKind::Diamond) return (k.succ[x] & arg) != 0;
            wrong_kind(mod, "Kripke models");
          },
          [&](const MonotoneModel& k) {
            const auto& fam = k.nbhd[x];
            if (mod.kind == ModKind::Box)
              return std::any_of(fam.begin(), fam.end(), [&](Mask n) { return (n & ~arg) == 0; });
            if (mod.kind == ModKind::Diamond)
              return std::all_of(fam.begin(), fam.end(), [&](Mask n) { return (n & arg) != 0; });
            wrong_kind(mod, "neighbourhood models");
          },
          [&](const Multigraph& g) {
            if (mod.kind == ModKind::GradedDiamond) {
              std::uint32_t w = weight(g, x, arg);
              return w == kInfinity || w > mod.param;
            }
            if (mod.kind == ModKind::GradedBox) {
              std::uint32_t w = weight(g, x, full_mask(g.n) & ~arg);
              return w != kInfinity && w <= mod.param;
            }
            wrong_kind(mod, "multigraphs");
          },
          [&](const GameFrame& g) {
            if (mod.kind == ModKind::CoalBox) return coalition_forces(g, x, mod.param, arg);
            if (mod.kind == ModKind::CoalDiamond) return !coalition_forces(g, x, mod.param, full_mask(g.n) & ~arg);
            wrong_kind(mod, "game frames");
          }},
      m);
}

Mask sat_explicit(const ExplicitModel& m, const Formula& f, const ExplicitValuation& v) {
  const std::size_t n = model_size(m);
  const Mask all = full_mask(n);
  switch (f.kind()) {
    case NodeKind::Top: return all;
    case NodeKind::Bot: return 0;
    case NodeKind::Atom: {
      const auto& props = model_props(m);
      auto it = props.find(f.name());
      return it == props.end() ? 0 : (it->second & all);
    }
    case NodeKind::Var: {
      auto it = v.find(f.name());
      if (it == v.end()) throw FragmentError("unbound fixpoint variable '" + f.name() + "'");
      return it->second;
    }
    case NodeKind::And: return sat_explicit(m, f.child(0), v) & sat_explicit(m, f.child(1), v);
    case NodeKind::Or: return sat_explicit(m, f.child(0), v) | sat_explicit(m, f.child(1), v);
    case NodeKind::Modal: {
      Mask arg = sat_explicit(m, f.child(0), v);
      Mask out = 0;
      for (std::size_t x = 0; x < n; ++x)
        if (holds_modal(m, x, f.modality(), arg)) out |= Mask{1} << x;
      return out;
    }
    case NodeKind::Nu:
    case NodeKind::Mu: {
      const auto& bs = f.binders();
      std::vector<Mask> vals(bs.size(), f.kind() == NodeKind::Nu ? all : 0);
      for (;;) {
        ExplicitValuation env = v;
        for (std::size_t k = 0; k < bs.size(); ++k) env[bs[k]] = vals[k];
        std::vector<Mask> next;
        for (std::size_t k = 0; k < bs.size(); ++k) next.push_back(sat_explicit(m, f.child(k), env));
        if (next == vals) return vals.front();
        vals = std::move(next);
      }
    }
  }
  return 0;
}

bool sat_explicit(const ExplicitModel& m, std::size_t state, const Formula& f, const ExplicitValuation& v) {
  return (sat_explicit(m, f, v) >> state) & 1;
}

namespace {

// Formulas flattened to an array, evaluated against per-frame tables that map
// each argument set to the states satisfying the modal operator.
class FrameEvaluator {
 public:
  FrameEvaluator(const std::vector<Formula>& fs, const std::vector<std::string>& props) : props_(props) {
    for (const auto& f : fs) {
      std::map<std::string, std::size_t> scope;
      roots_.push_back(compile(f, scope));
    }
  }

  void set_frame(const ExplicitModel& m) {
    n_ = model_size(m);
    const Mask all = full_mask(n_);
    tables_.assign(mods_.size(), std::vector<Mask>(std::size_t{1} << n_, 0));
    for (std::size_t i = 0; i < mods_.size(); ++i)
      for (Mask a = 0; a <= all; ++a) {
        Mask out = 0;
        for (std::size_t x = 0; x < n_; ++x)
          if (holds_modal(m, x, mods_[i], a)) out |= Mask{1} << x;
        tables_[i][a] = out;
      }
  }

  /// `atoms[i]` is the extension of props[i].
  Mask eval(std::size_t which, const Mask* atoms) {
    atoms_ = atoms;
    env_.assign(slots_, 0);
    return run(roots_[which]);
  }

 private:
  struct Node {
    NodeKind kind;
    std::size_t index = 0;  // prop, slot or table
    std::vector<std::size_t> kids;
    std::vector<std::size_t> slots;
  };

  std::size_t compile(const Formula& f, std::map<std::string, std::size_t>& scope) {
    Node node{f.kind(), 0, {}, {}};
    switch (f.kind()) {
      case NodeKind::Top:
      case NodeKind::Bot: break;
      case NodeKind::Atom: {
        auto it = std::find(props_.begin(), props_.end(), f.name());
        if (it == props_.end()) {
          node.kind = NodeKind::Bot;
        } else {
          node.index = static_cast<std::size_t>(it - props_.begin());
        }
        break;
      }
      case NodeKind::Var: {
        auto it = scope.find(f.name());
        if (it == scope.end()) throw FragmentError("unbound fixpoint variable '" + f.name() + "'");
        node.index = it->second;
        break;
      }
      case NodeKind::And:
      case NodeKind::Or:
        node.kids = {compile(f.child(0), scope), compile(f.child(1), scope)};
        break;
      case NodeKind::Modal: {
        auto it = std::find(mods_.begin(), mods_.end(), f.modality());
        node.index = static_cast<std::size_t>(it - mods_.begin());
        if (it == mods_.end()) mods_.push_back(f.modality());
        node.kids = {compile(f.child(0), scope)};
        break;
      }
      case NodeKind::Nu:
      case NodeKind::Mu: {
        auto inner = scope;
        for (const auto& b : f.binders()) {
          node.slots.push_back(slots_);
          inner[b] = slots_++;
        }
        for (const auto& c : f.children()) node.kids.push_back(compile(c, inner));
        break;
      }
    }
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
  }

  Mask run(std::size_t i) {
    const Node& node = nodes_[i];
    switch (node.kind) {
      case NodeKind::Top: return full_mask(n_);
      case NodeKind::Bot: return 0;
      case NodeKind::Atom: return atoms_[node.index];
      case NodeKind::Var: return env_[node.index];
      case NodeKind::And: return run(node.kids[0]) & run(node.kids[1]);
      case NodeKind::Or: return run(node.kids[0]) | run(node.kids[1]);
      case NodeKind::Modal: return tables_[node.index][run(node.kids[0])];
      case NodeKind::Nu:
      case NodeKind::Mu: {
        const Mask start = node.kind == NodeKind::Nu ? full_mask(n_) : 0;
        for (auto s : node.slots) env_[s] = start;
        for (;;) {
          bool changed = false;
          std::vector<Mask> next;
          next.reserve(node.kids.size());
          for (auto k : node.kids) next.push_back(run(k));
          for (std::size_t k = 0; k < next.size(); ++k) {
            changed = changed || env_[node.slots[k]] != next[k];
            env_[node.slots[k]] = next[k];
          }
          if (!changed) return next.front();
        }
      }
    }
    return 0;
  }

  std::vector<std::string> props_;
  std::vector<Node> nodes_;
  std::vector<std::size_t> roots_;
  std::vector<Modality> mods_;
  std::size_t slots_ = 0;
  std::size_t n_ = 0;
  std::vector<std::vector<Mask>> tables_;
  const Mask* atoms_ = nullptr;
  std::vector<Mask> env_;
};

}  // namespace

namespace {

Mask image(const Relation& rel, Mask a) {
  Mask out = 0;
  for (std::size_t x = 0; a; ++x, a >>= 1)
    if (a & 1) out |= rel[x];
  return out;
}

Mask preimage(const Relation& rel, Mask b) {
  Mask out = 0;
  for (std::size_t x = 0; x < rel.size(); ++x)
    if (rel[x] & b) out |= Mask{1} << x;
  return out;
}

bool props_ok(const ExplicitModel& c, std::size_t x, const ExplicitModel& d, std::size_t y,
              const std::set<std::string>& props) {
  const auto& pc = model_props(c);
  const auto& pd = model_props(d);
  for (const auto& p : props) {
    auto ic = pc.find(p);
    if (ic == pc.end() || !((ic->second >> x) & 1)) continue;
    auto id = pd.find(p);
    if (id == pd.end() || !((id->second >> y) & 1)) return false;
  }
  return true;
}

bool generic_pair_ok(const ExplicitModel& c, std::size_t x, const ExplicitModel& d, std::size_t y,
                     const Relation& rel, const std::vector<Modality>& lambda) {
  const std::size_t nc = model_size(c);
  for (const auto& mod : lambda)
    for (Mask a = 0; a <= full_mask(nc); ++a) {
      if (holds_modal(c, x, mod, a) && !holds_modal(d, y, mod, image(rel, a))) return false;
      if (a == full_mask(nc)) break;
    }
  return true;
}

bool special_pair_ok(const ExplicitModel& c, std::size_t x, const ExplicitModel& d, std::size_t y,
                     const Relation& rel, const std::vector<Modality>& lambda) {
  for (const auto& mod : lambda) {
    if (const auto* kc = std::get_if<KripkeModel>(&c)) {
      const auto& kd = std::get<KripkeModel>(d);
      const Mask sx = kc->succ[x];
      const Mask sy = kd.succ[y];
      if (mod.kind == ModKind::Diamond) {
        for (std::size_t z = 0; z < kc->n; ++z)
          if (((sx >> z) & 1) && (rel[z] & sy) == 0) return false;
      } else if ((sy & ~image(rel, sx)) != 0) {
        return false;
      }
    } else {
      const auto& mc = std::get<MonotoneModel>(c);
      const auto& md = std::get<MonotoneModel>(d);
      if (mod.kind == ModKind::Box) {
        for (Mask a : mc.nbhd[x]) {
          Mask img = image(rel, a);
          if (std::none_of(md.nbhd[y].begin(), md.nbhd[y].end(), [&](Mask b) { return (b & ~img) == 0; }))
            return false;
        }
      } else {
        for (Mask b : md.nbhd[y]) {
          Mask pre = preimage(rel, b);
          if (std::none_of(mc.nbhd[x].begin(), mc.nbhd[x].end(), [&](Mask a) { return (a & ~pre) == 0; }))
            return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

namespace {

bool specialised(const ExplicitModel& c, const std::vector<Modality>& lambda, SimMethod method) {
  return method == SimMethod::Auto &&
         (model_functor(c) == Functor::Kripke || model_functor(c) == Functor::Monotone) &&
         std::all_of(lambda.begin(), lambda.end(), [](const Modality& m) {
           return m.kind == ModKind::Box || m.kind == ModKind::Diamond;
         });
}

// Per-target lookups for Kripke refinement: the states with a successor in
// A, and the states whose successors all lie in A. Tabulated over all masks
// for small targets.
class KripkeTargets {
 public:
  explicit KripkeTargets(const KripkeModel& d) : d_(&d) {
    if (d.n > kTableLimit) return;
    const Mask masks = Mask{1} << d.n;
    pre_.assign(masks, 0);
    within_.assign(masks, 0);
    for (Mask a = 0; a < masks; ++a) pre_[a] = compute_pre(a), within_[a] = compute_within(a);
  }
  Mask pre(Mask a) const { return pre_.empty() ? compute_pre(a) : pre_[a]; }
  Mask within(Mask a) const { return within_.empty() ? compute_within(a) : within_[a]; }

 private:
  static constexpr std::size_t kTableLimit = 10;
  Mask compute_pre(Mask a) const {
    Mask out = 0;
    for (std::size_t y = 0; y < d_->n; ++y)
      if (d_->succ[y] & a) out |= Mask{1} << y;
    return out;
  }
  Mask compute_within(Mask a) const {
    Mask out = 0;
    for (std::size_t y = 0; y < d_->n; ++y)
      if ((d_->succ[y] & ~a) == 0) out |= Mask{1} << y;
    return out;
  }
  const KripkeModel* d_;
  std::vector<Mask> pre_;
  std::vector<Mask> within_;
};

void refine_kripke(const KripkeModel& c, const KripkeTargets& t, bool box, bool diamond, Relation& rel) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < c.n; ++x) {
      if (!rel[x]) continue;
      Mask keep = rel[x];
      Mask img = 0;
      for (Mask sx = c.succ[x]; sx; sx &= sx - 1) {
        const Mask rz = rel[static_cast<std::size_t>(std::countr_zero(sx))];
        img |= rz;
        if (diamond) keep &= t.pre(rz);
      }
      if (box) keep &= t.within(img);
      if (keep != rel[x]) {
        rel[x] = keep;
        changed = true;
      }
    }
  }
}

void refine_kripke(const KripkeModel& c, const KripkeModel& d, bool box, bool diamond, Relation& rel) {
  refine_kripke(c, KripkeTargets(d), box, diamond, rel);
}

// Deletes pairs violating the modal condition until stable.
void refine(const ExplicitModel& c, const ExplicitModel& d, const std::vector<Modality>& lambda, Relation& rel,
            bool special) {
  if (special) {
    if (const auto* kc = std::get_if<KripkeModel>(&c)) {
      bool box = false, diamond = false;
      for (const auto& m : lambda) (m.kind == ModKind::Box ? box : diamond) = true;
      refine_kripke(*kc, std::get<KripkeModel>(d), box, diamond, rel);
      return;
    }
  }
  const std::size_t nc = model_size(c);
  const std::size_t nd = model_size(d);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t x = 0; x < nc; ++x)
      for (std::size_t y = 0; y < nd; ++y) {
        if (!((rel[x] >> y) & 1)) continue;
        bool ok = special ? special_pair_ok(c, x, d, y, rel, lambda) : generic_pair_ok(c, x, d, y, rel, lambda);
        if (!ok) {
          rel[x] &= ~(Mask{1} << y);
          changed = true;
        }
      }
  }
}

}  // namespace

Relation greatest_simulation(const ExplicitModel& c, const ExplicitModel& d, const std::vector<Modality>& lambda,
                             const std::set<std::string>& props, SimMethod method) {
  if (model_functor(c) != model_functor(d)) throw SignatureError("simulation between models of different kinds");
  if (model_functor(c) == Functor::Game) throw UnsupportedError("simulations of game frames are not computed");
  const std::size_t nc = model_size(c);
  const std::size_t nd = model_size(d);
  const bool special = specialised(c, lambda, method);
  if (!special && nc > 5) throw BoundError("generic simulation search is limited to 5 source states");

  Relation rel(nc, 0);
  for (std::size_t x = 0; x < nc; ++x)
    for (std::size_t y = 0; y < nd; ++y)
      if (props_ok(c, x, d, y, props)) rel[x] |= Mask{1} << y;
  refine(c, d, lambda, rel, special);
  return rel;
}

bool is_simulation(const ExplicitModel& c, const ExplicitModel& d, const Relation& rel,
                   const std::vector<Modality>& lambda, const std::set<std::string>& props) {
  for (std::size_t x = 0; x < model_size(c); ++x)
    for (std::size_t y = 0; y < model_size(d); ++y) {
      if (!((rel[x] >> y) & 1)) continue;
      if (!props_ok(c, x, d, y, props) || !generic_pair_ok(c, x, d, y, rel, lambda)) return false;
    }
  return true;
}

Bounds envelope(const Signature& sig) {
  switch (sig.functor()) {
    case Functor::Kripke: return {4, 0, 1};
    case Functor::Monotone: return {3, 0, 1};
    case Functor::Multiset: return {3, 3, 1};
    case Functor::Game: return {2, 2, 1};
  }
  return {};
}

namespace {

// Mixed-radix counter over digit ranges [lo_i, hi_i].
class Odometer {
 public:
  Odometer(std::vector<std::size_t> lo, std::vector<std::size_t> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    digits_ = lo_;
    valid_ = std::equal(lo_.begin(), lo_.end(), hi_.begin(), [](auto a, auto b) { return a <= b; });
  }
  bool valid() const { return valid_; }
  const std::vector<std::size_t>& digits() const { return digits_; }
  void next() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      if (digits_[i] < hi_[i]) {
        ++digits_[i];
        return;
      }
      digits_[i] = lo_[i];
    }
    valid_ = false;
  }

 private:
  std::vector<std::size_t> lo_, hi_, digits_;
  bool valid_ = true;
};

std::vector<std::vector<Mask>> antichains(std::size_t n, bool serial) {
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<std::vector<Mask>> out;
  for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
    std::vector<Mask> sets;
    for (Mask s = 0; s < subsets; ++s)
      if ((fam >> s) & 1) sets.push_back(s);
    bool anti = true;
    for (auto a : sets)
      for (auto b : sets)
        if (a != b && (a & ~b) == 0) anti = false;
    if (!anti) continue;
    if (serial && (sets.empty() || (sets.size() == 1 && sets[0] == 0))) continue;
    out.push_back(std::move(sets));
  }
  return out;
}

std::vector<GameFrame::Local> game_locals(std::size_t n, unsigned agents, unsigned max_actions) {
  std::vector<GameFrame::Local> out;
  std::vector<std::size_t> lo(agents, 1), hi(agents, max_actions);
  for (Odometer acts(lo, hi); acts.valid(); acts.next()) {
    std::size_t joint = 1;
    for (auto a : acts.digits()) joint *= a;
    for (Odometer outc(std::vector<std::size_t>(joint, 0), std::vector<std::size_t>(joint, n - 1)); outc.valid();
         outc.next()) {
      GameFrame::Local l;
      l.actions.assign(acts.digits().begin(), acts.digits().end());
      l.outcome = outc.digits();
      out.push_back(std::move(l));
    }
  }
  return out;
}

Mask permute_mask(Mask a, const std::vector<std::size_t>& pi) {
  Mask out = 0;
  for (std::size_t x = 0; a; ++x, a >>= 1)
    if (a & 1) out |= Mask{1} << pi[x];
  return out;
}

// Successor masks of the frame, used for the rooted filter.
Mask frame_successors(const ExplicitModel& m, std::size_t x) {
  return std::visit(overloaded{[&](const KripkeModel& k) { return k.succ[x]; },
                               [&](const MonotoneModel& k) {
                                 Mask out = 0;
                                 for (Mask a : k.nbhd[x]) out |= a;
                                 return out;
                               },
                               [&](const Multigraph& g) {
                                 Mask out = 0;
                                 for (std::size_t y = 0; y < g.n; ++y)
                                   if (g.mult[x][y]) out |= Mask{1} << y;
                                 return out;
                               },
                               [&](const GameFrame&) { return Mask{0}; }},
                    m);
}

bool generated_by_root(const ExplicitModel& m) {
  const std::size_t n = model_size(m);
  Mask seen = 1;
  for (Mask frontier = 1; frontier;) {
    Mask next = 0;
    for (std::size_t x = 0; x < n; ++x)
      if ((frontier >> x) & 1) next |= frame_successors(m, x);
    frontier = next & ~seen;
    seen |= next;
  }
  return seen == full_mask(n);
}

// Frame data in a comparable form after relabelling states by pi.
std::vector<std::uint64_t> frame_key(const ExplicitModel& m, const std::vector<std::size_t>& pi) {
  const std::size_t n = model_size(m);
  std::vector<std::uint64_t> key;
  std::visit(overloaded{[&](const KripkeModel& k) {
                          key.assign(n, 0);
                          for (std::size_t x = 0; x < n; ++x) key[pi[x]] = permute_mask(k.succ[x], pi);
                        },
                        [&](const MonotoneModel& k) {
                          std::vector<std::vector<Mask>> fams(n);
                          for (std::size_t x = 0; x < n; ++x) {
                            for (Mask a : k.nbhd[x]) fams[pi[x]].push_back(permute_mask(a, pi));
                            std::sort(fams[pi[x]].begin(), fams[pi[x]].end());
                          }
                          for (const auto& f : fams) {
                            key.push_back(f.size());
                            key.insert(key.end(), f.begin(), f.end());
                          }
                        },
                        [&](const Multigraph& g) {
                          key.assign(n * n, 0);
                          for (std::size_t x = 0; x < n; ++x)
                            for (std::size_t y = 0; y < n; ++y) key[pi[x] * n + pi[y]] = g.mult[x][y];
                        },
                        [&](const GameFrame&) {}},
             m);
  return key;
}

bool canonical_rooted(const ExplicitModel& m) {
  const std::size_t n = model_size(m);
  std::vector<std::size_t> pi(n);
  for (std::size_t i = 0; i < n; ++i) pi[i] = i;
  const auto base = frame_key(m, pi);
  while (std::next_permutation(pi.begin() + 1, pi.end()))
    if (frame_key(m, pi) < base) return false;
  return true;
}


void check_bounds(const Signature& sig, const Bounds& b, std::size_t nprops) {
  const Bounds env = envelope(sig);
  if (b.max_states > env.max_states)
    throw BoundError("at most " + std::to_string(env.max_states) + " states can be enumerated for " + sig.name());
  if ((sig.functor() == Functor::Multiset || sig.functor() == Functor::Game) && b.max_degree > env.max_degree)
    throw BoundError("degree bound above " + std::to_string(env.max_degree) + " for " + sig.name());
  if (sig.functor() == Functor::Game && sig.agents() > 2) throw BoundError("game frames are enumerated for 2 agents");
  if (nprops > 4) throw BoundError("at most 4 propositions can be enumerated");
}

// Calls `visit` on each frame (no propositions) within bounds.
void for_each_frame(const Signature& sig, const Bounds& b, const std::function<bool(const ExplicitModel&)>& visit) {
  const bool rooted = b.rooted && sig.functor() != Functor::Game;
  for (std::size_t n = std::max<std::size_t>(b.min_states, 1); n <= b.max_states; ++n) {
    const std::size_t pmax = full_mask(n);
    auto with_valuations = [&](const ExplicitModel& m) {
      if (rooted && !(generated_by_root(m) && canonical_rooted(m))) return true;
      return visit(m);
    };
    switch (sig.functor()) {
      case Functor::Kripke: {
        for (Odometer o(std::vector<std::size_t>(n, sig.serial() ? 1 : 0), std::vector<std::size_t>(n, pmax));
             o.valid(); o.next()) {
          KripkeModel k;
          k.n = n;
          k.serial = sig.serial();
          k.succ.assign(o.digits().begin(), o.digits().end());
          if (!with_valuations(k)) return;
        }
        break;
      }
      case Functor::Monotone: {
        auto fams = antichains(n, sig.serial());
        for (Odometer o(std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, fams.size() - 1)); o.valid();
             o.next()) {
          MonotoneModel k;
          k.n = n;
          k.serial = sig.serial();
          for (std::size_t x = 0; x < n; ++x) k.nbhd.push_back(fams[o.digits()[x]]);
          if (!with_valuations(k)) return;
        }
        break;
      }
      case Functor::Multiset: {
        for (Odometer o(std::vector<std::size_t>(n * n, 0), std::vector<std::size_t>(n * n, b.max_degree)); o.valid();
             o.next()) {
          Multigraph g;
          g.n = n;
          g.mult.assign(n, std::vector<std::uint32_t>(n, 0));
          for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y) g.mult[x][y] = static_cast<std::uint32_t>(o.digits()[x * n + y]);
          if (!with_valuations(g)) return;
        }
        break;
      }
      case Functor::Game: {
        auto locals = game_locals(n, sig.agents(), static_cast<unsigned>(std::max<std::size_t>(b.max_degree, 1)));
        for (Odometer o(std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, locals.size() - 1)); o.valid();
             o.next()) {
          GameFrame g;
          g.n = n;
          g.agents = sig.agents();
          for (std::size_t x = 0; x < n; ++x) g.local.push_back(locals[o.digits()[x]]);
          if (!with_valuations(g)) return;
        }
        break;
      }
    }
  }
}


// Calls `f(atoms)` for every valuation of `np` propositions over n states.
bool for_each_valuation(std::size_t n, std::size_t np, const std::function<bool(const Mask*)>& f) {
  std::vector<Mask> atoms(np, 0);
  const Mask all = full_mask(n);
  for (;;) {
    if (!f(atoms.data())) return false;
    std::size_t i = np;
    while (i > 0 && atoms[i - 1] == all) atoms[--i] = 0;
    if (i == 0) return true;
    ++atoms[i - 1];
  }
}

Props make_props(const std::vector<std::string>& props, const Mask* atoms) {
  Props out;
  for (std::size_t i = 0; i < props.size(); ++i) out[props[i]] = atoms[i];
  return out;
}

ExplicitModel with_props(ExplicitModel m, Props p) {
  std::visit([&](auto& x) { x.props = std::move(p); }, m);
  return m;
}

}  // namespace

void enumerate_models(const Signature& sig, const Bounds& b, const std::vector<std::string>& props,
                      const std::function<bool(const ExplicitModel&)>& visit) {
  check_bounds(sig, b, props.size());
  for_each_frame(sig, b, [&](const ExplicitModel& frame) {
    ExplicitModel m = frame;
    Props* pr = std::visit([](auto& x) { return &x.props; }, m);
    return for_each_valuation(model_size(frame), props.size(), [&](const Mask* atoms) {
      *pr = make_props(props, atoms);
      return visit(m);
    });
  });
}

std::optional<CounterModel> find_counter_model(const Formula& phi, const Formula& psi, const Signature& sig,
                                               const Bounds& b) {
  check_signature(phi, sig);
  check_signature(psi, sig);
  std::set<std::string> atom_set = phi.atoms();
  for (const auto& a : psi.atoms()) atom_set.insert(a);
  const std::vector<std::string> props(atom_set.begin(), atom_set.end());
  check_bounds(sig, b, props.size());
  FrameEvaluator ev({phi, psi}, props);
  std::optional<CounterModel> found;
  for_each_frame(sig, b, [&](const ExplicitModel& frame) {
    ev.set_frame(frame);
    return for_each_valuation(model_size(frame), props.size(), [&](const Mask* atoms) {
      Mask bad = ev.eval(0, atoms);
      if (b.rooted) bad &= 1;
      if (bad) bad &= ~ev.eval(1, atoms);
      if (bad == 0) return true;
      found = CounterModel{with_props(frame, make_props(props, atoms)), static_cast<std::size_t>(std::countr_zero(bad))};
      return false;
    });
  });
  return found;
}

ExplicitModel concretize(const AbstractWsiModel& m) {
  const auto& sig = m.sig();
  if (m.size() > 64) throw BoundError("explicit models hold at most 64 states");
  Props props;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (const auto& a : m.state(i).phi.atoms()) props[a] |= Mask{1} << i;
  auto succ_mask = [&](std::size_t i, const std::function<bool(const VarSet&)>& keep) {
    Mask out = 0;
    const auto& st = m.state(i);
    for (std::size_t k = 0; k < st.onestep.size(); ++k)
      if (keep(st.onestep[k])) out |= Mask{1} << st.succ[k];
    return out;
  };
  switch (sig.logic()) {
    case Logic::KDiamond:
    case Logic::KBox:
    case Logic::KD: {
      KripkeModel k;
      k.n = m.size();
      k.serial = sig.serial();
      k.props = props;
      for (std::size_t i = 0; i < m.size(); ++i) k.succ.push_back(succ_mask(i, [](const VarSet&) { return true; }));
      return k;
    }
    case Logic::Ms: {
      MonotoneModel mm;
      mm.n = m.size();
      mm.serial = true;
      mm.props = props;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const auto& phi = m.state(i).phi;
        VarSet diamonds;
        std::vector<Mask> fam;
        for (const auto& l : phi.literals())
          if (l.mod.kind == ModKind::Diamond) diamonds.push_back(l.var);
        diamonds = make_varset(diamonds);
        for (const auto& l : phi.literals())
          if (l.mod.kind == ModKind::Box) fam.push_back(succ_mask(i, [&](const VarSet& s) { return contains(s, l.var); }));
        fam.push_back(succ_mask(i, [&](const VarSet& s) { return s.size() <= 1 && is_subset(s, diamonds); }));
        std::sort(fam.begin(), fam.end());
        fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
        std::vector<Mask> minimal;
        for (Mask a : fam)
          if (std::none_of(fam.begin(), fam.end(), [&](Mask b) { return b != a && (b & ~a) == 0; })) minimal.push_back(a);
        mm.nbhd.push_back(std::move(minimal));
      }
      return mm;
    }
    default: break;
  }
  throw UnsupportedError("no explicit structure is available for " + sig.name() + " models");
}

WsiReport verify_wsi(const ExplicitModel& concrete, const Signature& sig, const Formula& phi, const Bounds& b,
                     const std::vector<std::string>& extra_props) {
  WsiReport rep;
  rep.root_satisfies = sat_explicit(concrete, 0, phi);
  std::set<std::string> prop_set = phi.atoms();
  prop_set.insert(extra_props.begin(), extra_props.end());
  const std::vector<std::string> props(prop_set.begin(), prop_set.end());
  check_bounds(sig, b, props.size());
  const auto lambda = sig.lambda();
  const bool special = specialised(concrete, lambda, SimMethod::Auto);
  const std::size_t nc = model_size(concrete);
  if (!special && nc > 5) throw BoundError("generic simulation search is limited to 5 source states");

  // Propositions of each source state as a bitmask over `props`.
  std::vector<std::uint32_t> cprops(nc, 0);
  for (std::size_t i = 0; i < props.size(); ++i) {
    auto it = model_props(concrete).find(props[i]);
    if (it == model_props(concrete).end()) continue;
    for (std::size_t x = 0; x < nc; ++x)
      if ((it->second >> x) & 1) cprops[x] |= 1u << i;
  }
  FrameEvaluator ev({phi}, props);
  Relation rel(nc, 0);
  std::vector<Mask> carriers(std::size_t{1} << props.size(), 0);
  const auto* kc = special ? std::get_if<KripkeModel>(&concrete) : nullptr;
  bool box = false, diamond = false;
  for (const auto& m : lambda) (m.kind == ModKind::Box ? box : diamond) = true;
  for_each_frame(sig, b, [&](const ExplicitModel& d) {
    ev.set_frame(d);
    const std::size_t nd = model_size(d);
    std::optional<KripkeTargets> targets;
    if (kc) targets.emplace(std::get<KripkeModel>(d));
    for_each_valuation(nd, props.size(), [&](const Mask* atoms) {
      ++rep.models_checked;
      // Targets carrying all propositions of each proposition set.
      carriers[0] = full_mask(nd);
      for (std::uint32_t ps = 1; ps < (1u << props.size()); ++ps)
        carriers[ps] = carriers[ps & (ps - 1)] & atoms[std::countr_zero(ps)];
      for (std::size_t x = 0; x < nc; ++x) rel[x] = carriers[cprops[x]];
      if (targets)
        refine_kripke(*kc, *targets, box, diamond, rel);
      else
        refine(concrete, d, lambda, rel, special);
      const Mask sat = ev.eval(0, atoms);
      const std::size_t points = b.rooted ? 1 : nd;
      for (std::size_t y = 0; y < points; ++y) {
        ++rep.pairs_checked;
        bool s = (sat >> y) & 1;
        bool sim = (rel[0] >> y) & 1;
        if (s != sim && rep.violations.size() < 20)
          rep.violations.push_back("state s" + std::to_string(y) + " of " +
                                   describe(with_props(d, make_props(props, atoms))) +
                                   (s ? "satisfies the formula but does not simulate the root"
                                      : "simulates the root but refutes the formula"));
      }
      return true;
    });
    return true;
  });
  return rep;
}

WsiReport verify_wsi(const AbstractWsiModel& m, const Formula& phi, const Bounds& b,
                     const std::vector<std::string>& extra_props) {
  return verify_wsi(concretize(m), m.sig(), phi, b, extra_props);
}

Props tbox_gfp(const ExplicitModel& m, const TBox& t) {
  std::set<std::string> derived;
  for (const auto& d : t.defs) derived.insert(d.first);
  std::vector<Formula> bodies;
  for (const auto& d : t.defs) bodies.push_back(atoms_to_vars(d.second, derived));
  ExplicitValuation cur;
  for (const auto& d : t.defs) cur[d.first] = full_mask(model_size(m));
  for (;;) {
    ExplicitValuation next;
    for (std::size_t i = 0; i < t.defs.size(); ++i) next[t.defs[i].first] = sat_explicit(m, bodies[i], cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  Props out(model_props(m));
  for (const auto& [k, v] : cur) out[k] = v;
  return out;
}

OneStepBrute::OneStepBrute(const Signature& sig, std::size_t max_carrier) : sig_(sig), lambda_(sig.lambda()) {
  if (sig.functor() != Functor::Kripke && sig.functor() != Functor::Monotone)
    throw UnsupportedError("brute-force one-step semantics covers Kripke and neighbourhood models");
  if (max_carrier > 4) throw BoundError("one-step carriers are limited to 4 elements");
  const std::size_t nlits = lambda_.size() * kVars;
  table_.assign(lambda_.size(), std::vector<std::vector<bool>>(256, std::vector<bool>(std::size_t{1} << nlits, false)));

  std::vector<std::uint8_t> positive;
  for (const auto& p : all_positive()) positive.push_back(truth_table(p));
  const bool monotone = sig.functor() == Functor::Monotone;

  for (std::size_t s = 0; s <= max_carrier; ++s) {
    const Mask all = full_mask(s);
    // Transition elements: subsets of the carrier, or upward-closed families encoded over P(carrier).
    std::vector<std::uint64_t> elems;
    if (!monotone) {
      for (Mask t = sig.serial() ? 1 : 0; t <= all; ++t) {
        elems.push_back(t);
        if (t == all) break;
      }
    } else {
      const std::size_t subsets = std::size_t{1} << s;
      for (std::uint64_t fam = 0; fam < (std::uint64_t{1} << subsets); ++fam) {
        bool up = true;
        for (Mask a = 0; a < subsets && up; ++a)
          if ((fam >> a) & 1)
            for (Mask b = 0; b < subsets && up; ++b)
              if ((a & ~b) == 0 && !((fam >> b) & 1)) up = false;
        if (!up) continue;
        if (sig.serial() && (fam == 0 || (fam & 1))) continue;
        elems.push_back(fam);
      }
    }
    auto holds = [&](std::uint64_t t, const Modality& mod, Mask a) {
      if (!monotone) return mod.kind == ModKind::Box ? (t & ~a) == 0 : (t & a) != 0;
      if (mod.kind == ModKind::Box) return ((t >> a) & 1) != 0;
      return ((t >> (all & ~a)) & 1) == 0;
    };
    std::vector<std::size_t> lo(s, 0), hi(s, (std::size_t{1} << kVars) - 1);
    for (Odometer val(lo, hi); val.valid(); val.next()) {
      Mask ext[kVars] = {0, 0, 0};
      for (std::size_t x = 0; x < s; ++x)
        for (std::uint32_t v = 0; v < kVars; ++v)
          if ((val.digits()[x] >> v) & 1) ext[v] |= Mask{1} << x;
      for (auto t : elems) {
        ++models_;
        std::size_t lits = 0;
        for (std::size_t i = 0; i < lambda_.size(); ++i)
          for (std::uint32_t v = 0; v < kVars; ++v)
            if (holds(t, lambda_[i], ext[v])) lits |= std::size_t{1} << (i * kVars + v);
        for (std::size_t h = 0; h < lambda_.size(); ++h)
          for (auto tt : positive) {
            Mask notrho = 0;
            for (std::size_t x = 0; x < s; ++x)
              if (!((tt >> val.digits()[x]) & 1)) notrho |= Mask{1} << x;
            if (holds(t, dual(lambda_[h]), notrho)) table_[h][tt][lits] = true;
          }
      }
      if (s == 0) break;
    }
  }
  for (auto& per_heart : table_)
    for (auto& row : per_heart)
      for (std::size_t mask = row.size(); mask-- > 0;)
        if (row[mask])
          for (std::size_t bit = 1; bit <= mask; bit <<= 1)
            if (mask & bit) row[mask & ~bit] = true;
}

std::size_t OneStepBrute::literal_bit(const Literal& l) const {
  if (l.var >= kVars) throw BoundError("brute-force one-step oracle uses variables 0..2");
  for (std::size_t i = 0; i < lambda_.size(); ++i)
    if (lambda_[i] == l.mod) return i * kVars + l.var;
  throw SignatureError("modality " + to_string(l.mod) + " is not in " + sig_.name());
}

std::uint8_t OneStepBrute::truth_table(const PosProp& rho) {
  std::uint8_t tt = 0;
  for (std::uint32_t a = 0; a < (1u << kVars); ++a) {
    VarSet assignment;
    for (std::uint32_t v = 0; v < kVars; ++v)
      if ((a >> v) & 1) assignment.push_back(v);
    if (rho.satisfied_by(assignment)) tt |= static_cast<std::uint8_t>(1u << a);
  }
  return tt;
}

std::vector<PosProp> OneStepBrute::all_positive() {
  std::vector<PosProp> out;
  for (unsigned tt = 0; tt < 256; ++tt) {
    bool mono = true;
    for (unsigned a = 0; a < 8 && mono; ++a)
      for (unsigned b = 0; b < 8 && mono; ++b)
        if ((a & ~b) == 0 && ((tt >> a) & 1) && !((tt >> b) & 1)) mono = false;
    if (!mono) continue;
    std::vector<VarSet> clauses;
    for (unsigned a = 0; a < 8; ++a)
      if ((tt >> a) & 1) {
        VarSet c;
        for (std::uint32_t v = 0; v < kVars; ++v)
          if ((a >> v) & 1) c.push_back(v);
        clauses.push_back(c);
      }
    out.push_back(PosProp::from_clauses(std::move(clauses)));
  }
  return out;
}

bool OneStepBrute::consequence(const OneStepFormula& psi, const Modality& heart, const PosProp& rho) const {
  std::size_t lits = 0;
  for (const auto& l : psi.literals()) lits |= std::size_t{1} << literal_bit(l);
  std::size_t h = literal_bit({heart, 0}) / kVars;
  return !table_[h][truth_table(rho)][lits];
}

std::string describe(const ExplicitModel& m, std::optional<std::size_t> point) {
  std::ostringstream out;
  const std::size_t n = model_size(m);
  auto name = [&](std::size_t x) { return "s" + std::to_string(x); };
  auto set_str = [&](Mask a) {
    std::string s = "{";
    bool first = true;
    for (std::size_t x = 0; x < n; ++x)
      if ((a >> x) & 1) {
        s += (first ? "" : ",") + name(x);
        first = false;
      }
    return s + "}";
  };
  auto labels = [&](std::size_t x) {
    std::string s = "[";
    bool first = true;
    for (const auto& [p, ext] : model_props(m))
      if ((ext >> x) & 1) {
        s += (first ? "" : ",") + p;
        first = false;
      }
    return s + "]";
  };
  std::visit(overloaded{[&](const KripkeModel& k) {
                          out << "Kripke model, " << n << " state(s)" << (k.serial ? ", serial" : "") << "\n";
                          for (std::size_t x = 0; x < n; ++x)
                            out << (point == x ? " *" : "  ") << name(x) << " " << labels(x) << " -> "
                                << set_str(k.succ[x]) << "\n";
                        },
                        [&](const MonotoneModel& k) {
                          out << "neighbourhood model, " << n << " state(s)" << (k.serial ? ", serial" : "") << "\n";
                          for (std::size_t x = 0; x < n; ++x) {
                            out << (point == x ? " *" : "  ") << name(x) << " " << labels(x) << " minimal nbhds:";
                            for (Mask a : k.nbhd[x]) out << " " << set_str(a);
                            out << "\n";
                          }
                        },
                        [&](const Multigraph& g) {
                          out << "multigraph, " << n << " state(s)\n";
                          for (std::size_t x = 0; x < n; ++x) {
                            out << (point == x ? " *" : "  ") << name(x) << " " << labels(x) << " ->";
                            for (std::size_t y = 0; y < n; ++y)
                              if (g.mult[x][y])
                                out << " " << name(y) << "x"
                                    << (g.mult[x][y] == kInfinity ? std::string("inf") : std::to_string(g.mult[x][y]));
                            out << "\n";
                          }
                        },
                        [&](const GameFrame& g) {
                          out << "game frame, " << n << " state(s), " << g.agents << " agents\n";
                          for (std::size_t x = 0; x < n; ++x) {
                            out << (point == x ? " *" : "  ") << name(x) << " " << labels(x) << " actions";
                            for (auto a : g.local[x].actions) out << " " << a;
                            out << " outcomes";
                            for (auto o : g.local[x].outcome) out << " " << name(o);
                            out << "\n";
                          }
                        }},
             m);
  return out.str();
}

}  // namespace wsikit::oracle
