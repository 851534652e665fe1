#include "wsikit/rules.hpp"

#include "wsikit/error.hpp"

#include <algorithm>
#include <functional>

namespace wsikit {

namespace {

constexpr unsigned kUnbounded = std::numeric_limits<unsigned>::max();

bool is_kind(const Literal& l, ModKind k) { return l.mod.kind == k; }

}  // namespace

std::string RuleSchema::name() const {
  std::string base;
  switch (kind) {
    case SchemaKind::K: base = "K"; break;
    case SchemaKind::D: base = "D"; break;
    case SchemaKind::C: return "C_nm";
    case SchemaKind::CPrime: return "C'_n";
  }
  return base + "_" + (fixed() ? std::to_string(min_n) : std::string("n"));
}

std::vector<RuleSchema> rule_set(const Signature& sig) {
  switch (sig.logic()) {
    case Logic::KDiamond:
    case Logic::KBox:
    case Logic::K: return {{SchemaKind::K, 0, kUnbounded}};
    case Logic::KD: return {{SchemaKind::K, 0, kUnbounded}, {SchemaKind::D, 0, kUnbounded}};
    case Logic::M: return {{SchemaKind::K, 1, 1}};
    case Logic::Ms: return {{SchemaKind::K, 1, 1}, {SchemaKind::K, 0, 0}, {SchemaKind::D, 1, 1}};
    case Logic::CL: return {{SchemaKind::C, 0, kUnbounded}, {SchemaKind::CPrime, 1, kUnbounded}};
    case Logic::Graded: break;
  }
  throw UnsupportedError("no tableau rule set is shipped for " + sig.name());
}

std::string RuleMatch::rule_name() const {
  switch (kind) {
    case SchemaKind::K: return "K_" + std::to_string(n);
    case SchemaKind::D: return "D_" + std::to_string(n);
    case SchemaKind::C: return "C_" + std::to_string(n) + std::to_string(m);
    case SchemaKind::CPrime: return "C'_" + std::to_string(n);
  }
  return "?";
}

std::string match_to_string(const RuleMatch& m, const std::vector<Literal>& lits, const VarNamer& name) {
  std::string out = m.rule_name() + " via {";
  for (std::size_t i = 0; i < m.slots.size(); ++i) {
    if (i) out += ", ";
    out += m.slots[i].first + "↦" + name(lits[m.slots[i].second].var);
  }
  return out + "}";
}

namespace {

using Idx = std::size_t;
using Conflict = std::function<bool(Idx, Idx)>;

// Enumerates independent sets of `cands` under `conflict`, all containing
// `forced`. In maximal mode only sets that cannot be extended within
// `max_k` are produced.
class SetSearch {
 public:
  SetSearch(std::vector<Idx> cands, Conflict conflict, MatchMode mode, std::size_t max_k)
      : cands_(std::move(cands)), conflict_(std::move(conflict)), mode_(mode), max_k_(max_k) {}

  void run(const std::vector<Idx>& forced, const std::function<void(const std::vector<Idx>&)>& emit) {
    for (std::size_t i = 0; i < forced.size(); ++i)
      for (std::size_t j = i + 1; j < forced.size(); ++j)
        if (conflict_(forced[i], forced[j])) return;
    if (forced.size() > max_k_) return;
    chosen_ = forced;
    std::vector<Idx> rest;
    for (Idx c : cands_) {
      if (std::find(forced.begin(), forced.end(), c) != forced.end()) continue;
      if (compatible(c)) rest.push_back(c);
    }
    cands_ = std::move(rest);
    isolated_.assign(cands_.size(), true);
    for (std::size_t i = 0; i < cands_.size(); ++i)
      for (std::size_t j = 0; j < cands_.size(); ++j)
        if (i != j && conflict_(cands_[i], cands_[j])) isolated_[i] = false;
    taken_.assign(cands_.size(), false);
    emit_ = &emit;
    step(0);
  }

 private:
  bool compatible(Idx c) const {
    return std::none_of(chosen_.begin(), chosen_.end(), [&](Idx x) { return conflict_(x, c); });
  }

  void step(std::size_t pos) {
    if (pos == cands_.size()) {
      if (mode_ == MatchMode::Maximal && chosen_.size() < max_k_) {
        for (std::size_t i = 0; i < cands_.size(); ++i)
          if (!taken_[i] && compatible(cands_[i])) return;
      }
      (*emit_)(chosen_);
      return;
    }
    if (chosen_.size() < max_k_ && compatible(cands_[pos])) {
      chosen_.push_back(cands_[pos]);
      taken_[pos] = true;
      step(pos + 1);
      taken_[pos] = false;
      chosen_.pop_back();
      // A conflict-free candidate belongs to every maximal set when the size cap cannot bind.
      if (mode_ == MatchMode::Maximal && isolated_[pos] && max_k_ >= chosen_.size() + cands_.size()) return;
    }
    step(pos + 1);
  }

  std::vector<Idx> cands_;
  Conflict conflict_;
  MatchMode mode_;
  std::size_t max_k_;
  std::vector<Idx> chosen_;
  std::vector<bool> taken_;
  std::vector<bool> isolated_;
  const std::function<void(const std::vector<Idx>&)>* emit_ = nullptr;
};

std::size_t cap_sub(std::size_t a, std::size_t b) { return a > b ? a - b : 0; }

class Matcher {
 public:
  Matcher(const std::vector<Literal>& lits, const Signature& sig, const MatchOptions& opts)
      : lits_(lits), sig_(sig), opts_(opts) {}

  std::vector<RuleMatch> run() {
    std::vector<RuleMatch> out;
    const auto schemas = rule_set(sig_);
    for (std::size_t s = 0; s < schemas.size(); ++s) {
      found_.clear();
      schema_index_ = s;
      schema_ = schemas[s];
      switch (schema_.kind) {
        case SchemaKind::K: match_k(); break;
        case SchemaKind::D: match_d(); break;
        case SchemaKind::C: match_c(); break;
        case SchemaKind::CPrime: match_cprime(); break;
      }
      if (opts_.mode == MatchMode::Maximal) keep_maximal();
      out.insert(out.end(), found_.begin(), found_.end());
    }
    return out;
  }

 private:
  bool same_var(Idx a, Idx b) const { return opts_.injective && lits_[a].var == lits_[b].var; }

  bool coalition_clash(Idx a, Idx b) const {
    const auto& x = lits_[a].mod;
    const auto& y = lits_[b].mod;
    return x.kind == ModKind::CoalBox && y.kind == ModKind::CoalBox && (x.param & y.param) != 0;
  }

  // Runs the slot search for one anchor (or none) and records the matches.
  void search(std::optional<Idx> anchor, std::vector<Idx> cands, unsigned min_k, std::size_t max_k,
              const std::function<RuleMatch(const std::vector<Idx>&)>& build) {
    std::vector<Idx> forced;
    if (opts_.required && anchor != opts_.required) {
      if (std::find(cands.begin(), cands.end(), *opts_.required) == cands.end()) return;
      forced.push_back(*opts_.required);
    }
    const std::size_t budget = cap_sub(opts_.max_size, anchor ? 1 : 0);
    if (anchor && opts_.max_size == 0) return;
    max_k = std::min(max_k, budget);
    SetSearch ss(std::move(cands), [this](Idx a, Idx b) { return same_var(a, b) || coalition_clash(a, b); },
                 opts_.mode, max_k);
    ss.run(forced, [&](const std::vector<Idx>& chosen) {
      if (chosen.size() < min_k) return;
      found_.push_back(build(chosen));
    });
  }

  RuleMatch finish(RuleMatch m) const {
    m.schema = schema_index_;
    m.kind = schema_.kind;
    std::vector<std::uint32_t> vars;
    for (const auto& [_, idx] : m.slots) {
      m.premise.push_back(idx);
      vars.push_back(lits_[idx].var);
    }
    std::sort(m.premise.begin(), m.premise.end());
    m.conclusion = make_varset(std::move(vars));
    return m;
  }

  // Boxes chosen in slot order, sorted by literal index for a stable trace.
  static std::vector<Idx> sorted(std::vector<Idx> v) {
    std::sort(v.begin(), v.end());
    return v;
  }

  void match_k() {
    for (Idx b = 0; b < lits_.size(); ++b) {
      if (!is_kind(lits_[b], ModKind::Diamond)) continue;
      std::vector<Idx> cands;
      for (Idx j = 0; j < lits_.size(); ++j)
        if (is_kind(lits_[j], ModKind::Box) && lits_[j].mod.label == lits_[b].mod.label && !same_var(j, b))
          cands.push_back(j);
      search(b, cands, schema_.min_n, schema_.max_n, [&](const std::vector<Idx>& chosen) {
        RuleMatch m;
        unsigned i = 0;
        for (Idx a : sorted(chosen)) m.slots.emplace_back("a" + std::to_string(++i), a);
        m.slots.emplace_back("b", b);
        m.n = i;
        return finish(std::move(m));
      });
    }
  }

  void match_d() {
    std::set<std::uint32_t> labels;
    for (const auto& l : lits_)
      if (l.mod.kind == ModKind::Box) labels.insert(l.mod.label);
    if (schema_.min_n == 0 && !opts_.required) found_.push_back(finish(RuleMatch{}));
    for (auto label : labels) {
      std::vector<Idx> cands;
      for (Idx j = 0; j < lits_.size(); ++j)
        if (is_kind(lits_[j], ModKind::Box) && lits_[j].mod.label == label) cands.push_back(j);
      search(std::nullopt, cands, std::max(schema_.min_n, 1u), schema_.max_n, [&](const std::vector<Idx>& chosen) {
        RuleMatch m;
        unsigned i = 0;
        for (Idx a : sorted(chosen)) m.slots.emplace_back("a" + std::to_string(++i), a);
        m.n = i;
        return finish(std::move(m));
      });
    }
  }

  void match_c() {
    const std::uint32_t grand = grand_coalition(sig_.agents());
    for (Idx b = 0; b < lits_.size(); ++b) {
      if (!is_kind(lits_[b], ModKind::CoalDiamond)) continue;
      const std::uint32_t d = lits_[b].mod.param;
      std::vector<Idx> cands;
      for (Idx j = 0; j < lits_.size(); ++j) {
        if (j == b || same_var(j, b)) continue;
        const auto& mod = lits_[j].mod;
        if (mod.kind == ModKind::CoalBox && (mod.param & ~d) == 0) cands.push_back(j);
        if (mod.kind == ModKind::CoalDiamond && mod.param == grand) cands.push_back(j);
      }
      search(b, cands, 0, kUnbounded, [&](const std::vector<Idx>& chosen) {
        RuleMatch m;
        unsigned i = 0;
        unsigned k = 0;
        auto ordered = sorted(chosen);
        for (Idx a : ordered)
          if (lits_[a].mod.kind == ModKind::CoalBox) m.slots.emplace_back("a" + std::to_string(++i), a);
        m.slots.emplace_back("b", b);
        for (Idx c : ordered)
          if (lits_[c].mod.kind == ModKind::CoalDiamond) m.slots.emplace_back("c" + std::to_string(++k), c);
        m.n = i;
        m.m = k;
        return finish(std::move(m));
      });
    }
  }

  void match_cprime() {
    std::vector<Idx> cands;
    for (Idx j = 0; j < lits_.size(); ++j)
      if (is_kind(lits_[j], ModKind::CoalBox)) cands.push_back(j);
    search(std::nullopt, cands, std::max(schema_.min_n, 1u), schema_.max_n, [&](const std::vector<Idx>& chosen) {
      RuleMatch m;
      unsigned i = 0;
      for (Idx a : sorted(chosen)) m.slots.emplace_back("a" + std::to_string(++i), a);
      m.n = i;
      return finish(std::move(m));
    });
  }

  // Drops matches whose premise image is strictly contained in another one
  // of the same schema, and duplicates.
  void keep_maximal() {
    std::vector<RuleMatch> kept;
    for (std::size_t i = 0; i < found_.size(); ++i) {
      const auto& p = found_[i].premise;
      bool drop = false;
      for (std::size_t j = 0; j < found_.size() && !drop; ++j) {
        if (i == j) continue;
        const auto& q = found_[j].premise;
        if (!std::includes(q.begin(), q.end(), p.begin(), p.end())) continue;
        drop = q.size() > p.size() || j < i;
      }
      if (!drop) kept.push_back(found_[i]);
    }
    found_ = std::move(kept);
  }

  const std::vector<Literal>& lits_;
  const Signature& sig_;
  const MatchOptions& opts_;
  std::vector<RuleMatch> found_;
  std::size_t schema_index_ = 0;
  RuleSchema schema_{SchemaKind::K};
};

}  // namespace

std::vector<RuleMatch> match_rules(const std::vector<Literal>& lits, const Signature& sig, const MatchOptions& opts) {
  return Matcher(lits, sig, opts).run();
}

bool one_step_consequence(const OneStepFormula& psi, const Modality& heart, const PosProp& rho, const Signature& sig,
                          bool injective) {
  if (!sig.contains(heart)) throw SignatureError("modality " + to_string(heart) + " is not in " + sig.name());
  if (!sig.has_rules()) throw UnsupportedError("one-step consequence needs a rule set; " + sig.name() + " has none");
  std::vector<Literal> lits = psi.literals();
  std::uint32_t fresh = 0;
  for (const auto& l : lits) fresh = std::max(fresh, l.var + 1);
  lits.push_back({dual(heart), fresh});
  MatchOptions opts;
  opts.mode = MatchMode::Maximal;
  opts.injective = injective;
  opts.required = lits.size() - 1;
  for (const auto& m : match_rules(lits, sig, opts)) {
    VarSet a = m.conclusion;
    a.erase(std::remove(a.begin(), a.end(), fresh), a.end());
    if (rho.satisfied_by(a)) return true;
  }
  return false;
}

namespace {

struct Shape {
  std::vector<Literal> lits;
  std::vector<std::string> names;  // rule variable name per var index
};

bool is_instance(const std::vector<Literal>& prem, const Signature& sig) {
  if (prem.empty()) {
    // Empty premise: only D_0 qualifies.
    for (const auto& s : rule_set(sig))
      if (s.kind == SchemaKind::D && s.min_n == 0) return true;
    return false;
  }
  MatchOptions opts;
  opts.max_size = prem.size();
  for (const auto& m : match_rules(prem, sig, opts))
    if (m.premise.size() == prem.size()) return true;
  return false;
}

// Instance name of a premise shape in the widest shipped family of the functor.
std::string shape_name(const std::vector<Literal>& prem, const Signature& sig) {
  const Signature family = sig.functor() == Functor::Game ? sig : Signature::kd();
  if (prem.empty()) return "D_0";
  MatchOptions opts;
  opts.max_size = prem.size();
  for (const auto& m : match_rules(prem, family, opts))
    if (m.premise.size() == prem.size()) return m.rule_name();
  return "unnamed rule";
}

std::string render(const std::vector<Literal>& prem, const std::vector<std::string>& names) {
  VarNamer nm = [&](std::uint32_t v) { return names.at(v); };
  std::string lhs;
  std::string rhs;
  for (std::size_t i = 0; i < prem.size(); ++i) {
    if (i) {
      lhs += ", ";
      rhs += ", ";
    }
    lhs += literal_to_string(prem[i], nm);
    rhs += names.at(prem[i].var);
  }
  return (lhs.empty() ? "(empty)" : lhs) + " / " + (rhs.empty() ? "(empty)" : rhs);
}

// Non-decreasing sequences of pairwise disjoint coalitions drawn from the subsets of `within`.
void disjoint_sequences(std::uint32_t within, std::size_t max_len, std::vector<std::uint32_t>& cur,
                        std::uint32_t used, std::uint32_t from,
                        const std::function<void(const std::vector<std::uint32_t>&)>& cb) {
  cb(cur);
  if (cur.size() == max_len) return;
  for (std::uint32_t c = from; c <= within; ++c) {
    if ((c & ~within) != 0 || (c & used) != 0) continue;
    cur.push_back(c);
    disjoint_sequences(within, max_len, cur, used | c, c, cb);
    cur.pop_back();
  }
}

std::vector<Shape> rule_shapes(const Signature& sig, std::size_t bound) {
  std::vector<Shape> out;
  for (const auto& s : rule_set(sig)) {
    switch (s.kind) {
      case SchemaKind::K:
        for (std::size_t n = s.min_n; n <= s.max_n && n + 1 <= bound; ++n) {
          Shape sh;
          for (std::uint32_t i = 0; i < n; ++i) {
            sh.lits.push_back({Modality::box(), i});
            sh.names.push_back("a" + std::to_string(i + 1));
          }
          sh.lits.push_back({Modality::diamond(), static_cast<std::uint32_t>(n)});
          sh.names.push_back("b");
          out.push_back(sh);
        }
        break;
      case SchemaKind::D:
        for (std::size_t n = s.min_n; n <= s.max_n && n <= bound; ++n) {
          Shape sh;
          for (std::uint32_t i = 0; i < n; ++i) {
            sh.lits.push_back({Modality::box(), i});
            sh.names.push_back("a" + std::to_string(i + 1));
          }
          out.push_back(sh);
        }
        break;
      case SchemaKind::C: {
        const std::uint32_t grand = grand_coalition(sig.agents());
        for (std::uint32_t d = 0; d <= grand; ++d) {
          std::vector<std::uint32_t> cur;
          disjoint_sequences(d, bound > 0 ? bound - 1 : 0, cur, 0, 0, [&](const std::vector<std::uint32_t>& cs) {
            for (std::size_t m = 0; cs.size() + 1 + m <= bound; ++m) {
              Shape sh;
              std::uint32_t v = 0;
              for (auto c : cs) {
                sh.lits.push_back({Modality::coal_box(c), v++});
                sh.names.push_back("a" + std::to_string(v));
              }
              sh.lits.push_back({Modality::coal_diamond(d), v++});
              sh.names.push_back("b");
              for (std::size_t j = 0; j < m; ++j) {
                sh.lits.push_back({Modality::coal_diamond(grand), v++});
                sh.names.push_back("c" + std::to_string(j + 1));
              }
              out.push_back(sh);
            }
          });
        }
        break;
      }
      case SchemaKind::CPrime: {
        std::vector<std::uint32_t> cur;
        disjoint_sequences(grand_coalition(sig.agents()), bound, cur, 0, 0,
                           [&](const std::vector<std::uint32_t>& cs) {
                             if (cs.size() < std::max<std::size_t>(s.min_n, 1)) return;
                             Shape sh;
                             std::uint32_t v = 0;
                             for (auto c : cs) {
                               sh.lits.push_back({Modality::coal_box(c), v++});
                               sh.names.push_back("a" + std::to_string(v));
                             }
                             out.push_back(sh);
                           });
        break;
      }
    }
  }
  return out;
}

}  // namespace

ConvexityReport check_convexity_preservation(const Signature& sig, std::size_t bound) {
  ConvexityReport rep;
  const bool deletion = sig.self_dual_closed();
  for (const auto& sh : rule_shapes(sig, bound)) {
    ++rep.rules_checked;
    const std::size_t nv = sh.lits.size();
    const std::string rule = shape_name(sh.lits, sig) + ": " + render(sh.lits, sh.names);
    if (deletion) {
      for (std::uint64_t keep = 1; keep + 1 < (std::uint64_t{1} << nv); ++keep) {
        std::vector<Literal> sub;
        std::string removed;
        for (std::size_t i = 0; i < nv; ++i) {
          if (keep & (std::uint64_t{1} << i)) {
            sub.push_back(sh.lits[i]);
          } else {
            removed += (removed.empty() ? "" : ", ") + sh.names[sh.lits[i].var];
          }
        }
        if (!is_instance(sub, sig)) {
          rep.ok = false;
          rep.rule = rule;
          rep.detail = "deleting " + removed + " yields " + shape_name(sub, sig) + ": " + render(sub, sh.names) +
                       ", which is not in the rule set";
          return rep;
        }
      }
      continue;
    }
    for (std::uint64_t split = 0; split < (std::uint64_t{1} << nv); ++split) {
      std::vector<Literal> g1;
      std::vector<Literal> g2;
      bool valid = true;
      for (std::size_t i = 0; i < nv && valid; ++i) {
        const auto& l = sh.lits[i];
        if (split & (std::uint64_t{1} << i)) {
          valid = sig.contains(dual(l.mod));
          g2.push_back(l);
        } else {
          valid = sig.contains(l.mod);
          g1.push_back(l);
        }
      }
      if (!valid) continue;
      for (const auto& l : g2) {
        auto sub = g1;
        sub.push_back(l);
        if (!is_instance(sub, sig)) {
          rep.ok = false;
          rep.rule = rule;
          rep.detail = "splitting off " + literal_to_string(l, [&](std::uint32_t v) { return sh.names[v]; }) +
                       " requires " + render(sub, sh.names) + ", which is not in the rule set";
          return rep;
        }
      }
    }
  }
  return rep;
}

}  // namespace wsikit
