#pragma once

#include "wsikit/signature.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace wsikit {

/// Sorted, duplicate-free set of variable indices.
using VarSet = std::vector<std::uint32_t>;

VarSet make_varset(std::vector<std::uint32_t> vs);
bool is_subset(const VarSet& a, const VarSet& b);
VarSet set_union(const VarSet& a, const VarSet& b);
bool contains(const VarSet& s, std::uint32_t v);

/// Printer for variable indices; the default prints "v<i>".
using VarNamer = std::function<std::string(std::uint32_t)>;
std::string default_var_name(std::uint32_t v);
std::string varset_to_string(const VarSet& s, const VarNamer& name = default_var_name);

/// Modal literal heart(v).
struct Literal {
  Modality mod;
  std::uint32_t var = 0;
  auto operator<=>(const Literal&) const = default;
};

std::string literal_to_string(const Literal& l, const VarNamer& name = default_var_name);

/// Conjunction of modal literals over variable indices plus atomic
/// propositions (0-ary modalities). Literals are kept sorted and unique.
class OneStepFormula {
 public:
  OneStepFormula() = default;
  OneStepFormula(std::vector<Literal> lits, std::set<std::string> atoms = {});

  const std::vector<Literal>& literals() const { return lits_; }
  const std::set<std::string>& atoms() const { return atoms_; }
  bool empty() const { return lits_.empty() && atoms_.empty(); }

  void add(const Literal& l);
  void add_atom(const std::string& a) { atoms_.insert(a); }
  void merge(const OneStepFormula& other);

  /// Variables occurring in modal literals.
  VarSet vars() const;
  std::set<Modality> modalities() const;

  /// "p & <>v1 & []v2"; "true" when empty.
  std::string to_string(const VarNamer& name = default_var_name) const;

  auto operator<=>(const OneStepFormula&) const = default;

 private:
  std::vector<Literal> lits_;
  std::set<std::string> atoms_;
};

/// Positive propositional formula over variable indices, kept as a
/// minimal DNF: an antichain of clauses (each a conjunction of variables).
/// top() is the single empty clause; bot() has no clauses.
class PosProp {
 public:
  PosProp() = default;  // bot
  static PosProp top();
  static PosProp bot() { return {}; }
  static PosProp var(std::uint32_t v);
  static PosProp from_clauses(std::vector<VarSet> clauses);

  PosProp operator|(const PosProp& o) const;
  PosProp operator&(const PosProp& o) const;

  const std::vector<VarSet>& clauses() const { return clauses_; }
  bool is_top() const { return clauses_.size() == 1 && clauses_[0].empty(); }
  bool is_bot() const { return clauses_.empty(); }

  /// Truth under the assignment making exactly the variables of `a` true.
  bool satisfied_by(const VarSet& a) const;

  std::string to_string(const VarNamer& name = default_var_name) const;

  auto operator<=>(const PosProp&) const = default;

 private:
  std::vector<VarSet> clauses_;
};

}  // namespace wsikit
