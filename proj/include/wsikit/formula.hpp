#pragma once

#include "wsikit/signature.hpp"

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace wsikit {

enum class NodeKind : std::uint8_t { Top, Bot, And, Or, Modal, Var, Nu, Mu, Atom };

class Formula;

/// Immutable AST node. Children layout per kind:
///   And/Or: {lhs, rhs}; Modal: {arg};
///   Nu/Mu: {head body, aux bodies...} with `binders` = {head, aux...}.
struct FormulaNode {
  NodeKind kind;
  std::string name;  // Atom / Var
  Modality modality;
  std::vector<Formula> children;
  std::vector<std::string> binders;
};

/// Positive modal fixpoint formula. A cheap handle onto a shared immutable node.
class Formula {
 public:
  Formula();  // Top

  static Formula top();
  static Formula bot();
  static Formula atom(std::string name);
  static Formula var(std::string name);
  static Formula conj(Formula l, Formula r);
  static Formula disj(Formula l, Formula r);
  static Formula modal(Modality m, Formula arg);
  static Formula nu(std::vector<std::string> binders, std::vector<Formula> bodies);
  static Formula mu(std::vector<std::string> binders, std::vector<Formula> bodies);

  /// Conjunction of a list; Top when empty.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula disj_all(const std::vector<Formula>& fs);

  NodeKind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const Modality& modality() const { return node_->modality; }
  const std::vector<Formula>& children() const { return node_->children; }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  const std::vector<std::string>& binders() const { return node_->binders; }

  bool is_fixpoint() const { return kind() == NodeKind::Nu || kind() == NodeKind::Mu; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

  std::size_t node_count() const;
  std::size_t modal_depth() const;
  std::set<std::string> atoms() const;
  std::set<std::string> free_vars() const;
  std::set<Modality> modalities() const;
  bool is_sentence() const { return free_vars().empty(); }

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> n) : node_(std::move(n)) {}
  static Formula make(FormulaNode n);

  std::shared_ptr<const FormulaNode> node_;
};

/// Fragment check result; `violations` holds node paths such as "root.0.1: Or".
struct Validation {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Conjunctive fragment: no Bot, Or, Mu.
Validation validate_conjunctive(const Formula& f);

/// Every modality in f belongs to the signature (coalitions in range).
void check_signature(const Formula& f, const Signature& sig);

/// Substitute Var(x) for Atom(x) for every name in `names` (free atoms only).
Formula atoms_to_vars(const Formula& f, const std::set<std::string>& names);

}  // namespace wsikit
