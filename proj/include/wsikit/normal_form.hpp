#pragma once

#include "wsikit/formula.hpp"
#include "wsikit/onestep.hpp"
#include "wsikit/signature.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wsikit {

/// Flat system x_i = body_i where every body is a one-step formula over the
/// system's own variables. x_0 is the root.
class EquationSystem {
 public:
  EquationSystem() = default;
  explicit EquationSystem(std::vector<OneStepFormula> bodies) : bodies_(std::move(bodies)) {}

  std::size_t size() const { return bodies_.size(); }
  const OneStepFormula& body(std::size_t i) const { return bodies_.at(i); }
  const std::vector<OneStepFormula>& bodies() const { return bodies_; }

  std::string var_name(std::uint32_t i) const { return "x" + std::to_string(i); }
  VarNamer namer() const {
    return [this](std::uint32_t i) { return var_name(i); };
  }

  /// True when no variable reaches itself through modal literals.
  bool acyclic() const;
  std::set<Modality> modalities() const;

  /// "x0 = <>x1\nx1 = p & <>x2\nx2 = q"; an empty body prints as "true".
  std::string to_string() const;

 private:
  std::vector<OneStepFormula> bodies_;
};

struct NormalFormOptions {
  /// Reuse one variable for syntactically equal modal arguments.
  bool share = true;
};

/// Shallow normal form of a conjunctive nu-sentence. Modal arguments get
/// their own variables, nested nu blocks are merged into the system, and
/// unguarded variable occurrences are inlined. Variables are numbered in
/// discovery order.
EquationSystem shallow_normal_form(const Formula& f, const NormalFormOptions& opts = {});

/// The nu-sentence nu(x0; x1..xn).(body0; ...) denoted by the system.
Formula to_formula(const EquationSystem& sys);

/// Acyclic definitions a == phi with greatest fixpoint semantics.
struct TBox {
  std::vector<std::pair<std::string, Formula>> defs;

  bool defines(const std::string& a) const;
  const Formula* definition(const std::string& a) const;
  std::vector<std::string> derived() const;
};

/// One `ident == phi` per line, `#` starts a comment. Right-hand sides must
/// be conjunctive; a name may be defined once.
TBox parse_tbox(std::string_view text, const std::optional<Signature>& sig = std::nullopt);

/// Encodes lhs and rhs relative to the TBox as nu(z; a1..an).(lhs; phi1..phin)
/// and nu(z; a1..an).(rhs; phi1..phin). Propositions without a definition are
/// primitive.
std::pair<Formula, Formula> tbox_to_nu(const TBox& t, const Formula& lhs, const Formula& rhs);

}  // namespace wsikit
