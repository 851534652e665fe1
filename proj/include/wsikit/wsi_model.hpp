#pragma once

#include "wsikit/formula.hpp"
#include "wsikit/normal_form.hpp"
#include "wsikit/onestep.hpp"
#include "wsikit/onestep_wsi.hpp"
#include "wsikit/signature.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wsikit {

/// A state A (a set of equation variables) of the abstract model together
/// with its one-step data.
struct WsiState {
  VarSet vars;
  OneStepFormula phi;               // conjunction of the bodies of A
  std::vector<VarSet> onestep;      // states of the one-step wsi model for phi
  std::vector<std::size_t> succ;    // index of each one-step state in the model
};

/// Abstract wsi model: states are subsets of the equation variables and the
/// transition structure is kept as stored one-step data.
class AbstractWsiModel {
 public:
  AbstractWsiModel(Signature sig, EquationSystem sys) : sig_(std::move(sig)), sys_(std::move(sys)) {}

  const Signature& sig() const { return sig_; }
  const EquationSystem& system() const { return sys_; }
  const std::vector<WsiState>& states() const { return states_; }
  const WsiState& state(std::size_t i) const { return states_.at(i); }
  std::size_t size() const { return states_.size(); }
  static constexpr std::size_t root() { return 0; }

  std::optional<std::size_t> find(const VarSet& vars) const;
  std::size_t add_state(WsiState s);
  WsiState& mutable_state(std::size_t i) { return states_.at(i); }

 private:
  Signature sig_;
  EquationSystem sys_;
  std::vector<WsiState> states_;
  std::map<VarSet, std::size_t> index_;
};

struct BuildOptions {
  bool special = false;  // closed-form one-step constructions where available
  OneStepOptions onestep;
  NormalFormOptions normal_form;
};

/// Greatest fixpoint construction: saturate breadth-first from {x0}.
AbstractWsiModel build_wsi(const Formula& f, const Signature& sig, const BuildOptions& opts = {});
AbstractWsiModel build_wsi(const EquationSystem& sys, const Signature& sig, const BuildOptions& opts = {});

/// Merges equation variables that denote the same formula (coarsest
/// congruence on the equation graph) and rebuilds the model.
AbstractWsiModel collapse_dag(const AbstractWsiModel& m, const BuildOptions& opts = {});

struct SizeReport {
  std::size_t states = 0;
  std::size_t variables = 0;
  std::size_t max_state_size = 0;           // over all one-step states and model states
  std::optional<std::size_t> known_k;       // boundedness guaranteed for the signature
  bool polynomial_certificate = false;
  std::optional<std::size_t> size_bound;    // asserted bound when certified
  bool lasso = false;                       // every state has exactly one successor

  std::size_t bound_k() const { return known_k.value_or(max_state_size); }
};

/// Size statistics; when a certificate applies the bound is checked and a
/// violation throws std::logic_error.
SizeReport size_report(const AbstractWsiModel& m);

/// sum_{j<=k} C(n, j)
std::size_t subsets_up_to(std::size_t n, std::size_t k);

}  // namespace wsikit
