#pragma once

#include "wsikit/formula.hpp"
#include "wsikit/normal_form.hpp"
#include "wsikit/onestep.hpp"
#include "wsikit/signature.hpp"
#include "wsikit/wsi_model.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace wsikit::oracle {

/// State sets of explicit models are bitmasks; models have at most 64 states.
using Mask = std::uint64_t;
using Props = std::map<std::string, Mask>;

constexpr std::uint32_t kInfinity = 0xffffffffu;

struct KripkeModel {
  std::size_t n = 0;
  std::vector<Mask> succ;
  Props props;
  bool serial = false;
};

/// Upward-closed neighbourhood families stored by their minimal sets.
struct MonotoneModel {
  std::size_t n = 0;
  std::vector<std::vector<Mask>> nbhd;
  Props props;
  bool serial = false;
};

/// Multiplicities in N u {infinity}; kInfinity saturates.
struct Multigraph {
  std::size_t n = 0;
  std::vector<std::vector<std::uint32_t>> mult;
  Props props;
};

struct GameFrame {
  struct Local {
    std::vector<unsigned> actions;     // per agent, at least 1
    std::vector<std::size_t> outcome;  // indexed by joint action, agent 1 varying fastest
  };
  std::size_t n = 0;
  unsigned agents = 0;
  std::vector<Local> local;
  Props props;
};

using ExplicitModel = std::variant<KripkeModel, MonotoneModel, Multigraph, GameFrame>;

std::size_t model_size(const ExplicitModel& m);
const Props& model_props(const ExplicitModel& m);
Functor model_functor(const ExplicitModel& m);

/// Satisfaction of one modal operator at a state, given the argument extension.
bool holds_modal(const ExplicitModel& m, std::size_t state, const Modality& mod, Mask arg);

using ExplicitValuation = std::map<std::string, Mask>;

/// Extension of a positive formula; nu/mu by iteration.
Mask sat_explicit(const ExplicitModel& m, const Formula& f, const ExplicitValuation& v = {});
bool sat_explicit(const ExplicitModel& m, std::size_t state, const Formula& f, const ExplicitValuation& v = {});

/// Relation as one mask of related target states per source state.
using Relation = std::vector<Mask>;

enum class SimMethod : std::uint8_t { Auto, Generic };

/// Greatest Lambda-simulation from c to d. Atomic propositions listed in
/// `props` are part of Lambda. The generic method ranges over all argument
/// sets and is limited to 5 source states.
Relation greatest_simulation(const ExplicitModel& c, const ExplicitModel& d, const std::vector<Modality>& lambda,
                             const std::set<std::string>& props, SimMethod method = SimMethod::Auto);

/// Checks the simulation condition for every pair of `rel`.
bool is_simulation(const ExplicitModel& c, const ExplicitModel& d, const Relation& rel,
                   const std::vector<Modality>& lambda, const std::set<std::string>& props);

struct Bounds {
  std::size_t max_states = 3;
  std::size_t max_degree = 3;   // multigraph multiplicities, game actions
  std::size_t min_states = 1;
  /// Only models generated by state 0, one frame per isomorphism class
  /// fixing 0 (all valuations are still visited). Ignored for game frames.
  bool rooted = false;
};

/// Envelope maxima for a signature.
Bounds envelope(const Signature& sig);

/// Calls `visit` on every model of the signature's class within bounds over
/// the given propositions, in a fixed order; stops when `visit` returns false.
/// Refuses bounds outside the envelope with BoundError.
void enumerate_models(const Signature& sig, const Bounds& b, const std::vector<std::string>& props,
                      const std::function<bool(const ExplicitModel&)>& visit);

struct CounterModel {
  ExplicitModel model;
  std::size_t state = 0;
};

/// First enumerated pointed model satisfying phi and refuting psi.
std::optional<CounterModel> find_counter_model(const Formula& phi, const Formula& psi, const Signature& sig,
                                               const Bounds& b);

/// Explicit model on the states of an abstract wsi model (k-diamond, k-box, kd, ms).
ExplicitModel concretize(const AbstractWsiModel& m);

struct WsiReport {
  bool root_satisfies = false;
  std::size_t models_checked = 0;
  std::size_t pairs_checked = 0;
  std::vector<std::string> violations;
  bool clean() const { return root_satisfies && violations.empty(); }
};

/// Soundness at the root and, for every enumerated pointed model, agreement
/// of satisfaction with simulation of the root.
WsiReport verify_wsi(const AbstractWsiModel& m, const Formula& phi, const Bounds& b,
                     const std::vector<std::string>& extra_props = {});
/// Same, against an already concretized (possibly modified) model with root 0.
WsiReport verify_wsi(const ExplicitModel& concrete, const Signature& sig, const Formula& phi, const Bounds& b,
                     const std::vector<std::string>& extra_props = {});

/// Extensions of the derived names of a TBox on an explicit model: the
/// greatest fixpoint of the definition map, computed by iteration.
Props tbox_gfp(const ExplicitModel& m, const TBox& t);

/// Brute-force one-step semantics over carriers up to a size: decides
/// psi |= heart(rho) for psi over variables {0,1,2} with modalities of Lambda.
class OneStepBrute {
 public:
  OneStepBrute(const Signature& sig, std::size_t max_carrier);

  bool consequence(const OneStepFormula& psi, const Modality& heart, const PosProp& rho) const;
  /// Same answer table as another oracle (for carrier-size saturation checks).
  bool same_answers(const OneStepBrute& other) const { return table_ == other.table_; }
  std::size_t models_seen() const { return models_; }

  static constexpr std::uint32_t kVars = 3;
  /// Monotone truth tables over kVars variables, as PosProps.
  static std::vector<PosProp> all_positive();

 private:
  std::size_t literal_bit(const Literal& l) const;
  static std::uint8_t truth_table(const PosProp& rho);

  Signature sig_;
  std::vector<Modality> lambda_;
  // table_[heart][truth table] = set of satisfiable literal masks (downward closed)
  std::vector<std::vector<std::vector<bool>>> table_;
  std::size_t models_ = 0;
};

/// Text rendering used by the CLI for counter-models.
std::string describe(const ExplicitModel& m, std::optional<std::size_t> point = std::nullopt);

}  // namespace wsikit::oracle
