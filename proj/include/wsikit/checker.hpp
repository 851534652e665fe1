#pragma once

#include "wsikit/formula.hpp"
#include "wsikit/normal_form.hpp"
#include "wsikit/onestep.hpp"
#include "wsikit/signature.hpp"
#include "wsikit/wsi_model.hpp"

#include <boost/dynamic_bitset.hpp>

#include <map>
#include <optional>
#include <string>
#include <tuple>

namespace wsikit {

using StateSet = boost::dynamic_bitset<>;
using Valuation = std::map<std::string, StateSet>;

struct CheckOptions {
#ifdef NDEBUG
  bool assert_upward_closed = false;
#else
  bool assert_upward_closed = true;
#endif
};

/// Evaluates positive formulas (nu and mu allowed) over an abstract wsi
/// model. One-step consequence answers are memoised per checker.
class ModelChecker {
 public:
  explicit ModelChecker(const AbstractWsiModel& m, CheckOptions opts = {}) : m_(m), opts_(opts) {}

  StateSet extension(const Formula& psi, const Valuation& v = {});
  bool holds(std::size_t state, const Formula& psi, const Valuation& v = {});

  std::size_t consequence_calls() const { return calls_; }
  std::size_t cache_hits() const { return hits_; }
  std::size_t fixpoint_rounds() const { return rounds_; }

 private:
  StateSet modal(const Modality& mod, const StateSet& arg);
  void check_upward(const StateSet& e) const;

  const AbstractWsiModel& m_;
  CheckOptions opts_;
  std::map<std::tuple<std::size_t, Modality, PosProp>, bool> memo_;
  std::size_t calls_ = 0;
  std::size_t hits_ = 0;
  std::size_t rounds_ = 0;
};

bool model_check(const AbstractWsiModel& m, std::size_t state, const Formula& psi, const Valuation& v = {});

/// Signature actually used for phi |= psi. Under k and m, whose full
/// similarity type does not preserve convexity, it is cut down to the
/// operators occurring in the two formulas.
Signature effective_signature(const Formula& phi, const Formula& psi, const Signature& sig);

struct Verdict {
  bool result = false;
  Signature sig = Signature::kd();  // effective signature
  bool mu_query = false;            // query uses mu
  std::optional<AbstractWsiModel> model;
};

/// Decides phi |= psi: phi must be a conjunctive nu-sentence, psi a
/// positive sentence.
Verdict decide_subsumption(const Formula& phi, const Formula& psi, const Signature& sig,
                           const BuildOptions& opts = {});
bool subsumes(const Formula& phi, const Formula& psi, const Signature& sig);
bool subsumes_tbox(const TBox& t, const Formula& lhs, const Formula& rhs, const Signature& sig);

}  // namespace wsikit
