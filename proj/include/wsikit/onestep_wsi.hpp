#pragma once

#include "wsikit/onestep.hpp"
#include "wsikit/signature.hpp"

#include <vector>

namespace wsikit {

/// One-step wsi model. Each state is identified with the set of variables
/// it satisfies; the transition element is left abstract and represented
/// by the generating formula.
struct OneStepWsiModel {
  Signature sig = Signature::kd();
  OneStepFormula phi;
  std::vector<VarSet> states;  // sorted, distinct
};

struct OneStepOptions {
  bool maximal = true;    // restrict to inclusion-maximal matches
  bool injective = true;  // injective renamings only
};

/// Construction from the rule set: one state per rule match into phi, and
/// one per match that additionally uses a fresh dual literal (minus its
/// variable). Throws UnsupportedError when the rules do not preserve
/// convexity or no rules are shipped.
OneStepWsiModel build_onestep_wsi_generic(const OneStepFormula& phi, const Signature& sig,
                                          const OneStepOptions& opts = {});

/// Closed forms for k-diamond, k-box, kd and ms; cl:N falls back to the
/// generic construction.
OneStepWsiModel build_onestep_wsi_special(const OneStepFormula& phi, const Signature& sig);

struct Classification {
  bool linear = true;     // every variable occurs in at most one state
  std::size_t bound = 0;  // largest state
};

Classification classify(const OneStepWsiModel& m);

/// Cached convexity verdict at the bound used by the constructions.
bool preserves_convexity(const Signature& sig);

}  // namespace wsikit
