#pragma once

#include "wsikit/onestep.hpp"
#include "wsikit/signature.hpp"

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace wsikit {

enum class SchemaKind : std::uint8_t {
  K,       // []a1..[]an, <>b / a1..an, b
  D,       // []a1..[]an / a1..an
  C,       // [C1]a1..[Cn]an, <D>b, <N>c1..<N>cm / all, Ci pairwise disjoint and Ci within D
  CPrime   // [C1]a1..[Cn]an / a1..an, n > 0, Ci pairwise disjoint
};

/// A rule family with the admissible range of its main arity n.
struct RuleSchema {
  SchemaKind kind;
  unsigned min_n = 0;
  unsigned max_n = std::numeric_limits<unsigned>::max();

  bool fixed() const { return min_n == max_n; }
  /// "K_n", "K_1", "D_n", "C_nm", "C'_n".
  std::string name() const;
  bool operator==(const RuleSchema&) const = default;
};

/// Shipped rule set of a signature; graded has none.
std::vector<RuleSchema> rule_set(const Signature& sig);

/// One rule instance matched into a literal list. Every conclusion is the
/// set of all premise variables, so only the premise is stored.
struct RuleMatch {
  std::size_t schema = 0;  // index into rule_set(sig)
  SchemaKind kind = SchemaKind::K;
  unsigned n = 0;
  unsigned m = 0;  // number of <N> side literals (C only)
  /// Premise slots as (rule variable, literal index), e.g. ("a1", 3), ("b", 0).
  std::vector<std::pair<std::string, std::size_t>> slots;
  /// Sorted literal indices of the premise (the image of the premise).
  std::vector<std::size_t> premise;
  VarSet conclusion;

  /// Instance name such as "K_2", "D_0", "C_11", "C'_2".
  std::string rule_name() const;
};

/// Text form "K_2 via {a1↦q, a2↦r, b↦p}".
std::string match_to_string(const RuleMatch& m, const std::vector<Literal>& lits,
                            const VarNamer& name = default_var_name);

enum class MatchMode : std::uint8_t {
  All,     // every instance up to the premise size cap
  Maximal  // per schema, only matches whose premise image is inclusion-maximal
};

struct MatchOptions {
  MatchMode mode = MatchMode::All;
  std::size_t max_size = std::numeric_limits<std::size_t>::max();
  bool injective = true;
  /// When set, only matches whose premise uses this literal index.
  std::optional<std::size_t> required;
};

/// All rule instances Gamma/Delta with renaming sigma and Gamma.sigma within `lits`.
/// Deterministic order: schema, then anchor literal, then slot choice.
std::vector<RuleMatch> match_rules(const std::vector<Literal>& lits, const Signature& sig,
                                   const MatchOptions& opts = {});

struct ConvexityReport {
  bool ok = true;
  std::size_t rules_checked = 0;
  /// For a violation: the offending rule, the deleted or split-off part and what is missing.
  std::string rule;
  std::string detail;
};

/// Checks that the rule set preserves Lambda-convexity for rule instances
/// with at most `bound` premise literals. Signatures closed under duals use
/// the deletion test; the others use Lambda-splittings.
ConvexityReport check_convexity_preservation(const Signature& sig, std::size_t bound);

/// psi entails heart(rho) in the one-step logic of sig.
bool one_step_consequence(const OneStepFormula& psi, const Modality& heart, const PosProp& rho,
                          const Signature& sig, bool injective = true);

}  // namespace wsikit
