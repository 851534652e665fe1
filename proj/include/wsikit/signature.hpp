#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wsikit {

enum class ModKind : std::uint8_t {
  Box,         // []
  Diamond,     // <>
  GradedBox,   // []_k, dual of <>_k (oracle only)
  GradedDiamond,  // <>_k: more than k successors
  CoalBox,     // [C]
  CoalDiamond  // <C>
};

/// A unary modal operator. `param` is the grade for graded operators and the
/// coalition bitmask (agent i is bit i-1) for coalition operators. `label`
/// selects a relation when Kripke signatures are fused; the parser always
/// produces label 0.
struct Modality {
  ModKind kind = ModKind::Diamond;
  std::uint32_t param = 0;
  std::uint32_t label = 0;

  auto operator<=>(const Modality&) const = default;

  static Modality box(std::uint32_t label = 0) { return {ModKind::Box, 0, label}; }
  static Modality diamond(std::uint32_t label = 0) { return {ModKind::Diamond, 0, label}; }
  static Modality graded_diamond(std::uint32_t k) { return {ModKind::GradedDiamond, k, 0}; }
  static Modality graded_box(std::uint32_t k) { return {ModKind::GradedBox, k, 0}; }
  static Modality coal_box(std::uint32_t coalition) { return {ModKind::CoalBox, coalition, 0}; }
  static Modality coal_diamond(std::uint32_t coalition) {
    return {ModKind::CoalDiamond, coalition, 0};
  }

  bool is_boxlike() const {
    return kind == ModKind::Box || kind == ModKind::GradedBox || kind == ModKind::CoalBox;
  }
};

/// The dual operator: [] <-> <>, []_k <-> <>_k, [C] <-> <C>. Involutive.
Modality dual(const Modality& m);

/// Surface syntax of the operator, e.g. "<>", "[]_2", "[{1,2}]".
std::string to_string(const Modality& m);

enum class Functor : std::uint8_t { Kripke, Monotone, Multiset, Game };

enum class Logic : std::uint8_t { KDiamond, KBox, K, KD, M, Ms, CL, Graded };

/// Similarity type together with the class of models it is interpreted over.
class Signature {
 public:
  /// Accepts k-diamond, k-box, k, kd, m, ms, cl:N (1 <= N <= 6), graded.
  static Signature parse(std::string_view name);

  static Signature k_diamond();
  static Signature k_box();
  static Signature k();
  static Signature kd();
  static Signature m();
  static Signature ms();
  static Signature cl(unsigned agents);
  static Signature graded();

  Logic logic() const { return logic_; }
  Functor functor() const { return functor_; }
  bool serial() const { return serial_; }
  unsigned agents() const { return agents_; }
  std::string name() const;

  /// Membership in Lambda (atomic propositions are always admitted separately).
  bool contains(const Modality& m) const;
  /// Finite listing of Lambda. Graded signatures have no finite listing.
  std::vector<Modality> lambda() const;
  /// Lambda-bar, the duals of Lambda.
  std::vector<Modality> lambda_bar() const;
  bool self_dual_closed() const;

  /// True when a tableau rule set is shipped (everything but graded).
  bool has_rules() const { return logic_ != Logic::Graded; }
  /// Signatures for which an explicit transition structure of wsi models is known.
  bool concretizable() const;

  /// The same functor with Lambda cut down to the listed Kripke/monotone
  /// operators. Used when the full Lambda does not preserve convexity.
  Signature restricted(bool box, bool diamond) const;
  bool has_box() const { return box_; }
  bool has_diamond() const { return diamond_; }

  bool operator==(const Signature&) const = default;

 private:
  Signature(Logic l, Functor f, bool serial, bool box, bool diamond, unsigned agents)
      : logic_(l), functor_(f), serial_(serial), box_(box), diamond_(diamond), agents_(agents) {}

  Logic logic_;
  Functor functor_;
  bool serial_;
  bool box_;
  bool diamond_;
  unsigned agents_;
};

/// Coalition bitmask helpers.
std::string coalition_to_string(std::uint32_t mask);
inline std::uint32_t grand_coalition(unsigned agents) { return (1u << agents) - 1u; }

}  // namespace wsikit
