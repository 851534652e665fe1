#pragma once

#include "wsikit/formula.hpp"
#include "wsikit/oracle.hpp"
#include "wsikit/signature.hpp"

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace wsikit::testing {

/// Seeded random formulas.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  /// Conjunctive formula of modal depth <= depth over `atoms`.
  Formula conjunctive(const std::vector<Modality>& mods, std::size_t depth, const std::vector<std::string>& atoms,
                      std::size_t max_conjuncts = 3);
  /// Positive formula (with | and false) of modal depth <= depth.
  Formula positive(const std::vector<Modality>& mods, std::size_t depth, const std::vector<std::string>& atoms);
  /// Conjunctive nu-sentence with 1..max_eq equations, each body of depth <= 2.
  Formula nu_sentence(const std::vector<Modality>& mods, std::size_t max_eq, const std::vector<std::string>& atoms);
  /// Positive query that contains a nu block, a mu block, or both.
  Formula fix_query(const std::vector<Modality>& mods, const std::vector<std::string>& atoms);

 private:
  Formula body(const std::vector<Modality>& mods, std::size_t depth, const std::vector<std::string>& atoms,
               const std::vector<std::string>& vars, bool positive);
  std::mt19937_64 rng_;
};

/// Modal literals of a signature suitable for generation (label 0).
std::vector<Modality> generation_modalities(const Signature& sig);

/// Satisfiability of phi & !psi over all Kripke models (serial ones with
/// `serial`), by a plain tableau. phi, psi positive and fixpoint-free, with
/// only [] and <>.
bool k_entails(const Formula& phi, const Formula& psi, bool serial);

/// Tree model of an acyclic conjunctive formula assembled from one-step
/// wsi models, one fresh subtree per one-step state (k-diamond, k-box, kd, ms).
/// Returns nullopt when the tree exceeds 64 states.
std::optional<oracle::ExplicitModel> collage(const Formula& phi, const Signature& sig);

}  // namespace wsikit::testing
