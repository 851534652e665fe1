#pragma once

#include "wsikit/formula.hpp"
#include "wsikit/signature.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace wsikit {

/// Parse a formula. Identifiers bound by an enclosing nu/mu become Var,
/// every other identifier is an atomic proposition. With a signature,
/// every modality is checked against it.
Formula parse_formula(std::string_view text, const std::optional<Signature>& sig = std::nullopt);

/// Canonical text form; parse_formula(print_formula(f)) == f.
std::string print_formula(const Formula& f);

}  // namespace wsikit
