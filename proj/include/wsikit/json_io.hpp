#pragma once

#include "wsikit/checker.hpp"
#include "wsikit/oracle.hpp"
#include "wsikit/wsi_model.hpp"

#include <json.hpp>

namespace wsikit {

using Json = nlohmann::ordered_json;

/// Abstract model export. With `concrete`, each state also carries its
/// explicit structure ("succ" for Kripke signatures, "neighbourhoods" for ms);
/// non-concretizable signatures then raise UnsupportedError.
Json model_to_json(const AbstractWsiModel& m, bool concrete = false);

Json explicit_to_json(const oracle::ExplicitModel& m, const Signature& sig);
/// Inverse of explicit_to_json; the functor is taken from `sig`.
oracle::ExplicitModel explicit_from_json(const Json& j, const Signature& sig);

Json verdict_to_json(const Verdict& v);

}  // namespace wsikit
