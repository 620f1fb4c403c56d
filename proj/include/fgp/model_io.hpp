#pragma once

#include "json.hpp"

#include "fgp/bv.hpp"
#include "fgp/chaos.hpp"
#include "fgp/covariance.hpp"

namespace fgp {

/// {"family": name, "params": {name: number}}. Malformed input raises
/// DomainError.
CovarianceModel model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const CovarianceModel& m);

/// {"interval": [a, b], "pieces": [{"sub": [u, v], "coeffs": [c0..c3]}],
///  "atoms": [{"x": location, "jump": size}]}; "pieces" defaults to a zero
/// function, "atoms" to none, and "coeffs" may be shorter than 4.
BVFunction bv_from_json(const nlohmann::json& j);
nlohmann::json bv_to_json(const BVFunction& f);

nlohmann::json to_json(const CumulantReport& r);

/// Parses text as JSON, mapping parse failures to DomainError.
nlohmann::json parse_json(const std::string& text, const char* what);

}  // namespace fgp
