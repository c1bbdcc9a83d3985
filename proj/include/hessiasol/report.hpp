#pragma once

#include <json.hpp>

#include "hessiasol/regularize.hpp"
#include "hessiasol/solver.hpp"

namespace hessiasol {

using Json = nlohmann::json;

Json to_json(const Certificate& c);
Json to_json(const GammaCheckReport& r);
Json to_json(const CompareReport& r);
Json to_json(const SolveReport& r);
Json to_json(const AbpReport& r);
Json to_json(const HolderReport& r);
Json to_json(const CrosscheckReport& r);

/// FNV-1a 64 over the canonical dump; embedded in every CLI report.
std::string config_hash(const Json& config);

}  // namespace hessiasol
