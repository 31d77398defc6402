// SPDX-License-Identifier: Apache-2.0
//
// JSON documents for spaces, monopoles and metric bundles.
//
//   space     {"space": name, "params": {...}}
//   monopole  {"variant", "base": <space>, "fields": {name: expr|null}, "t_domain": [lo, hi]}
//             plus "catalog": {"name", "params"} for catalog data
//   bundle    {"dim", "coords", "metric": [[expr|null]], "orientation", "exclusions",
//              "sample_domain": {coord: [lo, hi]}, "params", "provenance"}
//
// Computed components serialize as null. A bundle whose provenance names a
// construction is rebuilt from it on reading; custom bundles need every
// metric component as an expression.
#pragma once

#include <weylab/metrics4d.hpp>

#include <json.hpp>

namespace weylab {

using Json = nlohmann::ordered_json;

Json space_to_json(const WeylStructure3& W);
/// Accepts a "perturbation" parameter (omega_B + eps dz) besides the catalog ones.
WeylStructure3 space_from_json(const Json& j);

Json monopole_to_json(const WeylStructure3& W, const MonopoleData& m);
std::pair<WeylStructure3, MonopoleData> monopole_from_json(const Json& j);
MonopoleData monopole_from_json(const Json& j, const WeylStructure3& W);

/// Build a named construction. Parameters are those recorded in provenance
/// (gauge, t_lo, t_hi, h, rho, Phi_<c>, chi_<c>, rescale).
Metric4Bundle build_construction(const std::string& construction, const std::optional<WeylStructure3>& base,
                                 const std::optional<MonopoleData>& monopole, const Params& params);

Json bundle_to_json(const Metric4Bundle& M);
Metric4Bundle bundle_from_json(const Json& j);

/// JSON text with stable key order and every number printed with 17
/// significant digits; non-finite numbers become null.
std::string dump_json(const Json& j, int indent = 2);

Json read_json_file(const std::string& path);

}  // namespace weylab
