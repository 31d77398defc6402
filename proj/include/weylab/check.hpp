// SPDX-License-Identifier: Apache-2.0
//
// Check orchestration behind the command line: a request document names a
// target (space, monopole, construction or bundle), points are sampled with a
// fixed seed, diagnostics run in parallel, and the results are reduced in
// point order so the report body never depends on the worker count.
//
// Request keys (all optional unless the command needs them):
//   space, params, perturb                       base Einstein-Weyl space
//   monopole, monopole_params                    catalog monopole
//   variant, fields, t_domain                    inline monopole data
//   monopole_doc                                 monopole JSON document
//   construction, build_params                   4-dimensional construction
//   bundle                                       metric bundle JSON document
//   diagnostics, chi                             check-metric selection
//   points, seed, tolerance
#pragma once

#include <weylab/io.hpp>

namespace weylab {

inline constexpr const char* kVersion = WEYLAB_VERSION;

/// Known commands: check-ew, check-monopole, check-metric, roundtrip.
bool is_check_command(const std::string& command);

/// Validates keys and fills defaults (points 20, seed 1, tolerance per target).
Json normalize_request(const std::string& command, const Json& request);

/// Full report including the "timing" block. workers = 0 picks the hardware concurrency.
Json run_check(const std::string& command, const Json& request, unsigned workers = 0);

/// The report without its timing block (the part that is reproducible).
Json report_body(const Json& report);

/// 0 pass, 1 fail.
int exit_code(const Json& report);

/// Metric bundle document for a build request.
Json build_request(const Json& request);

/// Every catalog entry with parameter defaults.
Json catalog_json();

/// {"error": {"type", "message"}} for an exception raised by the library.
Json error_json(const std::exception& e);

}  // namespace weylab
