// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <weylab/chart.hpp>

#include <cstdint>
#include <vector>

namespace weylab {

/// Uniform rejection sampling in the chart box, honoring exclusions with the
/// chart margin. Points depend only on (chart, n, seed). Throws DomainError
/// when more than max_attempts_per_point * n candidates are rejected.
std::vector<std::vector<double>> sample_points(const Chart& chart, int n, std::uint64_t seed,
                                               int max_attempts_per_point = 1000);

}  // namespace weylab
