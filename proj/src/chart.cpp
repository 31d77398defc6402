// SPDX-License-Identifier: Apache-2.0
#include <weylab/chart.hpp>

#include <cmath>
#include <limits>

namespace weylab {

double Chart::exclusion_clearance(std::span<const double> point) const {
  double c = std::numeric_limits<double>::infinity();
  for (const auto& e : exclusions) {
    const double v = e.field.eval1(point, 0).value();
    c = std::min(c, e.positive ? v : std::abs(v));
  }
  return c;
}

std::pair<double, double> Chart::last_interval(std::span<const double> point) const {
  std::pair<double, double> r = box.back();
  if (fiber) {
    const auto [lo, hi] = fiber(point.first(point.size() - 1));
    r = {std::max(r.first, lo), std::min(r.second, hi)};
  }
  return r;
}

bool Chart::admissible(std::span<const double> point) const {
  for (int i = 0; i < dim(); ++i)
    if (point[i] < box[i].first || point[i] > box[i].second) return false;
  try {
    if (fiber) {
      const auto [lo, hi] = last_interval(point);
      if (point.back() < lo || point.back() > hi) return false;
    }
    return exclusion_clearance(point) > margin;
  } catch (const DomainError&) {
    return false;
  }
}

void Chart::add_exclusion(const std::string& src, bool positive) {
  Expr e = parse(src);
  exclusions.push_back({e.str(), Field::from_exprs({e}), positive});
}

}  // namespace weylab
