// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <weylab/field.hpp>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace weylab {

/// A scalar that must stay bounded away from zero (|value| > margin), or
/// above it (value > margin) when positive is set.
struct Exclusion {
  std::string description;  // expression source or a readable formula
  Field field;
  bool positive = false;
};

struct Chart {
  std::vector<std::string> coords;
  std::vector<std::pair<double, double>> box;  // sample domain per coordinate
  std::vector<Exclusion> exclusions;
  double margin = 1e-2;
  Scope scope;  // coordinates, bound parameters, complex pair
  /// Optional interval for the last coordinate as a function of the others;
  /// points must lie in both this interval and the box.
  std::function<std::pair<double, double>(std::span<const double>)> fiber;

  int dim() const { return static_cast<int>(coords.size()); }
  /// Smallest clearance at the point (signed for positive exclusions), +inf if there are none.
  double exclusion_clearance(std::span<const double> point) const;
  bool admissible(std::span<const double> point) const;
  /// Sampling interval of the last coordinate over the given leading coordinates.
  std::pair<double, double> last_interval(std::span<const double> point) const;
  Expr parse(const std::string& src) const { return Expr::parse(src, scope); }
  void add_exclusion(const std::string& src, bool positive = false);
};

}  // namespace weylab
