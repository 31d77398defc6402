// SPDX-License-Identifier: Apache-2.0
//
// Point-evaluable fields: a field maps (point, order) to a fixed-size list of
// jets in the chart's variables. Scalars, 1-forms (one component per
// coordinate) and metrics (dim*dim, row-major) all use this one type.
#pragma once

#include <weylab/expr.hpp>
#include <weylab/jet.hpp>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace weylab {

using JetVec = std::vector<RealJet>;

class Field {
 public:
  using Fn = std::function<JetVec(std::span<const double>, int)>;

  Field() = default;
  /// depth: extra jet orders consumed internally beyond the requested order.
  Field(int domain_dim, int size, Fn fn, int depth = 0, std::vector<std::string> exprs = {});

  static Field from_exprs(const std::vector<Expr>& comps);
  static Field constant(int domain_dim, std::vector<double> values);
  static Field zero(int domain_dim, int size) { return constant(domain_dim, std::vector<double>(size, 0.0)); }

  JetVec eval(std::span<const double> point, int order) const;
  RealJet eval1(std::span<const double> point, int order) const { return eval(point, order).at(0); }

  int domain_dim() const { return domain_dim_; }
  int size() const { return size_; }
  int depth() const { return depth_; }
  bool valid() const { return static_cast<bool>(fn_); }
  /// Closed-form source per component; empty strings for computed components.
  const std::vector<std::string>& exprs() const { return exprs_; }
  bool has_exprs() const;

 private:
  int domain_dim_ = 0;
  int size_ = 0;
  int depth_ = 0;
  Fn fn_;
  std::vector<std::string> exprs_;
};

/// Jets of the coordinate functions at a point.
JetVec coordinate_jets(std::span<const double> point, int order);
/// Re-express jets in more variables (variable v -> v); extra variables unused.
JetVec widen(const JetVec& v, int n_vars);
RealJet widen(const RealJet& j, int n_vars);
JetVec truncate(const JetVec& v, int order);

}  // namespace weylab
