// SPDX-License-Identifier: Apache-2.0
//
// Expression language for scalar fields on charts.
//
//   expr   := term {("+"|"-") term}
//   term   := factor {("*"|"/") factor}
//   factor := ["-"] base ["^" factor]
//   base   := number | "i" | ident | func "(" expr ")" | "(" expr ")"
//
// Identifiers are chart coordinates, bound real parameters, or "zeta" when
// the chart declares a complex coordinate pair (zeta = x + i*y).
#pragma once

#include <weylab/jet.hpp>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace weylab {

struct Scope {
  std::vector<std::string> coords;
  std::map<std::string, double> params;
  /// Coordinate indices (re, im) forming zeta, if declared.
  std::optional<std::pair<int, int>> complex_pair;
};

struct ExprNode;

class Expr {
 public:
  Expr();  // the constant 0
  static Expr parse(std::string_view source, const Scope& scope);
  static Expr number(double v);

  /// Canonical source text; parse(str()) reproduces the same tree.
  std::string str() const;
  /// True if evaluation needs complex arithmetic (uses i or zeta).
  bool needs_complex() const;
  /// True if the expression does not reference any coordinate.
  bool is_constant() const;

  /// Evaluate with the given coordinate jets (one per scope coordinate).
  ComplexJet eval_complex(std::span<const RealJet> coords) const;
  /// Real evaluation. Complex-valued expressions are evaluated in complex
  /// arithmetic and must have a negligible imaginary part.
  RealJet eval_real(std::span<const RealJet> coords) const;
  /// Convenience: evaluate at a point to the given order.
  RealJet eval_at(std::span<const double> point, int order) const;
  ComplexJet eval_complex_at(std::span<const double> point, int order) const;
  double value_at(std::span<const double> point) const;

  const Scope& scope() const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::shared_ptr<const Scope> scope_;
  friend struct ExprNode;
};

/// Max over jet coefficients of the Cauchy-Riemann residuals
/// (u_x - v_y, u_y + v_x) for f = u + i v in the scope's complex pair.
double holomorphy_residual(const Expr& e, std::span<const double> point, int order = 2);

/// Relative tolerance for the imaginary part of real-valued expressions.
inline constexpr double kRealValuedTolerance = 1e-10;

}  // namespace weylab
