// SPDX-License-Identifier: Apache-2.0
//
// Four-dimensional metrics built over a three-dimensional Weyl structure on
// the chart (base coordinates, t), and their diagnostics.
//
// All constructions share the shape
//
//   g = a g_B + b (dt + alpha)^2
//
// with a, b scalars and alpha a t-dependent 1-form on the base:
//
//   monopole          a = 1,                 b = w^-2,            alpha = A
//   hitchin-lebrun    a = P/t^2,             b = 1/(P t^2),       alpha = t omega - t^2 *F/2,  P = 1 - t^2 scal/6
//   hypercr-einstein  a = H/t^2,             b = 1/(H t^2),       alpha = t omega,             H = 1 + 2 t kappa
//   sfk               a = Q,                 b = 1/Q,             alpha = -t omega + 2 t tau chi + Phi,  Q = rho - 2 t kappa
//
// The orientation of the product chart is (base orientation) * kFiberOrientation,
// with volume form vol_B ^ dt for kFiberOrientation = +1.
#pragma once

#include <weylab/monopole.hpp>

#include <optional>

namespace weylab {

/// Calibrated against the Gibbons-Hawking and hitchin-lebrun metrics: with
/// this value their Weyl tensors have vanishing anti-selfdual part.
inline constexpr int kFiberOrientation = 1;

struct Provenance {
  std::string construction;  // monopole | hitchin-lebrun | hypercr-einstein | explicit-family | sfk | custom
  Params params;             // construction parameters (gauge, t range, sfk fields, ...)
};

struct Metric4Bundle {
  Chart chart;  // base coordinates + "t"
  Field g;      // 16 components
  int orientation = 1;
  Provenance provenance;
  std::optional<WeylStructure3> base;
  std::optional<MonopoleData> monopole;
  /// Expected scalar curvature of g, where the construction predicts one.
  std::optional<Field> scal_expected;
  /// Congruence on the base used for the complex structure, if the construction has one.
  std::optional<Field> congruence;
};

/// Lift a base field (domain 3) to the 4-dimensional chart.
Field lift(const Field& f3);
/// The base chart extended by t in [lo, hi], with base exclusions lifted.
Chart product_chart(const Chart& base, std::pair<double, double> t_range);

/// gauge "base": g = g_B + w^-2 (dt + A)^2; gauge "w": the same times w.
Metric4Bundle assemble_from_monopole(const WeylStructure3& W, const MonopoleData& m, const std::string& gauge = "base");
/// Without a t range, t is sampled in [0.1, 0.9] times the first singularity
/// over each base point (capped at 1), see Chart::fiber.
Metric4Bundle hitchin_lebrun_metric(const WeylStructure3& W, std::optional<std::pair<double, double>> t_range = {});
Metric4Bundle hypercr_einstein_metric(const WeylStructure3& W, std::optional<std::pair<double, double>> t_range = {});
/// hypercr_einstein_metric over hypercr-toda(h).
Metric4Bundle explicit_family_metric(const std::string& h, std::optional<std::pair<double, double>> t_range = {});
/// rho has weight -2, Phi weight -1; chi must be shear-free and geodesic.
Metric4Bundle sfk_metric(const WeylStructure3& W, const Field& chi, const Field& rho, const Field& Phi,
                         std::optional<std::pair<double, double>> t_range = {});
/// |*_B(D rho + 2 tau chi rho + 2 kappa Phi) - (d^B Phi + 2 tau chi ^ Phi)| at a base point.
double sfk_linear_residual_at(const WeylStructure3& W, const Field& chi, const Field& rho, const Field& Phi,
                              std::span<const double> point);
/// g -> exp(2f) g.
Metric4Bundle conformal_rescale(const Metric4Bundle& M, const Field& f);

/// Evaluate the metric of a bundle from expression strings (null entries are not allowed).
Metric4Bundle bundle_from_exprs(const std::vector<std::string>& coords, const std::vector<std::string>& metric,
                                std::vector<std::pair<double, double>> box, int orientation, const Scope& scope);

struct EinsteinReport {
  double einstein_residual = 0, scal = 0, sd_weyl = 0, asd_weyl = 0, ricci_norm = 0;
  std::optional<double> scal_mismatch;  // against Metric4Bundle::scal_expected
};
EinsteinReport einstein_selfdual_report_at(const Metric4Bundle& M, std::span<const double> point);

struct JonesTodReport {
  std::vector<double> omega;  // recovered Weyl 1-form relative to g, at the point
  std::vector<double> gap;    // D0 - D^g
  double f0_sd_residual = 0;  // anti-selfdual part of F0 = d(gap)
  std::optional<double> recovered_base_mismatch;
};
JonesTodReport jones_tod_extract_at(const Metric4Bundle& M, std::span<const double> point);

struct SubmersionReport {
  double conformal_killing = 0, legendrian = 0;
};
SubmersionReport submersion_residuals_at(const Metric4Bundle& M, std::span<const double> point);

struct ComplexReport {
  double nijenhuis = 0, kahler = 0, j_squared = 0;
};
/// J from Omega = xi ^ chi - *(xi ^ chi), chi a base 1-form.
ComplexReport complex_structure_checks_at(const Metric4Bundle& M, const Field& chi, std::span<const double> point);

/// max_ab |g_HL - Phi^* g_E| with g_E the hypercr-einstein metric and Phi(x, t) = (x, t/(1 - t kappa)).
double projective_change_agreement_at(const WeylStructure3& W, std::span<const double> point);

const std::vector<CatalogEntry>& catalog_constructions();

}  // namespace weylab
