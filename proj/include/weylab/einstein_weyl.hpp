// SPDX-License-Identifier: Apache-2.0
//
// Three-dimensional Weyl structures (g_B, omega_B) with D^B = D^{g_B} + omega_B,
// their Einstein-Weyl residuals, shear-free geodesic congruences, hyperCR
// identities and the catalog of explicit spaces.
//
// Densities are trivialized in the gauge g_B: a weight-w scalar f has
// D^B f = df + w f omega_B, and (g, omega) ~ (e^{2f} g, omega - df).
#pragma once

#include <weylab/chart.hpp>
#include <weylab/curvature.hpp>

#include <map>
#include <optional>
#include <string>

namespace weylab {

using Params = std::map<std::string, std::string>;

struct WeylStructure3 {
  std::string name;
  Params params;
  Chart chart;
  Field g;      // 9 components
  Field omega;  // 3 components
  int orientation = 1;
  /// Twist of a divergence-free shear-free congruence (weight -1), if known.
  std::optional<Field> kappa;
  /// A shear-free geodesic congruence as a (not necessarily unit) 1-form.
  std::optional<Field> congruence;
};

struct BaseJets {
  MetricJet g;
  JetVec omega;
  int order() const { return g.order(); }
};

BaseJets base_jets(const WeylStructure3& W, std::span<const double> point, int order);

/// Symmetric Ricci tensor of D^B and its trace-free part norm.
double ew_residual_at(const WeylStructure3& W, std::span<const double> point, int order = 2);

/// scal of D^B trivialized in gauge g_B (order k-2 from order-k base jets).
RealJet weyl_scal(const BaseJets& b);
/// *_B domega_B (order k-1).
FormJet star_faraday(const BaseJets& b, int orientation);
Field scal_field(const WeylStructure3& W);
Field star_faraday_field(const WeylStructure3& W);

/// Weight-w covariant derivative df + w f omega of a trivialized density.
JetVec weyl_derivative(const RealJet& f, int weight, const JetVec& omega, int dim);

WeylStructure3 gauge_transform(const WeylStructure3& W, const Field& f);
/// omega_B + eps * dx^{last coordinate}.
WeylStructure3 perturb_omega(const WeylStructure3& W, double eps);

struct SFGCJets {
  JetVec chi;  // unit 1-form
  RealJet tau, kappa;
  JetVec B, shear;  // D^B chi as a bilinear form and its shear part (row-major)
};
/// Decomposition from order-k base jets and an order-k 1-form; results order k-1.
SFGCJets sfgc_jets(const BaseJets& b, const JetVec& chi, int orientation);

struct SFGCReport {
  double tau = 0.0, kappa = 0.0, shear_residual = 0.0;
  /// Largest deviation of the reassembled tau(g - chi chi) + kappa *chi + shear from D^B chi.
  double reconstruction_error = 0.0;
};
SFGCReport sfgc_analyze_at(const WeylStructure3& W, const Field& chi, std::span<const double> point);

/// |*_B D^B kappa - (F^B / 2 - d(tau chi))|.
double kappa_monopole_residual_at(const WeylStructure3& W, const Field& chi, std::span<const double> point);

/// (|D^B kappa + *_B F^B / 2|, |kappa^2 - scal/6|) for the known hyperCR twist.
std::pair<double, double> hypercr_identities_at(const WeylStructure3& W, std::span<const double> point);

/// |(rho V_rho)_rho + rho V_eta eta| for V an expression in (rho, eta, ...).
double axial_harmonic_residual_at(const Expr& V, std::span<const double> point);

struct CatalogEntry {
  std::string name;
  std::string kind;  // "space" or "monopole" or "construction"
  std::vector<std::pair<std::string, std::string>> params;  // name, default
  std::string description;
};

const std::vector<CatalogEntry>& catalog_spaces();
WeylStructure3 make_catalog_space(const std::string& name, const Params& params);

}  // namespace weylab
