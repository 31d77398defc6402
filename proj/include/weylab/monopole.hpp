// SPDX-License-Identifier: Apache-2.0
//
// Monopole equations over a three-dimensional Weyl structure. All w's are
// weight -1 densities trivialized in the gauge g_B, so D^B w = dw - w omega_B.
//
//   abelian     *(D w) = dA
//   general     *(D w + A' w - A w') = dA + A' ^ A          (' = d/dt)
//   affine      w = t w1 + w0,           A = t A1 + A0
//   projective  w = t^2 w2 + t w1 + w0,  A = t^2 A2 + t A1 + A0
//
// The affine and projective equations are the t-coefficients of the general
// equation for polynomial data.
#pragma once

#include <weylab/einstein_weyl.hpp>

#include <array>
#include <map>

namespace weylab {

enum class Variant { Abelian, Affine, Projective, General };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct MonopoleData {
  Variant variant = Variant::Abelian;
  std::string name;  // catalog name or "custom"
  Params params;
  /// Abelian {w}, Affine {w0, w1}, Projective {w0, w1, w2}, General {w(x, t)}.
  std::vector<Field> w;
  /// 1-forms on the base (3 components each), same layout as w.
  std::vector<Field> A;
  std::pair<double, double> t_domain{0.0, 1.0};
  /// Base-chart scalars that must stay away from zero (singular sets of the data).
  std::vector<Exclusion> exclusions;
  /// Replaces the space's sample box when nonempty.
  std::vector<std::pair<double, double>> base_box;

  /// Field names in output order ("w", "A_x", ... or "w0", ...).
  std::map<std::string, std::string> field_exprs(const Chart& base) const;
};

/// The base chart restricted by the data's box and exclusions.
Chart monopole_base_chart(const WeylStructure3& W, const MonopoleData& m);

/// Field names for a variant over the given base coordinates.
std::vector<std::string> field_names(Variant v, const std::vector<std::string>& coords);
/// Data from expression strings keyed by field_names (missing A components are 0).
/// General fields are parsed over the base coordinates plus t.
MonopoleData monopole_from_exprs(const WeylStructure3& W, Variant v, const std::map<std::string, std::string>& fields,
                                 std::pair<double, double> t_domain);

/// Named residual norms at a base point (General: point includes t last).
std::map<std::string, double> monopole_residual_at(const WeylStructure3& W, const MonopoleData& m,
                                                   std::span<const double> point);
double max_residual(const std::map<std::string, double>& r);

/// Polynomial-in-t data (or abelian) as General fields on the 4-dimensional chart.
MonopoleData as_general(const MonopoleData& m);
/// w and A of any variant at (x, t), as jets in 4 variables.
struct MonopoleJets {
  RealJet w;
  JetVec A;  // 3 components
};
MonopoleJets monopole_jets(const MonopoleData& m, std::span<const double> point4, int order);

/// The general residual 2-form from jets (w, A order k, in n_vars >= 4 with t = var 3).
FormJet general_residual(const MetricJet& g, const JetVec& omega, const RealJet& w, const JetVec& A, int orientation);

struct SL2MonopoleData {
  std::array<Field, 4> w;  // row-major 2x2, scalars
  std::array<Field, 4> A;  // row-major 2x2, 1-forms
};
/// w = [[w1/2, w0], [-w2, -w1/2]], A likewise.
SL2MonopoleData pack_sl2(const MonopoleData& projective);
/// Entries of *(D w + [A, w]) - (dA + A ^ A) at a point (row-major, 2-forms).
std::array<FormJet, 4> sl2_residual_forms(const WeylStructure3& W, const SL2MonopoleData& m, std::span<const double> point);
double sl2_residual_at(const WeylStructure3& W, const SL2MonopoleData& m, std::span<const double> point);

/// w0 = 1, w1 = 0, w2 = -scal/6, A0 = 0, A1 = omega, A2 = -(1/2) *d omega.
MonopoleData canonical_projective_monopole(const WeylStructure3& W);

/// Max discrepancy between the t-coefficients of the general residual of
/// polynomial data and the affine/projective residuals.
double ansatz_reduction_check(const WeylStructure3& W, const MonopoleData& m, std::span<const double> point);

/// Reparametrize general data by t~ = f(x, t): w = w~(x, f)/f_t, A = (A~(x, f) + d_x f)/f_t.
MonopoleData reparametrize(const MonopoleData& general, const Field& f);

const std::vector<CatalogEntry>& catalog_monopoles();
MonopoleData make_catalog_monopole(const std::string& name, const Params& params, const WeylStructure3& W);

}  // namespace weylab
