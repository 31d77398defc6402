// SPDX-License-Identifier: Apache-2.0
//
// Connection coefficients and curvature of Levi-Civita and Weyl connections.
//
// Conventions:
//   Gamma^i_jk (D) = Gamma^i_jk (g) + delta^i_j w_k + delta^i_k w_j - g_jk w^i
//   R^i_jkl = d_k Gamma^i_lj - d_l Gamma^i_kj + Gamma^i_km Gamma^m_lj - Gamma^i_lm Gamma^m_kj
//   Ric_jl  = R^i_jil,    scal = g^jl sym(Ric)_jl
//
// Each derivative consumes one jet order: coefficients have the metric's
// order minus one, curvature the metric's order minus two.
#pragma once

#include <weylab/forms.hpp>

#include <optional>

namespace weylab {

struct Connection {
  int dim = 0;
  JetVec gamma;  // Gamma^i_jk at (i * dim + j) * dim + k
  const RealJet& operator()(int i, int j, int k) const { return gamma[(i * dim + j) * dim + k]; }
  int order() const { return gamma[0].order(); }
};

Connection levi_civita(const MetricJet& g);
/// Weyl connection D^g + omega; omega holds dim 1-form components.
Connection weyl_connection(const MetricJet& g, const JetVec& omega);

/// R^i_jkl at ((i * dim + j) * dim + k) * dim + l.
JetVec riemann(const Connection& c);
/// Ric_jl = R^i_jil (row-major).
JetVec ricci(const JetVec& R, int dim);
JetVec symmetrize(const JetVec& m, int dim);
RealJet trace(const JetVec& m, const MetricJet& g);
/// Conformal Weyl tensor with all indices down, from a Levi-Civita Riemann tensor.
JetVec weyl_tensor(const JetVec& R, const MetricJet& g);
/// Squared norm of a covariant 2-tensor using g to raise both indices.
double tensor_norm2(const std::vector<double>& T, const std::vector<double>& ginv, int dim);
double tensor_norm(const JetVec& T, const MetricJet& g);

/// Norms of the selfdual and antiselfdual parts (for the modified star) of a
/// 4-dimensional curvature-type tensor W_abcd, acting on 2-forms.
struct SdAsdNorms {
  double sd = 0.0, asd = 0.0;
};
SdAsdNorms weyl_sd_asd(const std::vector<double>& W, const MetricJet& g, int orientation);

struct CurvatureReport {
  int dim = 0;
  std::vector<double> riemann, ricci_full, ricci_sym, weyl;
  double scal = 0.0;
  std::optional<double> weyl_sd, weyl_asd;  // dim 4 only
};

/// Full curvature at a point from jets of order >= 2 (omega may be empty).
CurvatureReport curvature_report(const MetricJet& g, const JetVec& omega, int orientation = 1);

/// Faraday curvature d(omega).
FormJet faraday(const JetVec& omega, int dim);

std::vector<double> values(const JetVec& v);

}  // namespace weylab
