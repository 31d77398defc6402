// SPDX-License-Identifier: Apache-2.0
//
// Jet-valued metrics and differential forms at a point, the exterior
// derivative, and the modified Hodge star.
//
// The modified star * is fixed by *1 = orientation * vol and
// *(X^flat ^ a) = i_X(*a). It differs from the standard Hodge star (defined by
// a ^ (star b) = <a, b> vol) by a sign depending only on the form degree k:
//
//   k      0  1  2  3  4
//   sign   +  +  -  -  +        (sign = (-1)^(k(k-1)/2))
//
// so in three dimensions *dx = dy^dz, *(dx^dy) = -dz and ** = -1 on 1-forms,
// while in four dimensions ** = +1 on 2-forms.
//
// Jets may carry more variables than the chart dimension (a 3-dimensional
// base evaluated inside a 4-dimensional chart); derivatives are always taken
// with respect to variable index = coordinate index.
#pragma once

#include <weylab/field.hpp>

#include <array>
#include <span>
#include <vector>

namespace weylab {

/// Metric components with inverse and sqrt(det), all jets of one spec.
struct MetricJet {
  int dim = 0;
  JetVec g;    // row-major
  JetVec inv;  // row-major
  RealJet sqrt_det;

  const RealJet& operator()(int i, int j) const { return g[i * dim + j]; }
  const RealJet& up(int i, int j) const { return inv[i * dim + j]; }
  JetSpec spec() const { return g[0].spec(); }
  int order() const { return g[0].order(); }
  MetricJet truncated(int order) const;
};

/// Builds inverse and sqrt(det) by Gaussian elimination over the jet ring.
/// Throws DomainError if the constant-term matrix is not positive definite.
MetricJet metric_at(JetVec components, int dim);
MetricJet metric_at(const Field& g, std::span<const double> point, int order);

/// Smallest eigenvalue of a symmetric matrix (values only).
double min_eigenvalue(const std::vector<double>& m, int dim);

/// A (possibly mixed-degree) form with one jet per subset of coordinates,
/// indexed by bitmask: bit i set means dx^i is present, factors in increasing order.
struct FormJet {
  int dim = 0;
  std::vector<RealJet> c;

  FormJet() = default;
  FormJet(int dim, JetSpec spec);
  static FormJet scalar(int dim, const RealJet& f);
  static FormJet one_form(const JetVec& comps);  // comps.size() == dim
  JetSpec spec() const { return c[0].spec(); }
  int order() const { return c[0].order(); }

  RealJet& operator[](unsigned mask) { return c[mask]; }
  const RealJet& operator[](unsigned mask) const { return c[mask]; }
  /// Component for dx^i ^ dx^j in any index order (antisymmetry applied).
  RealJet comp2(int i, int j) const;

  FormJet& operator+=(const FormJet& o);
  FormJet& operator-=(const FormJet& o);
  FormJet& operator*=(double s);
  friend FormJet operator+(FormJet a, const FormJet& b) { return a += b; }
  friend FormJet operator-(FormJet a, const FormJet& b) { return a -= b; }
  friend FormJet operator*(double s, FormJet a) { return a *= s; }
  friend FormJet operator*(const RealJet& f, const FormJet& a);
  FormJet degree_part(int k) const;
  FormJet truncated(int order) const;
  JetVec as_one_form() const;
  /// Largest coefficient magnitude over all components.
  double max_abs() const;
};

/// Sign of the permutation that sorts the concatenation of masks a and b
/// (0 if they overlap).
int wedge_sign(unsigned a, unsigned b);
int popcount(unsigned m);

FormJet exterior_derivative(const FormJet& a);  // one order lower
FormJet wedge(const FormJet& a, const FormJet& b);
/// Contraction with a vector field given by components.
FormJet interior(const JetVec& X, const FormJet& a);
/// Index-lowered 1-form X^flat.
JetVec flat(const MetricJet& g, const JetVec& X);
JetVec sharp(const MetricJet& g, const JetVec& a);

/// Sign of the modified star relative to the standard Hodge star on k-forms.
int star_sign(int k);
FormJet hodge_standard(const FormJet& a, const MetricJet& g, int orientation);
FormJet star(const FormJet& a, const MetricJet& g, int orientation);

/// Pointwise squared norm of a form (sum over increasing multi-indices).
RealJet norm2(const FormJet& a, const MetricJet& g);
double norm(const FormJet& a, const MetricJet& g);

/// F = F+ + F- with *F+ = F+, *F- = -F- for the modified star (dim 4 only).
struct SdAsd {
  FormJet sd, asd;
};
SdAsd split_sd_asd(const FormJet& F, const MetricJet& g, int orientation);

/// Orthonormal coframe from the Cholesky factor of the metric values:
/// theta^a = sum_i L[i][a] dx^i, frame e_a = sum_i E[i][a] d/dx^i.
struct Frame {
  int dim = 0;
  std::vector<double> L, E;  // row-major dim x dim
};
Frame orthonormal_frame(const MetricJet& g);

}  // namespace weylab
