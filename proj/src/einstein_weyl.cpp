// SPDX-License-Identifier: Apache-2.0
#include <weylab/einstein_weyl.hpp>

#include <cmath>

namespace weylab {

BaseJets base_jets(const WeylStructure3& W, std::span<const double> point, int order) {
  BaseJets b;
  b.g = metric_at(W.g, point, order);
  b.omega = W.omega.eval(point, order);
  return b;
}

double ew_residual_at(const WeylStructure3& W, std::span<const double> point, int order) {
  const BaseJets b = base_jets(W, point, order);
  const JetVec sym = symmetrize(ricci(riemann(weyl_connection(b.g, b.omega)), 3), 3);
  const MetricJet g0 = b.g.truncated(sym[0].order());
  const RealJet s = trace(sym, g0);
  JetVec tf = sym;
  for (int k = 0; k < 9; ++k) tf[k] -= (1.0 / 3.0) * (s * g0.g[k]);
  return tensor_norm(truncate(tf, 0), b.g.truncated(0));
}

RealJet weyl_scal(const BaseJets& b) {
  const JetVec sym = symmetrize(ricci(riemann(weyl_connection(b.g, b.omega)), b.g.dim), b.g.dim);
  return trace(sym, b.g);
}

FormJet star_faraday(const BaseJets& b, int orientation) {
  return star(faraday(b.omega, b.g.dim), b.g, orientation);
}

Field scal_field(const WeylStructure3& W) {
  const int depth = std::max(W.g.depth(), W.omega.depth()) + 2;
  return Field(
      3, 1, [W](std::span<const double> p, int k) { return JetVec{weyl_scal(base_jets(W, p, k + 2))}; }, depth);
}

Field star_faraday_field(const WeylStructure3& W) {
  const int depth = std::max(W.g.depth(), W.omega.depth()) + 1;
  return Field(
      3, 3,
      [W](std::span<const double> p, int k) {
        return star_faraday(base_jets(W, p, k + 1), W.orientation).as_one_form();
      },
      depth);
}

JetVec weyl_derivative(const RealJet& f, int weight, const JetVec& omega, int dim) {
  const int k = f.order() - 1;
  if (k < 0) throw OrderDeficit("Weyl derivative", 1);
  const RealJet fk = truncate(f, k);
  JetVec r;
  for (int i = 0; i < dim; ++i) {
    RealJet v = partial(f, i);
    if (weight != 0) v += static_cast<double>(weight) * (fk * truncate(omega[i], k));
    r.push_back(v);
  }
  return r;
}

WeylStructure3 gauge_transform(const WeylStructure3& W, const Field& f) {
  WeylStructure3 r = W;
  const Field g = W.g, om = W.omega;
  std::vector<std::string> gx;
  const bool closed = g.has_exprs() && f.has_exprs();
  if (closed)
    for (const auto& s : g.exprs()) gx.push_back("exp(2*(" + f.exprs()[0] + "))*(" + s + ")");
  r.g = Field(
      3, 9,
      [g, f](std::span<const double> p, int k) {
        JetVec v = g.eval(p, k);
        const RealJet e = exp(2.0 * f.eval1(p, k));
        for (auto& c : v) c = e * c;
        return v;
      },
      std::max(g.depth(), f.depth()), gx);
  r.omega = Field(
      3, 3,
      [om, f](std::span<const double> p, int k) {
        JetVec v = om.eval(p, k);
        const RealJet fj = f.eval1(p, k + 1);
        for (int i = 0; i < 3; ++i) v[i] -= partial(fj, i);
        return v;
      },
      std::max(om.depth(), f.depth() + 1));
  if (W.kappa) {
    const Field kap = *W.kappa;
    r.kappa = Field(
        3, 1, [kap, f](std::span<const double> p, int k) { return JetVec{exp(-f.eval1(p, k)) * kap.eval1(p, k)}; },
        std::max(kap.depth(), f.depth()));
  }
  r.name = W.name;
  return r;
}

WeylStructure3 perturb_omega(const WeylStructure3& W, double eps) {
  WeylStructure3 r = W;
  const Field om = W.omega;
  std::vector<std::string> ex;
  if (om.has_exprs()) {
    ex = om.exprs();
    ex[2] = "(" + ex[2] + ") + " + Expr::number(eps).str();
  }
  r.omega = Field(
      3, 3,
      [om, eps](std::span<const double> p, int k) {
        JetVec v = om.eval(p, k);
        v[2] += eps;
        return v;
      },
      om.depth(), ex);
  r.kappa.reset();
  r.params["perturbation"] = Expr::number(eps).str();
  return r;
}

namespace {
// <A, B> = g^ac g^bd A_ab B_cd for row-major n x n jet matrices
RealJet inner(const JetVec& A, const JetVec& B, const JetVec& inv, int n) {
  RealJet s(A[0].spec());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      RealJet row(A[0].spec());
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) row += inv[b * n + d] * (inv[a * n + c] * B[c * n + d]);
      s += A[a * n + b] * row;
    }
  return s;
}
}  // namespace

SFGCJets sfgc_jets(const BaseJets& b, const JetVec& chi_in, int orientation) {
  const int n = 3;
  const int k = b.order();
  if (k < 1) throw OrderDeficit("congruence analysis", 1);
  const MetricJet& g = b.g;
  RealJet n2(g.spec());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) n2 += g.up(i, j) * chi_in[i] * chi_in[j];
  if (std::abs(n2.value()) < jet_epsilon()) throw DomainError("congruence 1-form has zero length");
  const RealJet inv_len = pow(n2, -0.5);
  JetVec chi;
  for (int i = 0; i < n; ++i) chi.push_back(chi_in[i] * inv_len);

  const Connection lc = levi_civita(g);
  const JetVec c1 = truncate(chi, k - 1), w1 = truncate(b.omega, k - 1);
  const MetricJet g1 = g.truncated(k - 1);
  RealJet chi_w(c1[0].spec());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) chi_w += g1.up(i, j) * c1[i] * w1[j];

  SFGCJets r;
  r.chi = chi;
  r.B.assign(n * n, RealJet(c1[0].spec()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RealJet v = partial(chi[j], i);
      for (int m = 0; m < n; ++m) v -= lc(m, i, j) * c1[m];
      v += chi_w * g1(i, j) - c1[i] * w1[j];
      r.B[i * n + j] = v;
    }
  JetVec G(n * n, RealJet(c1[0].spec())), S(n * n, RealJet(c1[0].spec()));
  const FormJet sc = star(FormJet::one_form(c1), g1, orientation);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      G[i * n + j] = g1(i, j) - c1[i] * c1[j];
      S[i * n + j] = sc.comp2(i, j);
    }
  r.tau = 0.5 * inner(r.B, G, g1.inv, n);
  r.kappa = inner(r.B, S, g1.inv, n) / inner(S, S, g1.inv, n);
  r.shear = r.B;
  for (int q = 0; q < n * n; ++q) r.shear[q] -= r.tau * G[q] + r.kappa * S[q];
  return r;
}

SFGCReport sfgc_analyze_at(const WeylStructure3& W, const Field& chi, std::span<const double> point) {
  const BaseJets b = base_jets(W, point, 1);
  const SFGCJets s = sfgc_jets(b, chi.eval(point, 1), W.orientation);
  SFGCReport r;
  r.tau = s.tau.value();
  r.kappa = s.kappa.value();
  const MetricJet g0 = b.g.truncated(0);
  r.shear_residual = tensor_norm(s.shear, g0);
  // the three parts are orthogonal: the shear has no trace on chi-perp and no *chi part
  const auto inv = values(g0.inv);
  std::vector<double> G(9), S(9), sh = values(s.shear);
  const FormJet sc = star(FormJet::one_form(truncate(s.chi, 0)), g0, W.orientation);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      G[i * 3 + j] = g0(i, j).value() - s.chi[i].value() * s.chi[j].value();
      S[i * 3 + j] = sc.comp2(i, j).value();
    }
  auto dot = [&](const std::vector<double>& A, const std::vector<double>& B) {
    double t = 0;
    for (int a = 0; a < 3; ++a)
      for (int bb = 0; bb < 3; ++bb)
        for (int c = 0; c < 3; ++c)
          for (int d = 0; d < 3; ++d) t += inv[a * 3 + c] * inv[bb * 3 + d] * A[a * 3 + bb] * B[c * 3 + d];
    return t;
  };
  std::vector<double> recon(9);
  const auto Bv = values(s.B);
  for (int q = 0; q < 9; ++q) recon[q] = r.tau * G[q] + r.kappa * S[q] + sh[q] - Bv[q];
  double err = 0;
  for (double v : recon) err = std::max(err, std::abs(v));
  r.reconstruction_error = std::max({err, std::abs(dot(sh, G)), std::abs(dot(sh, S))});
  return r;
}

double kappa_monopole_residual_at(const WeylStructure3& W, const Field& chi, std::span<const double> point) {
  const BaseJets b = base_jets(W, point, 2);
  const SFGCJets s = sfgc_jets(b, chi.eval(point, 2), W.orientation);  // tau, kappa at order 1
  const MetricJet g0 = b.g.truncated(0);
  const JetVec Dk = weyl_derivative(s.kappa, -1, b.omega, 3);
  const FormJet lhs = star(FormJet::one_form(Dk), g0, W.orientation);
  const FormJet F = faraday(b.omega, 3).truncated(0);
  JetVec tchi;
  for (int i = 0; i < 3; ++i) tchi.push_back(s.tau * truncate(s.chi[i], 1));
  const FormJet dtc = exterior_derivative(FormJet::one_form(tchi));
  const FormJet res = lhs - (0.5 * F - dtc);
  return norm(res, g0);
}

std::pair<double, double> hypercr_identities_at(const WeylStructure3& W, std::span<const double> point) {
  if (!W.kappa) throw UsageError("space '" + W.name + "' has no known hyperCR twist");
  const BaseJets b = base_jets(W, point, 2);
  const RealJet kap = W.kappa->eval1(point, 1);
  const JetVec Dk = weyl_derivative(kap, -1, b.omega, 3);
  const MetricJet g0 = b.g.truncated(0);
  const FormJet sF = star(faraday(truncate(b.omega, 1), 3), g0, W.orientation);
  const FormJet r1 = FormJet::one_form(Dk) + 0.5 * sF;
  const double scal = weyl_scal(b).value();
  const double k0 = kap.value();
  return {norm(r1, g0), std::abs(k0 * k0 - scal / 6.0)};
}

double axial_harmonic_residual_at(const Expr& V, std::span<const double> point) {
  const RealJet v = V.eval_at(point, 2);
  const int n = v.n_vars();
  std::vector<int> m(n, 0);
  m[0] = 1;
  const double vr = derivative(v, std::span<const int>(m));
  m[0] = 2;
  const double vrr = derivative(v, std::span<const int>(m));
  m[0] = 0;
  m[1] = 2;
  const double vee = derivative(v, std::span<const int>(m));
  return std::abs(vr + point[0] * (vrr + vee));
}

}  // namespace weylab
