// SPDX-License-Identifier: Apache-2.0
#include <weylab/metrics4d.hpp>

#include <weylab/sampling.hpp>

#include "params.hpp"

#include <cmath>
#include <limits>

namespace weylab {

using detail::wrap;

namespace {

JetVec at_base(const Field& f, std::span<const double> p4, int k) { return widen(f.eval(p4.first(3), k), 4); }

// g = a g_B + b (dt + alpha)^2
JetVec compose_metric(const JetVec& gB, const RealJet& a, const RealJet& b, const JetVec& alpha) {
  JetVec g(16, RealJet(a.spec()));
  for (int i = 0; i < 3; ++i) {
    const RealJet ba = b * alpha[i];
    for (int j = 0; j < 3; ++j) g[i * 4 + j] = a * gB[i * 3 + j] + ba * alpha[j];
    g[i * 4 + 3] = ba;
    g[3 * 4 + i] = ba;
  }
  g[15] = b;
  return g;
}

bool zero(const std::string& s) { return s == "0" || s == "(0)"; }

std::string product(std::initializer_list<std::string> fs) {
  std::string r;
  for (const auto& f : fs) {
    if (zero(f)) return "0";
    if (f == "1") continue;
    r += (r.empty() ? "" : "*") + wrap(f);
  }
  return r.empty() ? "1" : r;
}

std::string sum(const std::string& a, const std::string& b) {
  if (zero(a)) return b;
  if (zero(b)) return a;
  return a + " + " + b;
}

// String form of compose_metric; empty when any input lacks a closed form.
std::vector<std::string> compose_metric_str(const std::vector<std::string>& gB, const std::string& a,
                                            const std::string& b, const std::vector<std::string>& alpha) {
  if (gB.size() != 9 || alpha.size() != 3 || a.empty() || b.empty()) return {};
  for (const auto& s : gB)
    if (s.empty()) return {};
  for (const auto& s : alpha)
    if (s.empty()) return {};
  std::vector<std::string> g(16);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) g[i * 4 + j] = sum(product({a, gB[i * 3 + j]}), product({b, alpha[i], alpha[j]}));
    g[i * 4 + 3] = g[3 * 4 + i] = product({b, alpha[i]});
  }
  g[15] = b;
  return g;
}

std::vector<std::string> exprs_or_empty(const Field& f) { return f.has_exprs() ? f.exprs() : std::vector<std::string>{}; }

Scope product_scope(const Chart& base) {
  Scope s = base.scope;
  s.coords.push_back("t");
  return s;
}

// t in [0.1, 0.9] times the construction's first singularity over each base
// point (capped at 1). root returns a non-positive value where there is none.
void default_fiber(Chart& c, std::function<double(std::span<const double>)> root) {
  c.box.back() = {0.0, 1.0};
  c.fiber = [root = std::move(root)](std::span<const double> x) {
    const double r = root(x);
    const double T = r > 0 && std::isfinite(r) ? std::min(1.0, r) : 1.0;
    return std::pair{0.1 * T, 0.9 * T};
  };
}

Params t_params(const std::optional<std::pair<double, double>>& t_range) {
  if (!t_range) return {};
  return {{"t_lo", Expr::number(t_range->first).str()}, {"t_hi", Expr::number(t_range->second).str()}};
}

Exclusion lifted_exclusion(const std::string& desc, Field f4, bool positive = false) {
  return {desc, std::move(f4), positive};
}


}  // namespace

Field lift(const Field& f3) {
  return Field(
      4, f3.size(), [f3](std::span<const double> p, int k) { return at_base(f3, p, k); }, f3.depth(),
      f3.has_exprs() ? f3.exprs() : std::vector<std::string>{});
}

Chart product_chart(const Chart& base, std::pair<double, double> t_range) {
  Chart c;
  c.coords = base.coords;
  c.coords.push_back("t");
  c.box = base.box;
  c.box.push_back(t_range);
  c.margin = base.margin;
  c.scope = product_scope(base);
  for (const auto& e : base.exclusions) c.exclusions.push_back({e.description, lift(e.field), e.positive});
  return c;
}

Metric4Bundle assemble_from_monopole(const WeylStructure3& W, const MonopoleData& m, const std::string& gauge) {
  if (gauge != "base" && gauge != "w") throw UsageError("gauge must be 'base' or 'w'");
  const MonopoleData G = as_general(m);
  Metric4Bundle M;
  M.chart = product_chart(monopole_base_chart(W, m), m.t_domain);
  // w < 0 gives a negative definite metric; keep to the Riemannian side
  M.chart.exclusions.push_back(lifted_exclusion(G.w[0].has_exprs() ? G.w[0].exprs()[0] : "w", G.w[0], true));
  const Field gB = W.g;
  const bool wg = gauge == "w";
  int depth = gB.depth();
  for (std::size_t j = 0; j < m.w.size(); ++j) depth = std::max({depth, m.w[j].depth(), m.A[j].depth()});
  std::vector<std::string> ex;
  if (G.w[0].has_exprs() && G.A[0].has_exprs()) {
    const std::string w = G.w[0].exprs()[0];
    ex = compose_metric_str(exprs_or_empty(gB), "1", "1/" + wrap(w) + "^2", G.A[0].exprs());
    if (wg)
      for (auto& s : ex) s = product({w, s});
  }
  M.g = Field(
      4, 16,
      [gB, G, wg](std::span<const double> p, int k) {
        const RealJet w = G.w[0].eval1(p, k);
        const JetVec A = G.A[0].eval(p, k);
        JetVec g = compose_metric(at_base(gB, p, k), RealJet::constant(w.spec(), 1.0), reciprocal(w * w), A);
        if (wg)
          for (auto& c : g) c = w * c;
        return g;
      },
      depth, ex);
  M.orientation = W.orientation * kFiberOrientation;
  M.provenance = {"monopole", {{"gauge", gauge}}};
  M.base = W;
  M.monopole = m;
  M.congruence = W.congruence;
  return M;
}

Metric4Bundle hitchin_lebrun_metric(const WeylStructure3& W, std::optional<std::pair<double, double>> t_range) {
  const Field s = scal_field(W), sF = star_faraday_field(W);
  Metric4Bundle M;
  M.chart = product_chart(W.chart, t_range.value_or(std::pair{0.0, 1.0}));
  if (!t_range)
    default_fiber(M.chart, [s](std::span<const double> p) {
      const double v = s.eval1(p, 0).value();
      return v > 0 ? std::sqrt(6.0 / v) : -1.0;
    });
  M.chart.exclusions.push_back({"t", Field::from_exprs({Expr::parse("t", M.chart.scope)})});
  M.chart.exclusions.push_back({"1 - t^2 scal/6", Field(
                                                     4, 1,
                                                     [s](std::span<const double> p, int k) {
                                                       const RealJet t = RealJet::variable({4, k}, 3, p[3]);
                                                       return JetVec{1.0 - (1.0 / 6.0) * (t * t * at_base(s, p, k)[0])};
                                                     },
                                                     s.depth())});
  const Field gB = W.g, om = W.omega;
  M.g = Field(
      4, 16,
      [gB, om, s, sF](std::span<const double> p, int k) {
        const RealJet t = RealJet::variable({4, k}, 3, p[3]);
        const RealJet t2 = t * t;
        const RealJet P = 1.0 - (1.0 / 6.0) * (t2 * at_base(s, p, k)[0]);
        const JetVec w = at_base(om, p, k), F = at_base(sF, p, k);
        JetVec alpha;
        for (int i = 0; i < 3; ++i) alpha.push_back(t * w[i] - 0.5 * (t2 * F[i]));
        return compose_metric(at_base(gB, p, k), P / t2, reciprocal(P * t2), alpha);
      },
      std::max({gB.depth(), s.depth(), sF.depth()}));
  M.orientation = W.orientation * kFiberOrientation;
  M.provenance = {"hitchin-lebrun", t_params(t_range)};
  M.base = W;
  MonopoleData c = canonical_projective_monopole(W);
  c.t_domain = M.chart.box.back();
  M.monopole = c;
  M.scal_expected = Field::constant(4, {-12.0});
  M.congruence = W.congruence;
  return M;
}

Metric4Bundle hypercr_einstein_metric(const WeylStructure3& W, std::optional<std::pair<double, double>> t_range) {
  if (!W.kappa) throw UsageError("hypercr-einstein needs a space with a known twist kappa");
  const Field kap = *W.kappa;
  Metric4Bundle M;
  M.chart = product_chart(W.chart, t_range.value_or(std::pair{0.0, 1.0}));
  if (!t_range)
    default_fiber(M.chart, [kap](std::span<const double> p) {
      const double v = kap.eval1(p, 0).value();
      return v < 0 ? -0.5 / v : -1.0;
    });
  M.chart.exclusions.push_back({"t", Field::from_exprs({Expr::parse("t", M.chart.scope)})});
  const std::string ks = kap.has_exprs() ? kap.exprs()[0] : "";
  M.chart.exclusions.push_back({ks.empty() ? "1 + 2 t kappa" : "1 + 2*t*" + wrap(ks), Field(
                                                                                         4, 1,
                                                                                         [kap](std::span<const double> p, int k) {
                                                                                           const RealJet t = RealJet::variable({4, k}, 3, p[3]);
                                                                                           return JetVec{1.0 + 2.0 * (t * at_base(kap, p, k)[0])};
                                                                                         },
                                                                                         kap.depth())});
  const Field gB = W.g, om = W.omega;
  std::vector<std::string> ex;
  if (!ks.empty() && om.has_exprs()) {
    const std::string H = "1 + 2*t*" + wrap(ks);
    std::vector<std::string> alpha;
    for (const auto& o : om.exprs()) alpha.push_back(product({"t", o}));
    ex = compose_metric_str(exprs_or_empty(gB), wrap(H) + "/t^2", "1/(" + wrap(H) + "*t^2)", alpha);
  }
  M.g = Field(
      4, 16,
      [gB, om, kap](std::span<const double> p, int k) {
        const RealJet t = RealJet::variable({4, k}, 3, p[3]);
        const RealJet t2 = t * t;
        const RealJet H = 1.0 + 2.0 * (t * at_base(kap, p, k)[0]);
        JetVec alpha = at_base(om, p, k);
        for (auto& c : alpha) c = t * c;
        return compose_metric(at_base(gB, p, k), H / t2, reciprocal(H * t2), alpha);
      },
      std::max({gB.depth(), om.depth(), kap.depth()}), ex);
  M.orientation = W.orientation * kFiberOrientation;
  M.provenance = {"hypercr-einstein", t_params(t_range)};
  M.base = W;
  MonopoleData m = make_catalog_monopole("hypercr-affine", {}, W);
  m.t_domain = M.chart.box.back();
  M.monopole = m;
  M.scal_expected = Field::constant(4, {-12.0});
  M.congruence = W.congruence;
  return M;
}

Metric4Bundle explicit_family_metric(const std::string& h, std::optional<std::pair<double, double>> t_range) {
  Metric4Bundle M = hypercr_einstein_metric(make_catalog_space("hypercr-toda", {{"h", h}}), t_range);
  M.provenance.construction = "explicit-family";
  M.provenance.params["h"] = h;
  return M;
}

namespace {

struct SfkJets {
  RealJet tau, kappa;
  JetVec chi;
};

// tau, kappa of order k and the unit chi of order k from order k+1 base data.
SfkJets sfk_jets(const WeylStructure3& W, const Field& chi, std::span<const double> p3, int k) {
  const BaseJets b = base_jets(W, p3, k + 1);
  const SFGCJets s = sfgc_jets(b, chi.eval(p3, k + 1), W.orientation);
  return {s.tau, s.kappa, truncate(s.chi, k)};
}

}  // namespace

Metric4Bundle sfk_metric(const WeylStructure3& W, const Field& chi, const Field& rho, const Field& Phi,
                         std::optional<std::pair<double, double>> t_range) {
  for (const auto& p : sample_points(W.chart, 8, 1)) {
    const double sh = sfgc_analyze_at(W, chi, p).shear_residual;
    if (sh > 1e-8) throw DomainError("congruence is not shear-free (shear " + std::to_string(sh) + ")");
  }
  Metric4Bundle M;
  M.chart = product_chart(W.chart, t_range.value_or(std::pair{0.0, 1.0}));
  if (!t_range)
    default_fiber(M.chart, [W, chi, rho](std::span<const double> p) {
      const double k = sfk_jets(W, chi, p, 0).kappa.value(), r = rho.eval1(p, 0).value();
      return k * r > 0 ? r / (2.0 * k) : -1.0;
    });
  const Field gB = W.g, om = W.omega;
  auto Q = [W, chi, rho](std::span<const double> p, int k) {
    const SfkJets s = sfk_jets(W, chi, p.first(3), k);
    const RealJet t = RealJet::variable({4, k}, 3, p[3]);
    return at_base(rho, p, k)[0] - 2.0 * (t * widen(s.kappa, 4));
  };
  const int depth = std::max({gB.depth(), om.depth(), chi.depth() + 1, rho.depth(), Phi.depth()});
  M.chart.exclusions.push_back({"rho - 2 t kappa", Field(
                                                       4, 1, [Q](std::span<const double> p, int k) { return JetVec{Q(p, k)}; }, depth)});
  M.g = Field(
      4, 16,
      [W, chi, Phi, Q, gB, om](std::span<const double> p, int k) {
        const SfkJets s = sfk_jets(W, chi, p.first(3), k);
        const RealJet t = RealJet::variable({4, k}, 3, p[3]);
        const RealJet q = Q(p, k);
        const JetVec w = at_base(om, p, k), ph = at_base(Phi, p, k), c = widen(s.chi, 4);
        const RealJet tt = 2.0 * (t * widen(s.tau, 4));
        JetVec alpha;
        for (int i = 0; i < 3; ++i) alpha.push_back(ph[i] - t * w[i] + tt * c[i]);
        return compose_metric(at_base(gB, p, k), q, reciprocal(q), alpha);
      },
      depth);
  M.orientation = W.orientation * kFiberOrientation;
  M.provenance = {"sfk", t_params(t_range)};
  if (rho.has_exprs()) M.provenance.params["rho"] = rho.exprs()[0];
  for (int i = 0; i < 3; ++i) {
    if (Phi.has_exprs()) M.provenance.params["Phi_" + W.chart.coords[i]] = Phi.exprs()[i];
    if (chi.has_exprs()) M.provenance.params["chi_" + W.chart.coords[i]] = chi.exprs()[i];
  }
  M.base = W;
  M.scal_expected = Field::constant(4, {0.0});
  M.congruence = chi;
  return M;
}

double sfk_linear_residual_at(const WeylStructure3& W, const Field& chi, const Field& rho, const Field& Phi,
                              std::span<const double> point) {
  const BaseJets b = base_jets(W, point, 1);
  const SfkJets s = sfk_jets(W, chi, point, 1);
  const RealJet r = rho.eval1(point, 1);
  const JetVec ph = Phi.eval(point, 1);
  const MetricJet g0 = b.g.truncated(0);
  const JetVec Dr = weyl_derivative(r, -2, b.omega, 3);
  const RealJet tau0 = truncate(s.tau, 0), kap0 = truncate(s.kappa, 0), r0 = truncate(r, 0);
  JetVec X, chi0 = truncate(s.chi, 0), ph0 = truncate(ph, 0), om0 = truncate(b.omega, 0);
  for (int i = 0; i < 3; ++i) X.push_back(Dr[i] + 2.0 * (tau0 * chi0[i] * r0) + 2.0 * (kap0 * ph0[i]));
  const FormJet lhs = star(FormJet::one_form(X), g0, W.orientation);
  JetVec tc;
  for (int i = 0; i < 3; ++i) tc.push_back(2.0 * (tau0 * chi0[i]));
  const FormJet rhs = exterior_derivative(FormJet::one_form(ph)) -
                      wedge(FormJet::one_form(om0), FormJet::one_form(ph0)) +
                      wedge(FormJet::one_form(tc), FormJet::one_form(ph0));
  return norm(lhs - rhs, g0);
}

Metric4Bundle conformal_rescale(const Metric4Bundle& M, const Field& f) {
  Metric4Bundle r = M;
  const Field g = M.g;
  std::vector<std::string> ex;
  if (g.has_exprs() && f.has_exprs())
    for (const auto& s : g.exprs()) ex.push_back(zero(s) ? "0" : "exp(2*" + wrap(f.exprs()[0]) + ")*" + wrap(s));
  r.g = Field(
      4, 16,
      [g, f](std::span<const double> p, int k) {
        JetVec v = g.eval(p, k);
        const RealJet e = exp(2.0 * f.eval1(p, k));
        for (auto& c : v) c = e * c;
        return v;
      },
      std::max(g.depth(), f.depth()), ex);
  if (f.has_exprs()) r.provenance.params["rescale"] = f.exprs()[0];
  r.scal_expected.reset();
  return r;
}

Metric4Bundle bundle_from_exprs(const std::vector<std::string>& coords, const std::vector<std::string>& metric,
                                std::vector<std::pair<double, double>> box, int orientation, const Scope& scope) {
  if (coords.size() != 4) throw UsageError("metric bundles are 4-dimensional");
  if (metric.size() != 16) throw UsageError("metric needs 16 components");
  if (box.size() != 4) throw UsageError("sample domain needs 4 intervals");
  if (orientation != 1 && orientation != -1) throw UsageError("orientation must be +1 or -1");
  Metric4Bundle M;
  M.chart.coords = coords;
  M.chart.box = std::move(box);
  M.chart.scope = scope;
  M.chart.scope.coords = coords;
  std::vector<Expr> e;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (metric[i * 4 + j].empty()) throw UsageError("metric component is null");
      e.push_back(M.chart.parse(metric[i * 4 + j]));
    }
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) {
      const std::vector<double> origin(4, 0.0);
      const double a = e[i * 4 + j].is_constant() ? e[i * 4 + j].value_at(origin) : NAN;
      const double b = e[j * 4 + i].is_constant() ? e[j * 4 + i].value_at(origin) : NAN;
      if (e[i * 4 + j].str() != e[j * 4 + i].str() && !(a == b))
        throw UsageError("metric is not symmetric in components " + std::to_string(i) + std::to_string(j));
    }
  M.g = Field::from_exprs(e);
  M.orientation = orientation;
  M.provenance = {"custom", {}};
  return M;
}

EinsteinReport einstein_selfdual_report_at(const Metric4Bundle& M, std::span<const double> point) {
  const MetricJet g = metric_at(M.g, point, 2);
  const CurvatureReport c = curvature_report(g, {}, M.orientation);
  const MetricJet g0 = g.truncated(0);
  const auto inv = values(g0.inv);
  std::vector<double> E(16);
  for (int q = 0; q < 16; ++q) E[q] = c.ricci_sym[q] - 0.25 * c.scal * g0.g[q].value();
  EinsteinReport r;
  r.einstein_residual = std::sqrt(tensor_norm2(E, inv, 4));
  r.ricci_norm = std::sqrt(tensor_norm2(c.ricci_sym, inv, 4));
  r.scal = c.scal;
  r.sd_weyl = *c.weyl_sd;
  r.asd_weyl = *c.weyl_asd;
  if (M.scal_expected) r.scal_mismatch = std::abs(c.scal - M.scal_expected->eval1(point, 0).value());
  return r;
}

namespace {

// Unit vertical 1-form xi = g(d/dt, .)/|d/dt|, its vector field, and the gap
// D0 - D^g = -(div xi)/3 xi + i_xi d xi, all from order-k metric jets.
struct Vertical {
  JetVec xi;      // order k
  JetVec xi_up;   // order k
  JetVec gap;     // order k - 1
  FormJet dxi;    // order k - 1
};

Vertical vertical(const MetricJet& g) {
  const int k = g.order();
  Vertical v;
  const RealJet inv_len = pow(g(3, 3), -0.5);
  for (int a = 0; a < 4; ++a) v.xi.push_back(g(3, a) * inv_len);
  v.xi_up.assign(4, RealJet(g.spec()));
  v.xi_up[3] = inv_len;
  v.dxi = exterior_derivative(FormJet::one_form(v.xi));
  // div xi = d_t(sqrt(det) / |d/dt|) / sqrt(det)
  const RealJet div = partial(g.sqrt_det * inv_len, 3) / truncate(g.sqrt_det, k - 1);
  const JetVec xu = truncate(v.xi_up, k - 1), xl = truncate(v.xi, k - 1);
  const JetVec ixd = interior(xu, v.dxi).as_one_form();
  for (int a = 0; a < 4; ++a) v.gap.push_back(ixd[a] - (1.0 / 3.0) * (div * xl[a]));
  return v;
}

}  // namespace

JonesTodReport jones_tod_extract_at(const Metric4Bundle& M, std::span<const double> point) {
  const MetricJet g = metric_at(M.g, point, 2);
  const MetricJet g1 = g.truncated(1), g0 = g.truncated(0);
  const Vertical v = vertical(g);
  const JetVec xu1 = truncate(v.xi_up, 1);
  // omega = -(*d xi)(xi, .)
  const JetVec om = (-1.0 * interior(xu1, star(v.dxi, g1, M.orientation))).as_one_form();
  JonesTodReport r;
  r.omega = values(truncate(om, 0));
  r.gap = values(truncate(v.gap, 0));
  const FormJet F0 = exterior_derivative(FormJet::one_form(v.gap));
  r.f0_sd_residual = norm(split_sd_asd(F0, g0, M.orientation).asd, g0);
  if (M.base) {
    // horizontal metric h = lambda g_B; D^B relative to h is omega_B - d log(lambda)/2
    JetVec h(9, RealJet(g1.spec()));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h[i * 3 + j] = g1(i, j) - g1(i, 3) * g1(j, 3) / g1(3, 3);
    const MetricJet hm = metric_at(h, 3);
    const BaseJets b = base_jets(*M.base, point.first(3), 1);
    const MetricJet gB = metric_at(widen(b.g.g, 4), 3);
    JetVec total;
    for (int a = 0; a < 4; ++a) total.push_back(v.gap[a] + om[a]);
    const Connection rec = weyl_connection(hm, JetVec(total.begin(), total.begin() + 3));
    const Connection ref = weyl_connection(gB, widen(b.omega, 4));
    double mm = 0.0;
    for (std::size_t q = 0; q < rec.gamma.size(); ++q)
      mm = std::max(mm, std::abs(rec.gamma[q].value() - ref.gamma[q].value()));
    const RealJet loglam = (1.0 / 3.0) * log(hm.sqrt_det / gB.sqrt_det) * 2.0;
    mm = std::max(mm, std::abs(total[3].value() + 0.5 * partial(loglam, 3).value()));
    r.recovered_base_mismatch = mm;
  }
  return r;
}

SubmersionReport submersion_residuals_at(const Metric4Bundle& M, std::span<const double> point) {
  const MetricJet g = metric_at(M.g, point, 1);
  const MetricJet g0 = g.truncated(0);
  const Vertical v = vertical(g);
  const Connection lc = levi_civita(g);
  const std::vector<double> xi = values(truncate(v.xi, 0)), gap = values(v.gap), inv = values(g0.inv);
  double xg = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) xg += inv[a * 4 + b] * xi[a] * gap[b];
  // N(Y, Z) = (nabla_Y xi)(Z)
  std::vector<double> N(16), B(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = partial(v.xi[b], a).value();
      for (int c = 0; c < 4; ++c) s -= lc(c, a, b).value() * xi[c];
      N[a * 4 + b] = s;
      B[a * 4 + b] = s - xi[a] * gap[b] + xg * g0(a, b).value();
    }
  std::vector<double> S(16);
  double tr = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      S[a * 4 + b] = 0.5 * (B[a * 4 + b] + B[b * 4 + a]);
      tr += inv[a * 4 + b] * S[a * 4 + b];
    }
  for (int q = 0; q < 16; ++q) S[q] -= 0.25 * tr * g0.g[q].value();
  SubmersionReport r;
  r.conformal_killing = std::sqrt(tensor_norm2(S, inv, 4));
  // skew part of (D0 on the weight, D^g on the form) applied to xi: nabla xi - gap (x) xi
  FormJet A(4, g0.spec());
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) {
      const double ca = N[a * 4 + b] - gap[a] * xi[b], cb = N[b * 4 + a] - gap[b] * xi[a];
      A[(1u << a) | (1u << b)] = RealJet::constant(g0.spec(), 0.5 * (ca - cb));
    }
  r.legendrian = norm(split_sd_asd(A, g0, M.orientation).asd, g0);
  return r;
}

ComplexReport complex_structure_checks_at(const Metric4Bundle& M, const Field& chi3, std::span<const double> point) {
  const MetricJet g = metric_at(M.g, point, 1);
  const MetricJet g0 = g.truncated(0);
  const Vertical v = vertical(g);
  JetVec chi = widen(chi3.eval(point.first(3), 1), 4);
  chi.push_back(RealJet(g.spec()));
  RealJet n2(g.spec());
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) n2 += g.up(a, b) * chi[a] * chi[b];
  const RealJet il = pow(n2, -0.5);
  for (auto& c : chi) c = c * il;
  const FormJet xc = wedge(FormJet::one_form(v.xi), FormJet::one_form(chi));
  const FormJet Om = xc - star(xc, g, M.orientation);
  // J^a_b = g^ac Omega_cb
  JetVec J(16, RealJet(g.spec()));
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c) J[a * 4 + b] += g.up(a, c) * Om.comp2(c, b);
  ComplexReport r;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = a == b ? 1.0 : 0.0;
      for (int c = 0; c < 4; ++c) s += J[a * 4 + c].value() * J[c * 4 + b].value();
      r.j_squared = std::max(r.j_squared, std::abs(s));
    }
  std::vector<double> J0(16), dJ(64);  // dJ[(l * 4 + i) * 4 + k] = d_l J^i_k
  for (int q = 0; q < 16; ++q) J0[q] = J[q].value();
  for (int l = 0; l < 4; ++l)
    for (int q = 0; q < 16; ++q) dJ[l * 16 + q] = partial(J[q], l).value();
  const auto gv = values(g0.g), inv = values(g0.inv);
  // N^i_jk
  std::vector<double> N(64);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) {
          s += J0[l * 4 + j] * dJ[l * 16 + i * 4 + k] - J0[l * 4 + k] * dJ[l * 16 + i * 4 + j];
          s -= J0[i * 4 + l] * (dJ[j * 16 + l * 4 + k] - dJ[k * 16 + l * 4 + j]);
        }
        N[(i * 4 + j) * 4 + k] = s;
      }
  // nabla_l J^i_k
  const Connection lc = levi_civita(g);
  std::vector<double> DJ(64);
  for (int l = 0; l < 4; ++l)
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        double s = dJ[l * 16 + i * 4 + k];
        for (int c = 0; c < 4; ++c)
          s += lc(i, l, c).value() * J0[c * 4 + k] - lc(c, l, k).value() * J0[i * 4 + c];
        DJ[(l * 4 + i) * 4 + k] = s;
      }
  // |T|^2 for a (1,2) tensor T^i_jk, and for a (0,1,1) tensor T_l^i_k
  double nn = 0.0, dd = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 4; ++a)
      for (int j = 0; j < 4; ++j)
        for (int b = 0; b < 4; ++b)
          for (int k = 0; k < 4; ++k)
            for (int c = 0; c < 4; ++c) {
              nn += gv[i * 4 + a] * inv[j * 4 + b] * inv[k * 4 + c] * N[(i * 4 + j) * 4 + k] * N[(a * 4 + b) * 4 + c];
              dd += inv[j * 4 + b] * gv[i * 4 + a] * inv[k * 4 + c] * DJ[(j * 4 + i) * 4 + k] * DJ[(b * 4 + a) * 4 + c];
            }
  r.nijenhuis = std::sqrt(std::max(nn, 0.0));
  r.kahler = std::sqrt(std::max(dd, 0.0));
  return r;
}

double projective_change_agreement_at(const WeylStructure3& W, std::span<const double> point) {
  if (!W.kappa) throw UsageError("the agreement check needs a known twist kappa");
  const Metric4Bundle L = hitchin_lebrun_metric(W, std::pair{0.0, 1.0});
  const Metric4Bundle E = hypercr_einstein_metric(W, std::pair{0.0, 1.0});
  const RealJet kap = at_base(*W.kappa, point, 1)[0];
  const RealJet t = RealJet::variable({4, 1}, 3, point[3]);
  JetVec Phi;
  for (int i = 0; i < 3; ++i) Phi.push_back(RealJet::variable({4, 1}, i, point[i]));
  Phi.push_back(t / (1.0 - t * kap));
  std::vector<double> q{point[0], point[1], point[2], Phi[3].value()};
  const auto gE = values(E.g.eval(q, 0));
  const auto gL = values(L.g.eval(point, 0));
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d)
          s += partial(Phi[c], a).value() * partial(Phi[d], b).value() * gE[c * 4 + d];
      worst = std::max(worst, std::abs(s - gL[a * 4 + b]));
    }
  return worst;
}

const std::vector<CatalogEntry>& catalog_constructions() {
  static const std::vector<CatalogEntry> entries{
      {"monopole", "construction", {{"gauge", "base"}},
       "g = g_B + w^-2 (dt + A)^2 from monopole data; gauge w multiplies by w"},
      {"hitchin-lebrun", "construction", {{"t_lo", "0.1 T"}, {"t_hi", "0.9 T"}},
       "selfdual Einstein g = t^-2 (P g_B + P^-1 (dt + t omega - t^2 *F/2)^2), P = 1 - t^2 scal/6"},
      {"hypercr-einstein", "construction", {{"t_lo", "0.1 T"}, {"t_hi", "0.9 T"}},
       "g = t^-2 (H g_B + H^-1 (dt + t omega)^2), H = 1 + 2 t kappa, on spaces with a known twist"},
      {"explicit-family", "construction", {{"h", "i"}},
       "hypercr-einstein over hypercr-toda(h): H = 1 - 2 t im(h)/|z+h|^2"},
      {"sfk", "construction", {{"rho", "1"}, {"Phi", "0"}, {"chi", "congruence"}},
       "g = Q g_B + Q^-1 (dt - t omega + 2 t tau chi + Phi)^2, Q = rho - 2 t kappa"},
  };
  return entries;
}

}  // namespace weylab
