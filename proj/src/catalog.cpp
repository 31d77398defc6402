// SPDX-License-Identifier: Apache-2.0
#include <weylab/einstein_weyl.hpp>

#include "params.hpp"

#include <cmath>
#include <set>

namespace weylab {

namespace {

using detail::fields;
using detail::number_param;
using detail::param;
using detail::reject_unknown;
using detail::wrap;

const char* kSphereFactor = "4/(1 + x^2 + y^2)^2";

// Probe points on the sample box used by construction-time prechecks.
std::vector<std::vector<double>> probe_points(const Chart& c) {
  std::vector<std::vector<double>> pts;
  const double fr[5][3] = {{0.31, 0.62, 0.47}, {0.77, 0.18, 0.83}, {0.12, 0.91, 0.26}, {0.55, 0.44, 0.71}, {0.88, 0.73, 0.09}};
  for (const auto& f : fr) {
    std::vector<double> p(c.dim());
    for (int i = 0; i < c.dim(); ++i) p[i] = c.box[i].first + f[i % 3] * (c.box[i].second - c.box[i].first);
    if (c.admissible(p)) pts.push_back(p);
  }
  return pts;
}

// A holomorphic function of zeta on the sphere chart: parsed in (x, y) to
// reject dependence on other coordinates, then checked against Cauchy-Riemann.
std::string holomorphic_param(const Params& p, const std::string& key, const std::string& fallback,
                              const Chart& c) {
  const std::string src = param(p, key, fallback);
  Scope plane;
  plane.coords = {"x", "y"};
  plane.complex_pair = std::pair{0, 1};
  plane.params = c.scope.params;
  Expr e = Expr::parse(src, plane);
  for (const auto& pt : probe_points(c)) {
    const double xy[2] = {pt[0], pt[1]};
    const double r = holomorphy_residual(e, xy, 2);
    if (r > 1e-8)
      throw UsageError("parameter " + key + " = '" + src + "' is not holomorphic in zeta (Cauchy-Riemann residual " +
                       std::to_string(r) + ")");
  }
  return e.str();
}

Chart base_chart(std::vector<std::string> coords, std::vector<std::pair<double, double>> box) {
  Chart c;
  c.coords = coords;
  c.box = std::move(box);
  c.scope.coords = std::move(coords);
  return c;
}

WeylStructure3 flat_r3(const Params& p) {
  reject_unknown("flat-r3", p, {});
  WeylStructure3 W;
  W.name = "flat-r3";
  W.chart = base_chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  W.g = fields(W.chart, {"1", "0", "0", "0", "1", "0", "0", "0", "1"});
  W.omega = fields(W.chart, {"0", "0", "0"});
  W.kappa = fields(W.chart, {"0"});
  W.congruence = fields(W.chart, {"0", "0", "1"});
  return W;
}

WeylStructure3 round_s3(const Params& p) {
  reject_unknown("round-s3", p, {"radius"});
  const double R = number_param(p, "radius", 1.0);
  if (!(R > 0)) throw UsageError("radius must be positive");
  WeylStructure3 W;
  W.name = "round-s3";
  W.params["radius"] = Expr::number(R).str();
  W.chart = base_chart({"x", "y", "z"}, {{-1, 1}, {-1, 1}, {-1, 1}});
  W.chart.scope.params["radius"] = R;
  const std::string f = "4*radius^2/(1 + x^2 + y^2 + z^2)^2";
  W.g = fields(W.chart, {f, "0", "0", "0", f, "0", "0", "0", f});
  W.omega = fields(W.chart, {"0", "0", "0"});
  W.kappa = fields(W.chart, {"1/radius"});
  return W;
}

WeylStructure3 hypercr_toda(const Params& p) {
  reject_unknown("hypercr-toda", p, {"h"});
  WeylStructure3 W;
  W.name = "hypercr-toda";
  W.chart = base_chart({"x", "y", "z"}, {{-0.8, 0.8}, {-0.8, 0.8}, {0.3, 2.0}});
  W.chart.scope.complex_pair = std::pair{0, 1};
  W.chart.margin = 0.1;
  const std::string h = wrap(holomorphic_param(p, "h", "i", W.chart));
  W.params["h"] = param(p, "h", "i");
  const std::string q = "abs2(z + " + h + ")";
  W.chart.add_exclusion(q);
  const std::string gs = q + "*" + kSphereFactor;
  W.g = fields(W.chart, {gs, "0", "0", "0", gs, "0", "0", "0", "1"});
  W.omega = fields(W.chart, {"0", "0", "-(2*z + 2*re" + h + ")/" + q});
  W.kappa = fields(W.chart, {"-im" + h + "/" + q});
  W.congruence = fields(W.chart, {"0", "0", "1"});
  return W;
}

WeylStructure3 geodesic_symmetry(const Params& p) {
  reject_unknown("geodesic-symmetry", p, {"f", "theta_x", "theta_y"});
  WeylStructure3 W;
  W.name = "geodesic-symmetry";
  W.chart = base_chart({"x", "y", "psi"}, {{-1, 1}, {-1, 1}, {0, 2}});
  W.chart.scope.complex_pair = std::pair{0, 1};
  const std::string fsrc = holomorphic_param(p, "f", "1", W.chart);
  const std::string f = wrap(fsrc);
  W.params["f"] = param(p, "f", "1");
  const bool f_constant = W.chart.parse(fsrc).is_constant();
  if (!f_constant) W.chart.add_exclusion("abs2" + f);
  const std::string tx = wrap(param(p, "theta_x", "-2*re" + f + "*y/(1 + x^2 + y^2)"));
  const std::string ty = wrap(param(p, "theta_y", "2*re" + f + "*x/(1 + x^2 + y^2)"));
  if (p.count("theta_x")) W.params["theta_x"] = p.at("theta_x");
  if (p.count("theta_y")) W.params["theta_y"] = p.at("theta_y");
  // d(theta) must equal re(f) vol_S2
  {
    Field th = fields(W.chart, {tx, ty, "re" + f + "*" + kSphereFactor});
    for (const auto& pt : probe_points(W.chart)) {
      JetVec v = th.eval(pt, 1);
      const double dth = partial(v[1], 0).value() - partial(v[0], 1).value();
      if (std::abs(dth - v[2].value()) > 1e-8 * std::max(1.0, std::abs(v[2].value())))
        throw UsageError("theta potential does not satisfy d(theta) = re(f) vol_S2");
    }
  }
  const std::string a = "abs2" + f + "*" + kSphereFactor;
  W.g = fields(W.chart, {a + " + " + tx + "^2", tx + "*" + ty, tx, tx + "*" + ty, a + " + " + ty + "^2", ty, tx, ty,
                         "1"});
  const std::string c = "im" + f + "/abs2" + f;
  W.omega = fields(W.chart, {c + "*" + tx, c + "*" + ty, c});
  W.congruence = fields(W.chart, {tx, ty, "1"});
  if (f_constant) W.kappa = fields(W.chart, {"-re" + f + "/(2*abs2" + f + ")"});
  return W;
}

WeylStructure3 ward_toda(const Params& p) {
  reject_unknown("ward-toda", p, {"V"});
  WeylStructure3 W;
  W.name = "ward-toda";
  W.chart = base_chart({"rho", "eta", "psi"}, {{0.5, 1.5}, {-1, 1}, {0, 1}});
  const std::string vsrc = param(p, "V", "log(rho)");
  W.params["V"] = vsrc;
  Scope plane;
  plane.coords = {"rho", "eta"};
  Expr V2 = Expr::parse(vsrc, plane);
  const Expr V = W.chart.parse(V2.str());
  for (const auto& pt : probe_points(W.chart)) {
    const double r = axial_harmonic_residual_at(V, pt);
    if (r > 1e-8) throw UsageError("V = '" + vsrc + "' is not axially harmonic (residual " + std::to_string(r) + ")");
  }
  W.chart.add_exclusion("rho");
  // V_rho^2 + V_eta^2 must stay away from zero
  W.chart.exclusions.push_back({"V_rho^2 + V_eta^2", Field(3, 1, [V](std::span<const double> pt, int k) {
                                  const RealJet v = V.eval_at(pt, k + 1);
                                  const RealJet a = partial(v, 0), b = partial(v, 1);
                                  return JetVec{a * a + b * b};
                                }, 1)});
  W.g = Field(
      3, 9,
      [V](std::span<const double> pt, int k) {
        const RealJet v = V.eval_at(pt, k + 1);
        const RealJet a = partial(v, 0), b = partial(v, 1);
        const RealJet s = a * a + b * b;
        const RealJet z(s.spec());
        return JetVec{s, z, z, z, s, z, z, z, RealJet::constant(s.spec(), 1.0)};
      },
      1);
  W.omega = Field(
      3, 3,
      [V](std::span<const double> pt, int k) {
        const RealJet v = V.eval_at(pt, k + 1);
        const RealJet a = partial(v, 0), b = partial(v, 1);
        const RealJet rho = RealJet::variable(a.spec(), 0, pt[0]);
        const RealJet den = rho * (a * a + b * b);
        return JetVec{(a * a - b * b) / den, 2.0 * a * b / den, RealJet(a.spec())};
      },
      1);
  return W;
}

}  // namespace

const std::vector<CatalogEntry>& catalog_spaces() {
  static const std::vector<CatalogEntry> entries{
      {"flat-r3", "space", {}, "Euclidean R^3 with the exact Weyl structure omega = 0"},
      {"round-s3", "space", {{"radius", "1"}}, "round 3-sphere in stereographic coordinates, omega = 0"},
      {"hypercr-toda", "space", {{"h", "i"}},
       "g = |z+h|^2 g_S2 + dz^2, omega = -(2z + h + conj(h))/|z+h|^2 dz, h holomorphic in zeta"},
      {"geodesic-symmetry", "space", {{"f", "1"}, {"theta_x", "-2*re(f)*y/(1+x^2+y^2)"}, {"theta_y", "2*re(f)*x/(1+x^2+y^2)"}},
       "g = |f|^2 g_S2 + (dpsi + theta)^2, omega = im(f)/|f|^2 (dpsi + theta), d theta = re(f) vol_S2"},
      {"ward-toda", "space", {{"V", "log(rho)"}},
       "g = (V_rho^2 + V_eta^2)(drho^2 + deta^2) + dpsi^2 from an axially symmetric harmonic V(rho, eta)"},
  };
  return entries;
}

WeylStructure3 make_catalog_space(const std::string& name, const Params& params) {
  if (name == "flat-r3") return flat_r3(params);
  if (name == "round-s3") return round_s3(params);
  if (name == "hypercr-toda") return hypercr_toda(params);
  if (name == "geodesic-symmetry") return geodesic_symmetry(params);
  if (name == "ward-toda") return ward_toda(params);
  throw UsageError("unknown catalog space '" + name + "'");
}

}  // namespace weylab
