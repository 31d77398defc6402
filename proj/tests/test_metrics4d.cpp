#include <doctest.h>
#include <weylab/metrics4d.hpp>
#include <weylab/sampling.hpp>

#include <cmath>

using namespace weylab;

namespace {

struct Worst {
  double einstein = 0, asd = 0, sd = 0, ricci = 0, scal_mismatch = 0, f0 = 0, base = 0, ck = 0, leg = 0;
};

Worst survey(const Metric4Bundle& M, int n = 10, std::uint64_t seed = 5) {
  Worst w;
  for (const auto& p : sample_points(M.chart, n, seed)) {
    const auto e = einstein_selfdual_report_at(M, p);
    const auto j = jones_tod_extract_at(M, p);
    const auto s = submersion_residuals_at(M, p);
    w.einstein = std::max(w.einstein, e.einstein_residual);
    w.asd = std::max(w.asd, e.asd_weyl);
    w.sd = std::max(w.sd, e.sd_weyl);
    w.ricci = std::max(w.ricci, e.ricci_norm);
    w.scal_mismatch = std::max(w.scal_mismatch, e.scal_mismatch.value_or(0.0));
    w.f0 = std::max(w.f0, j.f0_sd_residual);
    w.base = std::max(w.base, j.recovered_base_mismatch.value_or(0.0));
    w.ck = std::max(w.ck, s.conformal_killing);
    w.leg = std::max(w.leg, s.legendrian);
  }
  return w;
}

Field base_exprs(const WeylStructure3& W, std::vector<std::string> src) {
  std::vector<Expr> e;
  for (const auto& s : src) e.push_back(W.chart.parse(s));
  return Field::from_exprs(e);
}

}  // namespace

TEST_CASE("hyperbolic metric from the flat base") {
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  const Metric4Bundle M = hitchin_lebrun_metric(F);
  const std::vector<double> p{0.1, 0.2, -0.3, 0.5};
  const auto g = M.g.eval(p, 0);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) CHECK(g[a * 4 + b].value() == doctest::Approx(a == b ? 4.0 : 0.0));
  const auto e = einstein_selfdual_report_at(M, p);
  CHECK(e.scal == doctest::Approx(-12.0).epsilon(1e-12));
  CHECK(e.einstein_residual < 1e-12);
  CHECK(e.asd_weyl < 1e-12);
  CHECK(e.sd_weyl < 1e-12);
  CHECK(M.chart.last_interval(p).first == doctest::Approx(0.1));
  CHECK(M.chart.last_interval(p).second == doctest::Approx(0.9));
}

TEST_CASE("hitchin-lebrun metrics are selfdual Einstein with a Legendrian submersion") {
  const std::vector<std::pair<std::string, Params>> spaces{{"round-s3", {}},
                                                           {"hypercr-toda", {{"h", "zeta^2 + i"}}},
                                                           {"hypercr-toda", {{"h", "0.5*i"}}},
                                                           {"geodesic-symmetry", {{"f", "1 + 0.5*i"}}},
                                                           {"ward-toda", {{"V", "log(rho)"}}},
                                                           {"ward-toda", {{"V", "eta"}}}};
  for (const auto& [name, params] : spaces) {
    CAPTURE(name);
    const Metric4Bundle M = hitchin_lebrun_metric(make_catalog_space(name, params));
    const Worst w = survey(M);
    CHECK(w.einstein < 1e-7);
    CHECK(w.asd < 1e-7);
    CHECK(w.scal_mismatch < 1e-7);
    CHECK(w.leg < 1e-7);
    CHECK(w.ck < 1e-9);
    CHECK(w.f0 < 1e-7);
    CHECK(w.base < 1e-7);
  }
  // round S^3 of radius 2: scal = 3/2, first singularity at t = 2
  const Metric4Bundle S = hitchin_lebrun_metric(make_catalog_space("round-s3", {{"radius", "2"}}));
  CHECK(S.chart.last_interval(std::vector<double>{0.1, 0.2, 0.3, 0.5}).second == doctest::Approx(0.9));
  // hypercr-toda: the singularity t = |z+h|^2/|im h| varies over the base
  const Metric4Bundle T = hitchin_lebrun_metric(make_catalog_space("hypercr-toda", {{"h", "0.5*i"}}));
  CHECK(T.chart.last_interval(std::vector<double>{0, 0, 0.0, 0.5}).second == doctest::Approx(0.45));
  CHECK(T.chart.last_interval(std::vector<double>{0, 0, 0.3, 0.5}).first == doctest::Approx(0.068));
  for (const auto& p : sample_points(T.chart, 20, 3)) {
    const double T0 = std::min(1.0, 2 * p[2] * p[2] + 0.5);
    CHECK(p[3] <= 0.9 * T0);
    CHECK(p[3] >= 0.1 * T0);
  }
}

TEST_CASE("perturbed base breaks hitchin-lebrun") {
  const WeylStructure3 W = perturb_omega(make_catalog_space("hypercr-toda", {{"h", "i"}}), 0.1);
  const Worst w = survey(hitchin_lebrun_metric(W), 5);
  CHECK(std::max(w.einstein, w.asd) > 1e-4);
}

TEST_CASE("Gibbons-Hawking metric") {
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  const MonopoleData m = make_catalog_monopole("gibbons-hawking", {}, F);
  const Worst base = survey(assemble_from_monopole(F, m));
  CHECK(base.asd < 1e-9);
  CHECK(base.ck < 1e-9);
  CHECK(base.sd > 1e-3);
  const Worst hk = survey(assemble_from_monopole(F, m, "w"));
  CHECK(hk.ricci < 1e-9);
  CHECK(hk.asd < 1e-9);
  CHECK(hk.leg < 1e-9);
  CHECK(hk.f0 < 1e-9);
  CHECK(hk.base < 1e-9);
  // the residuals that do not depend on the gauge agree
  CHECK(base.sd > 0);
}

TEST_CASE("assembly from a non-solution is not selfdual") {
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  MonopoleData m = make_catalog_monopole("gibbons-hawking", {}, F);
  m.A[0] = Field::from_exprs({F.chart.parse("0.5*y/(2*sqrt(x^2+y^2+z^2)*(sqrt(x^2+y^2+z^2)+z))"),
                              F.chart.parse("-x/(2*sqrt(x^2+y^2+z^2)*(sqrt(x^2+y^2+z^2)+z))"), F.chart.parse("0")});
  const Worst w = survey(assemble_from_monopole(F, m), 5);
  CHECK(w.asd > 1e-4);
  CHECK(w.ck < 1e-9);
}

TEST_CASE("assembled metric has the block structure and closed form") {
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  const MonopoleData m = monopole_from_exprs(F, Variant::Abelian, {{"w", "1"}}, {0, 1});
  const Metric4Bundle M = assemble_from_monopole(F, m);
  REQUIRE(M.g.has_exprs());
  CHECK(M.g.exprs()[15] == "1/((1))^2");
  CHECK(M.g.exprs()[3] == "0");
  const Worst w = survey(M, 3);
  CHECK(w.ricci == 0.0);
  CHECK(w.f0 == 0.0);
  const auto j = jones_tod_extract_at(M, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  for (double v : j.omega) CHECK(v == 0.0);
}

TEST_CASE("Strachan metric and its complex structure") {
  const WeylStructure3 T = make_catalog_space("hypercr-toda", {{"h", "i"}});
  const MonopoleData m = make_catalog_monopole("strachan", {{"f", "1"}}, T);
  const Metric4Bundle M = assemble_from_monopole(T, m);
  const Worst w = survey(M);
  CHECK(w.asd < 1e-7);
  CHECK(w.f0 < 1e-7);
  CHECK(w.base < 1e-7);
  const Field dz = base_exprs(T, {"0", "0", "1"});
  const Field sheared = base_exprs(T, {"0.2", "0", "1"});
  double sheared_worst = 0.0;
  for (const auto& p : sample_points(M.chart, 10, 3)) {
    const auto c = complex_structure_checks_at(M, dz, p);
    CHECK(c.nijenhuis < 1e-7);
    CHECK(c.j_squared < 1e-12);
    sheared_worst = std::max(sheared_worst, complex_structure_checks_at(M, sheared, p).nijenhuis);
  }
  CHECK(sheared_worst > 1e-3);
}

TEST_CASE("hypercr-einstein metrics and the explicit family") {
  for (const std::string space : {"round-s3", "geodesic-symmetry"}) {
    CAPTURE(space);
    const Worst w = survey(hypercr_einstein_metric(make_catalog_space(space, {})));
    CHECK(w.einstein < 1e-7);
    CHECK(w.asd < 1e-7);
    CHECK(w.scal_mismatch < 1e-7);
  }
  for (const std::string h : {"i", "zeta^2 + i"}) {
    CAPTURE(h);
    const Metric4Bundle M = explicit_family_metric(h);
    CHECK(M.g.has_exprs());
    const Worst w = survey(M);
    CHECK(w.einstein < 1e-7);
    CHECK(w.asd < 1e-7);
    CHECK(w.base < 1e-7);
  }
  const Metric4Bundle M = explicit_family_metric("i");
  // H = 1 + i (h - conj h) t/|z+h|^2 at (0, 0, 1, 0.3) is 0.7
  const auto g = M.g.eval(std::vector<double>{0, 0, 1, 0.3}, 0);
  CHECK(g[15].value() == doctest::Approx(1.0 / (0.7 * 0.09)));
  CHECK(g[10].value() == doctest::Approx(0.7 / 0.09 + 0.09 / (0.7 * 0.09) * 1.0));
}

TEST_CASE("projective coordinate change maps hypercr-einstein to hitchin-lebrun") {
  for (const auto& [name, params] : std::vector<std::pair<std::string, Params>>{
           {"hypercr-toda", {{"h", "i"}}}, {"hypercr-toda", {{"h", "zeta^2 + i"}}}, {"round-s3", {}},
           {"geodesic-symmetry", {{"f", "1"}}}}) {
    CAPTURE(name);
    const WeylStructure3 W = make_catalog_space(name, params);
    const Metric4Bundle M = hypercr_einstein_metric(W);
    for (const auto& p : sample_points(M.chart, 10, 4)) CHECK(projective_change_agreement_at(W, p) < 1e-8);
  }
}

TEST_CASE("scalar-flat Kahler metrics from a shear-free congruence") {
  const WeylStructure3 G = make_catalog_space("geodesic-symmetry", {{"f", "1"}});
  const Field rho = base_exprs(G, {"1"});
  const Field Phi = base_exprs(G, {"0", "0", "0"});
  const Metric4Bundle M = sfk_metric(G, *G.congruence, rho, Phi, std::pair{0.1, 0.8});
  const Field Phi2 = base_exprs(G, {"0.1*y", "0", "0.1"});
  const Metric4Bundle P = sfk_metric(G, *G.congruence, rho, Phi2, std::pair{0.1, 0.8});
  double pert_scal = 0, pert_k = 0, pert_lin = 0;
  for (const auto& p : sample_points(M.chart, 10, 6)) {
    const auto e = einstein_selfdual_report_at(M, p);
    CHECK(std::abs(e.scal) < 1e-8);
    CHECK(complex_structure_checks_at(M, *G.congruence, p).kahler < 1e-8);
    CHECK(sfk_linear_residual_at(G, *G.congruence, rho, Phi, std::span<const double>(p).first(3)) < 1e-10);
    pert_scal = std::max(pert_scal, std::abs(einstein_selfdual_report_at(P, p).scal));
    pert_k = std::max(pert_k, complex_structure_checks_at(P, *G.congruence, p).kahler);
    pert_lin = std::max(pert_lin, sfk_linear_residual_at(G, *G.congruence, rho, Phi2, std::span<const double>(p).first(3)));
  }
  CHECK(pert_scal > 1e-4);
  CHECK(pert_k > 1e-4);
  CHECK(pert_lin > 1e-4);

  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  CHECK(sfk_linear_residual_at(F, *F.congruence, base_exprs(F, {"1"}), base_exprs(F, {"0", "0", "0"}),
                               std::vector<double>{0.1, 0.2, 0.3}) == 0.0);
  CHECK_THROWS_AS(sfk_metric(F, base_exprs(F, {"0", "0.3*x", "1"}), base_exprs(F, {"1"}), base_exprs(F, {"0", "0", "0"})),
                  DomainError);
}

TEST_CASE("conformal rescaling keeps the weightless statements") {
  const Metric4Bundle M = hitchin_lebrun_metric(make_catalog_space("round-s3", {}));
  Scope s = M.chart.scope;
  const Metric4Bundle R = conformal_rescale(M, Field::from_exprs({Expr::parse("0.3*x*t - 0.2*sin(y)", s)}));
  for (const auto& p : sample_points(M.chart, 5, 8)) {
    const auto a = einstein_selfdual_report_at(M, p), b = einstein_selfdual_report_at(R, p);
    CHECK(b.asd_weyl < 1e-7);
    CHECK(submersion_residuals_at(R, p).conformal_killing < 1e-9);
    CHECK(jones_tod_extract_at(R, p).f0_sd_residual < 1e-7);
    CHECK(jones_tod_extract_at(R, p).recovered_base_mismatch.value() < 1e-7);
    CHECK(b.einstein_residual > 1e-6);  // the rescaled metric is no longer Einstein
    CHECK(a.einstein_residual < 1e-7);
  }
}

TEST_CASE("custom bundles from expressions") {
  Scope s;
  s.coords = {"x", "y", "z", "t"};
  const Metric4Bundle M = bundle_from_exprs({"x", "y", "z", "t"},
                                            {"1/t^2", "0", "0", "0", "0", "1/t^2", "0", "0", "0", "0", "1/t^2", "0",
                                             "0", "0", "0", "1/t^2"},
                                            {{-1, 1}, {-1, 1}, {-1, 1}, {0.5, 1.5}}, 1, s);
  const auto e = einstein_selfdual_report_at(M, std::vector<double>{0.1, 0.2, 0.3, 0.7});
  CHECK(e.scal == doctest::Approx(-12.0));
  CHECK(e.einstein_residual < 1e-12);
  CHECK_THROWS_AS(bundle_from_exprs({"x", "y", "z", "t"}, std::vector<std::string>(16, "0"), {}, 1, s), UsageError);
  std::vector<std::string> asym(16, "0");
  asym[1] = "x";
  CHECK_THROWS_AS(bundle_from_exprs({"x", "y", "z", "t"}, asym, {{0, 1}, {0, 1}, {0, 1}, {0, 1}}, 1, s), UsageError);
}
