#include <doctest.h>
#include <weylab/einstein_weyl.hpp>
#include <weylab/sampling.hpp>

#include <cmath>

using namespace weylab;

namespace {

struct Case {
  std::string space;
  Params params;
};

const std::vector<Case> kEwCases{
    {"flat-r3", {}},
    {"round-s3", {}},
    {"round-s3", {{"radius", "2.5"}}},
    {"hypercr-toda", {{"h", "i"}}},
    {"hypercr-toda", {{"h", "zeta^2 + i"}}},
    {"geodesic-symmetry", {{"f", "1"}}},
    {"geodesic-symmetry", {{"f", "1 + 0.5*i"}}},
    {"ward-toda", {{"V", "eta"}}},
    {"ward-toda", {{"V", "log(rho)"}}},
    {"ward-toda", {{"V", "(rho^2 + eta^2)^(-1/2)"}}},
};

std::string label(const Case& c) {
  std::string s = c.space;
  for (const auto& [k, v] : c.params) s += " " + k + "=" + v;
  return s;
}

}  // namespace

TEST_CASE("catalog spaces are Einstein-Weyl and perturbations are detected") {
  for (const auto& c : kEwCases) {
    CAPTURE(label(c));
    const WeylStructure3 W = make_catalog_space(c.space, c.params);
    const WeylStructure3 P = perturb_omega(W, 0.1);
    double worst = 0.0, perturbed = 0.0;
    for (const auto& p : sample_points(W.chart, 20, 11)) {
      worst = std::max(worst, ew_residual_at(W, p));
      perturbed = std::max(perturbed, ew_residual_at(P, p));
    }
    CHECK(worst < 1e-7);
    CHECK(perturbed > 1e-4);
  }
}

TEST_CASE("Einstein-Weyl residual is gauge covariant") {
  // The symmetric Ricci tensor of the Weyl connection is gauge invariant, so
  // its trace-free norm scales by exp(-2f) under g -> exp(2f) g.
  Scope s;
  s.coords = {"x", "y", "z"};
  const Field f = Field::from_exprs({Expr::parse("0.3*sin(x + 2*y) - 0.2*z^2 + 0.1*x*z", s)});
  for (const auto& c : kEwCases) {
    CAPTURE(label(c));
    const WeylStructure3 W = make_catalog_space(c.space, c.params);
    const WeylStructure3 G = gauge_transform(W, f);
    const WeylStructure3 P = perturb_omega(W, 0.1);
    const WeylStructure3 PG = gauge_transform(P, f);
    for (const auto& p : sample_points(W.chart, 5, 3)) {
      CHECK(ew_residual_at(G, p) < 1e-8);
      const double scale = std::exp(-2.0 * f.eval1(p, 0).value());
      CHECK(std::abs(ew_residual_at(PG, p) - scale * ew_residual_at(P, p)) < 1e-8);
    }
  }
}

TEST_CASE("gauge transform keeps closed-form metrics printable") {
  const WeylStructure3 W = make_catalog_space("round-s3", {});
  Scope s;
  s.coords = {"x", "y", "z"};
  const WeylStructure3 G = gauge_transform(W, Field::from_exprs({Expr::parse("x", s)}));
  REQUIRE(G.g.has_exprs());
  CHECK(G.g.exprs()[0].find("exp(2*(x))") != std::string::npos);
  // kappa has weight -1
  const std::vector<double> p{0.4, 0.1, -0.2};
  CHECK(G.kappa->eval1(p, 0).value() == doctest::Approx(std::exp(-0.4)));
}

TEST_CASE("hyperCR identities on spaces with a known twist") {
  for (const auto& c : kEwCases) {
    const WeylStructure3 W = make_catalog_space(c.space, c.params);
    if (!W.kappa) continue;
    CAPTURE(label(c));
    for (const auto& p : sample_points(W.chart, 20, 5)) {
      const auto [dk, sq] = hypercr_identities_at(W, p);
      CHECK(dk < 1e-7);
      CHECK(sq < 1e-7);
    }
  }
  const WeylStructure3 S = make_catalog_space("round-s3", {{"radius", "2"}});
  const std::vector<double> p{0.1, 0.2, 0.3};
  CHECK(weyl_scal(base_jets(S, p, 2)).value() == doctest::Approx(1.5));
}

TEST_CASE("the wrong orientation breaks the twist identity") {
  WeylStructure3 W = make_catalog_space("hypercr-toda", {{"h", "zeta^2 + i"}});
  W.orientation = -1;
  const std::vector<double> p{0.2, -0.3, 0.8};
  CHECK(hypercr_identities_at(W, p).first > 1e-3);
}

TEST_CASE("shear-free geodesic congruences") {
  SUBCASE("geodesic-symmetry, chi = dpsi + theta") {
    const WeylStructure3 W = make_catalog_space("geodesic-symmetry", {{"f", "1"}});
    for (const auto& p : sample_points(W.chart, 10, 2)) {
      const SFGCReport r = sfgc_analyze_at(W, *W.congruence, p);
      CHECK(std::abs(r.tau) < 1e-12);
      CHECK(r.kappa == doctest::Approx(0.5));
      CHECK(r.shear_residual < 1e-10);
      CHECK(r.reconstruction_error < 1e-12);
      CHECK(kappa_monopole_residual_at(W, *W.congruence, p) < 1e-10);
    }
  }
  SUBCASE("hypercr-toda, chi = dz") {
    const WeylStructure3 W = make_catalog_space("hypercr-toda", {{"h", "i"}});
    for (const auto& p : sample_points(W.chart, 10, 2)) {
      const SFGCReport r = sfgc_analyze_at(W, *W.congruence, p);
      CHECK(std::abs(r.kappa) < 1e-12);
      CHECK(r.shear_residual < 1e-10);
      CHECK(kappa_monopole_residual_at(W, *W.congruence, p) < 1e-10);
    }
  }
  SUBCASE("sheared congruence is detected") {
    const WeylStructure3 W = make_catalog_space("flat-r3", {});
    Scope s;
    s.coords = {"x", "y", "z"};
    const Field chi = Field::from_exprs({Expr::parse("0", s), Expr::parse("0.3*x", s), Expr::parse("1", s)});
    const std::vector<double> p{0.2, 0.1, 0.4};
    const SFGCReport r = sfgc_analyze_at(W, chi, p);
    CHECK(r.shear_residual > 1e-3);
    CHECK(r.reconstruction_error < 1e-12);
  }
}

TEST_CASE("axially harmonic functions") {
  Scope s;
  s.coords = {"rho", "eta", "psi"};
  const std::vector<double> p{0.8, 0.3, 0.5};
  for (const char* v : {"eta", "log(rho)", "(rho^2 + eta^2)^(-1/2)", "rho^2 - 2*eta^2"})
    CHECK(axial_harmonic_residual_at(Expr::parse(v, s), p) < 1e-12);
  CHECK(axial_harmonic_residual_at(Expr::parse("rho^2", s), p) > 0.1);
}

TEST_CASE("construction prechecks reject bad inputs") {
  CHECK_THROWS_AS(make_catalog_space("hypercr-toda", {{"h", "conj(zeta)"}}), UsageError);
  CHECK_THROWS_AS(make_catalog_space("hypercr-toda", {{"h", "z"}}), Error);
  CHECK_THROWS_AS(make_catalog_space("ward-toda", {{"V", "rho^2"}}), UsageError);
  CHECK_THROWS_AS(make_catalog_space("geodesic-symmetry", {{"f", "1"}, {"theta_x", "y"}}), UsageError);
  CHECK_THROWS_AS(make_catalog_space("round-s3", {{"radius", "-1"}}), UsageError);
  CHECK_THROWS_AS(make_catalog_space("flat-r3", {{"bogus", "1"}}), UsageError);
  CHECK_THROWS_AS(make_catalog_space("nowhere", {}), UsageError);
}

TEST_CASE("sampling honors the box, the margin and the seed") {
  const WeylStructure3 W = make_catalog_space("hypercr-toda", {{"h", "i"}});
  const auto a = sample_points(W.chart, 20, 7), b = sample_points(W.chart, 20, 7);
  CHECK(a == b);
  CHECK(a != sample_points(W.chart, 20, 8));
  for (const auto& p : a) {
    CHECK(W.chart.admissible(p));
    CHECK(W.chart.exclusion_clearance(p) > W.chart.margin);
  }
  Chart empty = W.chart;
  empty.margin = 1e6;
  CHECK_THROWS_AS(sample_points(empty, 3, 1, 50), DomainError);
}
