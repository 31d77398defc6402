#include <doctest.h>
#include <weylab/monopole.hpp>
#include <weylab/sampling.hpp>

#include <cmath>

using namespace weylab;

namespace {

std::vector<std::vector<double>> with_t(const std::vector<std::vector<double>>& pts, double lo, double hi) {
  std::vector<std::vector<double>> r;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto p = pts[i];
    p.push_back(lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(pts.size()));
    r.push_back(p);
  }
  return r;
}

const std::vector<std::pair<std::string, Params>> kSpaces{
    {"flat-r3", {}},
    {"round-s3", {}},
    {"hypercr-toda", {{"h", "i"}}},
    {"hypercr-toda", {{"h", "zeta^2 + i"}}},
    {"geodesic-symmetry", {{"f", "1"}}},
    {"ward-toda", {{"V", "eta"}}},
    {"ward-toda", {{"V", "log(rho)"}}},
    {"ward-toda", {{"V", "(rho^2 + eta^2)^(-1/2)"}}},
};

}  // namespace

TEST_CASE("Gibbons-Hawking abelian monopole") {
  const WeylStructure3 W = make_catalog_space("flat-r3", {});
  const MonopoleData m = make_catalog_monopole("gibbons-hawking", {}, W);
  CHECK(m.variant == Variant::Abelian);
  const Chart c = monopole_base_chart(W, m);
  for (const auto& p : sample_points(c, 20, 1)) {
    CHECK(max_residual(monopole_residual_at(W, m, p)) < 1e-9);
    CHECK(p[2] > 0.0);  // the sample box avoids the Dirac string
  }
  const std::vector<double> p{0.0, 0.0, 0.5};
  CHECK(m.w[0].eval1(p, 0).value() == doctest::Approx(2.0));

  MonopoleData bad = m;
  bad.A[0] = Field::from_exprs({W.chart.parse("0"), W.chart.parse("0"), W.chart.parse("0.1*x")});
  CHECK(max_residual(monopole_residual_at(W, bad, std::vector<double>{0.3, 0.2, 0.6})) > 1e-4);
}

TEST_CASE("Strachan monopole on hyperCR-Toda spaces") {
  for (const std::string h : {"i", "zeta^2 + i", "2*zeta + 0.5*i"})
    for (const std::string f : {"1", "2 - i", "0.5*i + 3"}) {
      CAPTURE(h);
      CAPTURE(f);
      const WeylStructure3 W = make_catalog_space("hypercr-toda", {{"h", h}});
      const MonopoleData m = make_catalog_monopole("strachan", {{"f", f}}, W);
      for (const auto& p : sample_points(monopole_base_chart(W, m), 20, 4))
        CHECK(max_residual(monopole_residual_at(W, m, p)) < 1e-8);
    }
  const WeylStructure3 W0 = make_catalog_space("hypercr-toda", {{"h", "0"}});
  const MonopoleData m0 = make_catalog_monopole("strachan", {}, W0);
  const std::vector<double> p{0.1, -0.2, 2.0};
  CHECK(m0.w[0].eval1(p, 0).value() == doctest::Approx(0.5));
  CHECK(std::abs(m0.A[0].eval(p, 0)[2].value()) < 1e-15);
}

TEST_CASE("trivial general monopole on exact bases") {
  for (const char* s : {"flat-r3", "round-s3"}) {
    const WeylStructure3 W = make_catalog_space(s, {});
    const MonopoleData m = monopole_from_exprs(W, Variant::General, {{"w", "1"}}, {0, 1});
    for (const auto& p : with_t(sample_points(W.chart, 5, 1), 0, 1))
      CHECK(monopole_residual_at(W, m, p).at("general") == 0.0);
  }
}

TEST_CASE("canonical projective monopole satisfies the projective equations") {
  for (const auto& [name, params] : kSpaces) {
    CAPTURE(name);
    const WeylStructure3 W = make_catalog_space(name, params);
    const MonopoleData m = canonical_projective_monopole(W);
    const SL2MonopoleData s = pack_sl2(m);
    for (const auto& p : sample_points(W.chart, 20, 9)) {
      CHECK(max_residual(monopole_residual_at(W, m, p)) < 1e-7);
      CHECK(sl2_residual_at(W, s, p) < 1e-7);
    }
  }
  const std::vector<double> p{0.3, -0.1, 0.2};
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  const MonopoleData mf = canonical_projective_monopole(F);
  CHECK(mf.w[2].eval1(p, 0).value() == 0.0);
  for (const auto& c : mf.A[2].eval(p, 0)) CHECK(c.value() == 0.0);
  const WeylStructure3 S = make_catalog_space("round-s3", {});
  CHECK(canonical_projective_monopole(S).w[2].eval1(p, 0).value() == doctest::Approx(-1.0));
}

TEST_CASE("perturbed Weyl structure breaks the canonical monopole") {
  const WeylStructure3 W = perturb_omega(make_catalog_space("hypercr-toda", {{"h", "i"}}), 0.1);
  const MonopoleData m = canonical_projective_monopole(W);
  double worst = 0.0;
  for (const auto& p : sample_points(W.chart, 5, 9)) worst = std::max(worst, max_residual(monopole_residual_at(W, m, p)));
  CHECK(worst > 1e-4);
}

TEST_CASE("affine monopole from a known twist") {
  for (const auto& [name, params] : kSpaces) {
    const WeylStructure3 W = make_catalog_space(name, params);
    if (!W.kappa) continue;
    CAPTURE(name);
    const MonopoleData m = make_catalog_monopole("hypercr-affine", {}, W);
    const MonopoleData g = as_general(m);
    REQUIRE(g.w[0].has_exprs());
    const auto pts = sample_points(W.chart, 20, 6);
    for (const auto& p : pts) CHECK(max_residual(monopole_residual_at(W, m, p)) < 1e-8);
    for (const auto& p : with_t(pts, m.t_domain.first, m.t_domain.second))
      CHECK(monopole_residual_at(W, g, p).at("general") < 1e-8);
  }
  const WeylStructure3 G = make_catalog_space("geodesic-symmetry", {{"f", "1"}});
  const MonopoleData m = make_catalog_monopole("hypercr-affine", {}, G);
  const std::vector<double> p{0.2, 0.3, 0.4};
  CHECK(m.w[1].eval1(p, 0).value() == doctest::Approx(-1.0));
}

TEST_CASE("t-reparametrization maps solutions to solutions") {
  Scope s;
  s.coords = {"x", "y", "z", "t"};
  const std::vector<std::string> maps{"t + 0.3*t^2 + 0.1*x*t", "(1 + 0.2*x^2)*t + 0.3*sin(y)", "exp(0.5*t) + z",
                                      "2*t - 0.1*y*z"};
  for (const auto& [name, params] : kSpaces) {
    const WeylStructure3 W = make_catalog_space(name, params);
    std::vector<MonopoleData> sols{as_general(canonical_projective_monopole(W))};
    if (W.kappa) sols.push_back(as_general(make_catalog_monopole("hypercr-affine", {}, W)));
    if (name == "flat-r3") sols.push_back(as_general(make_catalog_monopole("gibbons-hawking", {}, W)));
    // the box must keep the reparametrized t inside the data's domain; polynomial data is fine anywhere
    const auto pts = with_t(sample_points(name == "flat-r3" ? monopole_base_chart(W, make_catalog_monopole("gibbons-hawking", {}, W)) : W.chart, 5, 2), 0.1, 0.3);
    for (const auto& m : sols)
      for (const auto& f : maps) {
        CAPTURE(name);
        CAPTURE(f);
        const MonopoleData r = reparametrize(m, Field::from_exprs({Expr::parse(f, s)}));
        for (const auto& p : pts) CHECK(monopole_residual_at(W, r, p).at("general") < 1e-8);
      }
  }
}

TEST_CASE("ansatz reductions are coefficient identities") {
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  const MonopoleData affine =
      monopole_from_exprs(F, Variant::Affine,
                          {{"w0", "1 + x*y"}, {"w1", "sin(z) - x"}, {"A0_x", "y*z"}, {"A0_z", "exp(x)"},
                           {"A1_y", "cos(x + z)"}, {"A1_x", "x^2"}},
                          {0, 1});
  const WeylStructure3 S = make_catalog_space("round-s3", {});
  const MonopoleData proj =
      monopole_from_exprs(S, Variant::Projective,
                          {{"w0", "1 + x*y"}, {"w1", "sin(z)"}, {"w2", "x^2 - y"}, {"A0_x", "y*z"}, {"A1_y", "cos(x)"},
                           {"A2_z", "x*y*z"}, {"A2_x", "exp(y)"}, {"A1_z", "0.3"}},
                          {0, 1});
  const WeylStructure3 T = make_catalog_space("hypercr-toda", {{"h", "zeta^2 + i"}});
  const MonopoleData proj_t = monopole_from_exprs(
      T, Variant::Projective, {{"w0", "z"}, {"w1", "x - y"}, {"w2", "z^2"}, {"A0_y", "x*z"}, {"A2_x", "y"}}, {0, 1});
  for (const auto& p : sample_points(F.chart, 10, 3)) {
    CHECK(max_residual(monopole_residual_at(F, affine, p)) > 1e-2);
    CHECK(ansatz_reduction_check(F, affine, p) < 1e-10);
    CHECK(ansatz_reduction_check(S, proj, p) < 1e-10);
  }
  for (const auto& p : sample_points(T.chart, 10, 3)) CHECK(ansatz_reduction_check(T, proj_t, p) < 1e-10);
  const MonopoleData zero = monopole_from_exprs(S, Variant::Projective, {{"w0", "0"}, {"w1", "0"}, {"w2", "0"}}, {0, 1});
  CHECK(ansatz_reduction_check(S, zero, std::vector<double>{0.1, 0.2, 0.3}) == 0.0);
}

TEST_CASE("SL(2) packing reproduces the projective residuals") {
  const WeylStructure3 W = make_catalog_space("hypercr-toda", {{"h", "i"}});
  const MonopoleData m = monopole_from_exprs(
      W, Variant::Projective,
      {{"w0", "1 + x*y"}, {"w1", "sin(z)"}, {"w2", "x^2 - y"}, {"A0_x", "y*z"}, {"A1_y", "cos(x)"}, {"A2_z", "x*y*z"}},
      {0, 1});
  const SL2MonopoleData s = pack_sl2(m);
  for (const auto& p : sample_points(W.chart, 5, 8)) {
    const auto R = sl2_residual_forms(W, s, p);
    // residual forms for the three projective equations, rebuilt from the norms' inputs
    const auto norms = monopole_residual_at(W, m, p);
    const MetricJet g0 = metric_at(W.g, p, 0);
    CHECK(norm(R[1], g0) == doctest::Approx(norms.at("projective_t0")).epsilon(1e-12));
    CHECK(norm(R[0], g0) == doctest::Approx(norms.at("projective_t1")).epsilon(1e-12));
    CHECK(norm(R[3], g0) == doctest::Approx(norms.at("projective_t1")).epsilon(1e-12));
    CHECK(norm(R[2], g0) == doctest::Approx(norms.at("projective_t2")).epsilon(1e-12));
    // trace-free: the diagonal entries are opposite
    CHECK((R[0] + R[3]).max_abs() < 1e-12);
  }
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  const MonopoleData zero = monopole_from_exprs(F, Variant::Projective, {{"w0", "0"}, {"w1", "0"}, {"w2", "0"}}, {0, 1});
  CHECK(sl2_residual_at(F, pack_sl2(zero), std::vector<double>{0.1, 0.2, 0.3}) == 0.0);
}

TEST_CASE("monopole catalog and input validation") {
  const WeylStructure3 F = make_catalog_space("flat-r3", {});
  const WeylStructure3 V = make_catalog_space("ward-toda", {});
  const WeylStructure3 T = make_catalog_space("hypercr-toda", {});
  CHECK_THROWS_AS(make_catalog_monopole("strachan", {}, F), UsageError);
  CHECK_THROWS_AS(make_catalog_monopole("gibbons-hawking", {}, T), UsageError);
  CHECK_THROWS_AS(make_catalog_monopole("hypercr-affine", {}, V), UsageError);
  CHECK_THROWS_AS(make_catalog_monopole("strachan", {{"f", "zeta"}}, T), UsageError);
  CHECK_THROWS_AS(make_catalog_monopole("gibbons-hawking", {{"charge", "1"}}, F), UsageError);
  CHECK_THROWS_AS(make_catalog_monopole("nothing", {}, F), UsageError);
  CHECK_THROWS_AS(monopole_from_exprs(F, Variant::Affine, {{"w0", "1"}}, {0, 1}), UsageError);
  CHECK_THROWS_AS(monopole_from_exprs(F, Variant::Abelian, {{"w", "1"}, {"B_x", "1"}}, {0, 1}), UsageError);
  CHECK_THROWS_AS(monopole_from_exprs(F, Variant::Abelian, {{"w", "t"}}, {0, 1}), Error);
  CHECK(variant_from_string(to_string(Variant::Projective)) == Variant::Projective);
  CHECK(field_names(Variant::Affine, {"x", "y", "z"}).size() == 8);
  CHECK(catalog_monopoles().size() == 4);
  CHECK(make_catalog_monopole("canonical", {{"t_hi", "0.5"}}, make_catalog_space("round-s3", {})).t_domain.second == 0.5);
}
