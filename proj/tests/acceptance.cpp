// Acceptance run: one line per criterion, tolerances fixed here. Exit status
// is the number of failed criteria (0 when everything passes).
#include <weylab/metrics4d.hpp>
#include <weylab/sampling.hpp>

#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace weylab;

namespace {

constexpr int kPoints = 20;

struct Space {
  std::string name;
  Params params;
};

const std::vector<Space> kEwSpaces{
    {"hypercr-toda", {{"h", "i"}}},
    {"hypercr-toda", {{"h", "zeta^2 + i"}}},
    {"geodesic-symmetry", {{"f", "1"}}},
    {"ward-toda", {{"V", "eta"}}},
    {"ward-toda", {{"V", "log(rho)"}}},
    {"ward-toda", {{"V", "(rho^2 + eta^2)^(-1/2)"}}},
    {"round-s3", {}},
    {"flat-r3", {}},
};

std::vector<WeylStructure3> ew_spaces() {
  std::vector<WeylStructure3> r;
  for (const auto& s : kEwSpaces) r.push_back(make_catalog_space(s.name, s.params));
  return r;
}

std::string label(const WeylStructure3& W) {
  std::string s = W.name;
  for (const auto& [k, v] : W.params) s += " " + k + "=" + v;
  return s;
}

/// Running maximum that remembers where it happened.
struct Max {
  double value = 0.0;
  std::string where;
  void add(double v, const std::string& w) {
    if (!(v <= value)) {
      value = v;
      where = w;
    }
  }
};

/// Running minimum, for detection experiments.
struct Min {
  double value = INFINITY;
  std::string where;
  void add(double v, const std::string& w) {
    if (v < value) {
      value = v;
      where = w;
    }
  }
};

struct Criterion {
  bool pass = true;
  std::ostringstream detail;
  // v <= tol for a residual, v >= tol for a detection
  void at_most(const char* what, const Max& m, double tol) {
    pass = pass && m.value <= tol;
    detail << " " << what << "=" << fmt(m.value) << (m.value <= tol ? "" : " (at " + m.where + ")") << " <= " << fmt(tol)
           << ";";
  }
  void at_least(const char* what, const Min& m, double tol) {
    pass = pass && m.value >= tol;
    detail << " " << what << "=" << fmt(m.value) << (m.value >= tol ? "" : " (at " + m.where + ")") << " >= " << fmt(tol)
           << ";";
  }
  static std::string fmt(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2e", v);
    return b;
  }
};

int failures = 0;

void run(int id, const char* title, const std::function<void(Criterion&)>& body) {
  Criterion c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail << " error: " << e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s %2d  %s:%s [%.1fs]\n", c.pass ? "PASS" : "FAIL", id, title, c.detail.str().c_str(), secs);
  std::fflush(stdout);
  if (!c.pass) ++failures;
}

std::vector<std::vector<double>> points(const Chart& c, std::uint64_t seed = 1) { return sample_points(c, kPoints, seed); }

struct Survey {
  Max einstein, asd, scal, ricci, ck, leg, f0, base;
};

Survey survey(const Metric4Bundle& M, const std::string& tag) {
  Survey s;
  for (const auto& p : points(M.chart)) {
    const auto e = einstein_selfdual_report_at(M, p);
    s.einstein.add(e.einstein_residual, tag);
    s.asd.add(e.asd_weyl, tag);
    s.scal.add(e.scal_mismatch.value_or(0.0), tag);
    s.ricci.add(e.ricci_norm, tag);
    const auto sub = submersion_residuals_at(M, p);
    s.ck.add(sub.conformal_killing, tag);
    s.leg.add(sub.legendrian, tag);
    const auto j = jones_tod_extract_at(M, p);
    s.f0.add(j.f0_sd_residual, tag);
    s.base.add(j.recovered_base_mismatch.value_or(0.0), tag);
  }
  return s;
}

Field base_field(const WeylStructure3& W, const std::vector<std::string>& src) {
  std::vector<Expr> e;
  for (const auto& s : src) e.push_back(W.chart.parse(s));
  return Field::from_exprs(e);
}

}  // namespace

int main() {
  std::printf("fiber orientation flag: %+d\n", kFiberOrientation);

  run(1, "Einstein-Weyl catalog and perturbations", [](Criterion& c) {
    Max ew;
    Min pert;
    for (const auto& W : ew_spaces()) {
      const WeylStructure3 P = perturb_omega(W, 0.1);
      double worst_p = 0.0;
      for (const auto& p : points(W.chart)) {
        ew.add(ew_residual_at(W, p), label(W));
        worst_p = std::max(worst_p, ew_residual_at(P, p));
      }
      pert.add(worst_p, label(W));
    }
    c.at_most("ew_residual", ew, 1e-7);
    c.at_least("perturbed", pert, 1e-4);
  });

  run(2, "hitchin-lebrun over flat R^3", [](Criterion& c) {
    const Survey s = survey(hitchin_lebrun_metric(make_catalog_space("flat-r3", {})), "flat-r3");
    c.at_most("einstein", s.einstein, 1e-8);
    c.at_most("asd_weyl", s.asd, 1e-8);
    c.at_most("|scal+12|", s.scal, 1e-8);
  });

  run(3, "hitchin-lebrun over round S^3 and ward-toda(log rho)", [](Criterion& c) {
    Max e, a, sc, l;
    for (const auto& W : {make_catalog_space("round-s3", {}), make_catalog_space("ward-toda", {{"V", "log(rho)"}})}) {
      const Survey s = survey(hitchin_lebrun_metric(W), label(W));
      e.add(s.einstein.value, label(W));
      a.add(s.asd.value, label(W));
      sc.add(s.scal.value, label(W));
      l.add(s.leg.value, label(W));
    }
    c.at_most("einstein", e, 1e-6);
    c.at_most("asd_weyl", a, 1e-6);
    c.at_most("scal_mismatch", sc, 1e-6);
    c.at_most("legendrian", l, 1e-6);
  });

  run(4, "canonical projective monopole on every catalog space", [](Criterion& c) {
    Max proj, sl2;
    for (const auto& W : ew_spaces()) {
      const MonopoleData m = canonical_projective_monopole(W);
      const SL2MonopoleData s = pack_sl2(m);
      for (const auto& p : points(W.chart)) {
        proj.add(max_residual(monopole_residual_at(W, m, p)), label(W));
        sl2.add(sl2_residual_at(W, s, p), label(W));
      }
    }
    c.at_most("projective", proj, 1e-7);
    c.at_most("sl2", sl2, 1e-7);
  });

  run(5, "explicit family h = zeta^2 + i and the projective coordinate change", [](Criterion& c) {
    const Survey s = survey(explicit_family_metric("zeta^2 + i"), "h = zeta^2 + i");
    c.at_most("einstein", s.einstein, 1e-7);
    c.at_most("asd_weyl", s.asd, 1e-7);
    Max agree;
    for (const auto& W : ew_spaces()) {
      if (!W.kappa) continue;
      for (const auto& p : points(hypercr_einstein_metric(W).chart)) agree.add(projective_change_agreement_at(W, p), label(W));
    }
    c.at_most("coordinate_change", agree, 1e-8);
  });

  run(6, "Gibbons-Hawking", [](Criterion& c) {
    const WeylStructure3 F = make_catalog_space("flat-r3", {});
    Max ab;
    for (const auto& [mass, cst] : std::vector<std::pair<std::string, std::string>>{{"1", "1"}, {"2", "0.5"}}) {
      const MonopoleData m = make_catalog_monopole("gibbons-hawking", {{"mass", mass}, {"constant", cst}}, F);
      for (const auto& p : points(monopole_base_chart(F, m))) ab.add(max_residual(monopole_residual_at(F, m, p)), "mass " + mass);
    }
    c.at_most("abelian", ab, 1e-9);
    const MonopoleData m = make_catalog_monopole("gibbons-hawking", {}, F);
    const Survey hk = survey(assemble_from_monopole(F, m, "w"), "gauge w");
    c.at_most("ricci", hk.ricci, 1e-7);
    c.at_most("asd_weyl", hk.asd, 1e-7);
    c.at_most("triholomorphic", hk.leg, 1e-7);
    // the flag is pinned: the opposite orientation sees the nonzero half
    Metric4Bundle flipped = assemble_from_monopole(F, m, "w");
    flipped.orientation = -flipped.orientation;
    Min other;
    for (const auto& p : points(flipped.chart)) other.add(einstein_selfdual_report_at(flipped, p).asd_weyl, "flipped");
    c.at_least("asd_weyl(flipped)", other, 1e-4);
  });

  run(7, "Strachan monopole and its complex structure", [](Criterion& c) {
    Max ab, asd, nij;
    Min sheared;
    for (const char* h : {"i", "zeta^2 + i"})
      for (const char* f : {"1", "2 - i"}) {
        const WeylStructure3 T = make_catalog_space("hypercr-toda", {{"h", h}});
        const MonopoleData m = make_catalog_monopole("strachan", {{"f", f}}, T);
        const std::string tag = std::string("h=") + h + " f=" + f;
        for (const auto& p : points(monopole_base_chart(T, m))) ab.add(max_residual(monopole_residual_at(T, m, p)), tag);
        const Metric4Bundle M = assemble_from_monopole(T, m);
        const Field dz = base_field(T, {"0", "0", "1"}), tilted = base_field(T, {"0.2", "0", "1"});
        double worst_sheared = 0.0;
        for (const auto& p : points(M.chart)) {
          asd.add(einstein_selfdual_report_at(M, p).asd_weyl, tag);
          nij.add(complex_structure_checks_at(M, dz, p).nijenhuis, tag);
          worst_sheared = std::max(worst_sheared, complex_structure_checks_at(M, tilted, p).nijenhuis);
        }
        sheared.add(worst_sheared, tag);
      }
    c.at_most("abelian", ab, 1e-8);
    c.at_most("asd_weyl", asd, 1e-7);
    c.at_most("nijenhuis(dz)", nij, 1e-7);
    c.at_least("nijenhuis(dz + 0.2dx)", sheared, 1e-3);
  });

  run(8, "scalar-flat Kahler from the geodesic-symmetry family", [](Criterion& c) {
    const WeylStructure3 G = make_catalog_space("geodesic-symmetry", {{"f", "1"}});
    const Field chi = *G.congruence, rho = base_field(G, {"1"});
    const Field Phi = base_field(G, {"0", "0", "0"}), Phi2 = base_field(G, {"0.1*y", "0", "0.1"});
    const Metric4Bundle M = sfk_metric(G, chi, rho, Phi), P = sfk_metric(G, chi, rho, Phi2);
    Max scal, kahler, lin;
    for (const auto& p : points(M.chart)) {
      scal.add(std::abs(einstein_selfdual_report_at(M, p).scal), "Phi = 0");
      kahler.add(complex_structure_checks_at(M, chi, p).kahler, "Phi = 0");
      lin.add(sfk_linear_residual_at(G, chi, rho, Phi, std::span<const double>(p).first(3)), "Phi = 0");
    }
    Max ps, pk, pl;
    for (const auto& p : points(P.chart)) {
      ps.add(std::abs(einstein_selfdual_report_at(P, p).scal), "perturbed");
      pk.add(complex_structure_checks_at(P, chi, p).kahler, "perturbed");
      pl.add(sfk_linear_residual_at(G, chi, rho, Phi2, std::span<const double>(p).first(3)), "perturbed");
    }
    c.at_most("|scal|", scal, 1e-6);
    c.at_most("kahler", kahler, 1e-6);
    c.at_most("linear", lin, 1e-7);
    c.at_least("perturbed |scal|", Min{ps.value, ps.where}, 1e-4);
    c.at_least("perturbed kahler", Min{pk.value, pk.where}, 1e-4);
    c.at_least("perturbed linear", Min{pl.value, pl.where}, 1e-4);
  });

  run(9, "roundtrip over every constructed bundle", [](Criterion& c) {
    std::vector<std::pair<std::string, Metric4Bundle>> bundles;
    const WeylStructure3 F = make_catalog_space("flat-r3", {});
    const MonopoleData gh = make_catalog_monopole("gibbons-hawking", {}, F);
    bundles.emplace_back("gibbons-hawking", assemble_from_monopole(F, gh));
    bundles.emplace_back("gibbons-hawking gauge w", assemble_from_monopole(F, gh, "w"));
    for (const char* h : {"i", "zeta^2 + i"}) {
      const WeylStructure3 T = make_catalog_space("hypercr-toda", {{"h", h}});
      bundles.emplace_back(std::string("strachan h=") + h, assemble_from_monopole(T, make_catalog_monopole("strachan", {}, T)));
      bundles.emplace_back(std::string("explicit-family h=") + h, explicit_family_metric(h));
    }
    for (const auto& W : ew_spaces()) {
      bundles.emplace_back("hitchin-lebrun " + label(W), hitchin_lebrun_metric(W));
      if (W.kappa) {
        bundles.emplace_back("hypercr-einstein " + label(W), hypercr_einstein_metric(W));
        bundles.emplace_back("hypercr-affine " + label(W), assemble_from_monopole(W, make_catalog_monopole("hypercr-affine", {}, W)));
      }
    }
    const WeylStructure3 S = make_catalog_space("round-s3", {});
    bundles.emplace_back("canonical round-s3", assemble_from_monopole(S, make_catalog_monopole("canonical", {{"t_hi", "0.9"}}, S)));
    const WeylStructure3 G = make_catalog_space("geodesic-symmetry", {{"f", "1"}});
    bundles.emplace_back("sfk", sfk_metric(G, *G.congruence, base_field(G, {"1"}), base_field(G, {"0", "0", "0"})));
    Max base, f0;
    for (const auto& [tag, M] : bundles) {
      const Survey s = survey(M, tag);
      base.add(s.base.value, s.base.where);
      f0.add(s.f0.value, s.f0.where);
    }
    c.detail << " bundles=" << bundles.size() << ";";
    c.at_most("base_mismatch", base, 1e-7);
    c.at_most("f0_sd", f0, 1e-7);
  });

  run(10, "ansatz reductions on non-solutions", [](Criterion& c) {
    Max red;
    Min res;
    for (const auto& W : ew_spaces()) {
      const auto& x = W.chart.coords;
      const std::string a = x[0], b = x[1], z = x[2];
      const MonopoleData affine = monopole_from_exprs(
          W, Variant::Affine,
          {{"w0", "1 + " + a + "*" + b}, {"w1", "sin(" + z + ") - " + a}, {"A0_" + a, b + "*" + z},
           {"A0_" + z, "exp(" + a + ")"}, {"A1_" + b, "cos(" + a + " + " + z + ")"}},
          {0, 1});
      const MonopoleData projective = monopole_from_exprs(
          W, Variant::Projective,
          {{"w0", "2 + " + b}, {"w1", a + "^2"}, {"w2", "sin(" + a + "*" + z + ")"}, {"A0_" + b, z},
           {"A1_" + a, "exp(-" + b + ")"}, {"A2_" + z, a + "*" + b}, {"A2_" + a, "0.5"}},
          {0, 1});
      for (const auto& p : points(W.chart)) {
        for (const auto* m : {&affine, &projective}) {
          red.add(ansatz_reduction_check(W, *m, p), label(W));
          res.add(max_residual(monopole_residual_at(W, *m, p)), label(W));
        }
      }
    }
    c.at_most("reduction", red, 1e-10);
    c.at_least("equation residual", res, 1e-4);
  });

  run(11, "engine properties", [](Criterion& c) {
    // jets against finite differences, orders <= 3
    Scope s;
    s.coords = {"x", "y", "z"};
    const Expr e = Expr::parse("exp(sin(x*y) + z)/sqrt(2 + x^2 + cosh(z)) + log(3 + y*z)*atan(x - z)", s);
    const Field f = Field::from_exprs({e});
    oracle::Rng rng(5);
    Max fd;
    for (int trial = 0; trial < kPoints; ++trial) {
      const std::vector<double> p{rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
      const RealJet j = f.eval1(p, 3);
      oracle::Fn fn = [&](const std::vector<double>& q) { return e.value_at(q); };
      for (std::size_t idx = 0; idx < j.size(); ++idx) {
        const auto& m = j.tables().multi[idx];
        const double ref = oracle::fd_derivative_rich(fn, p, m, oracle::fd_step(m[0] + m[1] + m[2]));
        fd.add(oracle::rel_err(derivative(j, std::span<const int>(m)), ref), "trial " + std::to_string(trial));
      }
    }
    c.at_most("jet_vs_fd", fd, 1e-6);

    // Weyl tensor (1,3) under g -> exp(2f) g, relative to its size
    Scope s4;
    s4.coords = {"x", "y", "z", "t"};
    std::vector<Expr> gc;
    for (const char* src : {"2 + sin(x*t)", "0.1*y", "0", "0", "0.1*y", "1 + x^2", "0", "0", "0", "0", "exp(y*z)",
                            "0.05*x", "0", "0", "0.05*x", "1.5 + cos(y)"})
      gc.push_back(Expr::parse(src, s4));
    const Field gf = Field::from_exprs(gc);
    const Field ef = Field::from_exprs({Expr::parse("exp(2*(0.3*x*y - 0.2*sin(z) + 0.1*t^2))", s4)});
    Max conf;
    for (int trial = 0; trial < kPoints; ++trial) {
      std::vector<double> p(4);
      for (auto& v : p) v = rng.uniform(-0.5, 0.5);
      const MetricJet g = metric_at(gf, p, 2);
      JetVec scaled = g.g;
      const RealJet ex = ef.eval1(p, 2);
      for (auto& v : scaled) v = ex * v;
      const MetricJet g2 = metric_at(scaled, 4);
      const JetVec W1 = weyl_tensor(riemann(levi_civita(g)), g), W2 = weyl_tensor(riemann(levi_civita(g2)), g2);
      double dev = 0, scale = 0;
      for (int a = 0; a < 4; ++a)
        for (int rest = 0; rest < 64; ++rest) {
          double u1 = 0, u2 = 0;
          for (int m = 0; m < 4; ++m) {
            u1 += g.up(a, m).value() * W1[m * 64 + rest].value();
            u2 += g2.up(a, m).value() * W2[m * 64 + rest].value();
          }
          dev = std::max(dev, std::abs(u1 - u2));
          scale = std::max(scale, std::abs(u1));
        }
      conf.add(dev / std::max(1.0, scale), "trial " + std::to_string(trial));
    }
    c.at_most("weyl_conformal", conf, 1e-8);

    // Einstein-Weyl residual under a gauge change: zero stays zero, nonzero scales by exp(-2f)
    const Field gauge = Field::from_exprs({Expr::parse("0.3*sin(x + 2*y) - 0.2*z^2 + 0.1*x*z", s)});
    Max cov, hyp;
    for (const auto& W : ew_spaces()) {
      Scope sw = W.chart.scope;
      sw.coords = W.chart.coords;
      const std::string fsrc = "0.3*sin(" + W.chart.coords[0] + " + 2*" + W.chart.coords[1] + ") - 0.2*" +
                               W.chart.coords[2] + "^2";
      const Field fw = Field::from_exprs({Expr::parse(fsrc, sw)});
      const WeylStructure3 G = gauge_transform(W, fw), P = perturb_omega(W, 0.1), PG = gauge_transform(P, fw);
      for (const auto& p : points(W.chart)) {
        cov.add(ew_residual_at(G, p), label(W));
        const double k = std::exp(-2.0 * fw.eval1(p, 0).value());
        cov.add(std::abs(ew_residual_at(PG, p) - k * ew_residual_at(P, p)), label(W) + " perturbed");
        if (W.kappa) {
          const auto [dk, sq] = hypercr_identities_at(W, p);
          hyp.add(std::max(dk, sq), label(W));
        }
      }
    }
    (void)gauge;
    c.at_most("ew_gauge", cov, 1e-8);
    c.at_most("hypercr_identities", hyp, 1e-7);
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
