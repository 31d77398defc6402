// SPDX-License-Identifier: Apache-2.0
#include <weylab/monopole.hpp>

#include "params.hpp"

#include <algorithm>
#include <cmath>

namespace weylab {

using detail::param;
using detail::reject_unknown;
using detail::wrap;

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Abelian: return "abelian";
    case Variant::Affine: return "affine";
    case Variant::Projective: return "projective";
    case Variant::General: return "general";
  }
  return "?";
}

Variant variant_from_string(const std::string& s) {
  if (s == "abelian") return Variant::Abelian;
  if (s == "affine") return Variant::Affine;
  if (s == "projective") return Variant::Projective;
  if (s == "general") return Variant::General;
  throw UsageError("unknown monopole variant '" + s + "'");
}

namespace {

int slot_count(Variant v) {
  switch (v) {
    case Variant::Affine: return 2;
    case Variant::Projective: return 3;
    default: return 1;
  }
}

std::string slot_suffix(Variant v, int j) { return slot_count(v) == 1 ? "" : std::to_string(j); }

Field scaled(const Field& f, double s) {
  std::vector<std::string> ex;
  if (f.has_exprs())
    for (const auto& e : f.exprs()) ex.push_back(Expr::number(s).str() + "*(" + e + ")");
  return Field(
      f.domain_dim(), f.size(),
      [f, s](std::span<const double> p, int k) {
        JetVec v = f.eval(p, k);
        for (auto& c : v) c *= s;
        return v;
      },
      f.depth(), ex);
}

JetVec tr(const JetVec& v, int k) { return truncate(v, k); }
RealJet tr(const RealJet& v, int k) { return truncate(v, k); }

JetVec times(const JetVec& a, const RealJet& f) {
  JetVec r;
  for (const auto& c : a) r.push_back(c * f);
  return r;
}

JetVec plus(JetVec a, const JetVec& b, double s = 1.0) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

FormJet d1(const JetVec& A) { return exterior_derivative(FormJet::one_form(A)); }
FormJet wedge1(const JetVec& a, const JetVec& b) { return wedge(FormJet::one_form(a), FormJet::one_form(b)); }

// Inputs of order K evaluated with K >= 1; every residual has order K - 1.
struct Slots {
  std::vector<RealJet> w;
  std::vector<JetVec> A;
};

Slots eval_slots(const MonopoleData& m, std::span<const double> p, int K) {
  Slots s;
  for (const auto& f : m.w) s.w.push_back(f.eval1(p, K));
  for (const auto& f : m.A) s.A.push_back(f.eval(p, K));
  return s;
}

std::vector<std::pair<std::string, FormJet>> residual_forms(const BaseJets& b, const MonopoleData& m, const Slots& s,
                                                            int orientation) {
  const int k = b.order() - 1;
  const MetricJet g = b.g.truncated(k);
  auto D = [&](const RealJet& w) { return weyl_derivative(w, -1, b.omega, 3); };
  auto st = [&](const JetVec& X) { return star(FormJet::one_form(X), g, orientation); };
  auto W = [&](int j) { return tr(s.w[j], k); };
  auto A = [&](int j) { return tr(s.A[j], k); };
  std::vector<std::pair<std::string, FormJet>> r;
  switch (m.variant) {
    case Variant::Abelian:
      r.emplace_back("abelian", st(D(s.w[0])) - d1(s.A[0]));
      break;
    case Variant::Affine:
      r.emplace_back("affine_t0", st(plus(plus(D(s.w[0]), times(A(1), W(0))), times(A(0), W(1)), -1.0)) -
                                      (d1(s.A[0]) + wedge1(A(1), A(0))));
      r.emplace_back("affine_t1", st(D(s.w[1])) - d1(s.A[1]));
      break;
    case Variant::Projective: {
      r.emplace_back("projective_t0", st(plus(plus(D(s.w[0]), times(A(1), W(0))), times(A(0), W(1)), -1.0)) -
                                          (d1(s.A[0]) + wedge1(A(1), A(0))));
      JetVec x1 = D(s.w[1]);
      for (auto& c : x1) c *= 0.5;
      r.emplace_back("projective_t1", st(plus(plus(x1, times(A(2), W(0))), times(A(0), W(2)), -1.0)) -
                                          (0.5 * d1(s.A[1]) + wedge1(A(2), A(0))));
      r.emplace_back("projective_t2", st(plus(plus(D(s.w[2]), times(A(2), W(1))), times(A(1), W(2)), -1.0)) -
                                          (d1(s.A[2]) + wedge1(A(2), A(1))));
      break;
    }
    case Variant::General:
      throw UsageError("general monopole data needs a point with t");
  }
  return r;
}

BaseJets widened_base(const BaseJets& b, int n_vars) {
  BaseJets r;
  r.g = metric_at(widen(b.g.g, n_vars), b.g.dim);
  r.omega = widen(b.omega, n_vars);
  return r;
}

void check_shape(const MonopoleData& m) {
  const std::size_t n = slot_count(m.variant);
  if (m.w.size() != n || m.A.size() != n) throw UsageError("monopole data does not match its variant");
}

}  // namespace

Chart monopole_base_chart(const WeylStructure3& W, const MonopoleData& m) {
  Chart c = W.chart;
  if (!m.base_box.empty()) c.box = m.base_box;
  for (const auto& e : m.exclusions) c.exclusions.push_back(e);
  return c;
}

std::vector<std::string> field_names(Variant v, const std::vector<std::string>& coords) {
  std::vector<std::string> r;
  for (int j = 0; j < slot_count(v); ++j) {
    r.push_back("w" + slot_suffix(v, j));
    for (const auto& c : coords) r.push_back("A" + slot_suffix(v, j) + "_" + c);
  }
  return r;
}

std::map<std::string, std::string> MonopoleData::field_exprs(const Chart& base) const {
  std::map<std::string, std::string> r;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const std::string sfx = slot_suffix(variant, static_cast<int>(j));
    r["w" + sfx] = w[j].has_exprs() ? w[j].exprs()[0] : "";
    for (int i = 0; i < base.dim(); ++i)
      r["A" + sfx + "_" + base.coords[i]] = A[j].has_exprs() ? A[j].exprs()[i] : "";
  }
  return r;
}

MonopoleData monopole_from_exprs(const WeylStructure3& W, Variant v, const std::map<std::string, std::string>& fields,
                                 std::pair<double, double> t_domain) {
  MonopoleData m;
  m.variant = v;
  m.name = "custom";
  m.t_domain = t_domain;
  Scope sc = W.chart.scope;
  if (v == Variant::General) sc.coords.push_back("t");
  const auto names = field_names(v, W.chart.coords);
  for (const auto& [k, val] : fields)
    if (std::find(names.begin(), names.end(), k) == names.end())
      throw UsageError("unknown monopole field '" + k + "' for variant " + to_string(v));
  for (int j = 0; j < slot_count(v); ++j) {
    const std::string sfx = slot_suffix(v, j);
    auto it = fields.find("w" + sfx);
    if (it == fields.end()) throw UsageError("monopole field 'w" + sfx + "' is required");
    m.w.push_back(Field::from_exprs({Expr::parse(it->second, sc)}));
    std::vector<Expr> a;
    for (const auto& c : W.chart.coords) {
      auto ia = fields.find("A" + sfx + "_" + c);
      a.push_back(Expr::parse(ia == fields.end() ? "0" : ia->second, sc));
    }
    m.A.push_back(Field::from_exprs(a));
  }
  return m;
}

FormJet general_residual(const MetricJet& g_in, const JetVec& omega, const RealJet& w, const JetVec& A,
                         int orientation) {
  const int k = w.order() - 1;
  if (k < 0) throw OrderDeficit("monopole residual", 1);
  const MetricJet g = g_in.truncated(k);
  const RealJet wd = partial(w, 3), wk = tr(w, k);
  JetVec Ad, Ak = tr(A, k);
  for (const auto& c : A) Ad.push_back(partial(c, 3));
  JetVec X = plus(plus(weyl_derivative(w, -1, omega, 3), times(Ad, wk)), times(Ak, wd), -1.0);
  return star(FormJet::one_form(X), g, orientation) - (d1(A) + wedge1(Ad, Ak));
}

MonopoleJets monopole_jets(const MonopoleData& m, std::span<const double> point4, int order) {
  check_shape(m);
  if (m.variant == Variant::General) return {m.w[0].eval1(point4, order), m.A[0].eval(point4, order)};
  const JetSpec spec{4, order};
  const std::span<const double> p3 = point4.first(3);
  const RealJet t = RealJet::variable(spec, 3, point4[3]);
  RealJet tp = RealJet::constant(spec, 1.0);
  MonopoleJets r{RealJet(spec), JetVec(3, RealJet(spec))};
  for (std::size_t j = 0; j < m.w.size(); ++j) {
    r.w += tp * widen(m.w[j].eval1(p3, order), 4);
    const JetVec a = widen(m.A[j].eval(p3, order), 4);
    for (int i = 0; i < 3; ++i) r.A[i] += tp * a[i];
    tp = tp * t;
  }
  return r;
}

MonopoleData as_general(const MonopoleData& m) {
  check_shape(m);
  if (m.variant == Variant::General) return m;
  MonopoleData r = m;
  r.variant = Variant::General;
  int depth = 0;
  bool closed = true;
  for (std::size_t j = 0; j < m.w.size(); ++j) {
    depth = std::max({depth, m.w[j].depth(), m.A[j].depth()});
    closed = closed && m.w[j].has_exprs() && m.A[j].has_exprs();
  }
  std::vector<std::string> wx, ax;
  if (closed) {
    auto poly = [&](auto get) {
      std::string s;
      for (std::size_t j = 0; j < m.w.size(); ++j) {
        if (j) s += " + ";
        s += (j == 0 ? "" : j == 1 ? "t*" : "t^" + std::to_string(j) + "*") + wrap(get(j));
      }
      return s;
    };
    wx.push_back(poly([&](std::size_t j) { return m.w[j].exprs()[0]; }));
    for (int i = 0; i < 3; ++i) ax.push_back(poly([&](std::size_t j) { return m.A[j].exprs()[i]; }));
  }
  r.w = {Field(4, 1, [m](std::span<const double> p, int k) { return JetVec{monopole_jets(m, p, k).w}; }, depth, wx)};
  r.A = {Field(4, 3, [m](std::span<const double> p, int k) { return monopole_jets(m, p, k).A; }, depth, ax)};
  return r;
}

std::map<std::string, double> monopole_residual_at(const WeylStructure3& W, const MonopoleData& m,
                                                   std::span<const double> point) {
  check_shape(m);
  std::map<std::string, double> r;
  if (m.variant == Variant::General) {
    if (point.size() != 4) throw UsageError("general monopole residual needs a point (x, t)");
    const BaseJets b = widened_base(base_jets(W, point.first(3), 1), 4);
    const MonopoleJets mj = monopole_jets(m, point, 1);
    r["general"] = norm(general_residual(b.g, b.omega, mj.w, mj.A, W.orientation), b.g.truncated(0));
    return r;
  }
  if (point.size() != 3) throw UsageError("monopole residual needs a base point");
  const BaseJets b = base_jets(W, point, 1);
  const MetricJet g0 = b.g.truncated(0);
  for (const auto& [name, F] : residual_forms(b, m, eval_slots(m, point, 1), W.orientation)) r[name] = norm(F, g0);
  return r;
}

double max_residual(const std::map<std::string, double>& r) {
  double m = 0.0;
  for (const auto& [k, v] : r) m = std::max(m, std::isnan(v) ? INFINITY : v);
  return m;
}

double ansatz_reduction_check(const WeylStructure3& W, const MonopoleData& m, std::span<const double> point) {
  check_shape(m);
  if (m.variant == Variant::General) throw UsageError("ansatz reduction needs affine or projective data");
  constexpr int K = 4;
  const BaseJets b3 = base_jets(W, point, 1);
  std::vector<FormJet> expect;
  for (auto& [name, F] : residual_forms(b3, m, eval_slots(m, point, 1), W.orientation)) expect.push_back(F);
  if (m.variant == Variant::Projective) expect[1] *= 2.0;

  const BaseJets b = widened_base(base_jets(W, point, K), 4);
  const std::vector<double> p4{point[0], point[1], point[2], 0.0};
  const MonopoleJets mj = monopole_jets(m, p4, K);
  const FormJet R = general_residual(b.g, b.omega, mj.w, mj.A, W.orientation);
  double worst = 0.0;
  const auto& tb = R.c[0].tables();
  for (int j = 0; j < K; ++j) {
    const std::size_t idx = tb.index_of(std::vector<int>{0, 0, 0, j});
    for (unsigned mask : {3u, 5u, 6u}) {
      const double want = j < static_cast<int>(expect.size()) ? expect[j][mask].value() : 0.0;
      worst = std::max(worst, std::abs(R[mask][idx] - want));
    }
  }
  return worst;
}

SL2MonopoleData pack_sl2(const MonopoleData& m) {
  if (m.variant != Variant::Projective) throw UsageError("SL(2) packing needs projective data");
  check_shape(m);
  SL2MonopoleData r;
  auto pack = [](const std::vector<Field>& v) {
    return std::array<Field, 4>{scaled(v[1], 0.5), v[0], scaled(v[2], -1.0), scaled(v[1], -0.5)};
  };
  r.w = pack(m.w);
  r.A = pack(m.A);
  return r;
}

std::array<FormJet, 4> sl2_residual_forms(const WeylStructure3& W, const SL2MonopoleData& m,
                                          std::span<const double> point) {
  const BaseJets b = base_jets(W, point, 1);
  const MetricJet g0 = b.g.truncated(0);
  std::array<RealJet, 4> w;
  std::array<JetVec, 4> A;
  for (int q = 0; q < 4; ++q) {
    w[q] = m.w[q].eval1(point, 1);
    A[q] = m.A[q].eval(point, 1);
  }
  std::array<FormJet, 4> r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      JetVec X = weyl_derivative(w[i * 2 + j], -1, b.omega, 3);
      FormJet F = d1(A[i * 2 + j]);
      for (int l = 0; l < 2; ++l) {
        X = plus(X, times(tr(A[i * 2 + l], 0), tr(w[l * 2 + j], 0)));
        X = plus(X, times(tr(A[l * 2 + j], 0), tr(w[i * 2 + l], 0)), -1.0);
        F += wedge1(tr(A[i * 2 + l], 0), tr(A[l * 2 + j], 0));
      }
      r[i * 2 + j] = star(FormJet::one_form(X), g0, W.orientation) - F;
    }
  return r;
}

double sl2_residual_at(const WeylStructure3& W, const SL2MonopoleData& m, std::span<const double> point) {
  const auto R = sl2_residual_forms(W, m, point);
  const MetricJet g0 = metric_at(W.g, point, 0);
  double s = 0.0;
  for (const auto& F : R) s += norm2(F, g0).value();
  return std::sqrt(s);
}

MonopoleData canonical_projective_monopole(const WeylStructure3& W) {
  MonopoleData m;
  m.variant = Variant::Projective;
  m.name = "canonical";
  m.w = {Field::constant(3, {1.0}), Field::constant(3, {0.0}), scaled(scal_field(W), -1.0 / 6.0)};
  m.A = {Field::zero(3, 3), W.omega, scaled(star_faraday_field(W), -0.5)};
  return m;
}

MonopoleData reparametrize(const MonopoleData& general, const Field& f) {
  if (general.variant != Variant::General) throw UsageError("reparametrization needs general data");
  check_shape(general);
  MonopoleData r = general;
  const Field w0 = general.w[0], A0 = general.A[0];
  // (x, t) -> (x, f(x, t)) as argument jets, plus f_t
  auto args = [f](std::span<const double> p, int k) {
    const RealJet fj = f.eval1(p, k + 1);
    const JetSpec spec{4, k};
    std::vector<RealJet> a;
    for (int i = 0; i < 3; ++i) a.push_back(RealJet::variable(spec, i, p[i]));
    a.push_back(truncate(fj, k));
    return std::pair{a, fj};
  };
  r.w = {Field(
      4, 1,
      [w0, args](std::span<const double> p, int k) {
        auto [a, fj] = args(p, k);
        const std::vector<double> q{p[0], p[1], p[2], fj.value()};
        const RealJet wt = compose(w0.eval1(q, k), std::span<const RealJet>(a));
        return JetVec{wt / partial(fj, 3)};
      },
      std::max(w0.depth(), f.depth() + 1))};
  r.A = {Field(
      4, 3,
      [A0, args](std::span<const double> p, int k) {
        auto [a, fj] = args(p, k);
        const std::vector<double> q{p[0], p[1], p[2], fj.value()};
        const JetVec At = A0.eval(q, k);
        const RealJet ft = partial(fj, 3);
        JetVec out;
        for (int i = 0; i < 3; ++i)
          out.push_back((compose(At[i], std::span<const RealJet>(a)) + partial(fj, i)) / ft);
        return out;
      },
      std::max(A0.depth(), f.depth() + 1))};
  return r;
}

const std::vector<CatalogEntry>& catalog_monopoles() {
  static const std::vector<CatalogEntry> entries{
      {"gibbons-hawking", "monopole", {{"mass", "1"}, {"constant", "1"}},
       "abelian on flat-r3: w = constant + mass/(2r), A = mass/2 (1 - z/r) dphi; Dirac string on the negative z-axis"},
      {"strachan", "monopole", {{"f", "1"}},
       "abelian on hypercr-toda: w = re(f/(z+h)), A = re(f) theta0 + im(f/(z+h)) dz for constant f"},
      {"hypercr-affine", "monopole", {{"t_lo", "0.1"}, {"t_hi", "0.4"}},
       "affine on a space with a known twist kappa: w = 1 + 2 t kappa, A = t omega"},
      {"canonical", "monopole", {{"t_lo", "0"}, {"t_hi", "1"}},
       "projective on any space: w = 1 - t^2 scal/6, A = t omega - t^2 *d omega/2"},
  };
  return entries;
}

MonopoleData make_catalog_monopole(const std::string& name, const Params& params, const WeylStructure3& W) {
  MonopoleData m;
  m.name = name;
  m.params = params;
  if (name == "gibbons-hawking") {
    reject_unknown(name, params, {"mass", "constant"});
    if (W.name != "flat-r3") throw UsageError("gibbons-hawking requires the flat-r3 base");
    const std::string mass = Expr::number(detail::number_param(params, "mass", 1.0)).str();
    const std::string c = Expr::number(detail::number_param(params, "constant", 1.0)).str();
    const std::string r = "sqrt(x^2 + y^2 + z^2)";
    m.variant = Variant::Abelian;
    m.w = {detail::fields(W.chart, {c + " + " + mass + "/(2*" + r + ")"})};
    // (1 - z/r) dphi = (x dy - y dx)/(r (r + z)), smooth off the negative z-axis
    const std::string den = "(2*" + r + "*(" + r + " + z))";
    m.A = {detail::fields(W.chart, {mass + "*y/" + den, "-" + wrap(mass) + "*x/" + den, "0"})};
    m.base_box = {{-1, 1}, {-1, 1}, {0.25, 1.25}};
    for (const std::string& e : {r, r + " + z", m.w[0].exprs()[0]})
      m.exclusions.push_back({e, detail::fields(W.chart, {e})});
    return m;
  }
  if (name == "strachan") {
    reject_unknown(name, params, {"f"});
    if (W.name != "hypercr-toda") throw UsageError("strachan requires the hypercr-toda base");
    const std::string fsrc = param(params, "f", "1");
    const Expr fe = W.chart.parse(fsrc);
    if (!fe.is_constant()) throw UsageError("strachan monopole needs a constant f");
    const std::string f = wrap(fe.str()), h = wrap(W.chart.parse(W.params.at("h")).str());
    const std::string q = f + "/(z + " + h + ")";
    m.variant = Variant::Abelian;
    m.w = {detail::fields(W.chart, {"re(" + q + ")"})};
    m.A = {detail::fields(W.chart,
                          {"-2*re" + f + "*y/(1 + x^2 + y^2)", "2*re" + f + "*x/(1 + x^2 + y^2)", "im(" + q + ")"})};
    m.exclusions.push_back({"re(" + q + ")", m.w[0]});
    return m;
  }
  if (name == "hypercr-affine") {
    reject_unknown(name, params, {"t_lo", "t_hi"});
    if (!W.kappa) throw UsageError("hypercr-affine requires a space with a known twist kappa");
    m.variant = Variant::Affine;
    m.w = {detail::fields(W.chart, {"1"}), scaled(*W.kappa, 2.0)};
    m.A = {detail::fields(W.chart, {"0", "0", "0"}), W.omega};
    m.t_domain = {detail::number_param(params, "t_lo", 0.1), detail::number_param(params, "t_hi", 0.4)};
    if (!(m.t_domain.first < m.t_domain.second)) throw UsageError("t_lo must be below t_hi");
    return m;
  }
  if (name == "canonical") {
    reject_unknown(name, params, {"t_lo", "t_hi"});
    MonopoleData c = canonical_projective_monopole(W);
    c.params = params;
    c.t_domain = {detail::number_param(params, "t_lo", 0.0), detail::number_param(params, "t_hi", 1.0)};
    if (!(c.t_domain.first < c.t_domain.second)) throw UsageError("t_lo must be below t_hi");
    return c;
  }
  throw UsageError("unknown catalog monopole '" + name + "'");
}

}  // namespace weylab
