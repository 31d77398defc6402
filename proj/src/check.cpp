// SPDX-License-Identifier: Apache-2.0
#include <weylab/check.hpp>
#include <weylab/sampling.hpp>

#include "params.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <set>
#include <thread>

namespace weylab {

namespace {

const std::set<std::string> kCommon{"points", "seed", "tolerance"};
const std::set<std::string> kSpace{"space", "params", "perturb"};
const std::set<std::string> kMonopole{"monopole", "monopole_params", "variant", "fields", "t_domain", "monopole_doc"};
const std::set<std::string> kMetric{"construction", "build_params", "bundle"};

const std::vector<std::string> kDiagnostics{"einstein", "selfdual",  "scal",    "ricci-flat", "conformal-killing",
                                            "legendrian", "nijenhuis", "kahler", "sfk-linear", "hl-agreement"};

std::set<std::string> allowed_keys(const std::string& command) {
  std::set<std::string> k = kSpace;
  if (command == "check-ew") {
    k.insert(kCommon.begin(), kCommon.end());
    return k;
  }
  k.insert(kMonopole.begin(), kMonopole.end());
  if (command == "check-monopole") {
    k.insert(kCommon.begin(), kCommon.end());
    return k;
  }
  k.insert(kMetric.begin(), kMetric.end());
  if (command == "build") return k;
  k.insert(kCommon.begin(), kCommon.end());
  if (command == "check-metric") k.insert({"diagnostics", "chi"});
  return k;
}

Params string_map(const Json& j, const std::string& what) {
  Params p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw UsageError(what + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw UsageError(what + "." + k + " must be a string");
    p[k] = v.get<std::string>();
  }
  return p;
}

bool has_monopole(const Json& r) {
  return r.contains("monopole") || r.contains("fields") || r.contains("monopole_doc");
}

WeylStructure3 resolve_space(const Json& r) {
  if (!r.contains("space")) throw UsageError("a base space is required (--space)");
  Json doc;
  doc["space"] = r.at("space");
  Json p = r.value("params", Json::object());
  if (r.contains("perturb")) p["perturbation"] = Expr::number(r.at("perturb").get<double>()).str();
  doc["params"] = p;
  return space_from_json(doc);
}

MonopoleData resolve_monopole(const Json& r, const WeylStructure3& W) {
  if (r.contains("monopole_doc")) {
    if (r.contains("monopole") || r.contains("fields")) throw UsageError("give either monopole_doc or monopole/fields");
    return monopole_from_json(r.at("monopole_doc"), W);
  }
  if (r.contains("monopole")) {
    if (r.contains("fields")) throw UsageError("give either a catalog monopole or fields");
    return make_catalog_monopole(r.at("monopole").get<std::string>(),
                                 string_map(r.value("monopole_params", Json()), "monopole_params"), W);
  }
  if (!r.contains("fields")) throw UsageError("monopole data is required (--monopole or --field)");
  Json doc;
  doc["variant"] = r.value("variant", std::string("abelian"));
  doc["fields"] = r.at("fields");
  if (r.contains("t_domain")) doc["t_domain"] = r.at("t_domain");
  return monopole_from_json(doc, W);
}

Metric4Bundle resolve_bundle(const Json& r) {
  if (r.contains("bundle")) {
    for (const char* k : {"construction", "space", "monopole", "fields", "monopole_doc"})
      if (r.contains(k)) throw UsageError(std::string("a bundle document excludes \"") + k + "\"");
    return bundle_from_json(r.at("bundle"));
  }
  std::string construction = r.value("construction", std::string());
  if (construction.empty()) {
    if (!has_monopole(r)) throw UsageError("a construction, monopole or bundle is required");
    construction = "monopole";
  }
  std::optional<WeylStructure3> base;
  if (r.contains("space")) base = resolve_space(r);
  std::optional<MonopoleData> mono;
  if (construction == "monopole") {
    if (!base) throw UsageError("the monopole construction needs a base space");
    mono = resolve_monopole(r, *base);
  } else if (has_monopole(r)) {
    throw UsageError("monopole data only applies to the monopole construction");
  }
  return build_construction(construction, base, mono, string_map(r.value("build_params", Json()), "build_params"));
}

/// A sampled check: residual names (gated by tolerance) and informational values.
struct Probe {
  Chart chart;
  std::vector<std::string> residuals, values;
  std::function<void(std::span<const double>, std::vector<double>&, std::vector<double>&)> eval;
  double default_tolerance = 1e-7;
};

Probe ew_probe(const Json& r) {
  const WeylStructure3 W = resolve_space(r);
  Probe p;
  p.chart = W.chart;
  p.residuals = {"ew_residual"};
  if (W.kappa) p.residuals.insert(p.residuals.end(), {"hypercr_twist", "hypercr_scal"});
  p.values = {"scal"};
  p.eval = [W](std::span<const double> x, std::vector<double>& res, std::vector<double>& val) {
    res.push_back(ew_residual_at(W, x));
    if (W.kappa) {
      const auto [dk, sq] = hypercr_identities_at(W, x);
      res.push_back(dk);
      res.push_back(sq);
    }
    val.push_back(weyl_scal(base_jets(W, x, 2)).value());
  };
  return p;
}

Probe monopole_probe(const Json& r) {
  const WeylStructure3 W = resolve_space(r);
  const MonopoleData m = resolve_monopole(r, W);
  Probe p;
  p.chart = monopole_base_chart(W, m);
  if (m.variant == Variant::General) p.chart = product_chart(p.chart, m.t_domain);
  const auto first = sample_points(p.chart, 1, 0).front();
  for (const auto& [k, v] : monopole_residual_at(W, m, first)) p.residuals.push_back(k);
  const bool poly = m.variant == Variant::Affine || m.variant == Variant::Projective;
  if (poly) p.residuals.push_back("ansatz_reduction");
  std::optional<SL2MonopoleData> sl2;
  if (m.variant == Variant::Projective) {
    sl2 = pack_sl2(m);
    p.residuals.push_back("sl2");
  }
  p.eval = [W, m, poly, sl2](std::span<const double> x, std::vector<double>& res, std::vector<double>&) {
    for (const auto& [k, v] : monopole_residual_at(W, m, x)) res.push_back(v);
    if (poly) res.push_back(ansatz_reduction_check(W, m, x));
    if (sl2) res.push_back(sl2_residual_at(W, *sl2, x));
  };
  return p;
}

double default_metric_tolerance(const Metric4Bundle& M) { return M.g.depth() >= 2 ? 1e-6 : 1e-7; }

std::vector<std::string> default_diagnostics(const Metric4Bundle& M) {
  const std::string& c = M.provenance.construction;
  if (c == "hitchin-lebrun") return {"einstein", "selfdual", "scal", "conformal-killing", "legendrian"};
  if (c == "hypercr-einstein" || c == "explicit-family") return {"einstein", "selfdual", "scal", "hl-agreement"};
  if (c == "monopole") return {"selfdual", "conformal-killing"};
  if (c == "sfk") return {"scal", "kahler", "nijenhuis", "sfk-linear"};
  return {"einstein", "selfdual"};
}

struct SfkInputs {
  Field chi, rho, Phi;
};

SfkInputs sfk_inputs(const Metric4Bundle& M) {
  const WeylStructure3& W = *M.base;
  const Params& p = M.provenance.params;
  std::vector<std::string> Phi;
  for (const auto& c : W.chart.coords) Phi.push_back(detail::param(p, "Phi_" + c, "0"));
  return {*M.congruence, detail::fields(W.chart, {detail::param(p, "rho", "1")}), detail::fields(W.chart, Phi)};
}

Probe metric_probe(const Json& r) {
  const Metric4Bundle M = resolve_bundle(r);
  std::vector<std::string> diags;
  if (r.contains("diagnostics")) {
    for (const auto& d : r.at("diagnostics")) {
      const std::string s = d.get<std::string>();
      if (std::find(kDiagnostics.begin(), kDiagnostics.end(), s) == kDiagnostics.end())
        throw UsageError("unknown diagnostic '" + s + "'");
      if (std::find(diags.begin(), diags.end(), s) == diags.end()) diags.push_back(s);
    }
    if (diags.empty()) throw UsageError("no diagnostics selected");
  } else {
    diags = default_diagnostics(M);
  }
  auto want = [&](const char* d) { return std::find(diags.begin(), diags.end(), d) != diags.end(); };

  std::optional<Field> chi;
  if (want("nijenhuis") || want("kahler")) {
    if (r.contains("chi")) {
      const auto src = r.at("chi").get<std::vector<std::string>>();
      if (src.size() != 3) throw UsageError("chi needs 3 components");
      Chart c3;
      if (M.base) {
        c3 = M.base->chart;
      } else {
        c3.scope = M.chart.scope;
        c3.scope.coords.assign(M.chart.coords.begin(), M.chart.coords.begin() + 3);
      }
      chi = detail::fields(c3, src);
    } else if (M.congruence) {
      chi = M.congruence;
    } else {
      throw UsageError("complex-structure checks need chi or a base congruence");
    }
  }
  std::optional<SfkInputs> sfk;
  if (want("sfk-linear")) {
    if (M.provenance.construction != "sfk") throw UsageError("sfk-linear applies to sfk bundles");
    sfk = sfk_inputs(M);
  }
  if (want("scal") && !M.scal_expected) throw UsageError("this bundle has no predicted scalar curvature");
  if (want("hl-agreement") && (!M.base || !M.base->kappa)) throw UsageError("hl-agreement needs a base with a twist");
  const bool ein = want("einstein") || want("selfdual") || want("scal") || want("ricci-flat");
  const bool sub = want("conformal-killing") || want("legendrian");
  const bool cx = want("nijenhuis") || want("kahler");

  Probe p;
  p.chart = M.chart;
  p.default_tolerance = default_metric_tolerance(M);
  const std::vector<std::pair<const char*, const char*>> names{
      {"einstein", "einstein_residual"}, {"selfdual", "asd_weyl"},   {"scal", "scal_mismatch"},
      {"ricci-flat", "ricci_norm"},      {"conformal-killing", "conformal_killing"},
      {"legendrian", "legendrian"},      {"nijenhuis", "nijenhuis"}, {"kahler", "kahler"},
      {"sfk-linear", "sfk_linear"},      {"hl-agreement", "hl_agreement"}};
  for (const auto& [d, n] : names)
    if (want(d)) p.residuals.push_back(n);
  if (ein) p.values = {"scal", "sd_weyl"};
  p.eval = [M, diags, chi, sfk, ein, sub, cx](std::span<const double> x, std::vector<double>& res,
                                              std::vector<double>& val) {
    auto on = [&](const char* d) { return std::find(diags.begin(), diags.end(), d) != diags.end(); };
    EinsteinReport e;
    SubmersionReport s;
    ComplexReport c;
    if (ein) e = einstein_selfdual_report_at(M, x);
    if (sub) s = submersion_residuals_at(M, x);
    if (cx) c = complex_structure_checks_at(M, *chi, x);
    if (on("einstein")) res.push_back(e.einstein_residual);
    if (on("selfdual")) res.push_back(e.asd_weyl);
    if (on("scal")) res.push_back(e.scal_mismatch.value());
    if (on("ricci-flat")) res.push_back(e.ricci_norm);
    if (on("conformal-killing")) res.push_back(s.conformal_killing);
    if (on("legendrian")) res.push_back(s.legendrian);
    if (on("nijenhuis")) res.push_back(c.nijenhuis);
    if (on("kahler")) res.push_back(c.kahler);
    if (on("sfk-linear")) res.push_back(sfk_linear_residual_at(*M.base, sfk->chi, sfk->rho, sfk->Phi, x.first(3)));
    if (on("hl-agreement")) res.push_back(projective_change_agreement_at(*M.base, x));
    if (ein) val.insert(val.end(), {e.scal, e.sd_weyl});
  };
  return p;
}

Probe roundtrip_probe(const Json& r) {
  const Metric4Bundle M = resolve_bundle(r);
  const Metric4Bundle R = bundle_from_json(Json::parse(dump_json(bundle_to_json(M))));
  Probe p;
  p.chart = M.chart;
  p.default_tolerance = default_metric_tolerance(M);
  const bool base = M.base.has_value();
  if (base) p.residuals.push_back("base_mismatch");
  p.residuals.insert(p.residuals.end(), {"f0_sd_residual", "bundle_json"});
  p.values = {"omega_norm"};
  p.eval = [M, R, base](std::span<const double> x, std::vector<double>& res, std::vector<double>& val) {
    const JonesTodReport j = jones_tod_extract_at(M, x);
    if (base) res.push_back(j.recovered_base_mismatch.value());
    res.push_back(j.f0_sd_residual);
    const JetVec a = M.g.eval(x, 0), b = R.g.eval(x, 0);
    double d = 0.0;
    for (std::size_t q = 0; q < a.size(); ++q) d = std::max(d, std::abs(a[q].value() - b[q].value()));
    res.push_back(d);
    double w2 = 0.0;
    for (double v : j.omega) w2 += v * v;
    val.push_back(std::sqrt(w2));
  };
  return p;
}

Probe make_probe(const std::string& command, const Json& r) {
  if (command == "check-ew") return ew_probe(r);
  if (command == "check-monopole") return monopole_probe(r);
  if (command == "check-metric") return metric_probe(r);
  if (command == "roundtrip") return roundtrip_probe(r);
  throw UsageError("unknown command '" + command + "'");
}

struct PointResult {
  std::vector<double> res, val;
};

std::vector<PointResult> evaluate(const Probe& p, const std::vector<std::vector<double>>& pts, unsigned workers) {
  std::vector<PointResult> out(pts.size());
  std::vector<std::exception_ptr> errs(pts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < pts.size();) {
      try {
        p.eval(pts[i], out[i].res, out[i].val);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  // report the first failing point, whatever the schedule
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

double ratio(double v, double tol) { return std::isfinite(v) ? v / tol : INFINITY; }

}  // namespace

bool is_check_command(const std::string& c) {
  return c == "check-ew" || c == "check-monopole" || c == "check-metric" || c == "roundtrip";
}

Json normalize_request(const std::string& command, const Json& request) {
  if (!is_check_command(command) && command != "build") throw UsageError("unknown command '" + command + "'");
  if (!request.is_object()) throw UsageError("request must be a JSON object");
  const auto allowed = allowed_keys(command);
  Json r = Json::object();
  for (const auto& [k, v] : request.items()) {
    if (k == "command") {
      if (v != command) throw UsageError("request is for '" + v.get<std::string>() + "', not '" + command + "'");
      continue;
    }
    if (!allowed.count(k)) throw UsageError("unknown request key '" + k + "' for " + command);
    r[k] = v;
  }
  if (command == "build") return r;
  const Json points = r.value("points", Json(20));
  const Json seed = r.value("seed", Json(1));
  if (!points.is_number_integer() || points.get<long long>() < 1) throw UsageError("points must be a positive integer");
  if (!seed.is_number_integer() || seed.get<long long>() < 0) throw UsageError("seed must be a non-negative integer");
  r["points"] = points;
  r["seed"] = seed;
  if (r.contains("tolerance") && !(r.at("tolerance").is_number() && r.at("tolerance").get<double>() > 0))
    throw UsageError("tolerance must be positive");
  if (r.contains("perturb") && !r.at("perturb").is_number()) throw UsageError("perturb must be a number");
  return r;
}

Json run_check(const std::string& command, const Json& request, unsigned workers) {
  const auto t0 = std::chrono::steady_clock::now();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  Json r = normalize_request(command, request);
  if (command == "build") throw UsageError("build produces a bundle, not a report");
  const Probe probe = make_probe(command, r);
  const double tol = r.contains("tolerance") ? r.at("tolerance").get<double>() : probe.default_tolerance;
  r["tolerance"] = tol;
  const auto pts = sample_points(probe.chart, r.at("points").get<int>(), r.at("seed").get<std::uint64_t>());
  const auto results = evaluate(probe, pts, workers);

  const std::size_t nr = probe.residuals.size();
  std::vector<double> mx(nr, 0.0), sum(nr, 0.0);
  std::vector<bool> ok(nr, true);
  std::size_t worst_i = 0, worst_r = 0;
  double worst = -1.0;
  Json records = Json::array();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& pr = results[i];
    if (pr.res.size() != nr || pr.val.size() != probe.values.size())
      throw Error("diagnostic returned an unexpected number of values");
    Json rec;
    rec["index"] = i;
    rec["coords"] = pts[i];
    Json res = Json::object(), val = Json::object();
    for (std::size_t q = 0; q < nr; ++q) {
      const double v = pr.res[q];
      res[probe.residuals[q]] = v;
      if (!(v <= tol)) ok[q] = false;
      mx[q] = std::isfinite(v) ? std::max(mx[q], v) : INFINITY;
      sum[q] += v;
      if (ratio(v, tol) > worst) {
        worst = ratio(v, tol);
        worst_i = i;
        worst_r = q;
      }
    }
    for (std::size_t q = 0; q < probe.values.size(); ++q) val[probe.values[q]] = pr.val[q];
    rec["residuals"] = res;
    if (!probe.values.empty()) rec["values"] = val;
    records.push_back(rec);
  }
  bool pass = true;
  Json agg = Json::object();
  for (std::size_t q = 0; q < nr; ++q) {
    agg[probe.residuals[q]] = {{"max", mx[q]},
                               {"mean", sum[q] / static_cast<double>(pts.size())},
                               {"tolerance", tol},
                               {"pass", static_cast<bool>(ok[q])}};
    pass = pass && ok[q];
  }

  Json report;
  report["tool"] = "weylab";
  report["version"] = kVersion;
  report["command"] = command;
  report["request"] = r;
  report["pass"] = pass;
  report["aggregates"] = agg;
  if (nr > 0) {
    report["worst"] = {{"residual", probe.residuals[worst_r]},
                       {"index", worst_i},
                       {"coords", pts[worst_i]},
                       {"value", results[worst_i].res[worst_r]},
                       {"tolerance", tol}};
  }
  report["points"] = records;
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report["timing"] = {{"wall_seconds", wall}, {"workers", workers}};
  return report;
}

Json report_body(const Json& report) {
  Json b = report;
  b.erase("timing");
  return b;
}

int exit_code(const Json& report) { return report.at("pass").get<bool>() ? 0 : 1; }

Json build_request(const Json& request) {
  const Json r = normalize_request("build", request);
  return bundle_to_json(resolve_bundle(r));
}

Json catalog_json() {
  auto list = [](const std::vector<CatalogEntry>& es) {
    Json a = Json::array();
    for (const auto& e : es) {
      Json p = Json::object();
      for (const auto& [k, v] : e.params) p[k] = v;
      a.push_back({{"name", e.name}, {"params", p}, {"description", e.description}});
    }
    return a;
  };
  Json j;
  j["tool"] = "weylab";
  j["version"] = kVersion;
  j["spaces"] = list(catalog_spaces());
  j["monopoles"] = list(catalog_monopoles());
  j["constructions"] = list(catalog_constructions());
  j["diagnostics"] = kDiagnostics;
  return j;
}

Json error_json(const std::exception& e) {
  std::string type = "Error";
  if (dynamic_cast<const UsageError*>(&e)) type = "UsageError";
  else if (dynamic_cast<const DomainError*>(&e)) type = "DomainError";
  else if (dynamic_cast<const OrderDeficit*>(&e)) type = "OrderDeficit";
  else if (dynamic_cast<const ParseError*>(&e)) type = "ParseError";
  else if (dynamic_cast<const UndeclaredIdentifier*>(&e)) type = "UndeclaredIdentifier";
  else if (dynamic_cast<const SpecMismatch*>(&e)) type = "SpecMismatch";
  else if (dynamic_cast<const Json::exception*>(&e)) type = "UsageError";
  return {{"error", {{"type", type}, {"message", e.what()}}}};
}

}  // namespace weylab
