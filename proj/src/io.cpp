// SPDX-License-Identifier: Apache-2.0
#include <weylab/io.hpp>

#include "params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace weylab {

namespace {

using detail::param;
using detail::reject_unknown;

std::string scalar_string(const Json& v, const std::string& what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  throw UsageError(what + " must be a string or a number");
}

Params params_from(const Json& j, const std::string& what) {
  Params p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw UsageError(what + " must be an object");
  for (const auto& [k, v] : j.items()) p[k] = scalar_string(v, what + "." + k);
  return p;
}

Json params_to(const Params& p) {
  Json j = Json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

const Json& member(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(what + " needs \"" + key + "\"");
  return j.at(key);
}

std::pair<double, double> interval(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw UsageError(what + " must be [lo, hi]");
  const std::pair<double, double> r{j[0].get<double>(), j[1].get<double>()};
  if (!(r.first < r.second)) throw UsageError(what + " is empty");
  return r;
}

std::optional<std::pair<double, double>> t_range(const Params& p) {
  const bool lo = p.count("t_lo"), hi = p.count("t_hi");
  if (!lo && !hi) return std::nullopt;
  if (lo != hi) throw UsageError("t_lo and t_hi go together");
  const std::pair<double, double> r{detail::number_param(p, "t_lo", 0), detail::number_param(p, "t_hi", 0)};
  if (!(r.first < r.second)) throw UsageError("t_lo must be below t_hi");
  return r;
}

std::string canonical(const std::string& src, const Scope& s) { return Expr::parse(src, s).str(); }

void write_json(std::string& out, const Json& j, int indent, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(d * indent), ' '); };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += Json(k).dump();
        out += ": ";
        write_json(out, v, indent, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "}";
      return;
    }
    case Json::value_t::array: {
      bool flat = true;
      for (const auto& v : j)
        if (v.is_structured()) flat = false;
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write_json(out, j[i], indent, depth);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        pad(depth + 1);
        write_json(out, j[i], indent, depth + 1);
      }
      out += "\n";
      pad(depth);
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // keep floats recognizable as floats
      if (std::string_view(buf).find_first_of(".en") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json space_to_json(const WeylStructure3& W) {
  Json j;
  j["space"] = W.name;
  j["params"] = params_to(W.params);
  return j;
}

WeylStructure3 space_from_json(const Json& j) {
  const Json& name = member(j, "space", "space document");
  if (!name.is_string()) throw UsageError("\"space\" must be a string");
  Params p = params_from(j.value("params", Json()), "params");
  std::optional<double> eps;
  if (p.count("perturbation")) {
    eps = detail::number_param(p, "perturbation", 0.0);
    p.erase("perturbation");
  }
  WeylStructure3 W = make_catalog_space(name.get<std::string>(), p);
  return eps ? perturb_omega(W, *eps) : W;
}

Json monopole_to_json(const WeylStructure3& W, const MonopoleData& m) {
  Json j;
  j["variant"] = to_string(m.variant);
  j["base"] = space_to_json(W);
  Json fields = Json::object();
  const auto ex = m.field_exprs(W.chart);
  for (const auto& n : field_names(m.variant, W.chart.coords)) {
    const auto it = ex.find(n);
    fields[n] = it == ex.end() || it->second.empty() ? Json() : Json(it->second);
  }
  j["fields"] = fields;
  j["t_domain"] = {m.t_domain.first, m.t_domain.second};
  if (m.name != "custom") j["catalog"] = {{"name", m.name}, {"params", params_to(m.params)}};
  return j;
}

MonopoleData monopole_from_json(const Json& j, const WeylStructure3& W) {
  if (!j.is_object()) throw UsageError("monopole document must be an object");
  if (j.contains("catalog")) {
    const Json& c = j.at("catalog");
    return make_catalog_monopole(member(c, "name", "catalog").get<std::string>(),
                                 params_from(c.value("params", Json()), "catalog.params"), W);
  }
  const Variant v = variant_from_string(member(j, "variant", "monopole document").get<std::string>());
  std::map<std::string, std::string> fields;
  for (const auto& [k, val] : member(j, "fields", "monopole document").items()) {
    if (val.is_null()) throw UsageError("monopole field '" + k + "' has no expression");
    fields[k] = scalar_string(val, "field " + k);
  }
  const auto td = j.contains("t_domain") ? interval(j.at("t_domain"), "t_domain") : std::pair{0.0, 1.0};
  return monopole_from_exprs(W, v, fields, td);
}

std::pair<WeylStructure3, MonopoleData> monopole_from_json(const Json& j) {
  WeylStructure3 W = space_from_json(member(j, "base", "monopole document"));
  MonopoleData m = monopole_from_json(j, W);
  return {std::move(W), std::move(m)};
}

Metric4Bundle build_construction(const std::string& construction, const std::optional<WeylStructure3>& base,
                                 const std::optional<MonopoleData>& monopole, const Params& params) {
  Params p = params;
  std::optional<std::string> rescale;
  if (p.count("rescale")) {
    rescale = p.at("rescale");
    p.erase("rescale");
  }
  auto need_base = [&]() -> const WeylStructure3& {
    if (!base) throw UsageError(construction + " needs a base space");
    return *base;
  };
  Metric4Bundle M;
  if (construction == "monopole") {
    reject_unknown(construction, p, {"gauge"});
    if (!monopole) throw UsageError("the monopole construction needs monopole data");
    M = assemble_from_monopole(need_base(), *monopole, param(p, "gauge", "base"));
  } else if (construction == "hitchin-lebrun") {
    reject_unknown(construction, p, {"t_lo", "t_hi"});
    M = hitchin_lebrun_metric(need_base(), t_range(p));
  } else if (construction == "hypercr-einstein") {
    reject_unknown(construction, p, {"t_lo", "t_hi"});
    M = hypercr_einstein_metric(need_base(), t_range(p));
  } else if (construction == "explicit-family") {
    reject_unknown(construction, p, {"h", "t_lo", "t_hi"});
    M = explicit_family_metric(param(p, "h", "i"), t_range(p));
  } else if (construction == "sfk") {
    const WeylStructure3& W = need_base();
    std::set<std::string> allowed{"t_lo", "t_hi", "rho"};
    for (const auto& c : W.chart.coords) allowed.insert({"Phi_" + c, "chi_" + c});
    reject_unknown(construction, p, allowed);
    bool any_chi = false;
    std::vector<std::string> chi, Phi;
    for (const auto& c : W.chart.coords) {
      any_chi = any_chi || p.count("chi_" + c);
      chi.push_back(param(p, "chi_" + c, "0"));
      Phi.push_back(param(p, "Phi_" + c, "0"));
    }
    if (!any_chi && !W.congruence) throw UsageError(W.name + " has no default congruence; give chi_<coord>");
    const Field chi_f = any_chi ? detail::fields(W.chart, chi) : *W.congruence;
    M = sfk_metric(W, chi_f, detail::fields(W.chart, {param(p, "rho", "1")}), detail::fields(W.chart, Phi),
                   t_range(p));
  } else {
    throw UsageError("unknown construction '" + construction + "'");
  }
  if (rescale) M = conformal_rescale(M, Field::from_exprs({M.chart.parse(*rescale)}));
  return M;
}

Json bundle_to_json(const Metric4Bundle& M) {
  Json j;
  j["dim"] = 4;
  j["coords"] = M.chart.coords;
  Json metric = Json::array();
  const auto& ex = M.g.exprs();
  for (int a = 0; a < 4; ++a) {
    Json row = Json::array();
    for (int b = 0; b < 4; ++b) {
      const std::size_t q = static_cast<std::size_t>(a * 4 + b);
      row.push_back(q < ex.size() && !ex[q].empty() ? Json(ex[q]) : Json());
    }
    metric.push_back(row);
  }
  j["metric"] = metric;
  j["orientation"] = M.orientation;
  Json excl = Json::array();
  for (const auto& e : M.chart.exclusions)
    excl.push_back(e.positive ? Json{{"expr", e.description}, {"positive", true}} : Json(e.description));
  j["exclusions"] = excl;
  Json dom = Json::object();
  for (int i = 0; i < 4; ++i) dom[M.chart.coords[i]] = {M.chart.box[i].first, M.chart.box[i].second};
  j["sample_domain"] = dom;
  Json params = Json::object();
  for (const auto& [k, v] : M.chart.scope.params) params[k] = v;
  j["params"] = params;
  Json prov;
  prov["construction"] = M.provenance.construction;
  prov["params"] = params_to(M.provenance.params);
  if (M.base && M.provenance.construction != "explicit-family") prov["base"] = space_to_json(*M.base);
  if (M.monopole && M.base && M.provenance.construction == "monopole")
    prov["monopole"] = monopole_to_json(*M.base, *M.monopole);
  j["provenance"] = prov;
  return j;
}

Metric4Bundle bundle_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("bundle document must be an object");
  if (member(j, "dim", "bundle") != 4) throw UsageError("only 4-dimensional bundles are supported");
  const auto coords = member(j, "coords", "bundle").get<std::vector<std::string>>();
  if (coords.size() != 4) throw UsageError("bundle needs 4 coordinates");
  const Json& metric = member(j, "metric", "bundle");
  if (!metric.is_array() || metric.size() != 4) throw UsageError("metric must be a 4x4 array");
  std::vector<std::optional<std::string>> comps;
  for (const auto& row : metric) {
    if (!row.is_array() || row.size() != 4) throw UsageError("metric must be a 4x4 array");
    for (const auto& c : row) comps.push_back(c.is_null() ? std::nullopt : std::optional(scalar_string(c, "metric")));
  }
  const int orientation = j.value("orientation", 1);
  std::vector<std::pair<double, double>> box;
  const Json& dom = member(j, "sample_domain", "bundle");
  for (const auto& c : coords) box.push_back(interval(member(dom, c.c_str(), "sample_domain"), "sample_domain." + c));

  const Json prov = j.value("provenance", Json::object());
  const std::string construction = prov.value("construction", std::string("custom"));
  Metric4Bundle M;
  if (construction == "custom") {
    Scope s;
    if (j.contains("params"))
      for (const auto& [k, v] : j.at("params").items()) {
        if (!v.is_number()) throw UsageError("bundle params must be numbers");
        s.params[k] = v.get<double>();
      }
    std::vector<std::string> src;
    for (std::size_t q = 0; q < comps.size(); ++q) {
      if (!comps[q]) throw UsageError("custom bundle metric component " + std::to_string(q / 4) + std::to_string(q % 4) + " is null");
      src.push_back(*comps[q]);
    }
    M = bundle_from_exprs(coords, src, box, orientation, s);
    for (const auto& e : j.value("exclusions", Json::array())) {
      if (e.is_string()) {
        M.chart.add_exclusion(e.get<std::string>());
      } else if (e.is_object() && e.contains("expr") && e.at("expr").is_string()) {
        M.chart.add_exclusion(e.at("expr").get<std::string>(), e.value("positive", false));
      } else {
        throw UsageError("exclusions must be expression strings or {expr, positive} objects");
      }
    }
    M.provenance.params = params_from(prov.value("params", Json()), "provenance.params");
    return M;
  }
  std::optional<WeylStructure3> base;
  std::optional<MonopoleData> mono;
  if (prov.contains("base")) base = space_from_json(prov.at("base"));
  if (prov.contains("monopole")) {
    if (!base) throw UsageError("provenance monopole needs a base");
    mono = monopole_from_json(prov.at("monopole"), *base);
  }
  M = build_construction(construction, base, mono, params_from(prov.value("params", Json()), "provenance.params"));
  if (M.chart.coords != coords) throw UsageError("bundle coordinates do not match the construction");
  if (M.orientation != orientation) throw UsageError("bundle orientation does not match the construction");
  const auto& ex = M.g.exprs();
  for (std::size_t q = 0; q < comps.size(); ++q)
    if (comps[q] && q < ex.size() && !ex[q].empty() &&
        canonical(*comps[q], M.chart.scope) != canonical(ex[q], M.chart.scope))
      throw UsageError("metric component " + std::to_string(q / 4) + std::to_string(q % 4) +
                       " does not match the provenance");
  M.chart.box = box;
  return M;
}

std::string dump_json(const Json& j, int indent) {
  std::string out;
  write_json(out, j, indent, 0);
  out += "\n";
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

}  // namespace weylab
