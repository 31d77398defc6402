// SPDX-License-Identifier: Apache-2.0
// weylab: command-line front end. Exit codes: 0 pass, 1 fail, 2 usage or domain error.
#include <weylab/check.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using weylab::Json;

struct Options {
  std::string request_file, output;
  unsigned workers = 0;
  std::string space, monopole, variant, construction, monopole_file, bundle_file;
  std::vector<std::string> params, monopole_params, fields, build_params, chi;
  std::vector<double> t_domain;
  std::optional<double> perturb, tolerance;
  std::optional<long long> points, seed;
  std::string gauge;
  std::map<std::string, bool> diag;
  std::string kind;
};

Json key_values(const std::vector<std::string>& kv, const std::string& flag) {
  Json j = Json::object();
  for (const auto& s : kv) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw weylab::UsageError(flag + " expects name=expr, got '" + s + "'");
    j[s.substr(0, eq)] = s.substr(eq + 1);
  }
  return j;
}

void merge(Json& into, const char* key, const Json& extra) {
  if (extra.empty()) return;
  if (!into.contains(key)) into[key] = Json::object();
  for (const auto& [k, v] : extra.items()) into[key][k] = v;
}

Json to_request(const Options& o) {
  Json r = o.request_file.empty() ? Json::object() : weylab::read_json_file(o.request_file);
  if (!r.is_object()) throw weylab::UsageError("request document must be a JSON object");
  if (!o.space.empty()) r["space"] = o.space;
  merge(r, "params", key_values(o.params, "--param"));
  if (o.perturb) r["perturb"] = *o.perturb;
  if (!o.monopole.empty()) r["monopole"] = o.monopole;
  merge(r, "monopole_params", key_values(o.monopole_params, "--monopole-param"));
  if (!o.variant.empty()) r["variant"] = o.variant;
  merge(r, "fields", key_values(o.fields, "--field"));
  if (!o.t_domain.empty()) r["t_domain"] = o.t_domain;
  if (!o.monopole_file.empty()) r["monopole_doc"] = weylab::read_json_file(o.monopole_file);
  if (!o.construction.empty()) r["construction"] = o.construction;
  Json bp = key_values(o.build_params, "--build-param");
  if (!o.gauge.empty()) bp["gauge"] = o.gauge;
  merge(r, "build_params", bp);
  if (!o.bundle_file.empty()) r["bundle"] = weylab::read_json_file(o.bundle_file);
  Json diags = Json::array();
  for (const auto& [name, on] : o.diag)
    if (on) diags.push_back(name);
  if (!diags.empty()) r["diagnostics"] = diags;
  if (!o.chi.empty()) r["chi"] = o.chi;
  if (o.points) r["points"] = *o.points;
  if (o.seed) r["seed"] = *o.seed;
  if (o.tolerance) r["tolerance"] = *o.tolerance;
  return r;
}

void emit(const Json& j, const std::string& path) {
  const std::string text = weylab::dump_json(j);
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw weylab::Error("cannot write " + path);
}

void add_target(CLI::App* c, Options& o, bool monopole, bool metric) {
  c->add_option("--space,--base", o.space, "Einstein-Weyl space from the catalog");
  c->add_option("--param", o.params, "space parameter name=expr (repeatable)");
  c->add_option("--perturb", o.perturb, "add eps dz to omega_B");
  if (monopole) {
    c->add_option("--monopole", o.monopole, "monopole from the catalog");
    c->add_option("--monopole-param", o.monopole_params, "monopole parameter name=expr (repeatable)");
    c->add_option("--variant", o.variant, "abelian | affine | projective | general");
    c->add_option("--field", o.fields, "monopole field name=expr (repeatable)");
    c->add_option("--t-domain", o.t_domain, "t interval for the monopole")->expected(2);
    c->add_option("--monopole-file", o.monopole_file, "monopole JSON document");
  }
  if (metric) {
    c->add_option("--construction", o.construction, "monopole | hitchin-lebrun | hypercr-einstein | explicit-family | sfk");
    c->add_option("--build-param", o.build_params, "construction parameter name=expr (repeatable)");
    c->add_option("--gauge", o.gauge, "monopole construction gauge: base | w");
    c->add_option("--bundle", o.bundle_file, "metric bundle JSON document");
  }
}

void add_sampling(CLI::App* c, Options& o) {
  c->add_option("--points", o.points, "number of sample points (default 20)");
  c->add_option("--seed", o.seed, "sampling seed (default 1)");
  c->add_option("--tolerance", o.tolerance, "pass threshold for every residual");
  c->add_option("--workers", o.workers, "parallel workers (0: all cores)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Einstein-Weyl geometry and selfdual 4-metrics: constructions and numerical checks"};
  app.set_version_flag("--version", std::string(weylab::kVersion));
  app.require_subcommand(1);
  Options o;

  auto* catalog = app.add_subcommand("catalog", "list spaces, monopoles, constructions and diagnostics");
  catalog->add_option("--kind", o.kind, "spaces | monopoles | constructions");

  auto* ew = app.add_subcommand("check-ew", "Einstein-Weyl residuals of a space");
  add_target(ew, o, false, false);
  add_sampling(ew, o);

  auto* mono = app.add_subcommand("check-monopole", "monopole equation residuals");
  add_target(mono, o, true, false);
  add_sampling(mono, o);

  auto* build = app.add_subcommand("build", "build a metric bundle and print it as JSON");
  add_target(build, o, true, true);

  auto* metric = app.add_subcommand("check-metric", "4-dimensional diagnostics of a bundle");
  add_target(metric, o, true, true);
  add_sampling(metric, o);
  metric->add_option("--chi", o.chi, "base congruence for the complex structure (3 expressions)")->expected(3);
  for (const char* d : {"einstein", "selfdual", "scal", "ricci-flat", "conformal-killing", "legendrian", "nijenhuis",
                        "kahler", "sfk-linear", "hl-agreement"}) {
    o.diag[d] = false;
    metric->add_flag(std::string("--") + d, o.diag[d], std::string("check ") + d);
  }

  auto* rt = app.add_subcommand("roundtrip", "recover the base from a bundle and re-read its JSON");
  add_target(rt, o, true, true);
  add_sampling(rt, o);

  for (auto* c : {catalog, ew, mono, build, metric, rt}) {
    c->add_option("--request", o.request_file, "JSON request document");
    c->add_option("--output,-o", o.output, "write JSON here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << weylab::dump_json({{"error", {{"type", "UsageError"}, {"message", e.what()}}}});
    return 2;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "catalog") {
      Json j = weylab::catalog_json();
      if (!o.kind.empty()) {
        if (!j.contains(o.kind) || o.kind == "tool" || o.kind == "version")
          throw weylab::UsageError("unknown catalog kind '" + o.kind + "'");
        j = Json{{o.kind, j.at(o.kind)}};
      }
      emit(j, o.output);
      return 0;
    }
    const Json request = to_request(o);
    if (cmd == "build") {
      emit(weylab::build_request(request), o.output);
      return 0;
    }
    const Json report = weylab::run_check(cmd, request, o.workers);
    emit(report, o.output);
    return weylab::exit_code(report);
  } catch (const std::exception& e) {
    std::cerr << weylab::dump_json(weylab::error_json(e));
    return 2;
  }
}
