// SPDX-License-Identifier: Apache-2.0
// Parameter helpers shared by the catalogs.
#pragma once

#include <weylab/chart.hpp>
#include <weylab/error.hpp>

#include <map>
#include <set>
#include <string>

namespace weylab::detail {

inline std::string param(const std::map<std::string, std::string>& p, const std::string& key,
                         const std::string& fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

inline void reject_unknown(const std::string& name, const std::map<std::string, std::string>& p,
                           const std::set<std::string>& allowed) {
  for (const auto& [k, v] : p)
    if (!allowed.count(k)) throw UsageError("unknown parameter '" + k + "' for " + name);
}

inline double number_param(const std::map<std::string, std::string>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  Expr e = Expr::parse(it->second, Scope{});
  if (!e.is_constant() || e.needs_complex()) throw UsageError("parameter '" + key + "' must be a real number");
  return e.value_at({});
}

inline Field fields(const Chart& c, const std::vector<std::string>& src) {
  std::vector<Expr> e;
  for (const auto& s : src) e.push_back(c.parse(s));
  return Field::from_exprs(e);
}

inline std::string wrap(const std::string& s) { return "(" + s + ")"; }

}  // namespace weylab::detail
