// SPDX-License-Identifier: Apache-2.0
#include <weylab/field.hpp>

#include <numeric>

namespace weylab {

Field::Field(int domain_dim, int size, Fn fn, int depth, std::vector<std::string> exprs)
    : domain_dim_(domain_dim), size_(size), depth_(depth), fn_(std::move(fn)), exprs_(std::move(exprs)) {
  if (exprs_.empty()) exprs_.assign(size_, std::string());
  if (static_cast<int>(exprs_.size()) != size_) throw UsageError("field expression count does not match size");
}

Field Field::from_exprs(const std::vector<Expr>& comps) {
  if (comps.empty()) throw UsageError("field needs at least one component");
  const int dim = static_cast<int>(comps[0].scope().coords.size());
  std::vector<std::string> src;
  for (const auto& e : comps) src.push_back(e.str());
  return Field(
      dim, static_cast<int>(comps.size()),
      [comps](std::span<const double> p, int order) {
        JetVec x = coordinate_jets(p, order);
        JetVec out;
        out.reserve(comps.size());
        for (const auto& e : comps) out.push_back(e.eval_real(x));
        return out;
      },
      0, std::move(src));
}

Field Field::constant(int domain_dim, std::vector<double> values) {
  std::vector<std::string> src;
  for (double v : values) src.push_back(Expr::number(v).str());
  const int n = static_cast<int>(values.size());
  return Field(
      domain_dim, n,
      [values, domain_dim](std::span<const double>, int order) {
        JetVec out;
        for (double v : values) out.push_back(RealJet::constant({std::max(1, domain_dim), order}, v));
        return out;
      },
      0, std::move(src));
}

JetVec Field::eval(std::span<const double> point, int order) const {
  if (!fn_) throw UsageError("evaluation of an empty field");
  if (static_cast<int>(point.size()) != domain_dim_)
    throw SpecMismatch("field of dimension " + std::to_string(domain_dim_) + " evaluated at a point of dimension " +
                       std::to_string(point.size()));
  JetVec v = fn_(point, order);
  if (static_cast<int>(v.size()) != size_) throw Error("field evaluator returned the wrong component count");
  return v;
}

bool Field::has_exprs() const {
  return std::all_of(exprs_.begin(), exprs_.end(), [](const std::string& s) { return !s.empty(); });
}

JetVec coordinate_jets(std::span<const double> point, int order) {
  JetVec c;
  const int n = static_cast<int>(point.size());
  for (int k = 0; k < n; ++k) c.push_back(RealJet::variable({n, order}, k, point[k]));
  return c;
}

RealJet widen(const RealJet& j, int n_vars) {
  if (j.n_vars() == n_vars) return j;
  std::vector<int> map(j.n_vars());
  std::iota(map.begin(), map.end(), 0);
  return embed(j, std::span<const int>(map), n_vars);
}

JetVec widen(const JetVec& v, int n_vars) {
  JetVec r;
  r.reserve(v.size());
  for (const auto& j : v) r.push_back(widen(j, n_vars));
  return r;
}

JetVec truncate(const JetVec& v, int order) {
  JetVec r;
  r.reserve(v.size());
  for (const auto& j : v) r.push_back(j.order() == order ? j : truncate(j, order));
  return r;
}

}  // namespace weylab
