// SPDX-License-Identifier: Apache-2.0
#include <weylab/jet.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>

namespace weylab {

namespace {
std::atomic<double> g_epsilon{1e-13};

// Multi-indices of total degree d in n variables, lexicographically descending.
void degree_block(int n, int d, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int a = d; a >= 0; --a) {
    cur[pos] = a;
    degree_block(n, d - a, cur, pos + 1, out);
  }
  cur[pos] = 0;
}

std::unique_ptr<JetTables> build_tables(int n, int order) {
  auto t = std::make_unique<JetTables>();
  t->n_vars = n;
  t->order = order;
  std::vector<int> cur(n, 0);
  for (int d = 0; d <= order; ++d) {
    t->degree_begin.push_back(static_cast<int>(t->multi.size()));
    degree_block(n, d, cur, 0, t->multi);
  }
  t->degree_begin.push_back(static_cast<int>(t->multi.size()));
  for (const auto& m : t->multi) {
    int s = 0;
    for (int v : m) s += v;
    t->degree.push_back(s);
  }
  const int count = static_cast<int>(t->multi.size());
  std::vector<int> sum(n);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < count; ++j) {
      if (t->degree[i] + t->degree[j] > order) continue;
      for (int v = 0; v < n; ++v) sum[v] = t->multi[i][v] + t->multi[j][v];
      t->products.push_back({i, j, t->index_of(sum)});
    }
  }
  if (order >= 1) {
    const int lower = static_cast<int>(coefficient_count(n, order - 1));
    t->shift.resize(n);
    for (int v = 0; v < n; ++v) {
      for (int i = 0; i < lower; ++i) {
        auto m = t->multi[i];
        m[v] += 1;
        t->shift[v].push_back({t->index_of(m), static_cast<double>(m[v])});
      }
    }
  }
  return t;
}
}  // namespace

double jet_epsilon() noexcept { return g_epsilon.load(std::memory_order_relaxed); }
void set_jet_epsilon(double eps) noexcept { g_epsilon.store(eps, std::memory_order_relaxed); }

std::string JetSpec::str() const {
  return "(n_vars=" + std::to_string(n_vars) + ", order=" + std::to_string(order) + ")";
}

std::size_t coefficient_count(int n_vars, int order) {
  std::size_t r = 1;
  for (int i = 1; i <= order; ++i) r = r * static_cast<std::size_t>(n_vars + i) / static_cast<std::size_t>(i);
  return r;
}

int JetTables::index_of(std::span<const int> m) const {
  if (static_cast<int>(m.size()) != n_vars) throw SpecMismatch("multi-index has wrong length");
  int d = 0;
  for (int v : m) {
    if (v < 0) throw SpecMismatch("negative multi-index entry");
    d += v;
  }
  if (d > order) throw OrderDeficit("multi-index beyond jet order", d - order);
  // Rank within the degree block: count multi-indices of degree d that come
  // before m in descending lex order.
  int rank = 0;
  int remaining = d;
  for (int pos = 0; pos + 1 < n_vars; ++pos) {
    const int vars_left = n_vars - pos - 1;
    for (int a = remaining; a > m[pos]; --a) {
      const int rest = remaining - a;
      // compositions of rest into vars_left nonnegative parts
      rank += static_cast<int>(vars_left == 0 ? (rest == 0) : coefficient_count(vars_left - 1, rest));
    }
    remaining -= m[pos];
  }
  return degree_begin[d] + rank;
}

const JetTables& jet_tables(int n_vars, int order) {
  if (n_vars < 1 || order < 0) throw SpecMismatch("invalid jet spec " + JetSpec{n_vars, order}.str());
  constexpr int kFastN = 8, kFastK = 16;
  static std::atomic<const JetTables*> fast[kFastN][kFastK] = {};
  const bool small = n_vars <= kFastN && order < kFastK;
  if (small) {
    if (const JetTables* t = fast[n_vars - 1][order].load(std::memory_order_acquire)) return *t;
  }
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetTables>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n_vars, order}];
  if (!slot) slot = build_tables(n_vars, order);
  if (small) fast[n_vars - 1][order].store(slot.get(), std::memory_order_release);
  return *slot;
}

RealJet real_part(const ComplexJet& a) {
  RealJet r(a.spec());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].real();
  return r;
}

RealJet imag_part(const ComplexJet& a) {
  RealJet r(a.spec());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].imag();
  return r;
}

ComplexJet conj(const ComplexJet& a) {
  ComplexJet r(a.spec());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = std::conj(a[i]);
  return r;
}

ComplexJet to_complex(const RealJet& a) {
  ComplexJet r(a.spec());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  return r;
}

template class Jet<double>;
template class Jet<Complex>;

}  // namespace weylab
