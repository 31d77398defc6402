// SPDX-License-Identifier: Apache-2.0
#include <weylab/sampling.hpp>

#include <weylab/error.hpp>

#include <random>

namespace weylab {

std::vector<std::vector<double>> sample_points(const Chart& chart, int n, std::uint64_t seed,
                                               int max_attempts_per_point) {
  if (n < 1) throw UsageError("points must be at least 1");
  if (static_cast<int>(chart.box.size()) != chart.dim()) throw DomainError("chart has no sample domain");
  for (const auto& [lo, hi] : chart.box)
    if (!(lo < hi)) throw DomainError("empty sample interval");
  // mt19937_64 output is specified bit-for-bit; the distributions are not, so map bits by hand
  std::mt19937_64 gen(seed);
  auto unit = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  std::vector<std::vector<double>> pts;
  const long budget = static_cast<long>(n) * max_attempts_per_point;
  long attempts = 0;
  std::vector<double> p(chart.dim());
  while (static_cast<int>(pts.size()) < n) {
    if (++attempts > budget)
      throw DomainError("sample domain effectively empty: " + std::to_string(budget) + " candidates rejected");
    for (int i = 0; i < chart.dim(); ++i) p[i] = chart.box[i].first + unit() * (chart.box[i].second - chart.box[i].first);
    if (chart.fiber) {
      // redraw the last coordinate inside the fiber interval over the others
      std::pair<double, double> r;
      try {
        r = chart.last_interval(p);
      } catch (const DomainError&) {
        continue;
      }
      if (!(r.first < r.second)) continue;
      p.back() = r.first + (p.back() - chart.box.back().first) / (chart.box.back().second - chart.box.back().first) *
                               (r.second - r.first);
    }
    if (chart.admissible(p)) pts.push_back(p);
  }
  return pts;
}

}  // namespace weylab
