// Independent numerical oracles used by the tests: central finite
// differences on plain double functions, and a small seeded RNG.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Fn = std::function<double(const std::vector<double>&)>;

/// Mixed partial derivative with exponents m by nested central differences.
inline double fd_derivative(const Fn& f, std::vector<double> x, std::vector<int> m, double h) {
  for (std::size_t v = 0; v < m.size(); ++v) {
    if (m[v] == 0) continue;
    m[v] -= 1;
    std::vector<double> xp = x, xm = x;
    xp[v] += h;
    xm[v] -= h;
    return (fd_derivative(f, xp, m, h) - fd_derivative(f, xm, m, h)) / (2 * h);
  }
  return f(x);
}

/// Richardson-extrapolated nested central difference (removes the h^2 term).
inline double fd_derivative_rich(const Fn& f, const std::vector<double>& x, const std::vector<int>& m, double h) {
  return (4.0 * fd_derivative(f, x, m, h / 2) - fd_derivative(f, x, m, h)) / 3.0;
}

/// Step sizes that balance truncation and roundoff for central differences.
inline double fd_step(int total_order) {
  switch (total_order) {
    case 0: return 0.0;
    case 1: return 1e-3;
    case 2: return 2e-3;
    default: return 1e-2;
  }
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long seed) : gen(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
};

}  // namespace oracle
