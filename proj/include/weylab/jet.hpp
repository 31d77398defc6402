// SPDX-License-Identifier: Apache-2.0
//
// Dense truncated multivariate Taylor expansions ("jets").
//
// A Jet<T> of n variables and order k stores the Taylor coefficients of a
// function about a point for every multi-index of total degree <= k, in
// graded-lexicographic order: all degree-0 terms, then degree 1, and so on;
// within a degree, multi-indices are ordered lexicographically descending
// (for two variables: 1, x, y, x^2, xy, y^2, ...). Coefficient m is
// f^(m)(p) / m!, so the constant term is the value at the expansion point.
//
// All operations are exact polynomial truncations. Jets are the only source
// of derivatives anywhere in the library.
#pragma once

#include <weylab/error.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace weylab {

using Complex = std::complex<double>;

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};

/// Threshold below which a constant term counts as zero for division and
/// log/sqrt/pow domain checks. Default 1e-13.
double jet_epsilon() noexcept;
void set_jet_epsilon(double eps) noexcept;

struct JetSpec {
  int n_vars = 1;
  int order = 0;

  friend bool operator==(const JetSpec&, const JetSpec&) = default;
  std::string str() const;
};

/// binomial(n_vars + order, order)
std::size_t coefficient_count(int n_vars, int order);

/// Index tables shared by all jets of one (n_vars, order). Built once and
/// never mutated afterwards, so concurrent readers need no locking.
struct JetTables {
  struct Product {
    int lhs, rhs, out;
  };
  struct Shift {
    int src;       // index of m + e_v in the order-k table
    double scale;  // m_v + 1
  };

  int n_vars = 0;
  int order = 0;
  std::vector<std::vector<int>> multi;    // multi-index per coefficient
  std::vector<int> degree;                // total degree per coefficient
  std::vector<int> degree_begin;          // first index of each degree, size order+2
  std::vector<Product> products;          // all (i, j) with deg i + deg j <= order
  std::vector<std::vector<Shift>> shift;  // per variable, for the order-1 result

  int index_of(std::span<const int> m) const;
};

const JetTables& jet_tables(int n_vars, int order);

template <class T>
class Jet {
 public:
  using value_type = T;

  Jet() : Jet(JetSpec{1, 0}) {}
  explicit Jet(JetSpec spec)
      : tables_(&jet_tables(spec.n_vars, spec.order)), c_(tables_->multi.size(), T{}) {}

  static Jet constant(JetSpec spec, T value) {
    Jet j(spec);
    j.c_[0] = value;
    return j;
  }

  /// The coordinate function x_var expanded about x_var = value.
  static Jet variable(JetSpec spec, int var, T value) {
    if (var < 0 || var >= spec.n_vars) throw SpecMismatch("variable index out of range");
    Jet j = constant(spec, value);
    if (spec.order >= 1) j.c_[1 + var] = T{1};
    return j;
  }

  JetSpec spec() const { return {tables_->n_vars, tables_->order}; }
  int n_vars() const { return tables_->n_vars; }
  int order() const { return tables_->order; }
  const JetTables& tables() const { return *tables_; }

  T value() const { return c_[0]; }
  std::size_t size() const { return c_.size(); }
  std::span<const T> coeffs() const { return c_; }
  std::span<T> coeffs() { return c_; }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }

  /// Coefficient of the monomial with exponents m (|m| <= order).
  T coeff(std::span<const int> m) const { return c_[tables_->index_of(m)]; }

  Jet operator-() const {
    Jet r(*this);
    for (auto& v : r.c_) v = -v;
    return r;
  }

  Jet& operator+=(const Jet& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    check_same(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }
  Jet& operator+=(T s) {
    c_[0] += s;
    return *this;
  }
  Jet& operator-=(T s) {
    c_[0] -= s;
    return *this;
  }
  Jet& operator*=(T s) {
    for (auto& v : c_) v *= s;
    return *this;
  }
  Jet& operator/=(T s) {
    for (auto& v : c_) v /= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, T s) { return a += s; }
  friend Jet operator+(T s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, T s) { return a -= s; }
  friend Jet operator-(T s, const Jet& a) { return (-a) += s; }
  friend Jet operator*(Jet a, T s) { return a *= s; }
  friend Jet operator*(T s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, T s) { return a /= s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_same(b);
    Jet r(a.spec());
    for (const auto& p : a.tables_->products) r.c_[p.out] += a.c_[p.lhs] * b.c_[p.rhs];
    return r;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(T s, const Jet& b) { return reciprocal(b) * s; }

  /// Truncated univariate composition sum_j series[j] * (a - a0)^j, where
  /// series holds the Taylor coefficients of some f about a0.
  Jet compose_univariate(std::span<const T> series) const {
    Jet h(*this);
    h.c_[0] = T{};
    const int k = order();
    Jet r = constant(spec(), k < static_cast<int>(series.size()) ? series[k] : T{});
    for (int j = k - 1; j >= 0; --j) {
      r = r * h;
      r.c_[0] += series[j];
    }
    return r;
  }

  void check_same(const Jet& o) const {
    if (tables_ != o.tables_)
      throw SpecMismatch("jet spec mismatch: " + spec().str() + " vs " + o.spec().str());
  }

 private:
  const JetTables* tables_;
  std::vector<T> c_;

  template <class U>
  friend Jet<U> reciprocal(const Jet<U>& b);
};

using RealJet = Jet<double>;
using ComplexJet = Jet<Complex>;

namespace detail {
template <class T>
bool near_zero(T v) {
  return std::abs(v) <= jet_epsilon();
}
template <class T>
void require_positive_or_off_cut(T a0, const char* fn) {
  if constexpr (is_complex<T>::value) {
    if (std::abs(a0) <= jet_epsilon() ||
        (std::abs(a0.imag()) <= jet_epsilon() && a0.real() < 0.0))
      throw DomainError(std::string(fn) + ": constant term on the branch cut or zero");
  } else {
    if (!(a0 > jet_epsilon()))
      throw DomainError(std::string(fn) + ": constant term " + std::to_string(a0) +
                        " is not positive");
  }
}
}  // namespace detail

template <class T>
Jet<T> reciprocal(const Jet<T>& b) {
  const T b0 = b.value();
  if (detail::near_zero(b0)) throw DomainError("division by a jet with (near-)zero constant term");
  const int k = b.order();
  std::vector<T> s(k + 1);
  T p = T{1} / b0;
  for (int j = 0; j <= k; ++j) {
    s[j] = p;
    p *= -T{1} / b0;
  }
  return b.compose_univariate(s);
}

template <class T>
Jet<T> exp(const Jet<T>& a) {
  const int k = a.order();
  std::vector<T> s(k + 1);
  T e = std::exp(a.value());
  for (int j = 0; j <= k; ++j) {
    s[j] = e;
    e /= static_cast<double>(j + 1);
  }
  return a.compose_univariate(s);
}

template <class T>
Jet<T> log(const Jet<T>& a) {
  const T a0 = a.value();
  detail::require_positive_or_off_cut(a0, "log");
  const int k = a.order();
  std::vector<T> s(k + 1);
  s[0] = std::log(a0);
  T inv = T{1} / a0, p = inv;
  for (int j = 1; j <= k; ++j) {
    s[j] = ((j % 2 == 1) ? T{1} : T{-1}) * p / static_cast<double>(j);
    p *= inv;
  }
  return a.compose_univariate(s);
}

/// a^p for a real exponent p; the constant term must be positive (or off the
/// branch cut for complex jets).
template <class T>
Jet<T> pow(const Jet<T>& a, double p) {
  const T a0 = a.value();
  detail::require_positive_or_off_cut(a0, "pow");
  const int k = a.order();
  std::vector<T> s(k + 1);
  T base = std::pow(a0, T{p});
  T inv = T{1} / a0;
  double binom = 1.0;
  T inv_pow = T{1};
  for (int j = 0; j <= k; ++j) {
    s[j] = base * binom * inv_pow;
    binom *= (p - j) / static_cast<double>(j + 1);
    inv_pow *= inv;
  }
  return a.compose_univariate(s);
}

/// Integer power by repeated squaring; negative exponents divide.
template <class T>
Jet<T> pow_int(const Jet<T>& a, long n) {
  if (n < 0) return reciprocal(pow_int(a, -n));
  Jet<T> r = Jet<T>::constant(a.spec(), T{1});
  Jet<T> b = a;
  while (n > 0) {
    if (n & 1) r = r * b;
    n >>= 1;
    if (n) b = b * b;
  }
  return r;
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
  detail::require_positive_or_off_cut(a.value(), "sqrt");
  return pow(a, 0.5);
}

namespace detail {
// Taylor coefficients of a function whose derivatives cycle with period 4
// (sin, cos) or 2 (sinh, cosh), starting from derivative values d[0..].
template <class T>
std::vector<T> cyclic_series(int k, const std::vector<T>& d) {
  std::vector<T> s(k + 1);
  double fact = 1.0;
  for (int j = 0; j <= k; ++j) {
    if (j > 0) fact *= j;
    s[j] = d[j % d.size()] / fact;
  }
  return s;
}
}  // namespace detail

template <class T>
Jet<T> sin(const Jet<T>& a) {
  const T sv = std::sin(a.value()), cv = std::cos(a.value());
  return a.compose_univariate(detail::cyclic_series<T>(a.order(), {sv, cv, -sv, -cv}));
}
template <class T>
Jet<T> cos(const Jet<T>& a) {
  const T sv = std::sin(a.value()), cv = std::cos(a.value());
  return a.compose_univariate(detail::cyclic_series<T>(a.order(), {cv, -sv, -cv, sv}));
}
template <class T>
Jet<T> sinh(const Jet<T>& a) {
  const T sv = std::sinh(a.value()), cv = std::cosh(a.value());
  return a.compose_univariate(detail::cyclic_series<T>(a.order(), {sv, cv}));
}
template <class T>
Jet<T> cosh(const Jet<T>& a) {
  const T sv = std::sinh(a.value()), cv = std::cosh(a.value());
  return a.compose_univariate(detail::cyclic_series<T>(a.order(), {cv, sv}));
}
template <class T>
Jet<T> tan(const Jet<T>& a) {
  return sin(a) / cos(a);
}

/// atan via the series of 1/(1 + x^2) about the constant term, integrated.
template <class T>
Jet<T> atan(const Jet<T>& a) {
  const T a0 = a.value();
  const int k = a.order();
  const T d0 = T{1} + a0 * a0, d1 = T{2} * a0, d2 = T{1};
  if (detail::near_zero(d0)) throw DomainError("atan: constant term at a pole of the derivative");
  std::vector<T> q(k + 1);
  for (int m = 0; m <= k; ++m) {
    T acc = (m == 0) ? T{1} : T{};
    if (m >= 1) acc -= d1 * q[m - 1];
    if (m >= 2) acc -= d2 * q[m - 2];
    q[m] = acc / d0;
  }
  std::vector<T> s(k + 1);
  s[0] = std::atan(a0);
  for (int j = 1; j <= k; ++j) s[j] = q[j - 1] / static_cast<double>(j);
  return a.compose_univariate(s);
}

/// d/dx_var, returning a jet one order lower.
template <class T>
Jet<T> partial(const Jet<T>& a, int var) {
  if (a.order() < 1) throw OrderDeficit("partial derivative of an order-0 jet", 1);
  if (var < 0 || var >= a.n_vars()) throw SpecMismatch("partial: variable index out of range");
  Jet<T> r(JetSpec{a.n_vars(), a.order() - 1});
  const auto& sh = a.tables().shift[var];
  for (std::size_t i = 0; i < sh.size(); ++i) r[i] = a[sh[i].src] * sh[i].scale;
  return r;
}

/// The mixed partial derivative with exponents m: coeff(m) * prod m_i!.
template <class T>
T derivative(const Jet<T>& a, std::span<const int> m) {
  int total = 0;
  double fact = 1.0;
  for (int mi : m) {
    total += mi;
    for (int q = 2; q <= mi; ++q) fact *= q;
  }
  if (static_cast<int>(m.size()) != a.n_vars()) throw SpecMismatch("derivative: multi-index size");
  if (total > a.order()) throw OrderDeficit("derivative beyond jet order", total - a.order());
  return a.coeff(m) * fact;
}

template <class T>
Jet<T> truncate(const Jet<T>& a, int order) {
  if (order > a.order()) throw OrderDeficit("truncate to a higher order", order - a.order());
  Jet<T> r(JetSpec{a.n_vars(), order});
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i];
  return r;
}

/// Substitute argument jets for the variables of f: the result is
/// sum_m f_m prod_i (args_i - args_i(0))^m_i in the variables of the args.
/// The order is min(f.order, args order); args must share one spec and have
/// as many entries as f has variables.
template <class T, class U>
Jet<U> compose(const Jet<T>& f, std::span<const Jet<U>> args) {
  if (static_cast<int>(args.size()) != f.n_vars()) throw SpecMismatch("compose: argument count");
  if (args.empty()) throw SpecMismatch("compose: no arguments");
  const int k = std::min(f.order(), args[0].order());
  const JetSpec out{args[0].n_vars(), k};
  std::vector<std::vector<Jet<U>>> powers(args.size());
  for (std::size_t i = 0; i < args.size(); ++i) {
    args[0].check_same(args[i]);
    Jet<U> h = truncate(args[i], k);
    h[0] = U{};
    powers[i].push_back(Jet<U>::constant(out, U{1}));
    for (int p = 1; p <= k; ++p) powers[i].push_back(powers[i].back() * h);
  }
  Jet<U> r(out);
  const auto& tb = f.tables();
  const std::size_t ncoef = coefficient_count(f.n_vars(), k);
  for (std::size_t idx = 0; idx < ncoef; ++idx) {
    const auto& m = tb.multi[idx];
    if (f[idx] == T{}) continue;
    Jet<U> term = Jet<U>::constant(out, U{1});
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) term = term * powers[i][m[i]];
    r += term * U(f[idx]);
  }
  return r;
}

/// Re-express a jet in a larger variable set: variable v of a becomes
/// variable map[v] of the result. The result does not depend on the other
/// variables.
template <class T>
Jet<T> embed(const Jet<T>& a, std::span<const int> map, int n_vars_out) {
  if (static_cast<int>(map.size()) != a.n_vars()) throw SpecMismatch("embed: map size");
  Jet<T> r(JetSpec{n_vars_out, a.order()});
  std::vector<int> m(n_vars_out);
  const auto& tb = a.tables();
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    std::fill(m.begin(), m.end(), 0);
    for (std::size_t v = 0; v < map.size(); ++v) m[map[v]] = tb.multi[idx][v];
    r[r.tables().index_of(m)] = a[idx];
  }
  return r;
}

RealJet real_part(const ComplexJet& a);
RealJet imag_part(const ComplexJet& a);
ComplexJet conj(const ComplexJet& a);
ComplexJet to_complex(const RealJet& a);
/// Largest coefficient magnitude.
template <class T>
double max_abs(const Jet<T>& a) {
  double m = 0.0;
  for (const auto& v : a.coeffs()) m = std::max(m, static_cast<double>(std::abs(v)));
  return m;
}

extern template class Jet<double>;
extern template class Jet<Complex>;

}  // namespace weylab
