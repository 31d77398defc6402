// SPDX-License-Identifier: Apache-2.0
#include <weylab/forms.hpp>

#include <bit>
#include <cmath>
#include <sstream>

namespace weylab {

int popcount(unsigned m) { return std::popcount(m); }

int wedge_sign(unsigned a, unsigned b) {
  if (a & b) return 0;
  int inversions = 0;
  for (unsigned i = 0; i < 32; ++i)
    if (a & (1u << i)) inversions += std::popcount(b & ((1u << i) - 1u));
  return (inversions % 2) ? -1 : 1;
}

// ---------------------------------------------------------------- metrics

MetricJet MetricJet::truncated(int order) const {
  MetricJet m;
  m.dim = dim;
  m.g = truncate(g, order);
  m.inv = truncate(inv, order);
  m.sqrt_det = truncate(sqrt_det, order);
  return m;
}

namespace {
// Cholesky on plain values; returns false if not positive definite.
bool cholesky(const std::vector<double>& a, int n, std::vector<double>& L) {
  L.assign(n * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (int k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k];
    if (!(d > 0.0)) return false;
    L[j * n + j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (int k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k];
      L[i * n + j] = s / L[j * n + j];
    }
  }
  return true;
}
}  // namespace

double min_eigenvalue(const std::vector<double>& m, int n) {
  // Jacobi rotations; n <= 6 here.
  std::vector<double> a = m;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a[p * n + q];
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a[q * n + q] - a[p * n + p]) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * akq;
          a[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * aqk;
          a[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  double mn = a[0];
  for (int i = 1; i < n; ++i) mn = std::min(mn, a[i * n + i]);
  return mn;
}

MetricJet metric_at(JetVec comps, int dim) {
  if (static_cast<int>(comps.size()) != dim * dim) throw SpecMismatch("metric component count");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j) comps[i * dim + j] = comps[j * dim + i];
  std::vector<double> vals(dim * dim), L;
  for (int k = 0; k < dim * dim; ++k) vals[k] = comps[k].value();
  if (!cholesky(vals, dim, L)) {
    std::ostringstream os;
    os << "metric is not positive definite (smallest eigenvalue " << min_eigenvalue(vals, dim) << ")";
    throw DomainError(os.str());
  }
  const JetSpec spec = comps[0].spec();
  // Gauss-Jordan on [A | I] with partial pivoting by constant term.
  JetVec a = comps;
  JetVec inv(dim * dim, RealJet(spec));
  for (int i = 0; i < dim; ++i) inv[i * dim + i] = RealJet::constant(spec, 1.0);
  RealJet det = RealJet::constant(spec, 1.0);
  for (int col = 0; col < dim; ++col) {
    int piv = col;
    for (int r = col + 1; r < dim; ++r)
      if (std::abs(a[r * dim + col].value()) > std::abs(a[piv * dim + col].value())) piv = r;
    if (piv != col) {
      for (int k = 0; k < dim; ++k) {
        std::swap(a[piv * dim + k], a[col * dim + k]);
        std::swap(inv[piv * dim + k], inv[col * dim + k]);
      }
      det = -det;
    }
    const RealJet p = a[col * dim + col];
    det = det * p;
    const RealJet rp = reciprocal(p);
    for (int k = 0; k < dim; ++k) {
      a[col * dim + k] = a[col * dim + k] * rp;
      inv[col * dim + k] = inv[col * dim + k] * rp;
    }
    for (int r = 0; r < dim; ++r) {
      if (r == col) continue;
      const RealJet f = a[r * dim + col];
      for (int k = 0; k < dim; ++k) {
        a[r * dim + k] -= f * a[col * dim + k];
        inv[r * dim + k] -= f * inv[col * dim + k];
      }
    }
  }
  MetricJet m;
  m.dim = dim;
  m.g = std::move(comps);
  m.inv = std::move(inv);
  m.sqrt_det = sqrt(det);
  return m;
}

MetricJet metric_at(const Field& g, std::span<const double> point, int order) {
  const int dim = static_cast<int>(std::lround(std::sqrt(static_cast<double>(g.size()))));
  return metric_at(g.eval(point, order), dim);
}

// ---------------------------------------------------------------- forms

FormJet::FormJet(int d, JetSpec spec) : dim(d), c(std::size_t{1} << d, RealJet(spec)) {}

FormJet FormJet::scalar(int d, const RealJet& f) {
  FormJet r(d, f.spec());
  r.c[0] = f;
  return r;
}

FormJet FormJet::one_form(const JetVec& comps) {
  const int d = static_cast<int>(comps.size());
  FormJet r(d, comps.at(0).spec());
  for (int i = 0; i < d; ++i) r.c[1u << i] = comps[i];
  return r;
}

RealJet FormJet::comp2(int i, int j) const {
  if (i == j) return RealJet(spec());
  const unsigned m = (1u << i) | (1u << j);
  return i < j ? c[m] : -c[m];
}

FormJet& FormJet::operator+=(const FormJet& o) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
  return *this;
}
FormJet& FormJet::operator-=(const FormJet& o) {
  for (std::size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
  return *this;
}
FormJet& FormJet::operator*=(double s) {
  for (auto& j : c) j *= s;
  return *this;
}
FormJet operator*(const RealJet& f, const FormJet& a) {
  FormJet r = a;
  for (auto& j : r.c) j = f * j;
  return r;
}

FormJet FormJet::degree_part(int k) const {
  FormJet r(dim, spec());
  for (unsigned m = 0; m < c.size(); ++m)
    if (popcount(m) == k) r.c[m] = c[m];
  return r;
}

FormJet FormJet::truncated(int order) const {
  FormJet r;
  r.dim = dim;
  r.c = truncate(c, order);
  return r;
}

JetVec FormJet::as_one_form() const {
  JetVec v;
  for (int i = 0; i < dim; ++i) v.push_back(c[1u << i]);
  return v;
}

double FormJet::max_abs() const {
  double m = 0.0;
  for (const auto& j : c) m = std::max(m, weylab::max_abs(j));
  return m;
}

FormJet exterior_derivative(const FormJet& a) {
  const int k = a.order();
  if (k < 1) throw OrderDeficit("exterior derivative", 1);
  FormJet r(a.dim, {a.spec().n_vars, k - 1});
  for (unsigned m = 0; m < a.c.size(); ++m) {
    if (weylab::max_abs(a.c[m]) == 0.0) continue;
    for (int i = 0; i < a.dim; ++i) {
      const unsigned bit = 1u << i;
      if (m & bit) continue;
      r.c[m | bit] += static_cast<double>(wedge_sign(bit, m)) * partial(a.c[m], i);
    }
  }
  return r;
}

FormJet wedge(const FormJet& a, const FormJet& b) {
  FormJet r(a.dim, a.spec());
  for (unsigned m = 0; m < a.c.size(); ++m) {
    if (weylab::max_abs(a.c[m]) == 0.0) continue;
    for (unsigned n = 0; n < b.c.size(); ++n) {
      const int s = wedge_sign(m, n);
      if (s == 0 || weylab::max_abs(b.c[n]) == 0.0) continue;
      r.c[m | n] += static_cast<double>(s) * (a.c[m] * b.c[n]);
    }
  }
  return r;
}

FormJet interior(const JetVec& X, const FormJet& a) {
  FormJet r(a.dim, a.spec());
  for (unsigned m = 0; m < a.c.size(); ++m) {
    for (int i = 0; i < a.dim; ++i) {
      const unsigned bit = 1u << i;
      if (!(m & bit)) continue;
      // i_X(dx^i ^ rest) = X^i rest, after moving dx^i to the front
      r.c[m & ~bit] += static_cast<double>(wedge_sign(bit, m & ~bit)) * (X[i] * a.c[m]);
    }
  }
  return r;
}

JetVec flat(const MetricJet& g, const JetVec& X) {
  JetVec r(g.dim, RealJet(g.spec()));
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) r[i] += g(i, j) * X[j];
  return r;
}

JetVec sharp(const MetricJet& g, const JetVec& a) {
  JetVec r(g.dim, RealJet(g.spec()));
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) r[i] += g.up(i, j) * a[j];
  return r;
}

int star_sign(int k) { return ((k * (k - 1) / 2) % 2) ? -1 : 1; }

namespace {
std::vector<int> bits_of(unsigned m, int dim) {
  std::vector<int> v;
  for (int i = 0; i < dim; ++i)
    if (m & (1u << i)) v.push_back(i);
  return v;
}

RealJet jet_det(const std::vector<const RealJet*>& mat, int n, JetSpec spec) {
  if (n == 0) return RealJet::constant(spec, 1.0);
  if (n == 1) return *mat[0];
  RealJet r(spec);
  for (int col = 0; col < n; ++col) {
    std::vector<const RealJet*> minor;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != col) minor.push_back(mat[i * n + j]);
    RealJet term = (*mat[col]) * jet_det(minor, n - 1, spec);
    if (col % 2) r -= term;
    else r += term;
  }
  return r;
}

// alpha^I = sum_K det(inv[I, K]) alpha_K over |K| = |I|.
RealJet raised(const FormJet& a, const MetricJet& g, unsigned I) {
  const auto rows = bits_of(I, g.dim);
  const int k = static_cast<int>(rows.size());
  RealJet r(a.spec());
  for (unsigned K = 0; K < a.c.size(); ++K) {
    if (popcount(K) != k || weylab::max_abs(a.c[K]) == 0.0) continue;
    const auto cols = bits_of(K, g.dim);
    std::vector<const RealJet*> sub;
    for (int i : rows)
      for (int j : cols) sub.push_back(&g.inv[i * g.dim + j]);
    r += jet_det(sub, k, a.spec()) * a.c[K];
  }
  return r;
}
}  // namespace

FormJet hodge_standard(const FormJet& a, const MetricJet& g, int orientation) {
  if (a.dim != g.dim) throw SpecMismatch("star: form and metric dimensions differ");
  const MetricJet gm = g.order() == a.order() ? g : g.truncated(a.order());
  const unsigned full = (1u << a.dim) - 1u;
  FormJet r(a.dim, a.spec());
  for (unsigned I = 0; I <= full; ++I) {
    const RealJet up = raised(a, gm, I);
    if (weylab::max_abs(up) == 0.0) continue;
    const unsigned J = full & ~I;
    r.c[J] += static_cast<double>(orientation * wedge_sign(I, J)) * (gm.sqrt_det * up);
  }
  return r;
}

FormJet star(const FormJet& a, const MetricJet& g, int orientation) {
  FormJet s = hodge_standard(a, g, orientation);
  // the output degree is n - k; the sign depends on the input degree k
  for (unsigned J = 0; J < s.c.size(); ++J) {
    const int k = a.dim - popcount(J);
    if (star_sign(k) < 0) s.c[J] = -s.c[J];
  }
  return s;
}

RealJet norm2(const FormJet& a, const MetricJet& g) {
  const MetricJet gm = g.order() == a.order() ? g : g.truncated(a.order());
  RealJet r(a.spec());
  for (unsigned I = 0; I < a.c.size(); ++I) {
    if (weylab::max_abs(a.c[I]) == 0.0) continue;
    r += a.c[I] * raised(a, gm, I);
  }
  return r;
}

double norm(const FormJet& a, const MetricJet& g) {
  const FormJet v = a.truncated(0);
  return std::sqrt(std::max(0.0, norm2(v, g.truncated(0)).value()));
}

SdAsd split_sd_asd(const FormJet& F, const MetricJet& g, int orientation) {
  if (F.dim != 4) throw UsageError("selfdual splitting needs dimension 4");
  const FormJet f2 = F.degree_part(2);
  const FormJet s = star(f2, g, orientation);
  SdAsd r{0.5 * (f2 + s), 0.5 * (f2 - s)};
  return r;
}

Frame orthonormal_frame(const MetricJet& g) {
  const int n = g.dim;
  std::vector<double> vals(n * n), Lc;
  for (int k = 0; k < n * n; ++k) vals[k] = g.g[k].value();
  if (!cholesky(vals, n, Lc)) throw DomainError("metric is not positive definite");
  Frame f;
  f.dim = n;
  f.L = Lc;
  // E = L^{-T}: solve L^T E = I by back substitution
  f.E.assign(n * n, 0.0);
  for (int col = 0; col < n; ++col) {
    for (int i = n - 1; i >= 0; --i) {
      double s = (i == col) ? 1.0 : 0.0;
      for (int k = i + 1; k < n; ++k) s -= Lc[k * n + i] * f.E[k * n + col];
      f.E[i * n + col] = s / Lc[i * n + i];
    }
  }
  return f;
}

}  // namespace weylab
