// SPDX-License-Identifier: Apache-2.0
#include <weylab/curvature.hpp>

#include <cmath>

namespace weylab {

std::vector<double> values(const JetVec& v) {
  std::vector<double> r;
  r.reserve(v.size());
  for (const auto& j : v) r.push_back(j.value());
  return r;
}

Connection levi_civita(const MetricJet& g) {
  const int n = g.dim;
  const int k = g.order();
  if (k < 1) throw OrderDeficit("connection coefficients", 1 - k);
  // dg[l][j][m] = d_l g_jm
  std::vector<JetVec> dg(n);
  for (int l = 0; l < n; ++l)
    for (int a = 0; a < n * n; ++a) dg[l].push_back(partial(g.g[a], l));
  const JetVec inv = truncate(g.inv, k - 1);
  const JetSpec spec{g.spec().n_vars, k - 1};
  // first kind: Gamma_ljk = 1/2 (d_j g_lk + d_k g_lj - d_l g_jk)
  JetVec first(n * n * n, RealJet(spec));
  for (int l = 0; l < n; ++l)
    for (int j = 0; j < n; ++j)
      for (int m = j; m < n; ++m) {
        RealJet v = 0.5 * (dg[j][l * n + m] + dg[m][l * n + j] - dg[l][j * n + m]);
        first[(l * n + j) * n + m] = v;
        first[(l * n + m) * n + j] = v;
      }
  Connection c;
  c.dim = n;
  c.gamma.assign(n * n * n, RealJet(spec));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = j; m < n; ++m) {
        RealJet s(spec);
        for (int l = 0; l < n; ++l) s += inv[i * n + l] * first[(l * n + j) * n + m];
        c.gamma[(i * n + j) * n + m] = s;
        c.gamma[(i * n + m) * n + j] = s;
      }
  return c;
}

Connection weyl_connection(const MetricJet& g, const JetVec& omega) {
  Connection c = levi_civita(g);
  if (omega.empty()) return c;
  const int n = g.dim;
  if (static_cast<int>(omega.size()) != n) throw SpecMismatch("Weyl 1-form has wrong component count");
  const int k = c.order();
  const JetVec w = truncate(omega, k);
  const MetricJet gk = g.truncated(k);
  const JetVec wup = sharp(gk, w);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        RealJet& G = c.gamma[(i * n + j) * n + m];
        if (i == j) G += w[m];
        if (i == m) G += w[j];
        G -= gk(j, m) * wup[i];
      }
  return c;
}

JetVec riemann(const Connection& c) {
  const int n = c.dim;
  const int k = c.order();
  if (k < 1) throw OrderDeficit("curvature", 1 - k);
  const JetSpec spec{c.gamma[0].n_vars(), k - 1};
  std::vector<JetVec> dG(n);
  for (int v = 0; v < n; ++v)
    for (const auto& G : c.gamma) dG[v].push_back(partial(G, v));
  const JetVec G = truncate(c.gamma, k - 1);
  auto idx = [n](int i, int j, int m) { return (i * n + j) * n + m; };
  JetVec R(n * n * n * n, RealJet(spec));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          RealJet v = dG[a][idx(i, b, j)] - dG[b][idx(i, a, j)];
          for (int m = 0; m < n; ++m) v += G[idx(i, a, m)] * G[idx(m, b, j)] - G[idx(i, b, m)] * G[idx(m, a, j)];
          R[((i * n + j) * n + a) * n + b] = v;
          R[((i * n + j) * n + b) * n + a] = -v;
        }
  return R;
}

JetVec ricci(const JetVec& R, int n) {
  JetVec ric(n * n, RealJet(R[0].spec()));
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i) ric[j * n + l] += R[((i * n + j) * n + i) * n + l];
  return ric;
}

JetVec symmetrize(const JetVec& m, int n) {
  JetVec s(n * n, RealJet(m[0].spec()));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s[i * n + j] = 0.5 * (m[i * n + j] + m[j * n + i]);
  return s;
}

RealJet trace(const JetVec& m, const MetricJet& g) {
  const int n = g.dim;
  const MetricJet gk = g.truncated(m[0].order());
  RealJet t(m[0].spec());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t += gk.up(i, j) * m[i * n + j];
  return t;
}

JetVec weyl_tensor(const JetVec& R, const MetricJet& g) {
  const int n = g.dim;
  const MetricJet gk = g.truncated(R[0].order());
  const JetSpec spec = R[0].spec();
  JetVec low(n * n * n * n, RealJet(spec));
  auto I4 = [n](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          for (int m = 0; m < n; ++m) low[I4(a, b, c, d)] += gk(a, m) * R[I4(m, b, c, d)];
  if (n < 3) return JetVec(n * n * n * n, RealJet(spec));
  const JetVec ric = symmetrize(ricci(R, n), n);
  const RealJet s = trace(ric, gk);
  const double k1 = 1.0 / (n - 2), k2 = 1.0 / ((n - 1) * (n - 2));
  JetVec W(n * n * n * n, RealJet(spec));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          RealJet v = low[I4(a, b, c, d)];
          v -= k1 * (gk(a, c) * ric[b * n + d] - gk(a, d) * ric[b * n + c] - gk(b, c) * ric[a * n + d] +
                     gk(b, d) * ric[a * n + c]);
          v += k2 * s * (gk(a, c) * gk(b, d) - gk(a, d) * gk(b, c));
          W[I4(a, b, c, d)] = v;
        }
  return W;
}

double tensor_norm2(const std::vector<double>& T, const std::vector<double>& ginv, int n) {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) s += ginv[a * n + c] * ginv[b * n + d] * T[a * n + b] * T[c * n + d];
  return s;
}

double tensor_norm(const JetVec& T, const MetricJet& g) {
  return std::sqrt(std::max(0.0, tensor_norm2(values(T), values(g.inv), g.dim)));
}

SdAsdNorms weyl_sd_asd(const std::vector<double>& W, const MetricJet& g, int orientation) {
  if (g.dim != 4) throw UsageError("selfdual Weyl splitting needs dimension 4");
  const int n = 4;
  const Frame f = orthonormal_frame(g);
  // frame components W(e_a, e_b, e_c, e_d)
  std::vector<double> Wf(256, 0.0), tmp1(256), tmp2(256), tmp3(256);
  auto I4 = [](int a, int b, int c, int d) { return ((a * 4 + b) * 4 + c) * 4 + d; };
  // contract one index at a time
  auto contract = [&](const std::vector<double>& in, std::vector<double>& out, int slot) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            int ix[4] = {a, b, c, d};
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
              int jx[4] = {a, b, c, d};
              jx[slot] = i;
              s += f.E[i * n + ix[slot]] * in[I4(jx[0], jx[1], jx[2], jx[3])];
            }
            out[I4(a, b, c, d)] = s;
          }
  };
  contract(W, tmp1, 0);
  contract(tmp1, tmp2, 1);
  contract(tmp2, tmp3, 2);
  contract(tmp3, Wf, 3);
  static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  double M[6][6], S[6][6] = {};
  for (int p = 0; p < 6; ++p)
    for (int q = 0; q < 6; ++q) M[p][q] = Wf[I4(pairs[p][0], pairs[p][1], pairs[q][0], pairs[q][1])];
  // modified star on frame 2-forms: star_sign(2) * orientation * standard star
  for (int p = 0; p < 6; ++p) {
    const unsigned I = (1u << pairs[p][0]) | (1u << pairs[p][1]);
    const unsigned J = 15u & ~I;
    for (int q = 0; q < 6; ++q) {
      const unsigned Q = (1u << pairs[q][0]) | (1u << pairs[q][1]);
      if (Q == J) S[q][p] = star_sign(2) * orientation * wedge_sign(I, J);
    }
  }
  auto project_norm = [&](double sgn) {
    double P[6][6], PM[6][6];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) P[i][j] = 0.5 * ((i == j ? 1.0 : 0.0) + sgn * S[i][j]);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += P[i][k] * M[k][j];
        PM[i][j] = s;
      }
    double nrm = 0.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int k = 0; k < 6; ++k) s += PM[i][k] * P[k][j];
        nrm += s * s;
      }
    return std::sqrt(nrm);
  };
  return {project_norm(1.0), project_norm(-1.0)};
}

CurvatureReport curvature_report(const MetricJet& g, const JetVec& omega, int orientation) {
  if (g.order() < 2) throw OrderDeficit("curvature report", 2 - g.order());
  const int n = g.dim;
  CurvatureReport r;
  r.dim = n;
  const JetVec Rlc = riemann(levi_civita(g));
  const JetVec R = omega.empty() ? Rlc : riemann(weyl_connection(g, omega));
  const JetVec ric = ricci(R, n);
  const JetVec sym = symmetrize(ric, n);
  r.riemann = values(R);
  r.ricci_full = values(ric);
  r.ricci_sym = values(sym);
  r.scal = trace(sym, g).value();
  r.weyl = values(weyl_tensor(Rlc, g));
  if (n == 4) {
    auto s = weyl_sd_asd(r.weyl, g.truncated(0), orientation);
    r.weyl_sd = s.sd;
    r.weyl_asd = s.asd;
  }
  return r;
}

FormJet faraday(const JetVec& omega, int dim) {
  JetVec w(omega.begin(), omega.begin() + dim);
  FormJet f(dim, w[0].spec());
  for (int i = 0; i < dim; ++i) f[1u << i] = w[i];
  return exterior_derivative(f);
}

}  // namespace weylab
