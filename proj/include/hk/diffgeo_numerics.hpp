#pragma once

#include <array>
#include <functional>
#include <vector>

#include "hk/common.hpp"
#include "hk/triple_algebra.hpp"

// finite-difference exterior calculus on coordinate charts. All stencils are
// central and second-order; box boundaries and excluded balls raise
// StencilOverrun instead of silently degrading the order.

namespace hk {

struct ExcludedBall {
  Vec4 center = Vec4::Zero();
  double radius = 0.0;
};

struct ChartGrid {
  int dim = 4;
  Vec4 lo = Vec4::Zero(), hi = Vec4::Zero();
  double h = 0.0;
  std::array<bool, 4> periodic{false, false, false, false};
  std::vector<ExcludedBall> excluded;

  ChartGrid() = default;
  ChartGrid(int d, const Vec4& lo_, const Vec4& hi_, double h_,
            std::array<bool, 4> per = {false, false, false, false},
            std::vector<ExcludedBall> excl = {})
      : dim(d), lo(lo_), hi(hi_), h(h_), periodic(per), excluded(std::move(excl)) {
    if (dim < 2 || dim > 4) throw InvalidConfig("ChartGrid: dimension must be 2, 3 or 4");
    if (h <= 0) throw InvalidConfig("ChartGrid: spacing must be positive");
    for (int a = 0; a < dim; ++a)
      if (hi[a] - lo[a] < h) throw InvalidConfig("ChartGrid: box thinner than one cell");
  }

  std::array<int, 4> shape() const {
    std::array<int, 4> n{1, 1, 1, 1};
    for (int a = 0; a < dim; ++a) {
      const double span = hi[a] - lo[a];
      n[a] = periodic[a] ? int(std::lround(span / h)) : int(std::floor(span / h + 1e-9)) + 1;
    }
    return n;
  }

  Vec4 node(const std::array<int, 4>& idx) const {
    Vec4 x = lo;
    for (int a = 0; a < dim; ++a) x[a] += idx[a] * h;
    return x;
  }

  // a stencil of the given width must stay in the box (non-periodic axes) and
  // keep two stencil widths clear of every excluded ball
  bool stencil_ok(const Vec4& x, int width = 1) const {
    for (int a = 0; a < dim; ++a) {
      if (periodic[a]) continue;
      if (x[a] - width * h < lo[a] - 1e-12 || x[a] + width * h > hi[a] + 1e-12) return false;
    }
    for (const auto& b : excluded) {
      double d2 = 0;
      for (int a = 0; a < dim; ++a) d2 += sq(x[a] - b.center[a]);
      if (std::sqrt(d2) < b.radius + 2.0 * width * h) return false;
    }
    return true;
  }
  void require_stencil(const Vec4& x, int width = 1) const {
    if (!stencil_ok(x, width))
      throw StencilOverrun("ChartGrid: stencil leaves the admissible region");
  }
};

using ScalarField = std::function<double(const Vec4&)>;
using OneFormField = std::function<Vec4(const Vec4&)>;
using TwoFormField = std::function<Form2(const Vec4&)>;
using MetricField = std::function<Mat4(const Vec4&)>;

// 3-form storage: comps[l] = coefficient of dx_{i<j<k} with {i,j,k} = all axes
// except l, in ascending order
using ThreeForm = Vec4;

namespace fd {
inline Vec4 shift(const Vec4& x, int a, double d) {
  Vec4 y = x;
  y[a] += d;
  return y;
}
}  // namespace fd

inline Vec4 fd_d0(const ScalarField& f, const ChartGrid& g, const Vec4& x) {
  g.require_stencil(x);
  Vec4 out = Vec4::Zero();
  for (int a = 0; a < g.dim; ++a)
    out[a] = (f(fd::shift(x, a, g.h)) - f(fd::shift(x, a, -g.h))) / (2.0 * g.h);
  return out;
}

inline Form2 fd_d1(const OneFormField& A, const ChartGrid& g, const Vec4& x) {
  g.require_stencil(x);
  Form2 out = Form2::Zero();
  std::array<Vec4, 4> dp, dm;
  for (int a = 0; a < g.dim; ++a) {
    dp[a] = A(fd::shift(x, a, g.h));
    dm[a] = A(fd::shift(x, a, -g.h));
  }
  for (int i = 0; i < g.dim; ++i)
    for (int j = i + 1; j < g.dim; ++j) {
      const double v = (dp[i][j] - dm[i][j]) / (2.0 * g.h) - (dp[j][i] - dm[j][i]) / (2.0 * g.h);
      out(i, j) = v;
      out(j, i) = -v;
    }
  return out;
}

inline ThreeForm fd_d2(const TwoFormField& B, const ChartGrid& g, const Vec4& x) {
  g.require_stencil(x);
  if (g.dim < 3) throw InvalidConfig("fd_d2: needs dimension >= 3");
  std::array<Form2, 4> dB;  // dB[a] = central difference along axis a
  for (int a = 0; a < g.dim; ++a)
    dB[a] = (B(fd::shift(x, a, g.h)) - B(fd::shift(x, a, -g.h))) / (2.0 * g.h);
  ThreeForm out = ThreeForm::Zero();
  for (int l = 0; l < 4; ++l) {
    int ix[3], m = 0;
    for (int a = 0; a < g.dim; ++a)
      if (a != l) ix[m++] = a;
    if (m != 3) continue;  // absent component in low dimension
    const int i = ix[0], j = ix[1], k = ix[2];
    out[l] = dB[i](j, k) + dB[j](k, i) + dB[k](i, j);
  }
  return out;
}

// codifferential of a 1-form, -(1/sqrt g) d_i (sqrt g g^{ij} A_j), with the
// metric supplied as a field so its derivatives enter through the stencil
inline double fd_codifferential(const OneFormField& A, const MetricField& met,
                                const ChartGrid& g, const Vec4& x) {
  g.require_stencil(x);
  auto dens = [&](const Vec4& p, int i) -> double {
    const Mat4 gp = met(p);
    const Vec4 up = gp.inverse() * A(p);
    return std::sqrt(gp.determinant()) * up[i];
  };
  double acc = 0.0;
  for (int i = 0; i < g.dim; ++i)
    acc += (dens(fd::shift(x, i, g.h), i) - dens(fd::shift(x, i, -g.h), i)) / (2.0 * g.h);
  return -acc / std::sqrt(met(x).determinant());
}

inline double fd_laplacian(const ScalarField& f, const ChartGrid& g, const Vec4& x) {
  g.require_stencil(x);
  double acc = -2.0 * g.dim * f(x);
  for (int a = 0; a < g.dim; ++a) acc += f(fd::shift(x, a, g.h)) + f(fd::shift(x, a, -g.h));
  return acc / (g.h * g.h);
}

// ---- Kaehler geometry from a potential -------------------------------------

// complex Hessian d_{z_i} d_{zbar_j} f at x; axes pair as z_i = x_{2i} + i x_{2i+1}
inline Eigen::Matrix2cd complex_hessian(const ScalarField& f, const Vec4& x, double h,
                                        int n_c) {
  auto d2 = [&](int p, int q) {
    if (p == q)
      return (f(fd::shift(x, p, h)) - 2.0 * f(x) + f(fd::shift(x, p, -h))) / (h * h);
    return (f(fd::shift(fd::shift(x, p, h), q, h)) - f(fd::shift(fd::shift(x, p, h), q, -h)) -
            f(fd::shift(fd::shift(x, p, -h), q, h)) +
            f(fd::shift(fd::shift(x, p, -h), q, -h))) /
           (4.0 * h * h);
  };
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < n_c; ++i)
    for (int j = 0; j < n_c; ++j) {
      const int ai = 2 * i, bi = 2 * i + 1, aj = 2 * j, bj = 2 * j + 1;
      out(i, j) = 0.25 * cplx(d2(ai, aj) + d2(bi, bj), d2(ai, bj) - d2(bi, aj));
    }
  return out;
}

// sup over (strided) grid nodes of |d dbar log det g|, g from the potential
inline double kahler_ricci_residual(const ScalarField& potential, const ChartGrid& g,
                                    int stride = 1) {
  if (g.dim != 2 && g.dim != 4)
    throw InvalidConfig("kahler_ricci_residual: chart dimension must be 2 or 4");
  const int n_c = g.dim / 2;
  auto logdet = [&](const Vec4& y) {
    Eigen::Matrix2cd hes = complex_hessian(potential, y, g.h, n_c);
    const double det = (n_c == 1) ? hes(0, 0).real()
                                  : hes(0, 0).real() * hes(1, 1).real() - std::norm(hes(0, 1));
    if (det <= 0)
      throw DegenerateTriple("kahler_ricci_residual: potential not strictly plurisubharmonic");
    return std::log(det);
  };
  const auto n = g.shape();
  double sup = -1.0;
  std::array<int, 4> idx{0, 0, 0, 0};
  for (idx[0] = 0; idx[0] < n[0]; idx[0] += stride)
    for (idx[1] = 0; idx[1] < n[1]; idx[1] += stride)
      for (idx[2] = 0; idx[2] < n[2]; idx[2] += stride)
        for (idx[3] = 0; idx[3] < n[3]; idx[3] += stride) {
          const Vec4 x = g.node(idx);
          if (!g.stencil_ok(x, 2)) continue;
          const Eigen::Matrix2cd ric = complex_hessian(logdet, x, g.h, n_c);
          sup = std::max(sup, ric.cwiseAbs().maxCoeff());
        }
  if (sup < 0) throw StencilOverrun("kahler_ricci_residual: no interior node admits the stencil");
  return sup;
}

// ---- coordinate curvature by nested differencing ---------------------------

struct CurvatureProbe {
  double riemann_norm = 0.0;  // |Rm|_g, all indices contracted with g
  double ricci_norm = 0.0;    // |Ric|_g
};

namespace fd {

// Christoffel symbols Gamma[k](i,j) at x with step h
inline std::array<Mat4, 4> christoffel(const MetricField& g, const Vec4& x, double h) {
  const Mat4 gi = g(x).inverse();
  std::array<Mat4, 4> dg;
  for (int a = 0; a < 4; ++a) dg[a] = (g(shift(x, a, h)) - g(shift(x, a, -h))) / (2.0 * h);
  std::array<Mat4, 4> gam;
  for (int k = 0; k < 4; ++k) {
    gam[k].setZero();
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0;
        for (int l = 0; l < 4; ++l) s += gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gam[k](i, j) = 0.5 * s;
      }
  }
  return gam;
}

}  // namespace fd

inline CurvatureProbe fd_curvature(const MetricField& g, const Vec4& x, double h) {
  if (h <= 0) throw InvalidConfig("fd_curvature: step must be positive");
  const auto gam0 = fd::christoffel(g, x, h);
  std::array<std::array<Mat4, 4>, 4> dgam;  // dgam[mu][k](i,j) = d_mu Gamma^k_ij
  for (int mu = 0; mu < 4; ++mu) {
    const auto gp = fd::christoffel(g, fd::shift(x, mu, h), h);
    const auto gm = fd::christoffel(g, fd::shift(x, mu, -h), h);
    for (int k = 0; k < 4; ++k) dgam[mu][k] = (gp[k] - gm[k]) / (2.0 * h);
  }
  // R^r_{s mu nu} = d_mu G^r_{nu s} - d_nu G^r_{mu s} + G^r_{mu l} G^l_{nu s} - G^r_{nu l} G^l_{mu s}
  double Rup[4][4][4][4];
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          double v = dgam[mu][r](nu, s) - dgam[nu][r](mu, s);
          for (int l = 0; l < 4; ++l)
            v += gam0[r](mu, l) * gam0[l](nu, s) - gam0[r](nu, l) * gam0[l](mu, s);
          Rup[r][s][mu][nu] = v;
        }
  const Mat4 g0 = g(x), gi = g0.inverse();
  double Rlo[4][4][4][4];
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          double v = 0;
          for (int a = 0; a < 4; ++a) v += g0(r, a) * Rup[a][s][mu][nu];
          Rlo[r][s][mu][nu] = v;
        }
  double rm2 = 0;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu) {
          double up = 0;  // raise all four indices of the partner
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
              for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d)
                  up += gi(r, a) * gi(s, b) * gi(mu, c) * gi(nu, d) * Rlo[a][b][c][d];
          rm2 += Rlo[r][s][mu][nu] * up;
        }
  Mat4 ric = Mat4::Zero();
  for (int s = 0; s < 4; ++s)
    for (int nu = 0; nu < 4; ++nu) {
      double v = 0;
      for (int mu = 0; mu < 4; ++mu) v += Rup[mu][s][mu][nu];
      ric(s, nu) = v;
    }
  const double ric2 = (gi * ric * gi * ric.transpose()).trace();
  CurvatureProbe out;
  out.riemann_norm = std::sqrt(std::max(0.0, rm2));
  out.ricci_norm = std::sqrt(std::max(0.0, ric2));
  return out;
}

}  // namespace hk
