#include <gtest/gtest.h>

#include "hk/diffgeo_numerics.hpp"
#include "hk/gibbons_hawking.hpp"

using namespace hk;

namespace {

const MonopoleSet kSym3({0.0, 0.31, 0.69});  // symmetric under u3 -> -u3

Vec3 iota(const Vec3& u) { return Vec3(-u[0], -u[1], -u[2]); }

}  // namespace

TEST(GHChart, ConstantChartIsFlatProduct) {
  const double T = 3.0;
  GHChart ch = make_constant_chart(T);
  const Vec4 x(0.4, -1.2, 0.7, 2.0);

  Mat4 g = gh_metric(ch, x);
  Mat4 expect = Mat4::Zero();
  expect.diagonal() << T, T, T, 1.0 / T;
  expect /= TWO_PI;
  EXPECT_LT((g - expect).norm(), 1e-14);

  // anisotropy of the product metric: eigenvalue ratio V^-2
  Eigen::SelfAdjointEigenSolver<Mat4> es(g);
  EXPECT_NEAR(es.eigenvalues()(0) / es.eigenvalues()(3), 1.0 / (T * T), 1e-12);

  Triple t = gh_triple(ch).at(x);
  EXPECT_LT(q_deviation(t), 1e-13);
  Mat4 g_rec = metric_from_triple(t);
  EXPECT_LT((g_rec - g).norm(), 1e-12);

  EXPECT_NEAR(monopole_residual(ch, x.head<3>(), 0.05), 0.0, 1e-14);
  EXPECT_THROW(make_constant_chart(-2.0), NonPositivePotential);
}

TEST(GHChart, TaubNutSolvesMonopoleEquation) {
  GHChart ch = make_taub_nut_chart();
  const Vec3 u(0.8, 0.3, -0.4);
  const double r0 = monopole_residual(ch, u, 2e-2);
  const double r1 = monopole_residual(ch, u, 1e-2);
  EXPECT_LT(r0, 3e-4);
  EXPECT_GT(r0 / r1, 3.4);  // second order in the step
  EXPECT_LT(r0 / r1, 4.6);
  EXPECT_LT(monopole_residual(ch, u, 1e-3), 1e-6);
}

TEST(GHChart, TaubNutIsRicciFlat) {
  GHChart ch = make_taub_nut_chart();
  MetricField g = [&ch](const Vec4& x) -> Mat4 { return gh_metric(ch, x); };
  const Vec4 x(0.8, 0.0, 0.6, 0.3);
  CurvatureProbe p = fd_curvature(g, x, 5e-3);
  EXPECT_LT(p.ricci_norm, 5e-3);
  EXPECT_GT(p.riemann_norm, 0.05);  // curved, not flat
  EXPECT_LT(p.riemann_norm, 5.0);

  Triple t = gh_triple(ch).at(x);
  EXPECT_LT(q_deviation(t), 1e-13);
  EXPECT_LT((metric_from_triple(t) - g(x)).norm() / g(x).norm(), 1e-12);
}

TEST(GHChart, TaubNutGaugeStrings) {
  GHChart up = make_taub_nut_chart(Gauge::upper);
  GHChart dn = make_taub_nut_chart(Gauge::lower);
  EXPECT_THROW(up.connection(Vec3(0, 0, 1.0)), GaugeStringHit);
  EXPECT_THROW(dn.connection(Vec3(0, 0, -1.0)), GaugeStringHit);
  EXPECT_LT(up.connection(Vec3(0, 0, -1.0)).norm(), 1e-12);
  EXPECT_LT(dn.connection(Vec3(0, 0, 1.0)).norm(), 1e-12);
  EXPECT_THROW(up.potential(Vec3::Zero()), PoleHit);

  // the two gauges differ by the full monodromy
  const Vec3 u(0.5, -0.2, 0.8);
  const double rho2 = u[0] * u[0] + u[1] * u[1];
  Vec3 diff = dn.connection(u) - up.connection(u);
  Vec3 expect(u[1] / rho2, -u[0] / rho2, 0.0);
  EXPECT_LT((diff - expect).norm(), 1e-13);
}

TEST(GHChart, MultiPoleMonopoleResidualConverges) {
  GHChart ch = make_multi_ov_chart(kSym3, std::exp(-20.0));
  const Vec3 u(0.5, 0.35, 0.62);
  const double r0 = monopole_residual(ch, u, 1e-2);
  const double r1 = monopole_residual(ch, u, 5e-3);
  EXPECT_LT(r0, 2e-3);
  EXPECT_GT(r0 / r1, 3.4);
  EXPECT_LT(r0 / r1, 4.6);
  // far from the poles the stencil error is tiny in absolute terms
  EXPECT_LT(monopole_residual(ch, Vec3(2.5, 0.6, 0.62), 1e-4), 1e-8);
}

TEST(GHChart, MultiPoleHolomorphicPartStaysClosed) {
  HoloPoly h;
  h.coeff = {cplx(0.0, 1.0), cplx(0.2, 0.1)};  // i z + (0.2 + 0.1 i) z^2 after eval
  GHChart ch = make_multi_ov_chart(kSym3, 0.1, h);
  const Vec3 u(0.9, 0.4, 0.12);
  const double r0 = monopole_residual(ch, u, 1e-3);
  EXPECT_LT(r0, 5e-6);
  EXPECT_LT(monopole_residual(ch, u, 5e-4), r0 / 3.2);
}

TEST(GHChart, MultiPoleTripleMatchesMetric) {
  GHChart ch = make_multi_ov_chart(kSym3, std::exp(-20.0));
  const Vec4 x(0.8, 0.3, 0.45, 1.1);
  Triple t = gh_triple(ch).at(x);
  EXPECT_LT(q_deviation(t), 1e-12);
  Mat4 g = gh_metric(ch, x);
  EXPECT_LT((metric_from_triple(t) - g).norm() / g.norm(), 1e-10);

  // volume consistency: sqrt(det g) equals the self-wedge coefficient of w1
  const double self = wedge(t.w[0], t.w[0]) / 2.0;
  EXPECT_NEAR(std::sqrt(g.determinant()), self, 1e-12 * std::abs(self));
}

TEST(GHChart, InvolutionSymmetry) {
  GHChart ch = make_multi_ov_chart(kSym3, std::exp(-10.0));
  GHTriple tr = gh_triple(ch);
  const Vec3 pts[] = {Vec3(0.4, 0.2, 0.13), Vec3(1.2, -0.7, 0.41),
                      Vec3(0.15, 0.1, 0.77)};
  for (const Vec3& u : pts) {
    EXPECT_NEAR(ch.potential(u), ch.potential(iota(u)), 1e-12);
    // the connection coefficients are invariant because a is odd
    EXPECT_LT((ch.connection(u) - ch.connection(iota(u))).norm(), 1e-11);
    // hence each 2-form is fixed by the lift x -> -x (forms of even degree)
    Vec4 x, mx;
    x << u, 0.9;
    mx = -x;
    Triple a = tr.at(x), b = tr.at(mx);
    for (int i = 0; i < 3; ++i) EXPECT_LT((a.w[i] - b.w[i]).norm(), 1e-11);
  }
}

TEST(GHChart, TripleIsClosedAwayFromPoles) {
  GHChart ch = make_multi_ov_chart(kSym3, std::exp(-20.0));
  GHTriple tr = gh_triple(ch);
  const double h = 1.0 / 64.0;
  ChartGrid grid(4, Vec4(6.2, 0.1, 0.45, -0.2), Vec4(6.8, 0.7, 0.85, 0.6), h);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    TwoFormField w = [&tr, i](const Vec4& x) -> Form2 { return tr.w(i, x); };
    for (double du : {-2.0 * h, 0.0, 2.0 * h}) {
      Vec4 x(6.5 + du, 0.4, 0.65 + du / 3.0, 0.2);
      ThreeForm dw = fd_d2(w, grid, x);
      worst = std::max(worst, dw.cwiseAbs().maxCoeff());
    }
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(GHChart, GaugeChoicesAgreeOnResidual) {
  GHChart up = make_multi_ov_chart(kSym3, 0.05, {}, Gauge::upper);
  GHChart dn = make_multi_ov_chart(kSym3, 0.05, {}, Gauge::lower);
  const Vec3 u(0.7, -0.5, 0.4);
  const double rho2 = u[0] * u[0] + u[1] * u[1];
  Vec3 diff = dn.connection(u) - up.connection(u);
  Vec3 expect = 3.0 * Vec3(u[1] / rho2, -u[0] / rho2, 0.0);
  EXPECT_LT((diff - expect).norm(), 1e-12);
  // both gauges solve the monopole equation (their difference is closed)
  EXPECT_LT(monopole_residual(up, u, 1e-3), 1e-5);
  EXPECT_LT(monopole_residual(dn, u, 1e-3), 1e-5);
}

TEST(GHChart, FlatRescaledDiameterStaysOrderOne) {
  // arclength of the u1 ray from the pole region to the chart edge, in the
  // rescaled metric delta^2 g; stays bounded as delta -> 0
  auto length = [](double ldelta) {
    const double delta = std::exp(ldelta);
    GHChart ch = make_multi_ov_chart(kSym3, delta, {}, Gauge::upper, delta * delta);
    const double s_hi = std::log(0.5 / delta);
    const int n = 400;  // Simpson in s = log u1
    const double ds = s_hi / n;
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double s = k * ds;
      const double u1 = std::exp(s);
      Mat4 g = gh_metric(ch, Vec4(u1, 0.0, 0.62, 0.0));
      const double f = std::sqrt(g(0, 0)) * u1;
      acc += f * ((k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    return acc * ds / 3.0;
  };
  const double L10 = length(-10.0), L15 = length(-15.0), L20 = length(-20.0);
  for (double L : {L10, L15, L20}) {
    EXPECT_GT(L, 0.1);
    EXPECT_LT(L, 2.0);
  }
  EXPECT_LT(std::abs(L20 / L10 - 1.0), 0.35);
}

TEST(GHChart, GuardsFire) {
  EXPECT_THROW(make_multi_ov_chart(MonopoleSet(), 0.1), InvalidConfig);
  EXPECT_THROW(make_multi_ov_chart(kSym3, 1.5), InvalidConfig);
  GHChart ch = make_multi_ov_chart(kSym3, 0.1);
  EXPECT_THROW(ch.connection(Vec3(0, 0, 0.5)), GaugeStringHit);
  EXPECT_THROW(ch.potential(Vec3(20.0, 0, 0)), DomainViolation);  // outside chart

  GHChart bad;
  bad.potential = [](const Vec3& u) { return u[0]; };
  bad.connection = [](const Vec3&) -> Vec3 { return Vec3::Zero(); };
  EXPECT_THROW(gh_eval(bad, Vec3(-1.0, 0, 0)), NonPositivePotential);
  EXPECT_THROW(monopole_residual(bad, Vec3(1, 0, 0), -0.1), InvalidConfig);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
