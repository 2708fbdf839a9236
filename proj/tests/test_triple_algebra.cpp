#include "hk/triple_algebra.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hk;

TEST(Wedge, BasisAndOrientation) {
  EXPECT_DOUBLE_EQ(wedge(form2_basis(0, 1), form2_basis(2, 3)), 1.0);
  EXPECT_DOUBLE_EQ(wedge(form2_basis(0, 2), form2_basis(1, 3)), -1.0);
  EXPECT_DOUBLE_EQ(wedge(form2_basis(0, 3), form2_basis(1, 2)), 1.0);
  EXPECT_DOUBLE_EQ(wedge(form2_basis(0, 1), form2_basis(0, 2)), 0.0);
  // symmetry of the pairing on 2-forms
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int it = 0; it < 10; ++it) {
    Form2 a = Form2::Zero(), b = Form2::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        a(i, j) = u(rng);
        a(j, i) = -a(i, j);
        b(i, j) = u(rng);
        b(j, i) = -b(i, j);
      }
    EXPECT_NEAR(wedge(a, b), wedge(b, a), 1e-14);
  }
}

TEST(QMatrix, FlatTripleIsIdentity) {
  Triple f = flat_triple();
  EXPECT_LT((q_matrix(f) - Mat3::Identity()).norm(), 1e-15);
  EXPECT_LT(q_deviation(f), 1e-15);
  NormalizedQ n = normalize_q(q_matrix(f));
  EXPECT_NEAR(n.vol_factor, 1.0, 1e-15);
}

TEST(QMatrix, AnisotropicExample) {
  // (2 w1, w2, w3) has Q = diag(4,1,1), so Q_omega = 4^{-1/3} diag(4,1,1)
  Triple f = flat_triple();
  Triple t(2.0 * f.w[0], f.w[1], f.w[2]);
  Mat3 q = q_matrix(t);
  EXPECT_LT((q - Vec3(4, 1, 1).asDiagonal().toDenseMatrix()).norm(), 1e-14);
  Mat3 qo = q_omega(t);
  const double s = std::pow(4.0, -1.0 / 3.0);
  EXPECT_LT((qo - (s * Vec3(4, 1, 1).asDiagonal().toDenseMatrix())).norm(), 1e-14);
  EXPECT_NEAR(qo.determinant(), 1.0, 1e-14);
}

TEST(QMatrix, DefiniteViolationDetected) {
  Triple f = flat_triple();
  Triple bad(f.w[0], f.w[1], form2_basis(0, 3) - form2_basis(1, 2));  // anti-self-dual slot
  EXPECT_THROW(q_omega(bad), DefiniteViolation);
  EXPECT_THROW(metric_from_triple(bad), DefiniteViolation);
}

TEST(Metric, FlatRecovery) {
  Mat4 g = metric_from_triple(flat_triple());
  EXPECT_LT((g - Mat4::Identity()).norm(), 1e-14);
}

TEST(Metric, CircleBundleNormalization) {
  // w1 = (1/2pi)(du3^du4 + c du1^du2), cyclic: the recovered metric must be
  // (1/2pi) diag(c, c, c, 1/c)
  const double c = 3.7, s = 1.0 / TWO_PI;
  Triple t(s * (form2_basis(2, 3) + c * form2_basis(0, 1)),
           s * (form2_basis(0, 3) + c * form2_basis(1, 2)),
           s * (form2_basis(1, 3) - c * form2_basis(0, 2)));
  EXPECT_LT((q_omega(t) - Mat3::Identity()).norm(), 1e-13);
  Mat4 g = metric_from_triple(t);
  Mat4 want = (s * Vec4(c, c, c, 1.0 / c).asDiagonal().toDenseMatrix());
  EXPECT_LT((g - want).norm(), 1e-12);
}

TEST(Metric, QuadraticHomogeneity) {
  const double c = 2.3, s = 1.0 / TWO_PI, lam = 1.7;
  Triple t(s * (form2_basis(2, 3) + c * form2_basis(0, 1)),
           s * (form2_basis(0, 3) + c * form2_basis(1, 2)),
           s * (form2_basis(1, 3) - c * form2_basis(0, 2)));
  Mat4 g = metric_from_triple(t);
  Mat4 g2 = metric_from_triple(t.scaled(lam * lam));
  EXPECT_LT((g2 - lam * lam * g).norm(), 1e-12);
}

TEST(Metric, NearDegenerateGuard) {
  Triple f = flat_triple();
  Triple t(f.w[0], f.w[1], 1e-13 * f.w[2]);
  EXPECT_THROW(metric_from_triple(t), NearDegenerate);
}

TEST(Hodge, SelfDualForms) {
  Mat4 g = Mat4::Identity();
  Triple f = flat_triple();
  for (int i = 0; i < 3; ++i)
    EXPECT_LT((hodge_star2(f.w[i], g) - f.w[i]).norm(), 1e-14);
  EXPECT_LT((hodge_star2(form2_basis(0, 1), g) - form2_basis(2, 3)).norm(), 1e-14);
  EXPECT_LT((hodge_star2(form2_basis(0, 2), g) + form2_basis(1, 3)).norm(), 1e-14);
}

TEST(Hodge, InvolutionAndPairing) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int it = 0; it < 10; ++it) {
    Form2 a = Form2::Zero();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        a(i, j) = u(rng);
        a(j, i) = -a(i, j);
      }
    Mat4 m = Mat4::Random() * 0.3 + Mat4::Identity();
    Mat4 g = (m.transpose() * m).eval();  // SPD
    Form2 sa = hodge_star2(a, g);
    EXPECT_LT((hodge_star2(sa, g) - a).norm(), 1e-12);
    // a ^ *a = |a|^2 dvol_g
    const double lhs = wedge(a, sa);
    const double rhs = sq(form2_norm_g(a, g)) * std::sqrt(g.determinant());
    EXPECT_NEAR(lhs, rhs, 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST(HkError, StatsAndGuards) {
  EXPECT_THROW(hk_error({}, 0.05), EmptyRegion);
  std::vector<HkSample> pts(2);
  pts[0] = {Vec4(0, 0, 0, 0), Mat3::Identity(), 2.0};
  Mat3 q = Mat3::Identity();
  q(0, 0) += 0.1;
  q(1, 1) -= 0.1;
  pts[1] = {Vec4(1, 0, 0, 0), q, 0.5};
  HkErrorStats st = hk_error(pts, 0.0, 0.5);
  const double dev = std::sqrt(0.02);
  EXPECT_NEAR(st.sup, dev, 1e-14);
  EXPECT_NEAR(st.weighted_sup, 0.5 * dev, 1e-14);  // s^{mu+1} = 0.5
  EXPECT_NEAR(st.holder_lb, std::pow(0.5, 1.5) * dev, 1e-14);
  EXPECT_EQ(st.pair_count, 1);
  EXPECT_THROW(hk_error(pts, 0.0, 1.5), InvalidConfig);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
