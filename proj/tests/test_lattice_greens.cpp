#include "hk/lattice_greens.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hk;

namespace {

// reference values computed with a 50-digit arbitrary-precision evaluation of
// both representations (they agree to all shown digits)
struct RefPoint {
  double rho, t, g;
};
const RefPoint kRef[] = {
    {0.5, 0.5, 0.6359002692997044646650289},
    {0.5, 0.0, 0.7540653215693336702974549},
    {1.0, 0.25, -2.442404937555064383872473e-6},
    {0.1, 0.0, 4.878096772222926975028529},
    {2.0, 0.37, -0.6931488525056990721336187},
    {0.25, 0.125, 1.653025111665907084915183},
};

Vec3 point(double rho, double t) { return Vec3(rho, 0.0, t); }

}  // namespace

TEST(MonopoleSet, ValidationAndGeometry) {
  EXPECT_THROW(MonopoleSet({0.2, 1.2}), InvalidConfig);  // same point mod 1
  EXPECT_THROW(eval_green(Vec3(0.5, 0, 0.2), MonopoleSet(), 1e-10), InvalidConfig);
  MonopoleSet two({0.0, 0.31});
  EXPECT_EQ(two.nu(), 2);
  EXPECT_NEAR(two.iota0(), 0.155, 1e-15);
  EXPECT_FALSE(two.z2_symmetric());
  MonopoleSet sym({0.0, 0.31, 0.69});
  EXPECT_TRUE(sym.z2_symmetric());
  MonopoleSet one({0.0});
  EXPECT_TRUE(std::isinf(one.iota0()));
}

TEST(Green, FrozenReferenceValues) {
  MonopoleSet P({0.0});
  for (const auto& r : kRef) {
    GreensEval e = eval_green(point(r.rho, r.t), P, 1e-12);
    EXPECT_NEAR(e.value, r.g, 5e-12) << "rho=" << r.rho << " t=" << r.t;
    EXPECT_LE(e.truncation_error_bound, 1e-12);
  }
}

TEST(Green, MultiPoleFrozenValue) {
  MonopoleSet P({0.0, 0.27, 0.65});
  GreensEval e = eval_green(point(0.5, 0.2), P, 1e-12);
  EXPECT_NEAR(e.value, 2.096045462000357638677739, 5e-12);
}

TEST(Green, RepresentationsAgreeOnPointCloud) {
  MonopoleSet P({0.0, 0.27, 0.65});
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> urho(0.05, 2.0), ut(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    Vec3 u(urho(rng), 0.3 * urho(rng), ut(rng));
    GreensEval fb = eval_green(u, P, 1e-12, GreenRep::fourier_bessel);
    GreensEval im = eval_green(u, P, 1e-12, GreenRep::image_sum);
    EXPECT_NEAR(fb.value, im.value, 1e-10);
    EXPECT_LT((fb.gradient - im.gradient).norm(), 1e-8 * (1.0 + fb.gradient.norm()));
  }
}

TEST(Green, FiberMeanNormalization) {
  // mean over the circle of G - nu log(1/rho) vanishes
  const int n = 256;
  for (const MonopoleSet& P : {MonopoleSet({0.0}), MonopoleSet({0.0, 0.27, 0.65})}) {
    const double rho = 0.7;
    double mean = 0.0;
    for (int k = 0; k < n; ++k)
      mean += eval_green(point(rho, (k + 0.5) / n), P, 1e-12).value;
    mean /= n;
    EXPECT_NEAR(mean, P.nu() * std::log(1.0 / rho), 1e-8);
  }
}

TEST(Green, GradientMatchesFiniteDifferences) {
  MonopoleSet P({0.0, 0.27, 0.65});
  const double h = 1e-5;
  for (const Vec3& u : {Vec3(0.4, 0.2, 0.3), Vec3(0.08, 0.05, 0.41)}) {
    GreensEval e = eval_green(u, P, 1e-12);
    for (int d = 0; d < 3; ++d) {
      Vec3 up = u, dn = u;
      up[d] += h;
      dn[d] -= h;
      const double fd =
          (eval_green(up, P, 1e-12).value - eval_green(dn, P, 1e-12).value) / (2 * h);
      EXPECT_NEAR(e.gradient[d], fd, 1e-6 * (1.0 + std::abs(fd)));
    }
  }
}

TEST(Green, HarmonicAwayFromPoles) {
  // Richardson-extrapolated FD Laplacian vanishes
  MonopoleSet P({0.0});
  const Vec3 u(0.4, 0.2, 0.3);
  auto lap = [&](double h) {
    double acc = -6.0 * eval_green(u, P, 1e-13).value;
    for (int d = 0; d < 3; ++d) {
      Vec3 up = u, dn = u;
      up[d] += h;
      dn[d] -= h;
      acc += eval_green(up, P, 1e-13).value + eval_green(dn, P, 1e-13).value;
    }
    return acc / (h * h);
  };
  const double l = (4.0 * lap(0.01) - lap(0.02)) / 3.0;
  EXPECT_NEAR(l, 0.0, 1e-5);
}

TEST(Green, PoleFluxIsMinusTwoPi) {
  // flux of grad G through a small sphere about one pole of a multi-pole set
  MonopoleSet P({0.0, 0.27, 0.65});
  const double r = 0.06;
  const int nth = 32, nph = 64;
  // Gauss-Legendre nodes in cos(theta)
  std::vector<double> x(nth), w(nth);
  for (int i = 0; i < nth; ++i) {  // Newton iteration on Legendre P_n
    double xi = std::cos(PI * (i + 0.75) / (nth + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= nth; ++k) {
        double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = nth * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / dp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[i] = xi;
    double p0 = 1.0, p1 = xi;
    for (int k = 2; k <= nth; ++k) {
      double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = nth * (xi * p1 - p0) / (xi * xi - 1.0);
    w[i] = 2.0 / ((1.0 - xi * xi) * dp * dp);
  }
  double flux = 0.0;
  for (int i = 0; i < nth; ++i) {
    const double ct = x[i], st = std::sqrt(1.0 - ct * ct);
    for (int j = 0; j < nph; ++j) {
      const double ph = TWO_PI * (j + 0.5) / nph;
      const Vec3 n(st * std::cos(ph), st * std::sin(ph), ct);
      GreensEval e = eval_green((r * n).eval(), P, 1e-12);
      flux += w[i] * (TWO_PI / nph) * r * r * e.gradient.dot(n);
    }
  }
  EXPECT_NEAR(flux, -TWO_PI, 1e-6);
}

TEST(Green, ErrorsAndGuards) {
  MonopoleSet P({0.0});
  EXPECT_THROW(eval_green(Vec3(0, 0, 0), P, 1e-10), PoleHit);
  EXPECT_THROW(eval_green(Vec3(1e-14, 0, 1.0), P, 1e-10), PoleHit);
  EXPECT_THROW(eval_green(Vec3(0, 0, 0.5), P, 1e-10, GreenRep::fourier_bessel),
               DomainViolation);
  EXPECT_THROW(eval_green(Vec3(0.5, 0, 0.2), P, -1.0), InvalidConfig);
  EXPECT_THROW(eval_green(Vec3(0.1, 0, 0.3), P, 1e-22, GreenRep::image_sum),
               ToleranceUnreachable);
  EXPECT_THROW(kernels::green_fb(0.26, 0.1, 1e-14, /*max_terms=*/2), ToleranceUnreachable);
  // on-axis evaluation is fine for the image representation
  GreensEval e = eval_green(Vec3(0, 0, 0.5), P, 1e-12);
  EXPECT_EQ(e.representation_used, GreenRep::image_sum);
  EXPECT_NEAR(e.gradient[0], 0.0, 1e-14);
  EXPECT_NEAR(e.gradient[1], 0.0, 1e-14);
}

TEST(Green, FarFieldMatchesLog) {
  MonopoleSet P({0.0});
  GreensEval e = eval_green(point(3.0, 0.3), P, 1e-12);
  EXPECT_NEAR(e.value, std::log(1.0 / 3.0), 1e-6);
}

TEST(PotentialV, ValueAndGuards) {
  MonopoleSet P({0.0});
  const double delta = std::exp(-10.0), T = 10.0;
  HoloPoly h{{cplx(0, 0), cplx(0, 1)}};  // h(z) = i z, so 2 pi Im h = 2 pi Re(delta w)
  const Vec3 u(0.5, 0.2, 0.37);
  const double g = eval_green(u, P, 1e-12).value;
  const double v = eval_potential_V(u, P, T, h, delta);
  EXPECT_NEAR(v, T + g + TWO_PI * delta * u[0], 1e-10);
  EXPECT_THROW(eval_potential_V(u, P, T + 0.5, h, delta), InvalidConfig);
  Vec3 far(2.0 * 0.25 / delta * 1.01, 0.0, 0.37);
  EXPECT_THROW(eval_potential_V(far, P, T, h, delta), DomainViolation);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  return RUN_ALL_TESTS();
}
