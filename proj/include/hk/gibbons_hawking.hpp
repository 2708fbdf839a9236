#pragma once

#include <functional>
#include <vector>

#include "hk/lattice_greens.hpp"
#include "hk/triple_algebra.hpp"

// Gibbons-Hawking charts: a positive harmonic potential V and a connection
// theta = du4 + A.du solving d theta = *dV induce the triple
//   w1 = (1/2pi)(du3 ^ theta + V du1 ^ du2)   (cyclic in 1,2,3)
// and the metric g = (1/2pi)(V du^2 + V^{-1} theta^2). Coordinates are
// x = (u1, u2, u3, u4); the fiber coordinate u4 has period 2 pi.
//
// Gauge convention: per-pole Wu-Yang upper gauge with the string on the +u3
// half-axis; on the periodic base each pole's kernel argument is wrapped to
// its nearest branch, so the gauge seam of pole t_i sits on the circle
// u3 = t_i + 1/2. Probes must avoid strings and seams.

namespace hk {

enum class Gauge { upper, lower };

using PotentialField = std::function<double(const Vec3&)>;
using ConnectionField = std::function<Vec3(const Vec3&)>;

struct GHChart {
  PotentialField potential;
  ConnectionField connection;  // components of A
  double scale = 1.0;          // overall triple factor, e.g. delta^2 for the flat rescale
  double theta_shift_c = 0.0;  // optional c * du3 period correction
  bool periodic_u3 = true;
};

// connection sum for the periodic Green's part of the potential
inline ConnectionField build_connection(const MonopoleSet& P, Gauge gauge,
                                        double tol = 1e-12) {
  return [P, gauge, tol](const Vec3& u) -> Vec3 {
    const double rho = std::hypot(u[0], u[1]);
    if (rho < 1e-10 && !P.poles.empty())
      throw GaugeStringHit("build_connection: point on the fiber axis");
    double a = 0.0;
    for (double tp : P.poles) {
      const double t = wrap_near(u[2] - tp);
      a += (rho >= kGreensRepSwitchRho) ? kernels::conn_fb(rho, t, tol)
                                        : kernels::conn_image(rho, t, tol);
      if (gauge == Gauge::lower) a -= 1.0;
    }
    if (P.poles.empty()) return Vec3::Zero();
    return Vec3(-a * u[1] / (rho * rho), a * u[0] / (rho * rho), 0.0);
  };
}

// ---- chart factories -------------------------------------------------------

inline GHChart make_constant_chart(double T, double c = 0.0) {
  if (T <= 0) throw NonPositivePotential("make_constant_chart: T must be positive");
  GHChart ch;
  ch.potential = [T](const Vec3&) { return T; };
  ch.connection = [](const Vec3&) -> Vec3 { return Vec3::Zero(); };
  ch.theta_shift_c = c;
  return ch;
}

// multi-Ooguri-Vafa chart, V = T + G_P + 2 pi Im h(delta w), T = -nu log delta
inline GHChart make_multi_ov_chart(const MonopoleSet& P, double delta, HoloPoly h = {},
                                   Gauge gauge = Gauge::upper, double scale = 1.0,
                                   double delta0 = 0.25, double tol = 1e-12) {
  if (P.poles.empty()) throw InvalidConfig("make_multi_ov_chart: need poles");
  if (delta <= 0 || delta >= 1) throw InvalidConfig("make_multi_ov_chart: delta in (0,1)");
  const double T = -P.nu() * std::log(delta);
  GHChart ch;
  ch.potential = [P, T, h, delta, delta0, tol](const Vec3& u) {
    const double v = eval_potential_V(u, P, T, h, delta, delta0, tol);
    if (v <= 0) throw NonPositivePotential("multi-OV potential not positive here");
    return v;
  };
  ConnectionField green_part = build_connection(P, gauge, tol);
  ch.connection = [green_part, h, delta](const Vec3& u) -> Vec3 {
    Vec3 A = green_part(u);
    if (!h.zero()) A[2] += -TWO_PI * h.eval(delta * cplx(u[0], u[1])).real();
    return A;
  };
  ch.scale = scale;
  return ch;
}

// Taub-NUT chart on R^3 x S^1: V = 1 + 1/(2r), a = (1/2)(1 + u3/r)
inline GHChart make_taub_nut_chart(Gauge gauge = Gauge::upper) {
  GHChart ch;
  ch.periodic_u3 = false;
  ch.potential = [](const Vec3& u) {
    const double r = u.norm();
    if (r < 1e-12) throw PoleHit("taub-nut: potential at the monopole");
    return 1.0 + 0.5 / r;
  };
  ch.connection = [gauge](const Vec3& u) -> Vec3 {
    const double r = u.norm(), rho = std::hypot(u[0], u[1]);
    if (r < 1e-12) throw PoleHit("taub-nut: connection at the monopole");
    if (rho < 1e-10) {
      const bool on_string = (gauge == Gauge::upper) ? (u[2] > 0) : (u[2] < 0);
      if (on_string) throw GaugeStringHit("taub-nut: point on the gauge string");
      return Vec3::Zero();  // regular half-axis, a vanishes there
    }
    double a = 0.5 * (1.0 + u[2] / r);
    if (gauge == Gauge::lower) a -= 1.0;
    return Vec3(-a * u[1] / (rho * rho), a * u[0] / (rho * rho), 0.0);
  };
  return ch;
}

// ---- pointwise data --------------------------------------------------------

struct GHData {
  double V = 0.0;
  Vec3 A = Vec3::Zero();  // includes the theta_shift_c term
};

inline GHData gh_eval(const GHChart& ch, const Vec3& u) {
  GHData d;
  d.V = ch.potential(u);
  if (d.V <= 0) throw NonPositivePotential("gh_eval: potential not positive");
  d.A = ch.connection(u);
  d.A[2] += ch.theta_shift_c;
  return d;
}

inline Mat4 gh_metric(const GHChart& ch, const Vec4& x) {
  const GHData d = gh_eval(ch, x.head<3>());
  Mat4 g = Mat4::Zero();
  for (int i = 0; i < 3; ++i) {
    g(i, i) += d.V;
    for (int j = 0; j < 3; ++j) g(i, j) += d.A[i] * d.A[j] / d.V;
    g(i, 3) = g(3, i) = d.A[i] / d.V;
  }
  g(3, 3) = 1.0 / d.V;
  return (ch.scale / TWO_PI) * g;
}

struct GHTriple {
  GHChart chart;
  double scale = 1.0;  // mirrors chart.scale

  Triple at(const Vec4& x) const {
    const GHData d = gh_eval(chart, x.head<3>());
    const double s = scale / TWO_PI;
    Triple t;
    t.w[0] = s * (form2_basis(2, 3) - d.A[0] * form2_basis(0, 2) -
                  d.A[1] * form2_basis(1, 2) + d.V * form2_basis(0, 1));
    t.w[1] = s * (form2_basis(0, 3) + d.A[1] * form2_basis(0, 1) +
                  d.A[2] * form2_basis(0, 2) + d.V * form2_basis(1, 2));
    t.w[2] = s * (form2_basis(1, 3) - d.A[0] * form2_basis(0, 1) +
                  d.A[2] * form2_basis(1, 2) - d.V * form2_basis(0, 2));
    return t;
  }
  Form2 w(int i, const Vec4& x) const { return at(x).w[i]; }
};

inline GHTriple gh_triple(const GHChart& ch) { return GHTriple{ch, ch.scale}; }

// FD residual of the monopole equation d theta = *dV at a base point
inline double monopole_residual(const GHChart& ch, const Vec3& u, double h) {
  if (h <= 0) throw InvalidConfig("monopole_residual: step must be positive");
  auto A = [&](const Vec3& v) { return gh_eval(ch, v).A; };
  auto V = [&](const Vec3& v) { return ch.potential(v); };
  Mat3 dA = Mat3::Zero();
  Vec3 gradV;
  for (int a = 0; a < 3; ++a) {
    Vec3 up = u, dn = u;
    up[a] += h;
    dn[a] -= h;
    const Vec3 Ap = A(up), Am = A(dn);
    gradV[a] = (V(up) - V(dn)) / (2.0 * h);
    for (int j = 0; j < 3; ++j) dA(a, j) += (Ap[j] - Am[j]) / (2.0 * h);
  }
  Mat3 curl = dA - dA.transpose();  // (dA)_{ij} = d_i A_j - d_j A_i
  Mat3 star = Mat3::Zero();         // *dV: du2^du3 <- d1V etc.
  star(1, 2) = gradV[0];
  star(2, 0) = gradV[1];
  star(0, 1) = gradV[2];
  star -= star.transpose().eval();
  return (curl - star).norm() / std::sqrt(2.0);
}

}  // namespace hk
