#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "hk/triple_algebra.hpp"

// Closed-form model geometries: the Eguchi-Hanson gravitational instanton,
// flat sector-over-torus models C_{beta,tau}, and flat orbifold quotients.

namespace hk {

// ---- Eguchi-Hanson ----------------------------------------------------------
//
// Kahler potential on C^2 \ {0} (descends to the Z2 quotient),
//   phi(r) = (1/2)(sqrt(1+r^4) + 2 log r - log(1 + sqrt(1+r^4))).
// The metric solves det(g_{i jbar}) = 1/4, so omega^2 is twice the Euclidean
// volume form, and phi - r^2/2 = O(r^-2) at infinity.

inline double eh_potential(double r) {
  if (r <= 0) throw NonPositiveRadius("eh_potential: r must be positive");
  const double s = std::sqrt(1.0 + r * r * r * r);
  return 0.5 * (s + 2.0 * std::log(r) - std::log1p(s));
}

inline double eh_potential_prime(double r) {
  if (r <= 0) throw NonPositiveRadius("eh_potential_prime: r must be positive");
  return std::sqrt(1.0 + r * r * r * r) / r;
}

// hermitian metric g_{i jbar} = c1 delta_ij + c2 zbar_i z_j
inline Eigen::Matrix2cd eh_hermitian_metric(const Eigen::Vector2cd& z) {
  const double r2 = z.squaredNorm();
  if (r2 <= 0) throw NonPositiveRadius("eh_hermitian_metric: origin excluded");
  const double r4 = r2 * r2, s = std::sqrt(1.0 + r4);
  const double c1 = s / (2.0 * r2);
  const double c2 = -1.0 / (2.0 * r4 * s);
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      g(i, j) = c1 * double(i == j) + c2 * std::conj(z(i)) * z(j);
  return g;
}

namespace detail {
// dz_i evaluated on the real coordinate frame (x1, y1, x2, y2)
inline cplx dz_on_frame(int i, int a) {
  if (a == 2 * i) return cplx(1, 0);
  if (a == 2 * i + 1) return cplx(0, 1);
  return cplx(0, 0);
}
}  // namespace detail

// omega = i g_{i jbar} dz_i ^ dzbar_j as a real 2-form, axes (x1,y1,x2,y2):
// omega_ab = i sum_ij g_ij [dz_i(e_a) dzbar_j(e_b) - dzbar_j(e_a) dz_i(e_b)]
inline Form2 hermitian_to_kahler_form(const Eigen::Matrix2cd& g) {
  Form2 w = Form2::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      cplx acc(0, 0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          acc += cplx(0, 1) * g(i, j) *
                 (detail::dz_on_frame(i, a) * std::conj(detail::dz_on_frame(j, b)) -
                  std::conj(detail::dz_on_frame(j, a)) * detail::dz_on_frame(i, b));
      w(a, b) = acc.real();
    }
  return w;
}

// real Riemannian metric of a hermitian one: g(X,Y) = 2 Re sum g_ij dz_i(X) conj(dz_j(Y))
inline Mat4 hermitian_to_real_metric(const Eigen::Matrix2cd& g) {
  Mat4 out = Mat4::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      cplx acc(0, 0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          acc += g(i, j) * detail::dz_on_frame(i, a) * std::conj(detail::dz_on_frame(j, b));
      out(a, b) = 2.0 * acc.real();
    }
  return out;
}

inline Eigen::Vector2cd to_cplx2(const Vec4& x) {
  return Eigen::Vector2cd(cplx(x[0], x[1]), cplx(x[2], x[3]));
}

inline Form2 eh_kahler_form(const Vec4& x) {
  return hermitian_to_kahler_form(eh_hermitian_metric(to_cplx2(x)));
}
inline Mat4 eh_metric_real(const Vec4& x) {
  return hermitian_to_real_metric(eh_hermitian_metric(to_cplx2(x)));
}

// rescaled family: potential a^2 phi(z/a) with a = delta e^2, so the form is
// the pullback of delta^2 e^4 omega_EH and tends to the flat |z|^2/2 data
struct EguchiHanson {
  double e_scale = 1.0;
  double delta = 1.0;

  double a() const { return delta * e_scale * e_scale; }
  double potential(double r) const { return a() * a() * eh_potential(r / a()); }
  Eigen::Matrix2cd hermitian(const Eigen::Vector2cd& z) const {
    return eh_hermitian_metric(Eigen::Vector2cd(z / a()));
  }
  Form2 kahler_form(const Vec4& x) const { return hermitian_to_kahler_form(hermitian(to_cplx2(x))); }
  Mat4 metric_real(const Vec4& x) const { return hermitian_to_real_metric(hermitian(to_cplx2(x))); }
};

// ---- standard flat sector-over-torus models ---------------------------------
//
// C_{beta,tau}: {arg U in [0, 2 pi beta]} x (C / Lambda), Lambda generated by
// (m + n tau)/sqrt(Im tau), with the edge identification
// (U, V) ~ (e^{2 pi i beta} U, e^{-2 pi i beta} V). The metric h is the flat
// |dU|^2 + |dV|^2; omega = (i/2)(dU^dUbar + dV^dVbar), Omega = dU^dV.

struct ALGModel {
  Rational beta{1, 1};
  cplx tau{0.0, 1.0};
};

// admissible (beta, tau) rows; I0* (beta = 1/2) and the trivial sector
// (beta = 1) leave tau free in the upper half-plane
inline const std::vector<std::pair<Rational, cplx>>& alg_beta_table() {
  static const cplx w = std::exp(cplx(0.0, TWO_PI / 3.0));
  static const cplx i1(0.0, 1.0);
  static const std::vector<std::pair<Rational, cplx>> rows = {
      {{1, 6}, w}, {{5, 6}, w}, {{1, 4}, i1}, {{3, 4}, i1},
      {{1, 3}, w}, {{2, 3}, w}, {{1, 2}, cplx(0, 0)}, {{1, 1}, cplx(0, 0)}};
  return rows;  // tau = 0 marks a free modulus
}

inline ALGModel make_alg_model(Rational beta, cplx tau) {
  if (tau.imag() <= 0) throw InvalidPair("make_alg_model: tau not in the upper half-plane");
  for (const auto& [b, t] : alg_beta_table()) {
    if (b.num * beta.den != beta.num * b.den) continue;
    if (std::abs(t) < 1e-14 || std::abs(t - tau) < 1e-12) return ALGModel{beta, tau};
    throw InvalidPair("make_alg_model: tau does not match this sector angle");
  }
  throw InvalidPair("make_alg_model: sector angle not in the admissible list");
}

struct ALGForms {
  Triple triple;  // (omega, Re Omega, Im Omega)
  Mat4 h;         // flat metric
};

// constant flat data in real coordinates (Re U, Im U, Re V, Im V)
inline ALGForms alg_model_forms(const ALGModel&) {
  return ALGForms{flat_triple(), Mat4::Identity()};
}

// the edge identification as a real rotation of (U, V)
inline Mat4 alg_sector_rotation(const ALGModel& m) {
  const double a = TWO_PI * double(m.beta.num) / double(m.beta.den);
  Mat4 R = Mat4::Zero();
  R(0, 0) = R(1, 1) = std::cos(a);
  R(0, 1) = -std::sin(a);
  R(1, 0) = std::sin(a);
  R(2, 2) = R(3, 3) = std::cos(a);
  R(2, 3) = std::sin(a);
  R(3, 2) = -std::sin(a);
  return R;
}

inline std::pair<cplx, cplx> alg_identify(const ALGModel& m, cplx U, cplx V) {
  const double a = TWO_PI * double(m.beta.num) / double(m.beta.den);
  return {U * std::exp(cplx(0, a)), V * std::exp(cplx(0, -a))};
}

inline cplx alg_translate(const ALGModel& m, cplx V, int mm, int nn) {
  return V + (double(mm) + double(nn) * m.tau) / std::sqrt(m.tau.imag());
}

inline bool alg_in_sector(const ALGModel& m, cplx U) {
  const double hi = TWO_PI * double(m.beta.num) / double(m.beta.den);
  double a = std::arg(U);
  if (a < 0) a += TWO_PI;
  return a <= hi + 1e-12;
}

// flat model plus a bounded perturbation with prescribed decay order aleph in
// the base radius |U|; stands in for a genuine ALG end of that order
struct SyntheticALG {
  ALGModel model;
  double aleph = 2.0;
  std::function<Triple(const Vec4&)> raw;  // bounded profile

  Triple at(const Vec4& x) const {
    const double r = std::hypot(x[0], x[1]);
    if (r < 1e-8) throw DomainViolation("SyntheticALG: asymptotic chart only");
    Triple t = flat_triple();
    if (raw) {
      const Triple p = raw(x);
      const double f = std::pow(r, -aleph);
      for (int i = 0; i < 3; ++i) t.w[i] += f * p.w[i];
    }
    return t;
  }
};

// ---- flat orbifold quotients -------------------------------------------------

enum class OrbifoldKind { R4_Z2, R3S1_Z2, R3_Z2, R2S1_Z2, R2_Z2, Cone };

// fundamental-domain chart of a flat quotient. Circle factors have period 1
// and sit in the last active coordinate; the cone C(S^1_{2 pi beta}) lives in
// the (x0, x1) plane.
struct MetricPatch {
  OrbifoldKind kind = OrbifoldKind::R4_Z2;
  int dim = 4;
  bool has_circle = false;
  double beta = 1.0;  // cone angle / 2 pi, Cone only
  std::vector<Vec4> fixed_points;
  bool smooth = false;

  Vec4 identify(const Vec4& x) const {
    if (kind == OrbifoldKind::Cone) {
      const double a = TWO_PI * beta;
      Vec4 y = x;
      y[0] = std::cos(a) * x[0] - std::sin(a) * x[1];
      y[1] = std::sin(a) * x[0] + std::cos(a) * x[1];
      return y;
    }
    Vec4 y = -x;
    for (int a = dim; a < 4; ++a) y[a] = 0;
    if (has_circle) y[dim - 1] = wrap01(y[dim - 1]);
    return y;
  }

  double dist_singular(const Vec4& x) const {
    if (kind == OrbifoldKind::Cone) return std::hypot(x[0], x[1]);
    if (!has_circle) {
      double s = 0;
      for (int a = 0; a < dim; ++a) s += sq(x[a]);
      return std::sqrt(s);
    }
    double best = INFINITY;
    for (const Vec4& q : fixed_points) {
      double s = 0;
      for (int a = 0; a + 1 < dim; ++a) s += sq(x[a] - q[a]);
      s += sq(wrap_near(x[dim - 1] - q[dim - 1]));
      best = std::min(best, std::sqrt(s));
    }
    return best;
  }

  double inj_radius(const Vec4& x) const {
    if (kind == OrbifoldKind::Cone) {
      const double r = std::hypot(x[0], x[1]);
      if (beta >= 1.0 - 1e-14) return INFINITY;
      return (beta < 0.5) ? r * std::sin(PI * beta) : r;
    }
    if (!has_circle) return dist_singular(x);  // half of d(x, -x)
    double s = 0;
    for (int a = 0; a + 1 < dim; ++a) s += sq(2.0 * x[a]);
    s += sq(wrap_near(2.0 * x[dim - 1]));
    return std::min(0.5, 0.5 * std::sqrt(s));
  }
};

inline MetricPatch flat_orbifold(OrbifoldKind kind, double beta = 1.0) {
  MetricPatch p;
  p.kind = kind;
  switch (kind) {
    case OrbifoldKind::R4_Z2:
      p.dim = 4;
      p.fixed_points = {Vec4::Zero()};
      break;
    case OrbifoldKind::R3_Z2:
      p.dim = 3;
      p.fixed_points = {Vec4::Zero()};
      break;
    case OrbifoldKind::R2_Z2:
      p.dim = 2;
      p.fixed_points = {Vec4::Zero()};
      break;
    case OrbifoldKind::R3S1_Z2: {
      p.dim = 4;
      p.has_circle = true;
      Vec4 q0 = Vec4::Zero(), q1 = Vec4::Zero();
      q1[3] = 0.5;
      p.fixed_points = {q0, q1};
      break;
    }
    case OrbifoldKind::R2S1_Z2: {
      p.dim = 3;
      p.has_circle = true;
      Vec4 q0 = Vec4::Zero(), q1 = Vec4::Zero();
      q1[2] = 0.5;
      p.fixed_points = {q0, q1};
      break;
    }
    case OrbifoldKind::Cone:
      if (beta <= 0 || beta > 1.0) throw InvalidConfig("flat_orbifold: cone angle fraction in (0,1]");
      p.dim = 2;
      p.beta = beta;
      p.fixed_points = {Vec4::Zero()};
      p.smooth = (beta >= 1.0 - 1e-14);
      break;
  }
  return p;
}

}  // namespace hk
