#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "hk/bessel.hpp"
#include "hk/gibbons_hawking.hpp"
#include "hk/model_spaces.hpp"
#include "hk/semi_flat.hpp"

// Interpolation of model geometries into their far-field backgrounds. Three
// assemblies live here: the periodic Gibbons-Hawking chart glued into its
// fiber-averaged counterpart, the sector-germ base glued onto a flat model
// with a synthetic perturbation, and the quotient cover with Eguchi-Hanson
// caps at the fixed points. A radial-ray primitive inverts d on decaying
// 2-forms and feeds the transition estimates.

namespace hk {

// ---- cutoff profiles --------------------------------------------------------

// fixed C^2 quintic ramp on [inner, outer]; up() climbs 0 -> 1, down() = 1 - up
struct CutoffProfile {
  double inner = 0.0, outer = 1.0;

  CutoffProfile(double a, double b) : inner(a), outer(b) {
    if (!(0.0 < a && a < b)) throw InvalidConfig("CutoffProfile: need 0 < inner < outer");
  }

  double up(double r) const { return cutoff_up(r, inner, outer); }
  double down(double r) const { return 1.0 - up(r); }

  double d_up(double r) const {
    const double w = outer - inner, s = (r - inner) / w;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 30.0 * sq(s) * sq(1.0 - s) / w;
  }
  double d_down(double r) const { return -d_up(r); }

  double d2_up(double r) const {
    const double w = outer - inner, s = (r - inner) / w;
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return 60.0 * s * (2.0 * s - 1.0) * (s - 1.0) / (w * w);
  }
  double d2_down(double r) const { return -d2_up(r); }
};

enum class GlueRegion { core, damage, exterior };

// ---- periodic GH chart vs its fiber average --------------------------------

// chart whose potential and connection are the u3-averages of the periodic
// multi-monopole data: V = T - nu log rho + 2 pi Im h(delta w), a linear in
// the wrapped fiber coordinate. Same T convention as the periodic factory.
inline GHChart make_semiflat_gh_chart(const MonopoleSet& P, double delta, HoloPoly h = {},
                                      Gauge gauge = Gauge::upper, double scale = 1.0) {
  if (P.poles.empty()) throw InvalidConfig("make_semiflat_gh_chart: need poles");
  if (delta <= 0 || delta >= 1) throw InvalidConfig("make_semiflat_gh_chart: delta in (0,1)");
  const double T = -P.nu() * std::log(delta);
  GHChart ch;
  ch.scale = scale;
  ch.potential = [P, T, h, delta](const Vec3& u) -> double {
    const double rho = std::hypot(u[0], u[1]);
    if (rho < 1e-12) throw DomainViolation("semiflat gh chart: the axis is excluded");
    const cplx w = delta * cplx(u[0], u[1]);
    const double v = T - P.nu() * std::log(rho) + TWO_PI * std::imag(h.eval(w));
    if (v <= 0) throw NonPositivePotential("semiflat gh chart: averaged potential <= 0");
    return v;
  };
  ch.connection = [P, h, delta, gauge](const Vec3& u) -> Vec3 {
    const double r2 = sq(u[0]) + sq(u[1]);
    if (r2 < 1e-20) throw GaugeStringHit("semiflat gh chart: connection on the axis");
    double a = 0.0;
    for (double tp : P.poles) {
      a += wrap_near(u[2] - tp);
      if (gauge == Gauge::lower) a -= 1.0;
    }
    Vec3 A(-a * u[1] / r2, a * u[0] / r2, 0.0);
    if (!h.zero()) A[2] += -TWO_PI * h.eval(delta * cplx(u[0], u[1])).real();
    return A;
  };
  return ch;
}

// Fourier tails of (periodic minus averaged) data. Everything decays like
// exp(-2 pi rho); that factor is pulled out so the mantissas stay O(1) at
// large radius. p_phi and q_base are the coefficients of the two primitive
// covector families; their exterior derivatives reproduce the difference
// 2-forms exactly.
struct GHDifferenceTails {
  double log_factor = 0.0;  // -2 pi rho
  double dV = 0.0;
  double da = 0.0;
  double p_phi = 0.0;
  double q_base = 0.0;
};

inline GHDifferenceTails ov_sf_tails(const MonopoleSet& P, double rho, double u3,
                                     double tol = 1e-15, int max_terms = 400) {
  if (!(rho > 0.0)) throw DomainViolation("ov_sf_tails: rho must be positive");
  GHDifferenceTails out;
  out.log_factor = -TWO_PI * rho;
  for (int k = 1;; ++k) {
    if (k > max_terms) throw ToleranceUnreachable("ov_sf_tails: k-sum did not settle");
    const double x = TWO_PI * k * rho;
    const double sup = std::exp(-TWO_PI * (k - 1) * rho);  // suppression relative to k = 1
    const double k0 = bessel_k0_scaled(x);
    const double k1 = bessel_k1_scaled(x);
    double cs = 0.0, sn = 0.0;
    for (double tp : P.poles) {
      const double th = TWO_PI * k * wrap_near(u3 - tp);
      cs += std::cos(th);
      sn += std::sin(th);
    }
    out.dV += 2.0 * cs * k0 * sup;
    out.da += 2.0 * sn * rho * k1 * sup;
    out.p_phi += -(cs / (PI * k)) * rho * k1 * sup;
    out.q_base += -(sn / (PI * k)) * k0 * sup;
    if (k >= 2 && std::exp(-TWO_PI * k * rho) * 2.0 * P.nu() * (k0 + (1.0 + rho) * k1) < tol)
      break;
  }
  return out;
}

namespace detail {

// difference 2-forms from (dV, da) at base point u; s = scale / 2 pi
inline void gh_difference_forms(double s, const Vec4& x, double dv, double da, Form2 out[3]) {
  const double r2 = sq(x[0]) + sq(x[1]);
  const double da0 = -da * x[1] / r2;  // connection component differences
  const double da1 = da * x[0] / r2;
  out[0] = s * (dv * form2_basis(0, 1) - da0 * form2_basis(0, 2) - da1 * form2_basis(1, 2));
  out[1] = s * (da1 * form2_basis(0, 1) + dv * form2_basis(1, 2));
  out[2] = s * (-da0 * form2_basis(0, 1) - dv * form2_basis(0, 2));
}

// primitive covectors with d zeta_i = difference form i
inline void gh_primitive_covectors(double s, const Vec4& x, double p_phi, double q_base,
                                   Vec4 out[3]) {
  const double r2 = sq(x[0]) + sq(x[1]);
  out[0] = s * p_phi * Vec4(-x[1] / r2, x[0] / r2, 0.0, 0.0);
  out[1] = Vec4(0.0, s * q_base, 0.0, 0.0);
  out[2] = Vec4(-s * q_base, 0.0, 0.0, 0.0);
}

}  // namespace detail

// region-tagged evaluator bundle for the periodic-into-averaged interpolation.
// The cutoff runs in the base radius |y| = delta * rho: the periodic triple
// survives below chi.inner, the averaged one beyond chi.outer.
struct GluedAssembly {
  MonopoleSet poles;
  double delta = 0.05;
  GHChart ov, sf;
  CutoffProfile chi;

  double rho_of(const Vec4& x) const { return std::hypot(x[0], x[1]); }

  GlueRegion region(const Vec4& x) const {
    const double ry = delta * rho_of(x);
    if (ry < chi.inner) return GlueRegion::core;
    if (ry > chi.outer) return GlueRegion::exterior;
    return GlueRegion::damage;
  }

  // periodic minus averaged triple, assembled from the Fourier tails
  Triple difference(const Vec4& x) const {
    const GHDifferenceTails t = ov_sf_tails(poles, rho_of(x), x[2]);
    const double f = std::exp(t.log_factor);
    Triple d;
    detail::gh_difference_forms(ov.scale / TWO_PI, x, f * t.dV, f * t.da, d.w);
    return d;
  }

  // covectors zeta_i with d zeta_i equal to the difference forms
  std::array<Vec4, 3> primitive(const Vec4& x) const {
    const GHDifferenceTails t = ov_sf_tails(poles, rho_of(x), x[2]);
    const double f = std::exp(t.log_factor);
    std::array<Vec4, 3> z;
    detail::gh_primitive_covectors(ov.scale / TWO_PI, x, f * t.p_phi, f * t.q_base, z.data());
    return z;
  }

  // glued triple: averaged + chi * difference + d chi ^ primitive. Closed by
  // construction, and lands on the pure charts outside the damage zone.
  Triple at(const Vec4& x) const {
    const GlueRegion reg = region(x);
    if (reg == GlueRegion::core) return gh_triple(ov).at(x);
    if (reg == GlueRegion::exterior) return gh_triple(sf).at(x);
    const double ry = delta * rho_of(x);
    const double c = chi.down(ry);
    const double dc = chi.d_down(ry) * delta;  // d/d|y| through |y| = delta rho
    const double rho = rho_of(x);
    const Vec4 dchi = dc * Vec4(x[0] / rho, x[1] / rho, 0.0, 0.0);
    const Triple diff = difference(x);
    const std::array<Vec4, 3> z = primitive(x);
    Triple out = gh_triple(sf).at(x);
    for (int i = 0; i < 3; ++i)
      out.w[i] += c * diff.w[i] + covector_wedge(dchi, z[i]);
    return out;
  }

  // linearized |Q_omega - Id| of the glued triple against the averaged
  // background, kept in factored form so deep collapse stays representable
  struct ScaledDeviation {
    double log_factor = 0.0;
    double mantissa = 0.0;
  };

  ScaledDeviation deviation(const Vec4& x) const {
    const double rho = rho_of(x);
    const double ry = delta * rho;
    const GHDifferenceTails t = ov_sf_tails(poles, rho, x[2]);
    const double s = ov.scale / TWO_PI;
    const double c = chi.down(ry);
    const double dc = chi.d_down(ry) * delta;
    const Vec4 dchi = dc * Vec4(x[0] / rho, x[1] / rho, 0.0, 0.0);
    Form2 diff[3];
    Vec4 z[3];
    detail::gh_difference_forms(s, x, t.dV, t.da, diff);
    detail::gh_primitive_covectors(s, x, t.p_phi, t.q_base, z);
    const Triple bg = gh_triple(sf).at(x);
    const double qsf = sq(s) * sf.potential(x.head<3>());
    Mat3 m;
    for (int i = 0; i < 3; ++i) {
      const Form2 eps = c * diff[i] + covector_wedge(dchi, z[i]);
      for (int j = 0; j < 3; ++j) m(i, j) = wedge(eps, bg.w[j]);
    }
    m = (0.5 * (m + m.transpose()) / qsf).eval();  // first-order change of Q
    const Mat3 tf = m - (m.trace() / 3.0) * Mat3::Identity();
    return {t.log_factor, tf.norm()};
  }

  // max over a damage-zone grid of log |Q_omega - Id|
  double log_sup_deviation(int n_rho = 24, int n_t = 16, double phi = 0.3) const {
    if (n_rho < 2 || n_t < 1) throw InvalidConfig("log_sup_deviation: grid too small");
    double best = -1e308;
    for (int i = 0; i < n_rho; ++i) {
      const double ry = chi.inner + (chi.outer - chi.inner) * (i + 0.5) / n_rho;
      const double rho = ry / delta;
      for (int j = 0; j < n_t; ++j) {
        const double u3 = (j + 0.37) / n_t;
        const Vec4 x(rho * std::cos(phi), rho * std::sin(phi), u3, 0.0);
        const ScaledDeviation d = deviation(x);
        if (d.mantissa > 0.0) best = std::max(best, d.log_factor + std::log(d.mantissa));
      }
    }
    return best;
  }

  // central-difference check that d(primitive) reproduces the difference forms
  void verify_exactness(const Vec4& x, double h_step = 1e-3, double tol = 1e-3) const {
    const Triple diff = difference(x);
    double scale_ref = 0.0;
    for (int i = 0; i < 3; ++i) scale_ref = std::max(scale_ref, diff.w[i].cwiseAbs().maxCoeff());
    if (scale_ref == 0.0) throw PotentialMismatch("verify_exactness: vanishing difference");
    for (int i = 0; i < 3; ++i) {
      Form2 fd = Form2::Zero();
      for (int a = 0; a < 4; ++a) {
        Vec4 xp = x, xm = x;
        xp[a] += h_step;
        xm[a] -= h_step;
        const Vec4 zp = primitive(xp)[i], zm = primitive(xm)[i];
        for (int b = 0; b < 4; ++b) {
          const double d = (zp[b] - zm[b]) / (2.0 * h_step);
          fd(a, b) += d;
          fd(b, a) -= d;
        }
      }
      if ((fd - diff.w[i]).cwiseAbs().maxCoeff() > tol * scale_ref)
        throw PotentialMismatch("verify_exactness: primitive does not integrate the difference");
    }
  }
};

inline GluedAssembly glue_inu(const MonopoleSet& P, double delta, double delta0 = 0.2,
                              HoloPoly h = {}, Gauge gauge = Gauge::upper, double scale = 1.0) {
  if (!(delta0 > 0.0 && delta0 <= 0.25))
    throw InvalidConfig("glue_inu: damage radius delta0 in (0, 0.25]");
  if (!(delta > 0.0 && delta < delta0))
    throw InvalidConfig("glue_inu: need delta < delta0 so the seam sits past one period");
  GluedAssembly g{P, delta, make_multi_ov_chart(P, delta, h, gauge, scale, delta0),
                  make_semiflat_gh_chart(P, delta, h, gauge, scale),
                  CutoffProfile(delta0, 2.0 * delta0)};
  return g;
}

// ---- radial ray primitives --------------------------------------------------

// interior product of a 2-form with a vector, (iota_v F)_b = v^a F_ab
inline Vec4 contract2(const Form2& f, const Vec4& v) { return f.transpose() * v; }

struct RayChart {
  int ax0 = 0, ax1 = 1;  // the radial plane
  double aleph = 2.0;    // declared coefficient decay of iota_r alpha
  double r_cap = 1e4;    // truncation radius of the improper tail
  int panels = 24;       // log-spaced Gauss panels per evaluation
  double decay_margin = 0.1;
};

enum class RayOrientation { decay_at_infinity, from_inner_boundary };

namespace detail {

// 8-point Gauss-Legendre nodes and weights on [-1, 1]
inline const std::array<double, 8>& gauss8_nodes() {
  static const std::array<double, 8> n = {
      -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
      0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  return n;
}
inline const std::array<double, 8>& gauss8_weights() {
  static const std::array<double, 8> w = {
      0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
      0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  return w;
}

// polar-frame coefficients of a covector at radius s along a fixed ray:
// c_r against dr, c_theta against dtheta (note the s weight), plus the
// transverse components untouched by the ray
struct PolarCoeffs {
  double c_r = 0.0, c_theta = 0.0;
  Vec4 rest = Vec4::Zero();
};

inline PolarCoeffs polar_split(const Vec4& xi, const Vec4& er, const Vec4& eth, double s,
                               int ax0, int ax1) {
  PolarCoeffs pc;
  pc.c_r = xi.dot(er);
  pc.c_theta = s * xi.dot(eth);
  pc.rest = xi;
  pc.rest[ax0] = 0.0;
  pc.rest[ax1] = 0.0;
  return pc;
}

}  // namespace detail

// primitive of a decaying 2-form along rays of the (ax0, ax1) plane. The
// contraction iota_r alpha is split into polar-frame coefficients which are
// integrated in s; that inverts d exactly on fields of the separated form
// f(r) dr + g(r, theta) dtheta + h(r) dx_transverse. Coefficients must decay
// strictly faster than 1/s for the dtheta part to integrate at all; the
// declared rate is spot-checked at two radii and enforced up to a margin.
inline OneFormField radial_primitive(const TwoFormField& alpha, const RayChart& rc,
                                     RayOrientation orient = RayOrientation::decay_at_infinity,
                                     double r0 = 1.0) {
  if (rc.ax0 == rc.ax1 || rc.ax0 < 0 || rc.ax1 < 0 || rc.ax0 > 3 || rc.ax1 > 3)
    throw InvalidConfig("radial_primitive: radial plane axes");
  if (!(rc.aleph > 1.0)) throw InvalidConfig("radial_primitive: declared decay must exceed 1");
  if (rc.panels < 2 || !(rc.r_cap > 0.0)) throw InvalidConfig("radial_primitive: quadrature");
  if (orient == RayOrientation::from_inner_boundary && !(r0 > 0.0))
    throw InvalidConfig("radial_primitive: inner radius must be positive");

  return [alpha, rc, orient, r0](const Vec4& x) -> Vec4 {
    const double r = std::hypot(x[rc.ax0], x[rc.ax1]);
    if (r < 1e-12) throw NonPositiveRadius("radial_primitive: evaluation on the axis");
    Vec4 er = Vec4::Zero(), eth = Vec4::Zero();
    er[rc.ax0] = x[rc.ax0] / r;
    er[rc.ax1] = x[rc.ax1] / r;
    eth[rc.ax0] = -er[rc.ax1];
    eth[rc.ax1] = er[rc.ax0];

    auto coeffs_at = [&](double s) -> detail::PolarCoeffs {
      Vec4 xs = x;
      xs[rc.ax0] = s * er[rc.ax0];
      xs[rc.ax1] = s * er[rc.ax1];
      return detail::polar_split(contract2(alpha(xs), er), er, eth, s, rc.ax0, rc.ax1);
    };
    auto coeff_size = [](const detail::PolarCoeffs& pc) {
      return std::abs(pc.c_r) + std::abs(pc.c_theta) + pc.rest.cwiseAbs().maxCoeff();
    };

    double lo = r, hi = rc.r_cap;
    double sign = -1.0;  // eta = -int_r^inf for the decaying orientation
    if (orient == RayOrientation::from_inner_boundary) {
      lo = r0;
      hi = r;
      sign = 1.0;
      if (hi < lo) {
        std::swap(lo, hi);
        sign = -1.0;
      }
    } else {
      if (r >= rc.r_cap) throw DomainViolation("radial_primitive: point beyond the cap");
      const double s1 = std::max(2.0 * r, rc.r_cap / 8.0), s2 = 2.0 * s1;
      const double c1 = coeff_size(coeffs_at(s1)), c2 = coeff_size(coeffs_at(std::min(s2, rc.r_cap)));
      if (c1 > 1e-250) {
        const double measured = std::log(c1 / std::max(c2, 1e-300)) / std::log(std::min(s2, rc.r_cap) / s1);
        if (measured < rc.aleph - rc.decay_margin)
          throw DecayViolation("radial_primitive: contraction decays slower than declared");
      }
    }

    detail::PolarCoeffs acc;
    if (hi > lo) {
      const double q = std::pow(hi / lo, 1.0 / rc.panels);
      for (int p = 0; p < rc.panels; ++p) {
        const double a = lo * std::pow(q, p), b = a * q;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int k = 0; k < 8; ++k) {
          const double s = mid + half * detail::gauss8_nodes()[k];
          const double w = half * detail::gauss8_weights()[k];
          const detail::PolarCoeffs pc = coeffs_at(s);
          acc.c_r += w * pc.c_r;
          acc.c_theta += w * pc.c_theta;
          acc.rest += w * pc.rest;
        }
      }
    }
    if (orient == RayOrientation::decay_at_infinity) {
      // power-law continuation of the truncated tail
      const detail::PolarCoeffs pc = coeffs_at(rc.r_cap);
      const double t = rc.r_cap / (rc.aleph - 1.0);
      acc.c_r += t * pc.c_r;
      acc.c_theta += t * pc.c_theta;
      acc.rest += t * pc.rest;
    }
    return sign * (acc.c_r * er + (acc.c_theta / r) * eth + acc.rest);
  };
}

// ---- sector germ onto a perturbed flat model --------------------------------

struct AlgGlueParams {
  ALGModel model;
  PeriodModel periods;
  double delta = 1e-2;
  double ell = 11.0 / 12.0;  // the seam sits at base radius delta^ell
  double pert = 0.0;         // synthetic model perturbation amplitude
  double aleph = 2.0;        // its coefficient decay in the model radius
};

// only the Kahler component is interpolated here; the holomorphic component
// is compared separately through alg_complex_distortion below
struct AlgGlueAssembly {
  AlgGlueParams p;
  SemiFlatChart chart;
  CutoffProfile chi;  // in r = |y|; down() = 1 on the model core side

  double base_r(const Vec4& x) const { return std::hypot(x[2], x[3]); }

  GlueRegion region(const Vec4& x) const {
    const double r = base_r(x);
    if (r < chi.inner) return GlueRegion::core;
    if (r > chi.outer) return GlueRegion::exterior;
    return GlueRegion::damage;
  }

  Form2 flat_omega() const {
    return form2_basis(0, 1, sq(p.delta)) + form2_basis(2, 3, 1.0);
  }

  // synthetic model perturbation primitive along the fiber direction,
  // |eta| ~ pert * delta^2 * (r / delta)^{1 - aleph} in the glued metric
  Vec4 eta_model(const Vec4& x) const {
    const double r = base_r(x);
    const double c = p.pert * std::pow(p.delta, p.aleph + 1.0) * std::pow(r, 1.0 - p.aleph);
    return Vec4(c, 0.0, 0.0, 0.0);
  }

  Form2 d_eta_model(const Vec4& x) const {
    const double r = base_r(x);
    const double cp = p.pert * std::pow(p.delta, p.aleph + 1.0) * (1.0 - p.aleph) *
                      std::pow(r, -p.aleph);
    const Vec4 dr(0.0, 0.0, x[2] / r, x[3] / r);
    return covector_wedge(cp * dr, Vec4(1.0, 0.0, 0.0, 0.0));
  }

  // dtheta-primitive of the base density defect: f(r, theta) dtheta with
  // f = int_{r_in}^r (W - 1) s ds, so that d eta = (W - 1) dy1 ^ dy2 exactly
  Vec4 eta_base(const Vec4& x) const {
    const double r = base_r(x);
    const double th = std::atan2(x[3], x[2]);
    double f = 0.0;
    const double a = chi.inner, b = r;
    for (int piece = 0; piece < 4; ++piece) {
      const double pa = a + (b - a) * piece / 4.0, pb = a + (b - a) * (piece + 1) / 4.0;
      const double pm = 0.5 * (pa + pb), ph = 0.5 * (pb - pa);
      for (int k = 0; k < 8; ++k) {
        const double s = pm + ph * detail::gauss8_nodes()[k];
        const double w = ph * detail::gauss8_weights()[k];
        f += w * (mclean_w(p.periods, std::polar(s, th)) - 1.0) * s;
      }
    }
    const double r2 = r * r;
    return Vec4(0.0, 0.0, -f * x[3] / r2, f * x[2] / r2);
  }

  Form2 d_eta_base(const Vec4& x) const {
    return form2_basis(2, 3, mclean_w(p.periods, fiber_y(x)) - 1.0);
  }

  Form2 omega_model(const Vec4& x) const { return flat_omega() + d_eta_model(x); }
  Form2 omega_semiflat(const Vec4& x) const { return flat_omega() + d_eta_base(x); }

  // glued Kahler form: flat + d(chi eta_model + (1 - chi) eta_base)
  Form2 at(const Vec4& x) const {
    const GlueRegion reg = region(x);
    if (reg == GlueRegion::core) return omega_model(x);
    if (reg == GlueRegion::exterior) return omega_semiflat(x);
    const double r = base_r(x);
    const double c = chi.down(r);
    return flat_omega() + c * d_eta_model(x) + (1.0 - c) * d_eta_base(x) + transition_defect(x);
  }

  // d chi ^ (eta_model - eta_base): the entire deviation of the glued form
  // from the chi-average of its two regimes
  Form2 transition_defect(const Vec4& x) const {
    const double r = base_r(x);
    const double dc = chi.d_down(r);
    if (dc == 0.0) return Form2::Zero();
    const Vec4 dchi = dc * Vec4(0.0, 0.0, x[2] / r, x[3] / r);
    return covector_wedge(dchi, (eta_model(x) - eta_base(x)).eval());
  }

  // sup of the invariant defect size over the seam annulus; angles keep off
  // the branch slit of the sector chart
  double transition_error(int n_r = 12, int n_th = 24) const {
    if (n_r < 2 || n_th < 2) throw InvalidConfig("transition_error: grid too small");
    double sup = 0.0;
    for (int i = 0; i <= n_r; ++i) {
      const double r = chi.inner + (chi.outer - chi.inner) * i / n_r;
      for (int j = 0; j < n_th; ++j) {
        const double th = -0.95 * PI + 1.9 * PI * (j + 0.5) / n_th;
        const Vec4 x(0.23, 0.61, r * std::cos(th), r * std::sin(th));
        sup = std::max(sup, form2_norm_g(transition_defect(x), semiflat_metric(chart, x)));
      }
    }
    return sup;
  }
};

inline AlgGlueAssembly glue_alg(const AlgGlueParams& p) {
  if (!has_sector_model(p.periods.fiber.type) ||
      !(sector_beta(p.periods.fiber.type) == p.model.beta))
    throw SectorMismatch("glue_alg: period germ and model have different sector angles");
  if (!(p.aleph >= 2.0))
    throw DecayViolation("glue_alg: model perturbation must decay at order 2 or faster");
  if (!(p.ell > 0.0 && p.ell < 1.0)) throw InvalidConfig("glue_alg: neck exponent in (0,1)");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw InvalidConfig("glue_alg: delta in (0,1)");
  const double r_in = std::pow(p.delta, p.ell);
  if (!(2.0 * r_in < p.periods.chart_radius))
    throw DomainViolation("glue_alg: seam annulus leaves the period chart");
  return AlgGlueAssembly{p, SemiFlatChart(p.periods, p.delta), CutoffProfile(r_in, 2.0 * r_in)};
}

// sup over the annulus eps <= |y| / (delta R) <= 1 of the invariant distance
// between the holomorphic 2-form of the germ and its constant-period limit
inline double alg_complex_distortion(const PeriodModel& germ, double delta, double R = 2.0,
                                     double eps = 0.05, int n_r = 10, int n_th = 16) {
  if (!(delta > 0.0) || !(R > 0.0) || !(eps > 0.0 && eps < 1.0) || n_r < 2 || n_th < 2)
    throw InvalidConfig("alg_complex_distortion: bad annulus");
  cplx t = sector_tau(germ.fiber.type);
  if (t == cplx(0.0, 0.0)) t = cplx(0.0, 1.0);  // free modulus, same default as the germs
  const double s = std::sqrt(std::imag(t));
  const SemiFlatChart flat(make_constant_periods(1.0 / s, t / s), delta);
  const SemiFlatChart curved(germ, delta);
  double sup = 0.0;
  for (int i = 0; i <= n_r; ++i) {
    const double r = delta * R * (eps + (1.0 - eps) * i / n_r);
    for (int j = 0; j < n_th; ++j) {
      const double th = -0.95 * PI + 1.9 * PI * (j + 0.5) / n_th;
      const Vec4 x(0.4, 0.15, r * std::cos(th), r * std::sin(th));
      const Triple a = semiflat_forms(curved, x), b = semiflat_forms(flat, x);
      const Mat4 g = semiflat_metric(curved, x);
      const double d = std::hypot(form2_norm_g(a.w[1] - b.w[1], g),
                                  form2_norm_g(a.w[2] - b.w[2], g));
      sup = std::max(sup, d);
    }
  }
  return sup;
}

// ---- quotient cover with Eguchi-Hanson caps ---------------------------------

struct InustarParams {
  MonopoleSet cover_poles{{0.25, -0.25}};  // 2 nu points, symmetric under u -> -u
  double delta = 1e-3;
  double e_scale = 0.1;  // cap parameter; the resolution scale is delta * e_scale^2
  double eta0 = 0.5;     // ceiling: e_scale <= eta0 / sqrt(nu log(1/delta))
  double mu = 0.05;      // weight exponent of the cap error
  double quartic = 0.1;  // quartic model coefficient of the background potential
  HoloPoly h{};          // even twist only
  double scale = 1.0;
  Gauge gauge = Gauge::upper;
};

// local resolution chart at a fixed point: Kahler potential interpolating the
// rescaled Eguchi-Hanson potential into |z|^2/2 + quartic background, with the
// hermitian Hessian assembled analytically
struct CapChart {
  double a = 1.0;        // Eguchi-Hanson scale
  double quartic = 0.1;  // coefficient q of (q/4) Re(z1^2 zbar2^2)
  CutoffProfile chi;     // down() = 1 deep inside (pure cap), 0 past the seam

  Eigen::Matrix2cd background_hessian(const Eigen::Vector2cd& z) const {
    Eigen::Matrix2cd m = 0.5 * Eigen::Matrix2cd::Identity();
    m(0, 1) += 0.5 * quartic * z(0) * std::conj(z(1));
    m(1, 0) += 0.5 * quartic * std::conj(z(0)) * z(1);
    return m;
  }

  Eigen::Matrix2cd hessian(const Eigen::Vector2cd& z) const {
    const double r = std::sqrt(std::norm(z(0)) + std::norm(z(1)));
    if (r < 1e-14) throw DomainViolation("cap chart: hessian at the cone point");
    const double c = chi.down(r);
    if (c >= 1.0) return eh_hermitian_metric(z / a);
    const Eigen::Matrix2cd hb = background_hessian(z);
    if (c <= 0.0) return hb;

    const double cp = chi.d_down(r), cpp = chi.d2_down(r);
    const Eigen::Matrix2cd he = eh_hermitian_metric(z / a);
    // potential gap D = cap potential - background potential and its gradient
    const double quart = 0.25 * quartic * std::real(z(0) * z(0) * std::conj(z(1) * z(1)));
    const double dpot = sq(a) * eh_potential(r / a) - 0.5 * sq(r) - quart;
    Eigen::Vector2cd grad_d;
    const double ppr = a * eh_potential_prime(r / a);  // d/dr of the cap potential, times 2r/...
    grad_d(0) = ppr * std::conj(z(0)) / (2.0 * r) - 0.5 * std::conj(z(0)) -
                0.25 * quartic * z(0) * std::conj(z(1) * z(1));
    grad_d(1) = ppr * std::conj(z(1)) / (2.0 * r) - 0.5 * std::conj(z(1)) -
                0.25 * quartic * std::conj(z(0) * z(0)) * z(1);

    const Eigen::Vector2cd zb = z.conjugate();
    const Eigen::Matrix2cd outer = zb * z.transpose();  // zbar_i z_j
    Eigen::Matrix2cd hchi = (cpp / (4.0 * sq(r))) * outer +
                            cp * (Eigen::Matrix2cd::Identity() / (2.0 * r) -
                                  outer / (4.0 * r * sq(r)));
    const Eigen::Vector2cd gchi = (cp / (2.0 * r)) * zb;

    Eigen::Matrix2cd m = hb + c * (he - hb);
    m += gchi * grad_d.conjugate().transpose();       // (d_i chi)(dbar_j D)
    m += grad_d * gchi.conjugate().transpose();       // (d_i D)(dbar_j chi)
    m += dpot * hchi;
    return m;
  }

  Triple at(const Vec4& x) const {
    Triple t = flat_triple();
    t.w[0] = hermitian_to_kahler_form(hessian(to_cplx2(x)));
    return t;
  }

  Triple eh_reference(const Vec4& x) const {
    Triple t = flat_triple();
    t.w[0] = hermitian_to_kahler_form(eh_hermitian_metric(to_cplx2(x) / a));
    return t;
  }

  double weighted_deviation(const Vec4& x, double mu) const {
    const double r = x.norm();
    return std::pow(r, mu + 1.0) * q_deviation(at(x));
  }

  // sup of the weighted deviation over the seam annulus, sampled on a fixed
  // deterministic set of complex directions
  double weighted_sup(double mu, int n_r = 12, int n_dir = 16) const {
    if (n_r < 2 || n_dir < 1) throw InvalidConfig("weighted_sup: grid too small");
    double sup = 0.0;
    for (int d = 0; d < n_dir; ++d) {
      const double a1 = 2.39996322972865332 * d + 0.7;  // golden-angle sweep
      const double a2 = 1.61803398874989485 * d + 0.3;
      const double c = 0.3 + 0.4 * std::fmod(0.37 * d + 0.21, 1.0);
      Eigen::Vector2cd dir;
      dir(0) = std::sqrt(c) * std::exp(cplx(0.0, a1));
      dir(1) = std::sqrt(1.0 - c) * std::exp(cplx(0.0, a2));
      for (int i = 0; i <= n_r; ++i) {
        const double r = chi.inner * std::pow(chi.outer / chi.inner, double(i) / n_r);
        const Eigen::Vector2cd z = r * dir;
        const Vec4 x(z(0).real(), z(0).imag(), z(1).real(), z(1).imag());
        sup = std::max(sup, weighted_deviation(x, mu));
      }
    }
    return sup;
  }
};

struct InustarAssembly {
  InustarParams p;
  GHChart cover;
  std::array<Vec4, 4> anchors;  // fixed points of the involution on the cover
  CapChart cap;

  Triple bulk(const Vec4& x) const { return gh_triple(cover).at(x); }

  static Vec4 iota(const Vec4& x) { return Vec4(-x[0], -x[1], -x[2], -x[3]); }

  // componentwise defect of the triple under the involution, relative to its size
  double iota_defect(const Vec4& x) const {
    const Triple a = bulk(x), b = bulk(iota(x));
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 3; ++i) {
      num = std::max(num, (a.w[i] - b.w[i]).cwiseAbs().maxCoeff());
      den = std::max(den, a.w[i].cwiseAbs().maxCoeff());
    }
    return num / std::max(den, 1e-300);
  }
};

inline InustarAssembly glue_inustar(const InustarParams& p) {
  const int n = static_cast<int>(p.cover_poles.poles.size());
  if (n < 2 || n % 2 != 0)
    throw FixedPointMismatch("glue_inustar: the cover needs an even set of poles");
  if (!p.cover_poles.z2_symmetric(1e-12))
    throw FixedPointMismatch("glue_inustar: poles are not symmetric under negation");
  for (double tp : p.cover_poles.poles) {
    if (std::abs(wrap_near(tp)) < 1e-9 || std::abs(wrap_near(tp - 0.5)) < 1e-9)
      throw FixedPointMismatch("glue_inustar: a pole sits on a fixed circle");
  }
  const int nu = n / 2;
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw InvalidConfig("glue_inustar: delta in (0,1)");
  const double ceiling = p.eta0 / std::sqrt(nu * std::log(1.0 / p.delta));
  if (!(p.e_scale > 0.0) || p.e_scale > ceiling)
    throw ScaleViolation("glue_inustar: cap parameter exceeds the collapse ceiling");
  for (std::size_t k = 1; k < p.h.coeff.size(); k += 2)
    if (p.h.coeff[k] != cplx(0.0, 0.0))
      throw InvalidConfig("glue_inustar: twist polynomial must be even");
  if (!(p.mu > 0.0 && p.mu < 1.0)) throw InvalidConfig("glue_inustar: weight exponent in (0,1)");

  InustarAssembly out{
      p,
      make_multi_ov_chart(p.cover_poles, p.delta, p.h, p.gauge, p.scale),
      {Vec4(0, 0, 0, 0), Vec4(0, 0, 0.5, 0), Vec4(0, 0, 0, PI), Vec4(0, 0, 0.5, PI)},
      CapChart{p.delta * sq(p.e_scale), p.quartic,
               CutoffProfile(p.e_scale * p.delta, 2.0 * p.e_scale * p.delta)}};
  return out;
}

}  // namespace hk
