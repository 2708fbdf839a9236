#pragma once

#include <functional>

#include "hk/common.hpp"
#include "hk/diffgeo_numerics.hpp"
#include "hk/kodaira.hpp"
#include "hk/lattice_greens.hpp"
#include "hk/triple_algebra.hpp"

// Semi-flat hyperkaehler data over a punctured base chart. Coordinates are
// (x1, x2, y1, y2) on axes 0..3: the x pair runs over the unit torus fiber,
// y = y1 + i y2 is the base coordinate. A period model supplies holomorphic
// tau1, tau2 with positive density W = Im(conj(tau1) tau2); the coframe is
//   e1 = sqrt(W) dy1, e2 = sqrt(W) dy2,
//   e3 + i e4 = (delta / sqrt(W)) (tau1 dx1 + tau2 dx2).

namespace hk {

// multivalued pieces live on a slit chart (the negative real axis removed);
// the branch index shifts log by 2 pi i per sheet
struct PeriodModel {
  std::function<cplx(cplx)> tau1, tau2;
  std::function<cplx(cplx)> dtau1, dtau2;  // holomorphic y-derivatives
  KodairaFiber fiber{};
  int branch = 0;
  double chart_radius = 1.0;
  bool punctured = true;  // y = 0 is a singular fiber
};

inline void require_in_chart(const PeriodModel& pm, cplx y) {
  const double r = std::abs(y);
  if (pm.punctured && r == 0.0) throw SingularFiberHit("period chart: y = 0");
  if (r >= pm.chart_radius) throw DomainViolation("period chart: |y| outside chart");
}

inline double mclean_w(const PeriodModel& pm, cplx y) {
  require_in_chart(pm, y);
  const double w = std::imag(std::conj(pm.tau1(y)) * pm.tau2(y));
  if (!(w > 0.0)) throw DegenerateTriple("period chart: density Im(conj(tau1) tau2) <= 0");
  return w;
}

// holomorphic derivative of W; the antiholomorphic one is its conjugate
inline cplx mclean_dw(const PeriodModel& pm, cplx y) {
  require_in_chart(pm, y);
  const cplx t1 = pm.tau1(y), t2 = pm.tau2(y);
  return (std::conj(t1) * pm.dtau2(y) - pm.dtau1(y) * std::conj(t2)) / cplx(0.0, 2.0);
}

// base metric of the special Lagrangian fibration: W times the identity
inline Mat2 mclean_metric(const PeriodModel& pm, cplx y) {
  return mclean_w(pm, y) * Mat2::Identity();
}

inline PeriodModel make_constant_periods(cplx t1, cplx t2) {
  if (!(std::imag(std::conj(t1) * t2) > 0.0))
    throw InvalidPair("constant periods: Im(conj(tau1) tau2) must be positive");
  PeriodModel pm;
  pm.tau1 = [t1](cplx) -> cplx { return t1; };
  pm.tau2 = [t2](cplx) -> cplx { return t2; };
  pm.dtau1 = [](cplx) -> cplx { return 0.0; };
  pm.dtau2 = [](cplx) -> cplx { return 0.0; };
  pm.fiber = {KodairaType::I0, 0};
  pm.chart_radius = 1e9;
  pm.punctured = false;
  return pm;
}

// tau1 = 1, tau2 = (nu / 2 pi i) log y + h(y); W = (nu/2pi) log(1/|y|) + Im h
inline PeriodModel make_inu_periods(int nu, HoloPoly h = {}, int branch = 0) {
  if (nu < 1) throw InvalidConfig("make_inu_periods: nu must be >= 1");
  PeriodModel pm;
  const cplx c(0.0, -nu / TWO_PI);  // nu / (2 pi i)
  const cplx sheet(0.0, TWO_PI * branch);
  pm.tau1 = [](cplx) -> cplx { return 1.0; };
  pm.tau2 = [c, sheet, h](cplx y) -> cplx { return c * (std::log(y) + sheet) + h.eval(y); };
  pm.dtau1 = [](cplx) -> cplx { return 0.0; };
  pm.dtau2 = [c, h](cplx y) -> cplx { return c / y + h.deriv(y); };
  pm.fiber = {KodairaType::I, nu};
  pm.branch = branch;
  return pm;
}

// normal form germ of a type IV fiber in the sector coordinate u, with the
// analytic freedom reduced to the exponent h = 2 mod 3:
//   tau1 = (1 - u^{h/2}) / s, tau2 = (t - conj(t) u^{h/2}) / s,
// t = exp(2 pi i / 3), s = sqrt(Im t). Density: W = 1 - |u|^h exactly.
inline PeriodModel make_iv_germ_periods(int h_exp = 2) {
  if (h_exp < 2 || h_exp % 3 != 2)
    throw InvalidConfig("make_iv_germ_periods: exponent must be 2 mod 3 and >= 2");
  const cplx t = sector_tau(KodairaType::IV);
  const double s = std::sqrt(std::imag(t));
  const double p = 0.5 * h_exp;
  PeriodModel pm;
  pm.tau1 = [s, p](cplx u) -> cplx { return (1.0 - std::pow(u, p)) / s; };
  pm.tau2 = [s, p, t](cplx u) -> cplx { return (t - std::conj(t) * std::pow(u, p)) / s; };
  pm.dtau1 = [s, p](cplx u) -> cplx { return -p * std::pow(u, p - 1.0) / s; };
  pm.dtau2 = [s, p, t](cplx u) -> cplx { return -std::conj(t) * p * std::pow(u, p - 1.0) / s; };
  pm.fiber = {KodairaType::IV, 0};
  return pm;
}

// synthetic germ of a finite monodromy type whose volume density deviates
// from 1 at exactly the tabulated distortion order:
//   tau1 = 1/s, tau2 = (t + (i/2) u^lambda) / s;  W - 1 = Re(u^lambda)/(2 Im t)
inline PeriodModel make_sector_germ_periods(KodairaType type, cplx tau0 = cplx(0, 0)) {
  const double lam = distortion_order(type).value();
  cplx t = sector_tau(type);
  if (t == cplx(0, 0)) t = (tau0 == cplx(0, 0)) ? cplx(0, 1) : tau0;  // free modulus
  if (!(std::imag(t) > 0)) throw InvalidPair("make_sector_germ_periods: Im tau <= 0");
  const double s = std::sqrt(std::imag(t));
  PeriodModel pm;
  pm.tau1 = [s](cplx) -> cplx { return 1.0 / s; };
  pm.tau2 = [s, t, lam](cplx u) -> cplx { return (t + cplx(0, 0.5) * std::pow(u, lam)) / s; };
  pm.dtau1 = [](cplx) -> cplx { return 0.0; };
  pm.dtau2 = [s, lam](cplx u) -> cplx {
    return cplx(0, 0.5) * lam * std::pow(u, lam - 1.0) / s;
  };
  pm.fiber = {type, 0};
  return pm;
}

// lattice basis change (gamma1, gamma2) -> (gamma2, -gamma1)
inline PeriodModel swap_basis(const PeriodModel& pm) {
  PeriodModel out = pm;
  out.tau1 = [f = pm.tau2](cplx y) -> cplx { return f(y); };
  out.tau2 = [f = pm.tau1](cplx y) -> cplx { return -f(y); };
  out.dtau1 = [f = pm.dtau2](cplx y) -> cplx { return f(y); };
  out.dtau2 = [f = pm.dtau1](cplx y) -> cplx { return -f(y); };
  return out;
}

struct SemiFlatChart {
  PeriodModel periods;
  double delta = 1.0;  // fiber scale; the torus fiber has area delta^2

  SemiFlatChart(PeriodModel pm, double d) : periods(std::move(pm)), delta(d) {
    if (!(d > 0)) throw InvalidConfig("SemiFlatChart: delta must be positive");
  }
};

inline cplx fiber_y(const Vec4& x) { return cplx(x[2], x[3]); }

// rows are the coframe covectors e1..e4 in coordinate components
inline Mat4 semiflat_coframe(const SemiFlatChart& ch, const Vec4& x) {
  const cplx y = fiber_y(x);
  const double w = mclean_w(ch.periods, y);
  const double sw = std::sqrt(w);
  const cplx t1 = ch.periods.tau1(y), t2 = ch.periods.tau2(y);
  const double c = ch.delta / sw;
  Mat4 e = Mat4::Zero();
  e(0, 2) = sw;
  e(1, 3) = sw;
  e(2, 0) = c * std::real(t1);
  e(2, 1) = c * std::real(t2);
  e(3, 0) = c * std::imag(t1);
  e(3, 1) = c * std::imag(t2);
  return e;
}

// omega   = delta^2 dx12 + W dy12
// Re/Im of Omega = -delta (tau1 dx1 + tau2 dx2) ^ dy
inline Triple semiflat_forms(const SemiFlatChart& ch, const Vec4& x) {
  const cplx y = fiber_y(x);
  const double w = mclean_w(ch.periods, y);
  const cplx t1 = ch.periods.tau1(y), t2 = ch.periods.tau2(y);
  const double d = ch.delta;
  Triple t;
  t.w[0] = form2_basis(0, 1, d * d) + form2_basis(2, 3, w);
  t.w[1] = form2_basis(0, 2, -d * std::real(t1)) + form2_basis(0, 3, d * std::imag(t1)) +
           form2_basis(1, 2, -d * std::real(t2)) + form2_basis(1, 3, d * std::imag(t2));
  t.w[2] = form2_basis(0, 2, -d * std::imag(t1)) + form2_basis(0, 3, -d * std::real(t1)) +
           form2_basis(1, 2, -d * std::imag(t2)) + form2_basis(1, 3, -d * std::real(t2));
  return t;
}

inline Mat4 semiflat_metric(const SemiFlatChart& ch, const Vec4& x) {
  const cplx y = fiber_y(x);
  const double w = mclean_w(ch.periods, y);
  const cplx t1 = ch.periods.tau1(y), t2 = ch.periods.tau2(y);
  const double c = ch.delta * ch.delta / w;
  Mat4 g = Mat4::Zero();
  g(0, 0) = c * std::norm(t1);
  g(1, 1) = c * std::norm(t2);
  g(0, 1) = g(1, 0) = c * std::real(std::conj(t1) * t2);
  g(2, 2) = g(3, 3) = w;
  return g;
}

// ---- the mixed-type operator on fiber-invariant 1-forms --------------------

// eta = f dy + conj(f) dybar + Re(F e^(x)) with coefficients depending on y
// only. Only the antiholomorphic derivative of f and the holomorphic
// derivative of F enter the self-dual and codifferential parts.
struct VerticalOneForm {
  std::function<cplx(cplx)> f;
  std::function<cplx(cplx)> df_dybar;
  std::function<cplx(cplx)> F;
  std::function<cplx(cplx)> dF_dy;
};

inline OneFormField realize_one_form(const SemiFlatChart& ch, const VerticalOneForm& eta) {
  return [ch, eta](const Vec4& x) -> Vec4 {
    const cplx y = fiber_y(x);
    const double sw = std::sqrt(mclean_w(ch.periods, y));
    const cplx fv = eta.f(y), Fv = eta.F(y);
    const cplx t1 = ch.periods.tau1(y), t2 = ch.periods.tau2(y);
    Vec4 a = Vec4::Zero();
    a[2] = 2.0 * std::real(fv);
    a[3] = -2.0 * std::imag(fv);
    a[0] = (ch.delta / sw) * std::real(Fv * t1);
    a[1] = (ch.delta / sw) * std::real(Fv * t2);
    return a;
  };
}

struct HodgeSplit {
  Form2 dplus = Form2::Zero();  // self-dual part of d eta, coordinate components
  double dstar = 0.0;           // codifferential
  cplx c_vertical{0, 0};        // coefficient of (dy ^ dybar)^+
  cplx c_mixed{0, 0};           // coefficient inside Re( ... dy ^ e^(x))
};

// closed-form evaluation:
//   d+ eta = (conj(g) - g) (dy^dybar)^+ + Re( [dW/(2W) F + F'] dy^e^(x) ),
//   d* eta = -(2/W)(g + conj(g)),            g = df/dybar
inline HodgeSplit dplus_dstar_semiflat(const SemiFlatChart& ch, const VerticalOneForm& eta,
                                       const Vec4& x) {
  const cplx y = fiber_y(x);
  const double w = mclean_w(ch.periods, y);
  const cplx dw = mclean_dw(ch.periods, y);
  const cplx t1 = ch.periods.tau1(y), t2 = ch.periods.tau2(y);
  const cplx fb = eta.df_dybar(y);

  HodgeSplit out;
  out.c_vertical = std::conj(fb) - fb;
  out.c_mixed = dw / (2.0 * w) * eta.F(y) + eta.dF_dy(y);
  out.dstar = -(2.0 / w) * (2.0 * std::real(fb));

  // dy ^ dybar = -2i dy12; project onto the self-dual part with the metric
  const Mat4 g = semiflat_metric(ch, x);
  const Form2 dy12_plus = self_dual_part(form2_basis(2, 3), g);
  // dy ^ e^(x): complex covectors u = dy, v = (delta/sqrt W)(t1 dx1 + t2 dx2)
  Eigen::Vector4cd u = Eigen::Vector4cd::Zero(), v = Eigen::Vector4cd::Zero();
  u[2] = 1.0;
  u[3] = cplx(0, 1);
  const cplx c = ch.delta / std::sqrt(w);
  v[0] = c * t1;
  v[1] = c * t2;
  const Eigen::Matrix4cd mix = u * v.transpose() - v * u.transpose();
  const Eigen::Matrix4cd m =
      out.c_vertical * cplx(0, -2.0) * dy12_plus.cast<cplx>() + out.c_mixed * mix;
  out.dplus = m.real();
  return out;
}

}  // namespace hk
