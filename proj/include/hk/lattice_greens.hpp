#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "hk/bessel.hpp"
#include "hk/common.hpp"

// Green's function of -Delta on R^2 x S^1 (circle circumference 1) with
// monopole sources of strength 2*pi at points of {0}^2 x S^1, normalized so
// the fiber mean of G - nu*log(1/r) vanishes. Two independent evaluators:
// a Fourier-Bessel series in (rho, u3) and a regularized image-charge sum.

namespace hk {

inline constexpr double kGreensRepSwitchRho = 0.25;

// additive constant of the regularized image sum, pinned by the fiber-mean
// normalization (numerically equal to EulerGamma - log 2)
inline constexpr double kImageRepConstant = -0.11593151565841244881072;

struct MonopoleSet {
  std::vector<double> poles;  // S^1 positions in [0,1), pairwise distinct

  MonopoleSet() = default;
  explicit MonopoleSet(std::vector<double> ts) : poles(std::move(ts)) {
    for (double& t : poles) t = wrap01(t);
    for (std::size_t i = 0; i < poles.size(); ++i)
      for (std::size_t j = i + 1; j < poles.size(); ++j)
        if (std::abs(wrap_near(poles[i] - poles[j])) < 1e-12)
          throw InvalidConfig("MonopoleSet: poles must be pairwise distinct");
  }

  int nu() const { return int(poles.size()); }

  // half the minimal pairwise S^1 distance; +inf for a single pole
  double iota0() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i)
      for (std::size_t j = i + 1; j < poles.size(); ++j)
        m = std::min(m, std::abs(wrap_near(poles[i] - poles[j])));
    return 0.5 * m;
  }

  // invariance under t -> -t (mod 1)
  bool z2_symmetric(double tol = 1e-12) const {
    for (double t : poles) {
      bool found = false;
      for (double s : poles)
        if (std::abs(wrap_near(t + s)) < tol) found = true;
      if (!found) return false;
    }
    return true;
  }

  // S^1-distance from u3 to the nearest pole, and squared Q^3 distance helpers
  double dist_q3(const Vec3& u, std::size_t i) const {
    double dt = wrap_near(u[2] - poles[i]);
    return std::sqrt(u[0] * u[0] + u[1] * u[1] + dt * dt);
  }
  double min_dist_q3(const Vec3& u) const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i) m = std::min(m, dist_q3(u, i));
    return m;
  }
};

enum class GreenRep { image_sum, fourier_bessel };

struct GreensEval {
  double value = 0.0;
  Vec3 gradient = Vec3::Zero();  // d/du1, d/du2, d/du3
  GreenRep representation_used = GreenRep::fourier_bessel;
  double truncation_error_bound = 0.0;
};

namespace kernels {

// value / radial derivative / u3 derivative of a single-pole kernel, plus the
// reported truncation bound
struct Kernel {
  double v = 0, d_rho = 0, d_t = 0, tail = 0;
};

// ---- Fourier-Bessel representation (good away from the axis) -------------

// G1 = log(1/rho) + 2 sum_{k>=1} cos(2 pi k t) K0(2 pi k rho)
inline Kernel green_fb(double rho, double t, double tol, int max_terms = 200000) {
  if (rho <= 0) throw DomainViolation("green_fb: rho must be positive");
  Kernel out;
  out.v = -std::log(rho);
  out.d_rho = -1.0 / rho;
  const double q = std::exp(-TWO_PI * rho);  // termwise decay ratio
  const double geo = 1.0 / (1.0 - q);
  for (int k = 1; k <= max_terms; ++k) {
    const double x = TWO_PI * k * rho;
    const double k0 = bessel_k0(x), k1 = bessel_k1(x);
    const double c = std::cos(TWO_PI * k * t), s = std::sin(TWO_PI * k * t);
    out.v += 2.0 * c * k0;
    out.d_rho += -4.0 * PI * k * c * k1;
    out.d_t += -4.0 * PI * k * s * k0;
    // envelope sqrt(pi/2x) e^{-x} bounds K0 and (with margin) K1
    const double xn = TWO_PI * (k + 1) * rho;
    const double env = std::sqrt(PI / (2.0 * xn)) * std::exp(-xn) * (1.0 + 1.0 / xn);
    const double bound = (2.0 + 4.0 * PI * (k + 1) * (1.0 + geo)) * env * geo;
    if (bound < tol) {
      out.tail = bound;
      return out;
    }
  }
  throw ToleranceUnreachable("green_fb: series budget exhausted");
}

// connection coefficient of the same pole in the upper Wu-Yang gauge:
// a = t + 2 sum_{k>=1} sin(2 pi k t) * rho K1(2 pi k rho); the linear term
// carries the +1 monodromy per S^1 period
inline double conn_fb(double rho, double t, double tol, int max_terms = 200000) {
  if (rho <= 0) throw DomainViolation("conn_fb: rho must be positive");
  double a = t;
  for (int k = 1; k <= max_terms; ++k) {
    const double x = TWO_PI * k * rho;
    a += 2.0 * std::sin(TWO_PI * k * t) * rho * bessel_k1(x);
    const double xn = TWO_PI * (k + 1) * rho;
    const double env = 2.0 * rho * std::sqrt(PI / (2.0 * xn)) * std::exp(-xn) * (1.0 + 1.0 / xn);
    const double q = std::exp(-TWO_PI * rho);
    if (env / (1.0 - q) < tol) return a;
  }
  throw ToleranceUnreachable("conn_fb: series budget exhausted");
}

// ---- regularized image sum (good near the axis) ---------------------------

namespace detail {

// sum_{n>N} n^{-s} by Euler-Maclaurin, full double accuracy for N >= 40
inline double zeta_tail(int s, int N) {
  const double a = N + 1.0;
  const double as = std::pow(a, -double(s));
  double out = a * as / (s - 1.0) + 0.5 * as + s / 12.0 * as / a;
  out -= double(s) * (s + 1.0) * (s + 2.0) / 720.0 * as / (a * a * a);
  out += double(s) * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) / 30240.0 * as /
         (a * a * a * a * a);
  return out;
}

// Legendre P_0..P_7 at x
inline void legendre(double x, double* P) {
  P[0] = 1.0;
  P[1] = x;
  for (int k = 1; k < 7; ++k) P[k + 1] = ((2 * k + 1) * x * P[k] - k * P[k - 1]) / (k + 1);
}

// Gegenbauer C^{3/2}_0..C^{3/2}_6 at x
inline void gegenbauer32(double x, double* C) {
  C[0] = 1.0;
  C[1] = 3.0 * x;
  for (int n = 2; n <= 6; ++n)
    C[n] = (2.0 * x * (n + 0.5) * C[n - 1] - (n + 1.0) * C[n - 2]) / n;
}

}  // namespace detail

// G1 = sum_n [ 1/(2 r_n) - (n != 0)/(2|n|) ] + const, r_n^2 = rho^2 + (t-n)^2.
// Tail beyond N images from the Legendre expansion of the paired terms:
// pair_n = sum_{even k >= 2} P_k(t/sqrt(c)) c^{k/2} / n^{k+1}, c = t^2 + rho^2.
inline Kernel green_image(double rho, double t, double /*tol*/, int N = 220) {
  const double r0sq = rho * rho + t * t;
  if (r0sq < 1e-24) throw PoleHit("green_image: evaluation at a pole");
  const double r0 = std::sqrt(r0sq);
  Kernel out;
  out.v = 0.5 / r0;
  out.d_rho = -0.5 * rho / (r0sq * r0);
  out.d_t = -0.5 * t / (r0sq * r0);
  const double c = r0sq, sc = r0;
  N = std::max(N, int(8.0 * sc) + 40);
  for (int n = 1; n <= N; ++n) {
    const double rp = std::sqrt(rho * rho + sq(t - n)), rm = std::sqrt(rho * rho + sq(t + n));
    out.v += 0.5 / rp + 0.5 / rm - 1.0 / n;
    out.d_rho += -0.5 * rho * (1.0 / (rp * rp * rp) + 1.0 / (rm * rm * rm));
    out.d_t += -0.5 * ((t - n) / (rp * rp * rp) + (t + n) / (rm * rm * rm));
  }
  const double x = (sc > 0) ? t / sc : 0.0;
  double P[8], C[7];
  detail::legendre(x, P);
  detail::gegenbauer32(x, C);
  const double z3 = detail::zeta_tail(3, N), z5 = detail::zeta_tail(5, N),
               z7 = detail::zeta_tail(7, N);
  out.v += P[2] * c * z3 + P[4] * c * c * z5 + P[6] * c * c * c * z7;
  // d_rho pairs: -rho * sum_{even k} C_k c^{k/2} / n^{k+3}
  out.d_rho += -rho * (z3 + C[2] * c * z5 + C[4] * c * c * z7);
  // d_t pairs: sum_{odd k} C_k c^{k/2}/n^{k+2} - t sum_{even k} C_k c^{k/2}/n^{k+3}
  out.d_t += (C[1] * sc * z3 + C[3] * sc * c * z5 + C[5] * sc * c * c * z7) -
             t * (z3 + C[2] * c * z5 + C[4] * c * c * z7);
  out.v += kImageRepConstant;
  // first omitted expansion order, with growth margin for the Gegenbauer pieces
  out.tail = (2.0 + 60.0 * c * c * c * c * (1.0 + std::sqrt(c))) * detail::zeta_tail(9, N);
  return out;
}

// image-sum connection in the same gauge/branch as conn_fb; the matching
// constant is exactly -1/2 per image pair, folded in below
inline double conn_image(double rho, double t, double /*tol*/, int N = 220) {
  // reduce to |t| <= 1/2 with the exact +1 monodromy per period
  const double shift = std::round(t);
  t -= shift;
  const double r0sq = rho * rho + t * t;
  if (r0sq < 1e-24) throw PoleHit("conn_image: evaluation at a pole");
  double a = 0.5 * (1.0 + t / std::sqrt(r0sq)) - 0.5;
  const double c = r0sq, sc = std::sqrt(c);
  N = std::max(N, 40);
  for (int n = 1; n <= N; ++n) {
    const double rp = std::sqrt(rho * rho + sq(t - n)), rm = std::sqrt(rho * rho + sq(t + n));
    a += 0.5 * ((t - n) / rp + (t + n) / rm);
  }
  const double x = (sc > 0) ? t / sc : 0.0;
  double P[8];
  detail::legendre(x, P);
  const double z3 = detail::zeta_tail(3, N), z5 = detail::zeta_tail(5, N),
               z7 = detail::zeta_tail(7, N);
  a += (t * P[2] * c - P[3] * c * sc) * z3 + (t * P[4] * c * c - P[5] * c * c * sc) * z5 +
       (t * P[6] * c * c * c - P[7] * c * c * c * sc) * z7;
  return a + shift;
}

}  // namespace kernels

// multi-pole evaluation; representation chosen by rho unless forced
inline GreensEval eval_green(const Vec3& u, const MonopoleSet& P, double tol,
                             std::optional<GreenRep> force = std::nullopt) {
  if (tol <= 0) throw InvalidConfig("eval_green: tol must be positive");
  if (P.poles.empty()) throw InvalidConfig("eval_green: empty pole set");
  const double rho = std::hypot(u[0], u[1]);
  for (std::size_t i = 0; i < P.poles.size(); ++i)
    if (P.dist_q3(u, i) < 1e-12) throw PoleHit("eval_green: point coincides with a pole");
  GreenRep rep = force.value_or(rho >= kGreensRepSwitchRho ? GreenRep::fourier_bessel
                                                           : GreenRep::image_sum);
  if (rep == GreenRep::fourier_bessel && rho <= 0)
    throw DomainViolation("eval_green: Fourier-Bessel representation needs rho > 0");
  GreensEval out;
  out.representation_used = rep;
  const double per_pole_tol = tol / double(P.nu());
  double d_rho = 0.0, d_t = 0.0;
  for (double tp : P.poles) {
    const double t = wrap_near(u[2] - tp);
    kernels::Kernel k = (rep == GreenRep::fourier_bessel)
                            ? kernels::green_fb(rho, t, per_pole_tol)
                            : kernels::green_image(rho, t, per_pole_tol);
    out.value += k.v;
    d_t += k.d_t;
    d_rho += k.d_rho;
    out.truncation_error_bound += k.tail;
  }
  if (rho > 0) {
    out.gradient[0] = d_rho * u[0] / rho;
    out.gradient[1] = d_rho * u[1] / rho;
  }
  out.gradient[2] = d_t;
  if (out.truncation_error_bound > tol)
    throw ToleranceUnreachable("eval_green: could not certify requested tolerance");
  return out;
}

// holomorphic polynomial handle for the h-correction
struct HoloPoly {
  std::vector<cplx> coeff;  // h(z) = sum coeff[k] z^k

  cplx eval(cplx z) const {
    cplx acc = 0;
    for (std::size_t k = coeff.size(); k-- > 0;) acc = acc * z + coeff[k];
    return acc;
  }
  cplx deriv(cplx z) const {
    cplx acc = 0;
    for (std::size_t k = coeff.size(); k-- > 1;) acc = acc * z + double(k) * coeff[k];
    return acc;
  }
  bool zero() const {
    for (auto& c : coeff)
      if (c != cplx(0)) return false;
    return true;
  }
};

// V_T = T + G_P + 2 pi Im h(delta (u1 + i u2)) on the domain |delta w| <= 2 delta0
inline double eval_potential_V(const Vec3& u, const MonopoleSet& P, double T,
                               const HoloPoly& h, double delta, double delta0 = 0.25,
                               double tol = 1e-10) {
  if (delta <= 0 || delta0 <= 0) throw InvalidConfig("eval_potential_V: bad scales");
  if (std::abs(T + P.nu() * std::log(delta)) > 1e-6)
    throw InvalidConfig("eval_potential_V: T and delta must satisfy T = -nu log delta");
  const cplx w(u[0], u[1]);
  if (std::abs(delta * w) > 2.0 * delta0 + 1e-12)
    throw DomainViolation("eval_potential_V: point outside the chart domain");
  const double G = eval_green(u, P, tol).value;
  return T + G + TWO_PI * std::imag(h.eval(delta * w));
}

}  // namespace hk
