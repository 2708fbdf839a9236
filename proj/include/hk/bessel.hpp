#pragma once

#include <cmath>

#include "hk/common.hpp"

namespace hk {

// Modified Bessel K0/K1 plus exponentially scaled variants exp(x)*K_n(x).
// The scaled forms stay representable for arguments far beyond the underflow
// range of K_n itself; they drive every large-radius tail evaluation.

namespace detail {

// asymptotic series for exp(x) K_nu(x), valid to full double precision
// once x is large (used for x > 500 where cyl_bessel_k underflows anyway)
inline double scaled_k_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    double f = mu - sq(2.0 * k - 1.0);
    term *= f / (double(k) * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return std::sqrt(PI / (2.0 * x)) * sum;
}

}  // namespace detail

inline double bessel_k0(double x) {
  if (x <= 0) throw DomainViolation("bessel_k0: nonpositive argument");
  if (x > 680.0) return 0.0;  // below 1e-300
  return std::cyl_bessel_k(0.0, x);
}

inline double bessel_k1(double x) {
  if (x <= 0) throw DomainViolation("bessel_k1: nonpositive argument");
  if (x > 680.0) return 0.0;
  return std::cyl_bessel_k(1.0, x);
}

// exp(x) K0(x)
inline double bessel_k0_scaled(double x) {
  if (x <= 0) throw DomainViolation("bessel_k0_scaled: nonpositive argument");
  if (x > 500.0) return detail::scaled_k_asymptotic(0, x);
  return std::exp(x) * std::cyl_bessel_k(0.0, x);
}

// exp(x) K1(x)
inline double bessel_k1_scaled(double x) {
  if (x <= 0) throw DomainViolation("bessel_k1_scaled: nonpositive argument");
  if (x > 500.0) return detail::scaled_k_asymptotic(1, x);
  return std::exp(x) * std::cyl_bessel_k(1.0, x);
}

}  // namespace hk
