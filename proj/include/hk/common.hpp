#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hk {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846264338327950288;
inline constexpr double TWO_PI = 2.0 * PI;

// ---- error taxonomy ------------------------------------------------------

struct PoleHit : std::domain_error {
  using std::domain_error::domain_error;
};
struct GaugeStringHit : std::domain_error {
  using std::domain_error::domain_error;
};
struct DomainViolation : std::domain_error {
  using std::domain_error::domain_error;
};
struct ToleranceUnreachable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPositivePotential : std::domain_error {
  using std::domain_error::domain_error;
};
struct DegenerateTriple : std::domain_error {
  using std::domain_error::domain_error;
};
struct InvalidPair : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SingularFiberHit : std::domain_error {
  using std::domain_error::domain_error;
};
struct PotentialMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RegionUnresolved : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DefiniteViolation : std::domain_error {
  using std::domain_error::domain_error;
};
struct NearDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyRegion : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct StencilOverrun : std::domain_error {
  using std::domain_error::domain_error;
};
struct NonPositiveRadius : std::domain_error {
  using std::domain_error::domain_error;
};
struct BoundaryTwistViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IllConditioned : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientRange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DecayViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SectorMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ScaleViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FixedPointMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- small scalar helpers ------------------------------------------------

// wrap into [0,1)
inline double wrap01(double t) {
  double w = t - std::floor(t);
  return (w >= 1.0) ? 0.0 : w;
}

// representative of t (mod 1) nearest to anchor
inline double wrap_near(double t, double anchor = 0.0) {
  return t - std::round(t - anchor);
}

// quintic transition: 0 for s<=0, 1 for s>=1, C^2 across both ends
inline double smoothstep5(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

// cutoff equal to 0 for x<=a, 1 for x>=b
inline double cutoff_up(double x, double a, double b) {
  return smoothstep5((x - a) / (b - a));
}

inline double sq(double x) { return x * x; }

// ---- exact rationals (indicial ladders) ----------------------------------

struct Rational {
  std::int64_t num = 0, den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) { normalize(); }

  void normalize() {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  double value() const { return double(num) / double(den); }

  friend Rational operator+(Rational a, Rational b) {
    return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
  }
  friend Rational operator-(Rational a, Rational b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(Rational a, Rational b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend Rational operator/(Rational a, Rational b) {
    if (b.num == 0) throw std::invalid_argument("Rational: divide by zero");
    return Rational(a.num * b.den, a.den * b.num);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num * b.den < b.num * a.den;
  }
  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

}  // namespace hk
