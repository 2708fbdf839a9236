#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "hk/common.hpp"
#include "hk/kodaira.hpp"
#include "hk/lattice_greens.hpp"

// Pointwise scale weight over a collapsing fibration and the classification of
// the rescaled limit seen at a point. The weight is a single continuous
// function assembled from closed-form branches per region; every case seam is
// bridged with the quintic cutoff in log radius so the assembled function
// stays positive and close to 1-Lipschitz in the collapsed metric.

namespace hk {

enum class FiberRegion { generic, alg, inu, inustar };

enum class BubbleLabel {
  taub_nut,
  eguchi_hanson,
  alg_space,
  flat_cone,
  r3,
  r2_s1,
  r2,
  r4_mod_z2,
  r3_s1_mod_z2,
  r3_mod_z2,
  r2_s1_mod_z2,
  r2_mod_z2,
  mclean_base
};

// how the probe point is carried along as the collapse parameter shrinks:
// chart_comoving holds the chart ratios fixed, base_frozen holds the physical
// base position fixed (which always escalates to the largest-scale limit)
enum class SequenceDirection { chart_comoving, base_frozen };

inline const char* to_string(FiberRegion r) {
  switch (r) {
    case FiberRegion::generic: return "generic";
    case FiberRegion::alg: return "alg";
    case FiberRegion::inu: return "inu";
    case FiberRegion::inustar: return "inustar";
  }
  return "?";
}

inline const char* to_string(BubbleLabel b) {
  switch (b) {
    case BubbleLabel::taub_nut: return "TaubNUT";
    case BubbleLabel::eguchi_hanson: return "EguchiHanson";
    case BubbleLabel::alg_space: return "ALG";
    case BubbleLabel::flat_cone: return "Cone";
    case BubbleLabel::r3: return "R3";
    case BubbleLabel::r2_s1: return "R2xS1";
    case BubbleLabel::r2: return "R2";
    case BubbleLabel::r4_mod_z2: return "R4/Z2";
    case BubbleLabel::r3_s1_mod_z2: return "R3xS1/Z2";
    case BubbleLabel::r3_mod_z2: return "R3/Z2";
    case BubbleLabel::r2_s1_mod_z2: return "R2xS1/Z2";
    case BubbleLabel::r2_mod_z2: return "R2/Z2";
    case BubbleLabel::mclean_base: return "McLeanP1";
  }
  return "?";
}

// a probe location tagged with the chart it lives in. Infinite monodromy
// charts use base coordinates u on R^2 x S^1 plus the fiber angle; the other
// regions carry the distance to their reference locus directly.
struct RegionPoint {
  FiberRegion region = FiberRegion::generic;
  double d_fiber = 1.0;   // generic: distance to the singular fiber; alg: to the model anchor
  Vec3 u = Vec3::Zero();  // inu / inustar: chart base coordinates (u1, u2, u3 mod 1)
  double theta = 0.0;     // inustar: fiber circle angle, fixes which resolved center is near
};

struct WeightParams {
  KodairaType type = KodairaType::I;
  double delta = 1e-3;   // collapse parameter
  double delta0 = 0.1;   // outer band anchor shared with the generic region
  MonopoleSet poles;     // I: nu poles; I*: the 2 nu symmetric cover poles
  double e_scale = 0.0;  // I*: resolution scale, 0 picks (log 1/delta)^{-3/4}
};

namespace detail {

inline double log_blend(double r, double a, double b) {
  if (r <= 0.0) return 0.0;
  return cutoff_up(std::log(r), std::log(a), std::log(b));
}

inline double lerp(double a, double b, double c) { return (1.0 - c) * a + c * b; }

}  // namespace detail

class WeightField {
 public:
  explicit WeightField(WeightParams p) : p_(std::move(p)) {
    if (!(p_.delta > 0.0) || !(p_.delta < 1.0)) throw InvalidConfig("WeightField: delta in (0,1)");
    if (!(p_.delta0 > 0.0) || p_.delta0 > 0.2)
      throw InvalidConfig("WeightField: band anchor in (0, 0.2]");
    const double logd = std::log(1.0 / p_.delta);
    if (p_.type == KodairaType::I) {
      if (p_.poles.nu() == 0) throw InvalidConfig("WeightField: type I needs monopole data");
      nu_ = p_.poles.nu();
      m_ = nu_;
      T_ = nu_ * logd;
    } else if (p_.type == KodairaType::Istar) {
      if (p_.poles.nu() < 2 || p_.poles.nu() % 2 != 0)
        throw InvalidConfig("WeightField: type I* needs a symmetric cover pole set");
      if (!p_.poles.z2_symmetric(1e-12))
        throw InvalidConfig("WeightField: cover poles must be symmetric under negation");
      nu_ = p_.poles.nu() / 2;
      m_ = 2 * nu_;  // chart potential decays with the cover multiplicity
      T_ = 2.0 * nu_ * logd;
      e_ = p_.e_scale > 0.0 ? p_.e_scale : std::pow(logd, -0.75);
      if (!(e_ * e_ * std::sqrt(T_) <= 1.0))
        throw ScaleViolation("WeightField: resolution scale too large for this collapse depth");
    }
    if (T_ > 0.0 && T_ < 6.0)
      throw InvalidConfig("WeightField: collapse parameter too shallow for the log scales");
    if (p_.poles.nu() > 0) {
      iota0_ = 0.25;
      std::vector<double> marks(p_.poles.poles);
      if (p_.type == KodairaType::Istar) {
        marks.push_back(0.0);
        marks.push_back(0.5);
      }
      for (std::size_t i = 0; i < marks.size(); ++i)
        for (std::size_t j = i + 1; j < marks.size(); ++j)
          iota0_ = std::min(iota0_, 0.5 * std::abs(wrap_near(marks[i] - marks[j])));
      for (double t : p_.poles.poles) t_center_ = std::max(t_center_, 2.0 * std::abs(wrap_near(t)));
      t_center_ = std::max(t_center_, 0.1);
      ibar0_ = 0.25 * iota0_;
    }
  }

  double T() const { return T_; }
  int nu() const { return nu_; }
  double iota0() const { return iota0_; }
  double cluster_radius() const { return t_center_; }
  double e_scale() const { return e_; }
  double ibar0() const { return ibar0_; }

  static double q3_dist(const Vec3& a, const Vec3& b) {
    return std::sqrt(sq(a[0] - b[0]) + sq(a[1] - b[1]) + sq(wrap_near(a[2] - b[2])));
  }

  double pole_distance(const Vec3& u) const { return p_.poles.min_dist_q3(u); }

  double center_distance(const Vec3& u) const {
    return std::sqrt(sq(u[0]) + sq(u[1]) + sq(wrap_near(u[2])));
  }

  // log depth of the collapsed fiber, T away from the center and decaying
  // like -nu log r in the far field
  double log_depth(const Vec3& u) const {
    const double dc = center_distance(u);
    double l0 = 0.0;
    if (dc > 2.0) l0 = -m_ * std::log(dc) * detail::log_blend(dc, 2.0, 4.0);
    return T_ + l0;
  }

  // mollified monopole distance: floored at 1/T in the pole balls, handed to
  // the cluster-center distance in the far field, capped at the chart rim
  double mollified_r(const Vec3& u) const {
    const double dp = pole_distance(u), dc = center_distance(u);
    const double invT = 1.0 / T_;
    double v = detail::lerp(invT, dp, detail::log_blend(dp, invT, 2.0 * invT));
    v = detail::lerp(v, dc, detail::log_blend(dp, t_center_, 2.0 * t_center_));
    const double cap = std::exp((T_ - 2.0) / m_);
    v = detail::lerp(v, cap, detail::log_blend(dc, cap, cap * std::exp(1.0 / m_)));
    return v;
  }

  // distance to the nearest resolved center in the sqrt(T)-rescaled chart
  // units; the four centers sit over the two fixed base points at antipodal
  // fiber angles
  double cap_distance(const Vec3& u, double theta) const {
    double best = std::numeric_limits<double>::infinity();
    for (double qb : {0.0, 0.5}) {
      const double db = q3_dist(u, Vec3(0, 0, qb));
      for (double phase : {0.0, PI}) {
        double dth = std::fmod(std::abs(theta - phase), TWO_PI);
        dth = std::min(dth, TWO_PI - dth);
        best = std::min(best, std::sqrt(T_ * db * db + dth * dth / T_));
      }
    }
    return best;
  }

  double weight(const RegionPoint& x) const {
    switch (x.region) {
      case FiberRegion::generic: {
        if (!(x.d_fiber > 0.0))
          throw RegionUnresolved("weight: generic tag needs a positive fiber distance");
        return s_generic(x.d_fiber);
      }
      case FiberRegion::alg: {
        if (!has_sector_model(p_.type))
          throw RegionUnresolved("weight: chart is not a finite monodromy neighborhood");
        if (x.d_fiber < 0.0) throw RegionUnresolved("weight: negative anchor distance");
        const double d = x.d_fiber;
        return detail::lerp(p_.delta, d, detail::log_blend(d, p_.delta, 2.0 * p_.delta));
      }
      case FiberRegion::inu: {
        if (p_.type != KodairaType::I)
          throw RegionUnresolved("weight: chart has no infinite monodromy data");
        const double s_in = p_.delta * std::sqrt(log_depth(x.u)) * mollified_r(x.u);
        return outer_blend(x.u, s_in);
      }
      case FiberRegion::inustar: {
        if (p_.type != KodairaType::Istar)
          throw RegionUnresolved("weight: chart has no orbifold resolution data");
        const double amb = std::sqrt(log_depth(x.u)) * mollified_r(x.u);
        const double d = cap_distance(x.u, x.theta), e2 = e_ * e_;
        const double floored = detail::lerp(e2, d, detail::log_blend(d, e2, 2.0 * e2));
        // hand the cap branch to the ambient one where their values cross
        const double v = detail::lerp(floored, amb, detail::log_blend(d, 0.5 * amb, amb));
        return outer_blend(x.u, p_.delta * v);
      }
    }
    throw RegionUnresolved("weight: unknown region tag");
  }

  double operator()(const RegionPoint& x) const { return weight(x); }

  BubbleLabel classify(const RegionPoint& x,
                       SequenceDirection dir = SequenceDirection::chart_comoving) const {
    switch (x.region) {
      case FiberRegion::generic: return BubbleLabel::mclean_base;
      case FiberRegion::alg: {
        if (!has_sector_model(p_.type))
          throw RegionUnresolved("classify: chart is not a finite monodromy neighborhood");
        if (dir == SequenceDirection::base_frozen) return BubbleLabel::flat_cone;
        return x.d_fiber <= 16.0 * p_.delta ? BubbleLabel::alg_space : BubbleLabel::flat_cone;
      }
      case FiberRegion::inu: {
        if (p_.type != KodairaType::I)
          throw RegionUnresolved("classify: chart has no infinite monodromy data");
        if (dir == SequenceDirection::base_frozen) return BubbleLabel::mclean_base;
        return classify_chart(x.u, BubbleLabel::r2_s1, BubbleLabel::r2);
      }
      case FiberRegion::inustar: {
        if (p_.type != KodairaType::Istar)
          throw RegionUnresolved("classify: chart has no orbifold resolution data");
        if (dir == SequenceDirection::base_frozen) return BubbleLabel::mclean_base;
        const double d = cap_distance(x.u, x.theta), rT = 1.0 / std::sqrt(T_);
        double c1 = 4.0 * e_ * e_;
        double c2 = std::max(0.5 * rT, c1);
        double c3 = std::max(2.0 * rT, c2);
        double c5 = std::max(2.0 * ibar0_ * std::sqrt(T_), c3);
        double c4 = std::min(std::max(std::sqrt(c3 * c5), c3), c5);
        if (d <= c1) return BubbleLabel::eguchi_hanson;
        if (d <= c2) return BubbleLabel::r4_mod_z2;
        if (d <= c3) return BubbleLabel::r3_s1_mod_z2;
        if (d <= c4) return BubbleLabel::r3_mod_z2;
        if (d <= c5) return BubbleLabel::r2_s1_mod_z2;
        return classify_chart(x.u, BubbleLabel::r2_s1_mod_z2, BubbleLabel::r2_mod_z2);
      }
    }
    throw RegionUnresolved("classify: unknown region tag");
  }

 private:
  // far-field case split shared by the two infinite monodromy charts; the
  // bounded-scale and cone labels differ by the orbifold quotient only
  BubbleLabel classify_chart(const Vec3& u, BubbleLabel bounded_flat, BubbleLabel cone) const {
    const double dp = pole_distance(u), r = mollified_r(u), L = log_depth(u);
    if (dp * T_ <= 2.0) return BubbleLabel::taub_nut;
    if (dp <= iota0_) {
      if (r * T_ <= 16.0) return BubbleLabel::taub_nut;
      return r < std::sqrt(2.0 * iota0_ / T_) ? BubbleLabel::r3 : bounded_flat;
    }
    if (r <= std::max(2.0 * t_center_, 8.0)) return bounded_flat;
    return L >= std::max(4.0, std::sqrt(T_)) ? cone : BubbleLabel::mclean_base;
  }

  // the chart rim hands every singular-region weight to the generic branch
  double outer_blend(const Vec3& u, double s_in) const {
    const double ry = p_.delta * std::hypot(u[0], u[1]);
    if (ry > 4.0 * p_.delta0 * (1.0 + 1e-9))
      throw RegionUnresolved("weight: point lies outside its tagged chart");
    const double c = detail::log_blend(ry, p_.delta0, 2.0 * p_.delta0);
    return c <= 0.0 ? s_in : detail::lerp(s_in, s_generic(ry), c);
  }

  double s_generic(double d) const {
    const double a = 8.0 * p_.delta0, b = 16.0 * p_.delta0;
    return detail::lerp(std::min(d, b), 1.0, detail::log_blend(d, a, b));
  }

  WeightParams p_;
  int nu_ = 0;
  int m_ = 1;  // cover multiplicity driving the chart's log decay
  double T_ = 0.0;
  double e_ = 0.0;
  double iota0_ = 0.25;
  double t_center_ = 0.1;
  double ibar0_ = 0.0625;
};

}  // namespace hk
