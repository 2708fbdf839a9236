#pragma once

#include <vector>

#include "hk/common.hpp"

// pointwise algebra of triples of 2-forms on an oriented 4-dimensional chart.
// A 2-form is stored as its antisymmetric coefficient matrix A, meaning
// omega = sum_{i<j} A(i,j) dx_i ^ dx_j; the reference volume form is
// dvol0 * dx_0123.

namespace hk {

using Form2 = Mat4;

// dx_i ^ dx_j as a coefficient matrix
inline Form2 form2_basis(int i, int j, double c = 1.0) {
  Form2 a = Form2::Zero();
  a(i, j) += c;
  a(j, i) -= c;
  return a;
}

// u ^ v for a pair of covectors
inline Form2 covector_wedge(const Vec4& u, const Vec4& v) {
  return u * v.transpose() - v * u.transpose();
}

// coefficient of dx_0123 in A ^ B
inline double wedge(const Form2& a, const Form2& b) {
  return a(0, 1) * b(2, 3) + a(2, 3) * b(0, 1) + a(0, 2) * b(3, 1) + a(3, 1) * b(0, 2) +
         a(0, 3) * b(1, 2) + a(1, 2) * b(0, 3);
}

struct Triple {
  Form2 w[3];

  Triple() { w[0] = w[1] = w[2] = Form2::Zero(); }
  Triple(const Form2& a, const Form2& b, const Form2& c) {
    w[0] = a;
    w[1] = b;
    w[2] = c;
  }

  Triple scaled(double lam) const { return Triple(lam * w[0], lam * w[1], lam * w[2]); }
};

// the standard self-dual triple of flat R^4
inline Triple flat_triple() {
  return Triple(form2_basis(0, 1) + form2_basis(2, 3), form2_basis(0, 2) + form2_basis(3, 1),
                form2_basis(0, 3) + form2_basis(1, 2));
}

// Q_ij dvol0 = (1/2) w_i ^ w_j
inline Mat3 q_matrix(const Triple& t, double dvol0 = 1.0) {
  if (dvol0 <= 0) throw InvalidConfig("q_matrix: reference volume must be positive");
  Mat3 q;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      q(i, j) = 0.5 * wedge(t.w[i], t.w[j]) / dvol0;
      q(j, i) = q(i, j);
    }
  return q;
}

// definiteness gate: Q must be positive definite
inline void require_definite(const Mat3& q, const char* who) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(q);
  if (es.eigenvalues().minCoeff() <= 0) throw DefiniteViolation(who);
}

// normalized matrix Q_omega = det(Q)^{-1/3} Q and the induced volume factor
// dvol_omega / dvol0 = det(Q)^{1/3}
struct NormalizedQ {
  Mat3 q_omega;
  double vol_factor;
};

inline NormalizedQ normalize_q(const Mat3& q) {
  require_definite(q, "normalize_q: Q is not positive definite");
  const double d = q.determinant();
  const double f = std::cbrt(d);
  return {q / f, f};
}

inline Mat3 q_omega(const Triple& t, double dvol0 = 1.0) {
  return normalize_q(q_matrix(t, dvol0)).q_omega;
}

// hyperkaehler deviation at a point: || Q_omega - Id ||_F
inline double q_deviation(const Triple& t, double dvol0 = 1.0) {
  return (q_omega(t, dvol0) - Mat3::Identity()).norm();
}

// Riemannian metric determined by a definite triple. The triple is first
// Q-orthonormalized, then the complex structure J = F1^{-1} F3 and
// g = -J^T F2 recover the metric; the result is rescaled so that
// sqrt(det g) = vol_factor * dvol0.
inline Mat4 metric_from_triple(const Triple& t, double dvol0 = 1.0,
                               double cond_limit = 1e12) {
  Mat3 q = q_matrix(t, dvol0);
  require_definite(q, "metric_from_triple: triple is not definite");
  Eigen::SelfAdjointEigenSolver<Mat3> es(q);
  const Vec3 ev = es.eigenvalues();
  if (ev.maxCoeff() / ev.minCoeff() > cond_limit)
    throw NearDegenerate("metric_from_triple: Q is numerically degenerate");
  Mat3 b = Mat3::Zero();  // Q^{-1/2}
  for (int k = 0; k < 3; ++k)
    b += es.eigenvectors().col(k) * es.eigenvectors().col(k).transpose() / std::sqrt(ev[k]);
  Form2 f[3];
  for (int i = 0; i < 3; ++i) {
    f[i] = Form2::Zero();
    for (int j = 0; j < 3; ++j) f[i] += b(i, j) * t.w[j];
  }
  Eigen::FullPivLU<Mat4> lu(f[0]);
  if (!lu.isInvertible()) throw NearDegenerate("metric_from_triple: degenerate leading form");
  const Mat4 J = lu.solve(f[2]);
  Mat4 g = -J.transpose() * f[1];
  g = 0.5 * (g + g.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat4> gs(g);
  if (gs.eigenvalues().minCoeff() <= 0)
    throw DegenerateTriple("metric_from_triple: recovered tensor is not positive");
  const double vol_target = normalize_q(q).vol_factor * dvol0;  // sqrt(det g) wanted
  const double s = std::sqrt(vol_target / std::sqrt(g.determinant()));
  return s * g;
}

// Hodge star on 2-forms of the metric g (lower indices in, lower indices out)
inline Form2 hodge_star2(const Form2& a, const Mat4& g) {
  const Mat4 gi = g.inverse();
  const double sg = std::sqrt(g.determinant());
  Mat4 up = gi * a * gi.transpose();  // raise both indices: A^{kl}
  static const int perm[24][5] = {
      {0, 1, 2, 3, 1},  {0, 1, 3, 2, -1}, {0, 2, 1, 3, -1}, {0, 2, 3, 1, 1},
      {0, 3, 1, 2, 1},  {0, 3, 2, 1, -1}, {1, 0, 2, 3, -1}, {1, 0, 3, 2, 1},
      {1, 2, 0, 3, 1},  {1, 2, 3, 0, -1}, {1, 3, 0, 2, -1}, {1, 3, 2, 0, 1},
      {2, 0, 1, 3, 1},  {2, 0, 3, 1, -1}, {2, 1, 0, 3, -1}, {2, 1, 3, 0, 1},
      {2, 3, 0, 1, 1},  {2, 3, 1, 0, -1}, {3, 0, 1, 2, -1}, {3, 0, 2, 1, 1},
      {3, 1, 0, 2, 1},  {3, 1, 2, 0, -1}, {3, 2, 0, 1, -1}, {3, 2, 1, 0, 1}};
  Form2 out = Form2::Zero();
  for (const auto& p : perm) out(p[0], p[1]) += 0.5 * sg * p[4] * up(p[2], p[3]);
  return out;
}

inline Form2 self_dual_part(const Form2& a, const Mat4& g) {
  return 0.5 * (a + hodge_star2(a, g));
}

// |A|_g^2 = (1/2) A_ij A_kl g^ik g^jl
inline double form2_norm_g(const Form2& a, const Mat4& g) {
  const Mat4 gi = g.inverse();
  return std::sqrt(std::max(0.0, 0.5 * (gi * a * gi.transpose() * a.transpose()).trace()));
}

// ---- weighted deviation statistics over a sampled region ------------------

struct HkSample {
  Vec4 x;        // chart coordinates, used only for pair distances
  Mat3 q_omega;  // normalized pointwise matrix
  double s;      // regularity-scale value at x
};

struct HkErrorStats {
  double sup = 0.0;           // sup |Q_omega - Id|
  double weighted_sup = 0.0;  // sup s^{mu+1} |Q_omega - Id|
  double holder_lb = 0.0;     // pair-sampled lower bound for the weighted seminorm
  int pair_count = 0;
};

// mu is the weight exponent, alpha the Hoelder exponent of the seminorm
// min(s_x, s_y)^{mu+1+alpha} |e(x) - e(y)| / |x - y|^alpha sampled over pairs
inline HkErrorStats hk_error(const std::vector<HkSample>& pts, double mu,
                             double alpha = 0.5) {
  if (pts.empty()) throw EmptyRegion("hk_error: no sample points");
  if (alpha <= 0 || alpha > 1) throw InvalidConfig("hk_error: alpha must lie in (0,1]");
  HkErrorStats out;
  std::vector<double> dev(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    dev[i] = (pts[i].q_omega - Mat3::Identity()).norm();
    out.sup = std::max(out.sup, dev[i]);
    out.weighted_sup = std::max(out.weighted_sup, std::pow(pts[i].s, mu + 1.0) * dev[i]);
  }
  // deterministic pair subsample: strided sweep, at most ~8 partners per point
  const std::size_t n = pts.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 8);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; j += stride) {
      const double d = (pts[i].x - pts[j].x).norm();
      if (d < 1e-14) continue;
      const double w = std::pow(std::min(pts[i].s, pts[j].s), mu + 1.0 + alpha);
      out.holder_lb = std::max(out.holder_lb, w * std::abs(dev[i] - dev[j]) / std::pow(d, alpha));
      ++out.pair_count;
    }
  return out;
}

}  // namespace hk
