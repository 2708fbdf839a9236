#pragma once

#include <vector>

#include "hk/common.hpp"

namespace hk {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// ordinary least squares y ~ intercept + slope*x
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >=2 paired samples");
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (syy == 0) {
    f.r2 = 1.0;
  } else {
    double ssres = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = y[i] - (f.intercept + f.slope * x[i]);
      ssres += r * r;
    }
    f.r2 = 1.0 - ssres / syy;
  }
  return f;
}

// slope of log y vs log x; requires positive data
inline LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw std::invalid_argument("fit_loglog: nonpositive sample");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

// least squares for y ~ c0 + c1*x1 + c2*x2 (two-exponent power law in logs)
struct PlaneFit {
  double c0 = 0, c1 = 0, c2 = 0;
  double r2 = 0;
};

inline PlaneFit fit_plane(const std::vector<double>& x1, const std::vector<double>& x2,
                          const std::vector<double>& y) {
  const std::size_t n = y.size();
  if (x1.size() != n || x2.size() != n || n < 3)
    throw std::invalid_argument("fit_plane: need >=3 paired samples");
  Eigen::MatrixXd A(n, 3);
  Eigen::VectorXd b(n);
  for (std::size_t i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = x1[i];
    A(i, 2) = x2[i];
    b(i) = y[i];
  }
  Eigen::Vector3d c = (A.transpose() * A).ldlt().solve(A.transpose() * b);
  PlaneFit f;
  f.c0 = c(0);
  f.c1 = c(1);
  f.c2 = c(2);
  double my = b.mean(), ssres = 0, sstot = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double p = c(0) + c(1) * A(i, 1) + c(2) * A(i, 2);
    ssres += sq(b(i) - p);
    sstot += sq(b(i) - my);
  }
  f.r2 = (sstot == 0) ? 1.0 : 1.0 - ssres / sstot;
  return f;
}

}  // namespace hk
