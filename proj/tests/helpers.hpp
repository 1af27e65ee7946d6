#pragma once

// Shared test-only utilities: independent oracles and small statistics
// helpers. Nothing in here may call into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <vector>

#include "accelev/common.hpp"

namespace testutil {

using accelev::Matrix;
using accelev::Vector;

// two-sample Kolmogorov-Smirnov statistic
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// asymptotic two-sample KS critical value; c(0.01) = 1.628
inline double ks_critical(std::size_t n, std::size_t m, double c_alpha = 1.628) {
  return c_alpha * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

// Projected-gradient maximizer of the Gaussian density over the halfspace
// {z : beta'z + b >= 0}; equivalently the Sigma^{-1}-metric projection of the
// mean onto the feasible set. Independent oracle for dominating points.
inline Vector pg_dominating_point(const Vector& mu, const Matrix& sigma,
                                  const Vector& beta, double b,
                                  double tol = 1e-10, int max_iter = 200000) {
  const Matrix prec = sigma.inverse();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const double step = 0.45 * es.eigenvalues().minCoeff();
  auto project = [&](Vector z) {
    const double v = beta.dot(z) + b;
    if (v < 0.0) z -= (v / beta.squaredNorm()) * beta;
    return z;
  };
  Vector z = project(mu);
  for (int it = 0; it < max_iter; ++it) {
    Vector g = prec * (z - mu);  // gradient of the quadratic form (up to 2x)
    Vector z_next = project(z - step * g);
    if ((z_next - z).norm() < tol) return z_next;
    z = z_next;
  }
  return z;
}

// midpoint quadrature of a 1-D function
template <typename F>
double integrate_1d(F f, double lo, double hi, int cells) {
  const double h = (hi - lo) / cells;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) acc += f(lo + (i + 0.5) * h);
  return acc * h;
}

// midpoint quadrature of a 2-D function on a rectangle
template <typename F>
double integrate_2d(F f, double lo0, double hi0, double lo1, double hi1,
                    int cells) {
  const double h0 = (hi0 - lo0) / cells;
  const double h1 = (hi1 - lo1) / cells;
  double acc = 0.0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j)
      acc += f(lo0 + (i + 0.5) * h0, lo1 + (j + 0.5) * h1);
  return acc * h0 * h1;
}

inline Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

inline Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

}  // namespace testutil
