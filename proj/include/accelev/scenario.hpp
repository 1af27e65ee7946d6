#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "accelev/common.hpp"
#include "accelev/mixture.hpp"

namespace accelev {

// An evaluation problem: environment model f, domain box, and a black-box
// indicator of the critical event. The indicator is deterministic and
// returns 0 outside the domain; densities always use the untruncated f.
struct Scenario {
  std::string name;
  Box domain;
  GaussianMixture original;
  std::function<int(const Vector&)> raw_indicator;

  int dim() const { return original.dim(); }

  int indicator(const Vector& x) const {
    return domain.contains(x) ? raw_indicator(x) : 0;
  }
};

namespace detail {

struct Disk {
  double cx, cy, r;
};

// union-of-disks critical set of the 2-D example problem
inline constexpr std::array<Disk, 4> kToyDisks = {
    Disk{0.0, 0.0, 0.2}, Disk{5.0, 5.0, 1.5}, Disk{3.0, 5.0, 0.7},
    Disk{5.0, 3.0, 0.5}};

}  // namespace detail

inline int toy_indicator_scaled(const Vector& x, double radius_scale) {
  if (x[0] < 0.0 || x[0] > 5.0 || x[1] < 0.0 || x[1] > 5.0) return 0;
  for (const auto& d : detail::kToyDisks) {
    const double dx = x[0] - d.cx, dy = x[1] - d.cy;
    const double r = d.r * radius_scale;
    if (dx * dx + dy * dy <= r * r) return 1;
  }
  return 0;
}

inline int toy_indicator(const Vector& x) { return toy_indicator_scaled(x, 1.0); }

// 2-D example problem: f = N((1,1), I) on the box [0,5]^2 with the
// union-of-disks critical set. radius_scale inflates all disk radii; the
// inflated variant (scale 3, event probability ~1e-1) keeps unbiasedness
// checks cheap.
inline Scenario toy_scenario_scaled(double radius_scale) {
  require(radius_scale > 0.0, "toy scenario: radius scale must be positive");
  Vector mean(2);
  mean << 1.0, 1.0;
  GaussianMixture f({1.0}, {MultivariateGaussian(mean, Matrix::Identity(2, 2))});
  Box domain{Vector::Zero(2), Vector::Constant(2, 5.0)};
  std::string name = radius_scale == 1.0 ? "toy" : "toy_inflated";
  return Scenario{std::move(name), std::move(domain), std::move(f),
                  [radius_scale](const Vector& x) {
                    return toy_indicator_scaled(x, radius_scale);
                  }};
}

inline Scenario toy_scenario() { return toy_scenario_scaled(1.0); }

// Midpoint-rule quadrature of P(X in critical set) for the toy geometry,
// refined by grid doubling until two successive refinements agree within 1%
// relative. Ground truth for the toy acceptance tests.
inline double toy_oracle_probability_scaled(double radius_scale,
                                            int cells_per_axis = 200) {
  require(cells_per_axis >= 100, "toy oracle: need at least 100 cells per axis");
  Scenario sc = toy_scenario_scaled(radius_scale);
  const MultivariateGaussian& g = sc.original.component(0);
  auto pass = [&](int cells) {
    const double h = 5.0 / cells;
    double acc = 0.0;
    Vector x(2);
    for (int i = 0; i < cells; ++i) {
      x[0] = (i + 0.5) * h;
      for (int j = 0; j < cells; ++j) {
        x[1] = (j + 0.5) * h;
        if (sc.indicator(x)) acc += g.density(x);
      }
    }
    return acc * h * h;
  };
  double prev = pass(cells_per_axis);
  int cells = cells_per_axis;
  for (int refine = 0; refine < 5; ++refine) {
    cells *= 2;
    const double cur = pass(cells);
    if (std::abs(cur - prev) <= 0.01 * std::abs(cur)) return cur;
    prev = cur;
  }
  throw oracle_error("toy oracle: quadrature did not stabilize within 1%");
}

inline double toy_oracle_probability(int cells_per_axis = 200) {
  return toy_oracle_probability_scaled(1.0, cells_per_axis);
}

}  // namespace accelev
