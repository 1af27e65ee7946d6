#pragma once

#include <utility>
#include <vector>

#include "accelev/classifier.hpp"
#include "accelev/common.hpp"
#include "accelev/feature_map.hpp"
#include "accelev/mixture.hpp"

namespace accelev {

// Highest-density point of the Gaussian inside the halfspace
// {z : beta'z + b >= 0}. When the mean is already feasible it is the
// maximizer; otherwise the maximizer is the Sigma-metric projection of the
// mean onto the boundary,
//   a* = mu + ((-b - beta'mu) / (beta' Sigma beta)) Sigma beta.
inline Vector dominating_point(const MultivariateGaussian& g,
                               const Hyperplane& h) {
  require(h.dim() == g.dim(), "dominating_point: dimension mismatch");
  require(h.beta.squaredNorm() > 0.0, "dominating_point: zero normal vector");
  const double value = h.decision(g.mean());
  if (value >= 0.0) return g.mean();
  Vector sigma_beta = g.covariance() * h.beta;
  const double denom = h.beta.dot(sigma_beta);
  return g.mean() + (-value / denom) * sigma_beta;
}

// Eq.-(9)-style tilt: every component mean moves to its dominating point;
// weights and covariances are untouched.
inline std::pair<GaussianMixture, std::vector<Vector>> shift_means(
    const GaussianMixture& mix, const Hyperplane& h) {
  std::vector<Vector> points;
  std::vector<MultivariateGaussian> comps;
  points.reserve(mix.size());
  comps.reserve(mix.size());
  for (int i = 0; i < mix.size(); ++i) {
    points.push_back(dominating_point(mix.component(i), h));
    comps.emplace_back(points.back(), mix.component(i).covariance());
  }
  return {GaussianMixture(mix.weights(), std::move(comps)), std::move(points)};
}

// Marginal of a feature-space mixture over the degree-1 block, giving a
// mixture on the original coordinates.
inline GaussianMixture marginalize_to_original(const GaussianMixture& mix,
                                               const PolynomialFeatureMap& map) {
  require(mix.dim() == map.output_dim(),
          "marginalize_to_original: mixture/map dimension mismatch");
  const std::vector<int> idx = map.linear_block_indices();
  std::vector<MultivariateGaussian> comps;
  comps.reserve(mix.size());
  for (int i = 0; i < mix.size(); ++i)
    comps.push_back(mix.component(i).marginal(idx));
  return GaussianMixture(mix.weights(), std::move(comps));
}

struct AcceleratedModel {
  PolynomialFeatureMap map;
  Hyperplane hyperplane;
  GaussianMixture feature_mixture;   // shifted fit on R^m
  GaussianMixture original_mixture;  // its degree-1 marginal, the sampler f*
  std::vector<Vector> dominating_points;
};

struct AccelOptions {
  int mixture_count = 3;
  int fit_count = 20000;
  // em.ridge < 0 selects 1e-6 * mean feature variance of the lifted sample
  EmOptions em{-1.0, 1e-7, 500};
};

struct AcceleratedBuild {
  AcceleratedModel model;
  EmFit fit;  // diagnostics of the feature-space fit
};

// End-to-end construction of the accelerated distribution: sample the
// original model, lift through the feature map, fit a mixture in feature
// space, shift each component to its dominating point, marginalize back.
inline AcceleratedBuild build_accelerated(const GaussianMixture& original,
                                          const PolynomialFeatureMap& map,
                                          const Hyperplane& h,
                                          const AccelOptions& opt,
                                          RngStream& rng) {
  require(original.dim() == map.input_dim(),
          "build_accelerated: model/map dimension mismatch");
  require(h.dim() == map.output_dim(),
          "build_accelerated: hyperplane lives in the wrong space");
  require(opt.fit_count >= opt.mixture_count,
          "build_accelerated: fit_count below mixture count");

  std::vector<Vector> lifted = map.apply(original.sample(opt.fit_count, rng));

  EmOptions em = opt.em;
  if (em.ridge < 0.0) {
    Vector mean = Vector::Zero(map.output_dim());
    for (const auto& z : lifted) mean += z;
    mean /= static_cast<double>(lifted.size());
    double var_sum = 0.0;
    for (const auto& z : lifted) var_sum += (z - mean).squaredNorm();
    em.ridge = 1e-6 * var_sum / (static_cast<double>(lifted.size()) * map.output_dim());
  }

  EmFit fit = fit_em(lifted, opt.mixture_count, em, rng);

  auto [shifted, points] = shift_means(fit.mixture, h);
  GaussianMixture f_star = marginalize_to_original(shifted, map);
  return AcceleratedBuild{AcceleratedModel{map, h, std::move(shifted),
                                           std::move(f_star), std::move(points)},
                          std::move(fit)};
}

}  // namespace accelev
