#pragma once
#include <string>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "accelev/common.hpp"
#include "accelev/gaussian.hpp"
#include "accelev/rng.hpp"

namespace accelev {

// Finite Gaussian mixture. Weights are nonnegative and sum to one within
// 1e-9; densities are evaluated through log-sum-exp so the result stays
// meaningful far into the tails.
class GaussianMixture {
 public:
  GaussianMixture(std::vector<double> weights,
                  std::vector<MultivariateGaussian> components)
      : weights_(std::move(weights)), components_(std::move(components)) {
    require(!components_.empty(), "mixture: needs at least one component");
    require(weights_.size() == components_.size(),
            "mixture: weight/component count mismatch");
    double sum = 0.0;
    for (double w : weights_) {
      require(std::isfinite(w) && w >= 0.0, "mixture: negative weight");
      sum += w;
    }
    require(std::abs(sum - 1.0) <= 1e-9, "mixture: weights must sum to 1");
    const int d = components_.front().dim();
    for (const auto& c : components_)
      require(c.dim() == d, "mixture: component dimension mismatch");
    log_weights_.resize(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i)
      log_weights_[i] = weights_[i] > 0.0
                            ? std::log(weights_[i])
                            : -std::numeric_limits<double>::infinity();
  }

  int dim() const { return components_.front().dim(); }
  int size() const { return static_cast<int>(components_.size()); }
  const std::vector<double>& weights() const { return weights_; }
  const MultivariateGaussian& component(int i) const { return components_[i]; }
  const std::vector<MultivariateGaussian>& components() const { return components_; }

  double log_density(const Vector& x) const {
    require(x.size() == dim(), "mixture: point dimension mismatch");
    double max_term = -std::numeric_limits<double>::infinity();
    std::vector<double> terms(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) {
      terms[i] = weights_[i] > 0.0
                     ? log_weights_[i] + components_[i].log_density(x)
                     : -std::numeric_limits<double>::infinity();
      max_term = std::max(max_term, terms[i]);
    }
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - max_term);
    return max_term + std::log(acc);
  }

  double density(const Vector& x) const { return std::exp(log_density(x)); }

  Vector sample(RngStream& rng) const {
    const double u = rng.uniform();
    double cum = 0.0;
    int pick = size() - 1;
    for (int i = 0; i < size(); ++i) {
      cum += weights_[i];
      if (u < cum) {
        pick = i;
        break;
      }
    }
    return components_[pick].sample(rng);
  }

  std::vector<Vector> sample(int count, RngStream& rng) const {
    require(count >= 1, "mixture: sample count must be positive");
    std::vector<Vector> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sample(rng));
    return out;
  }

 private:
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<MultivariateGaussian> components_;
};

struct EmOptions {
  double ridge = 0.0;     // added to every M-step scatter as ridge * I
  double tol = 1e-7;      // per-sample objective improvement threshold
  int max_iter = 500;
};

struct EmFit {
  GaussianMixture mixture;
  int iterations = 0;
  bool converged = false;
  int reseeds = 0;
  // ridge-penalized per-sample log-likelihood per iteration since the last
  // component re-seed; non-decreasing up to floating-point slack
  std::vector<double> objective_trace;
};

namespace detail {

// farthest-point seeding: first center is the point farthest from the data
// mean, then repeatedly the point maximizing the min distance to the chosen
// centers. Ties break to the lowest index, so the seeding is invariant under
// duplication of the data set.
inline std::vector<int> farthest_point_centers(const Matrix& X, int k) {
  const Eigen::Index n = X.rows();
  Eigen::RowVectorXd mean = X.colwise().mean();
  std::vector<int> centers;
  centers.reserve(k);
  Vector dist(n);
  for (Eigen::Index i = 0; i < n; ++i)
    dist[i] = (X.row(i) - mean).squaredNorm();
  Eigen::Index first;
  dist.maxCoeff(&first);
  centers.push_back(static_cast<int>(first));
  Vector min_d(n);
  for (Eigen::Index i = 0; i < n; ++i)
    min_d[i] = (X.row(i) - X.row(first)).squaredNorm();
  while (static_cast<int>(centers.size()) < k) {
    Eigen::Index next;
    min_d.maxCoeff(&next);
    centers.push_back(static_cast<int>(next));
    for (Eigen::Index i = 0; i < n; ++i)
      min_d[i] = std::min(min_d[i], (X.row(i) - X.row(next)).squaredNorm());
  }
  return centers;
}

}  // namespace detail

// Expectation-maximization for a k-component mixture. The M-step covariance
// update is Sigma_j = (scatter_j + ridge * I) / N_j, which is the exact
// maximizer of the ridge-penalized complete-data objective; the value pushed
// to objective_trace,
//   (1/N) [ sum_i log f(x_i) - (ridge/2) sum_j tr(Sigma_j^{-1}) ],
// is therefore non-decreasing across iterations.
//
// Components whose weight collapses below 1e-8 are re-seeded at the data
// point with the lowest current mixture density; more than 10 re-seeds is a
// fitting error.
inline EmFit fit_em(const std::vector<Vector>& data, int k,
                    const EmOptions& opt, RngStream& /*rng*/) {
  require(k >= 1, "fit_em: k must be positive");
  require(!data.empty() && static_cast<int>(data.size()) >= k,
          "fit_em: fewer data points than components");
  require(opt.ridge >= 0.0, "fit_em: ridge must be nonnegative");
  require(opt.tol > 0.0 && opt.max_iter >= 1, "fit_em: bad stopping rule");
  const int n = static_cast<int>(data.size());
  const int d = static_cast<int>(data.front().size());
  Matrix X(n, d);
  for (int i = 0; i < n; ++i) {
    require(data[i].size() == d, "fit_em: inconsistent data dimensions");
    require(data[i].allFinite(), "fit_em: non-finite data");
    X.row(i) = data[i].transpose();
  }

  Eigen::RowVectorXd data_mean = X.colwise().mean();
  Matrix centered = X.rowwise() - data_mean;
  Matrix base_cov = (centered.transpose() * centered) / std::max(1, n - 1);
  Matrix seed_cov = base_cov + opt.ridge * Matrix::Identity(d, d);

  auto make_component = [&](const Vector& mu, const Matrix& cov) {
    try {
      return MultivariateGaussian(mu, cov);
    } catch (const std::invalid_argument& e) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (cov + cov.transpose()));
      throw fitting_error(std::string("fit_em: degenerate covariance (") +
                          e.what() + "; eigenvalues in [" +
                          std::to_string(es.eigenvalues().minCoeff()) + ", " +
                          std::to_string(es.eigenvalues().maxCoeff()) +
                          "]); increase ridge");
    }
  };

  std::vector<Vector> means;
  std::vector<Matrix> covs(k, seed_cov);
  std::vector<double> weights(k, 1.0 / k);
  for (int c : detail::farthest_point_centers(X, k))
    means.push_back(X.row(c).transpose());

  std::vector<MultivariateGaussian> comps;
  comps.reserve(k);
  for (int j = 0; j < k; ++j) comps.push_back(make_component(means[j], covs[j]));

  EmFit fit{GaussianMixture(weights, comps), 0, false, 0, {}};
  Matrix log_resp(n, k);
  Vector point_ll(n);

  auto penalty = [&](const std::vector<MultivariateGaussian>& cs) {
    if (opt.ridge == 0.0) return 0.0;
    double tr_inv = 0.0;
    for (const auto& c : cs) {
      Matrix inv_l = c.cholesky_lower()
                         .triangularView<Eigen::Lower>()
                         .solve(Matrix::Identity(d, d));
      tr_inv += inv_l.squaredNorm();  // tr(Sigma^{-1}) = ||L^{-1}||_F^2
    }
    return -0.5 * opt.ridge * tr_inv;
  };

  double prev_obj = -std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    // E-step, batched per component
    for (int j = 0; j < k; ++j) {
      const auto& g = comps[j];
      Matrix diff = (X.rowwise() - g.mean().transpose()).transpose();  // d x n
      Matrix y = g.cholesky_lower().triangularView<Eigen::Lower>().solve(diff);
      double log_norm =
          -0.5 * d * kLog2Pi - g.cholesky_lower().diagonal().array().log().sum();
      double lw = weights[j] > 0.0 ? std::log(weights[j])
                                   : -std::numeric_limits<double>::infinity();
      log_resp.col(j) =
          (y.colwise().squaredNorm().transpose() * -0.5).array() + log_norm + lw;
    }
    for (int i = 0; i < n; ++i) {
      double mx = log_resp.row(i).maxCoeff();
      double acc = (log_resp.row(i).array() - mx).exp().sum();
      point_ll[i] = mx + std::log(acc);
      log_resp.row(i) = (log_resp.row(i).array() - (point_ll[i])).exp();
    }
    // log_resp now holds responsibilities
    double obj = point_ll.mean() + penalty(comps) / n;
    fit.objective_trace.push_back(obj);
    fit.iterations = iter + 1;
    if (iter > 0 && obj - prev_obj < opt.tol) {
      fit.converged = true;
      prev_obj = obj;
      break;
    }
    prev_obj = obj;

    // M-step
    Vector nj = log_resp.colwise().sum().transpose();
    bool reseeded = false;
    for (int j = 0; j < k; ++j) {
      if (nj[j] / n < 1e-8) {
        if (++fit.reseeds > 10)
          throw fitting_error("fit_em: repeated component collapse");
        Eigen::Index worst;
        point_ll.minCoeff(&worst);
        means[j] = X.row(worst).transpose();
        covs[j] = seed_cov;
        weights[j] = 1.0 / k;
        reseeded = true;
        continue;
      }
      Eigen::RowVectorXd mu = (log_resp.col(j).transpose() * X) / nj[j];
      Matrix c = X.rowwise() - mu;
      Matrix scatter =
          c.transpose() * (c.array().colwise() * log_resp.col(j).array()).matrix();
      covs[j] = (scatter + opt.ridge * Matrix::Identity(d, d)) / nj[j];
      means[j] = mu.transpose();
      weights[j] = nj[j] / n;
    }
    if (reseeded) {
      double wsum = 0.0;
      for (double w : weights) wsum += w;
      for (double& w : weights) w /= wsum;
      // a re-seed is not an EM step; the monotone trace restarts after it
      fit.objective_trace.clear();
      prev_obj = -std::numeric_limits<double>::infinity();
    }
    comps.clear();
    for (int j = 0; j < k; ++j) comps.push_back(make_component(means[j], covs[j]));
  }

  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;
  fit.mixture = GaussianMixture(weights, comps);
  return fit;
}

}  // namespace accelev
