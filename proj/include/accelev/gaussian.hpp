#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "accelev/common.hpp"
#include "accelev/rng.hpp"

namespace accelev {

inline constexpr double kLog2Pi = 1.8378770664093454836;

// Dense multivariate normal. Immutable after construction; the Cholesky
// factor is computed once and shared by density evaluation and sampling.
// Construction rejects covariances that are not (numerically) symmetric
// positive definite: asymmetry up to 1e-8 is averaged away, anything larger
// is an error, and a failed factorization is an error.
class MultivariateGaussian {
 public:
  MultivariateGaussian(Vector mean, Matrix covariance)
      : mean_(std::move(mean)) {
    const Eigen::Index n = mean_.size();
    require(n >= 1, "gaussian: empty mean");
    require(covariance.rows() == n && covariance.cols() == n,
            "gaussian: covariance shape does not match mean");
    require(mean_.allFinite() && covariance.allFinite(),
            "gaussian: non-finite parameter");
    const double asym = (covariance - covariance.transpose()).cwiseAbs().maxCoeff();
    require(asym < 1e-8, "gaussian: covariance asymmetry exceeds 1e-8");
    covariance_ = 0.5 * (covariance + covariance.transpose());
    Eigen::LLT<Matrix> llt(covariance_);
    require(llt.info() == Eigen::Success,
            "gaussian: covariance not positive definite");
    chol_lower_ = llt.matrixL();
    log_det_half_ = chol_lower_.diagonal().array().log().sum();
  }

  int dim() const { return static_cast<int>(mean_.size()); }
  const Vector& mean() const { return mean_; }
  const Matrix& covariance() const { return covariance_; }
  const Matrix& cholesky_lower() const { return chol_lower_; }

  double log_density(const Vector& x) const {
    require(x.size() == mean_.size(), "gaussian: point dimension mismatch");
    Vector y = chol_lower_.triangularView<Eigen::Lower>().solve(x - mean_);
    return -0.5 * (dim() * kLog2Pi + y.squaredNorm()) - log_det_half_;
  }

  double density(const Vector& x) const { return std::exp(log_density(x)); }

  Vector sample(RngStream& rng) const {
    Vector z(dim());
    for (int i = 0; i < dim(); ++i) z[i] = rng.normal();
    return mean_ + chol_lower_ * z;
  }

  std::vector<Vector> sample(int count, RngStream& rng) const {
    require(count >= 1, "gaussian: sample count must be positive");
    std::vector<Vector> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(sample(rng));
    return out;
  }

  // Marginal over the selected coordinates, in the order given.
  MultivariateGaussian marginal(const std::vector<int>& indices) const {
    require(!indices.empty(), "gaussian: empty marginal index list");
    const int m = static_cast<int>(indices.size());
    for (int i = 0; i < m; ++i) {
      require(indices[i] >= 0 && indices[i] < dim(),
              "gaussian: marginal index out of range");
      for (int j = i + 1; j < m; ++j)
        require(indices[i] != indices[j], "gaussian: duplicate marginal index");
    }
    Vector mu(m);
    Matrix cov(m, m);
    for (int i = 0; i < m; ++i) {
      mu[i] = mean_[indices[i]];
      for (int j = 0; j < m; ++j) cov(i, j) = covariance_(indices[i], indices[j]);
    }
    return MultivariateGaussian(std::move(mu), std::move(cov));
  }

 private:
  Vector mean_;
  Matrix covariance_;
  Matrix chol_lower_;
  double log_det_half_;
};

}  // namespace accelev
