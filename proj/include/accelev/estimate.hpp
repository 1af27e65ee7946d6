#pragma once

#include <cmath>
#include <cstring>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "accelev/common.hpp"
#include "accelev/mixture.hpp"
#include "accelev/rng.hpp"
#include "accelev/scenario.hpp"

namespace accelev {

// two-sided normal quantile for a confidence level, e.g. 0.95 -> 1.95996...
inline double normal_quantile_two_sided(double confidence) {
  require(confidence > 0.0 && confidence < 1.0,
          "confidence must lie in (0, 1)");
  boost::math::normal_distribution<double> std_normal;
  return boost::math::quantile(std_normal, 0.5 * (1.0 + confidence));
}

// w = z * sigma_hat / (sqrt(n) * p_hat); infinite when p_hat = 0
inline double rel_half_width(double p_hat, double sigma_hat, long n,
                             double confidence) {
  require(n >= 1, "rel_half_width: n must be positive");
  require(sigma_hat >= 0.0, "rel_half_width: negative sigma");
  if (p_hat == 0.0) return std::numeric_limits<double>::infinity();
  return normal_quantile_two_sided(confidence) * sigma_hat /
         (std::sqrt(static_cast<double>(n)) * p_hat);
}

// Crude-MC sample count needed for a target relative half-width:
// ceil((z/w)^2 (1-p)/p).
inline long long required_samples_crude(double p, double target_w,
                                        double confidence) {
  require(p > 0.0 && p < 1.0, "required_samples_crude: p must lie in (0, 1)");
  require(target_w > 0.0, "required_samples_crude: target width must be positive");
  const double z = normal_quantile_two_sided(confidence);
  return static_cast<long long>(std::ceil((z / target_w) * (z / target_w) *
                                          (1.0 - p) / p));
}

struct TracePoint {
  long n;
  double p_hat;
  double rel_half_width;
};

struct EstimationResult {
  double p_hat = 0.0;
  double sigma_hat = 0.0;  // sample std of the per-sample estimator
  long n_samples = 0;
  double rel_half_width = std::numeric_limits<double>::infinity();
  long hit_count = 0;
  long nonfinite_count = 0;
  double confidence = 0.95;
  std::vector<TracePoint> trace;
};

// every max(1, n/points)-th index, always ending at n
inline std::vector<long> default_checkpoints(long n, int points = 200) {
  const long stride = std::max<long>(1, n / std::max(1, points));
  std::vector<long> cp;
  for (long i = stride; i < n; i += stride) cp.push_back(i);
  cp.push_back(n);
  return cp;
}

namespace detail {

class RunningMoments {
 public:
  explicit RunningMoments(double confidence) : confidence_(confidence) {}

  void add(double v, bool hit) {
    ++n_;
    sum_ += v;
    sum_sq_ += v * v;
    hits_ += hit ? 1 : 0;
  }

  long n() const { return n_; }
  long hits() const { return hits_; }
  double mean() const { return n_ ? sum_ / n_ : 0.0; }

  double sample_std() const {
    if (n_ < 2) return 0.0;
    const double var = (sum_sq_ - n_ * mean() * mean()) / (n_ - 1);
    return std::sqrt(std::max(0.0, var));
  }

  TracePoint checkpoint() const {
    return TracePoint{n_, mean(),
                      rel_half_width(mean(), sample_std(), n_, confidence_)};
  }

  EstimationResult finish(long nonfinite, std::vector<TracePoint> trace) const {
    EstimationResult r;
    r.p_hat = mean();
    r.sigma_hat = sample_std();
    r.n_samples = n_;
    r.rel_half_width = rel_half_width(r.p_hat, r.sigma_hat, n_, confidence_);
    r.hit_count = hits_;
    r.nonfinite_count = nonfinite;
    r.confidence = confidence_;
    r.trace = std::move(trace);
    return r;
  }

 private:
  double confidence_;
  long n_ = 0, hits_ = 0;
  double sum_ = 0.0, sum_sq_ = 0.0;
};

}  // namespace detail

// Eq.-(3) baseline: sample f, average the indicator.
inline EstimationResult crude_mc(const Scenario& sc, long n,
                                 const std::vector<long>& checkpoints,
                                 RngStream& rng, double confidence = 0.95) {
  require(n >= 1, "crude_mc: n must be positive");
  detail::RunningMoments acc(confidence);
  std::vector<TracePoint> trace;
  std::size_t next_cp = 0;
  for (long i = 0; i < n; ++i) {
    const int hit = sc.indicator(sc.original.sample(rng));
    acc.add(static_cast<double>(hit), hit != 0);
    if (next_cp < checkpoints.size() && acc.n() == checkpoints[next_cp]) {
      trace.push_back(acc.checkpoint());
      ++next_cp;
    }
  }
  return acc.finish(0, std::move(trace));
}

// Eq.-(6) estimator: sample f*, average I(x) f(x)/f*(x). The indicator is
// always the scenario's true black box, never a learned surrogate, and the
// likelihood ratio is formed in log space. Samples whose ratio overflows are
// counted and contribute zero; more than 0.1% of them aborts the run.
inline EstimationResult importance_sampling(const Scenario& sc,
                                            const GaussianMixture& f_star,
                                            long n,
                                            const std::vector<long>& checkpoints,
                                            RngStream& rng,
                                            double confidence = 0.95) {
  require(n >= 1, "importance_sampling: n must be positive");
  require(f_star.dim() == sc.dim(),
          "importance_sampling: sampler dimension mismatch");
  detail::RunningMoments acc(confidence);
  std::vector<TracePoint> trace;
  std::size_t next_cp = 0;
  long nonfinite = 0;
  const long nonfinite_cap = std::max<long>(1, n / 1000);
  for (long i = 0; i < n; ++i) {
    const Vector x = f_star.sample(rng);
    const int hit = sc.indicator(x);
    double value = 0.0;
    if (hit) {
      value = std::exp(sc.original.log_density(x) - f_star.log_density(x));
      if (!std::isfinite(value)) {
        value = 0.0;
        if (++nonfinite > nonfinite_cap)
          throw estimation_error(
              "importance_sampling: more than 0.1% non-finite likelihood ratios");
      }
    }
    acc.add(value, hit != 0);
    if (next_cp < checkpoints.size() && acc.n() == checkpoints[next_cp]) {
      trace.push_back(acc.checkpoint());
      ++next_cp;
    }
  }
  return acc.finish(nonfinite, std::move(trace));
}

// Labeled evaluation in the original coordinates; indicator in {0, 1}.
struct LabeledPoint {
  Vector x;
  int indicator;
};

// Append freshly labeled points, dropping exact coordinate duplicates.
inline std::vector<LabeledPoint> sequential_update(
    std::vector<LabeledPoint> training, const std::vector<LabeledPoint>& fresh) {
  auto key = [](const Vector& x) {
    std::string k(reinterpret_cast<const char*>(x.data()),
                  sizeof(double) * x.size());
    return k;
  };
  std::unordered_set<std::string> seen;
  seen.reserve(training.size() + fresh.size());
  for (const auto& p : training) seen.insert(key(p.x));
  for (const auto& p : fresh) {
    if (!training.empty())
      require(p.x.size() == training.front().x.size(),
              "sequential_update: dimension mismatch");
    if (seen.insert(key(p.x)).second) training.push_back(p);
  }
  return training;
}

}  // namespace accelev
