#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "accelev/gaussian.hpp"
#include "accelev/rng.hpp"
#include "helpers.hpp"

using accelev::Matrix;
using accelev::MultivariateGaussian;
using accelev::RngStream;
using accelev::Vector;
using testutil::vec2;
using testutil::vec3;

TEST_CASE("log density matches the closed-form normalization") {
  MultivariateGaussian g1(Vector::Zero(1), Matrix::Identity(1, 1));
  CHECK(g1.log_density(Vector::Zero(1)) ==
        Catch::Approx(-0.5 * std::log(2.0 * M_PI)).epsilon(1e-12));

  MultivariateGaussian g2(Vector::Zero(2), Matrix::Identity(2, 2));
  CHECK(g2.log_density(vec2(1.0, 1.0)) ==
        Catch::Approx(-std::log(2.0 * M_PI) - 1.0).epsilon(1e-12));

  MultivariateGaussian g3(vec2(1.0, 1.0), Matrix::Identity(2, 2));
  CHECK(g3.log_density(vec2(0.0, 0.0)) ==
        Catch::Approx(-std::log(2.0 * M_PI) - 1.0).epsilon(1e-12));
}

TEST_CASE("construction validates the covariance") {
  CHECK_THROWS_AS(MultivariateGaussian(Vector::Zero(2), Matrix::Zero(2, 2)),
                  std::invalid_argument);  // singular
  Matrix neg(1, 1);
  neg << -1.0;
  CHECK_THROWS_AS(MultivariateGaussian(Vector::Zero(1), neg),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      MultivariateGaussian(Vector::Zero(2), Matrix::Identity(2, 3)),
      std::invalid_argument);

  // asymmetry below 1e-8 is symmetrized away, above is rejected
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = 1e-9;
  MultivariateGaussian ok(Vector::Zero(2), a);
  CHECK(ok.covariance()(0, 1) == Catch::Approx(5e-10));
  CHECK(ok.covariance()(0, 1) == ok.covariance()(1, 0));
  a(0, 1) = 1e-7;
  CHECK_THROWS_AS(MultivariateGaussian(Vector::Zero(2), a),
                  std::invalid_argument);
}

TEST_CASE("sampling is deterministic per seed and hits the mean") {
  MultivariateGaussian g(Vector::Zero(2), Matrix::Identity(2, 2));

  RngStream r1(42), r2(42);
  auto s1 = g.sample(100, r1);
  auto s2 = g.sample(100, r2);
  for (int i = 0; i < 100; ++i) CHECK(s1[i] == s2[i]);

  // near-degenerate covariance collapses to the mean
  MultivariateGaussian tight(vec2(3.0, -1.0), 1e-12 * Matrix::Identity(2, 2));
  RngStream r3(7);
  for (const auto& s : tight.sample(100, r3))
    CHECK((s - vec2(3.0, -1.0)).cwiseAbs().maxCoeff() < 1e-5);

  // CLT bound: 1e5 standard-normal draws, per-coordinate mean within 0.02
  RngStream r4(11);
  Vector acc = Vector::Zero(2);
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += g.sample(r4);
  acc /= n;
  CHECK(std::abs(acc[0]) < 0.02);
  CHECK(std::abs(acc[1]) < 0.02);
}

TEST_CASE("marginal selects means and principal submatrices") {
  Vector mu(3);
  mu << 1.0, 2.0, 3.0;
  Matrix cov = Vector(vec3(4.0, 5.0, 6.0)).asDiagonal();
  MultivariateGaussian g(mu, cov);

  auto m = g.marginal({2});
  CHECK(m.dim() == 1);
  CHECK(m.mean()[0] == 3.0);
  CHECK(m.covariance()(0, 0) == 6.0);

  auto all = g.marginal({0, 1, 2});
  CHECK(all.mean() == mu);
  CHECK(all.covariance() == g.covariance());

  CHECK_THROWS_AS(g.marginal({3}), std::invalid_argument);
  CHECK_THROWS_AS(g.marginal({0, 0}), std::invalid_argument);
}

TEST_CASE("marginal covariance agrees with a sampling oracle") {
  Vector mu(3);
  mu << 0.5, -1.0, 2.0;
  Matrix cov(3, 3);
  cov << 2.0, 0.6, -0.4,
         0.6, 1.5, 0.3,
        -0.4, 0.3, 1.0;
  MultivariateGaussian g(mu, cov);
  auto m = g.marginal({0, 2});

  // sampling oracle: empirical covariance of coordinates (0,2) of g
  RngStream rng(123);
  const int n = 100000;
  Matrix sums = Matrix::Zero(2, 2);
  Vector mean_acc = Vector::Zero(2);
  std::vector<Vector> kept;
  kept.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vector x = g.sample(rng);
    kept.push_back(vec2(x[0], x[2]));
    mean_acc += kept.back();
  }
  mean_acc /= n;
  for (const auto& x : kept) sums += (x - mean_acc) * (x - mean_acc).transpose();
  Matrix emp = sums / (n - 1);

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      // 3 standard errors of a Gaussian covariance entry estimate
      const double se = std::sqrt((m.covariance()(i, i) * m.covariance()(j, j) +
                                   m.covariance()(i, j) * m.covariance()(i, j)) /
                                  n);
      CHECK(std::abs(emp(i, j) - m.covariance()(i, j)) < 3.0 * se);
    }
}

TEST_CASE("density integrates to one by quadrature") {
  MultivariateGaussian g1(Vector::Constant(1, 0.7), 1.3 * Matrix::Identity(1, 1));
  double mass1 = testutil::integrate_1d(
      [&](double x) { return g1.density(Vector::Constant(1, x)); }, -12.0, 13.0,
      4000);
  CHECK(mass1 == Catch::Approx(1.0).margin(1e-3));

  Matrix cov(2, 2);
  cov << 1.0, 0.4, 0.4, 0.8;
  MultivariateGaussian g2(vec2(0.5, -0.3), cov);
  double mass2 = testutil::integrate_2d(
      [&](double x, double y) { return g2.density(vec2(x, y)); }, -10.0, 11.0,
      -10.0, 10.0, 1200);
  CHECK(mass2 == Catch::Approx(1.0).margin(1e-3));
}

TEST_CASE("marginal commutes with sampling (KS, alpha=0.01)") {
  Vector mu(3);
  mu << 1.0, -2.0, 0.5;
  Matrix cov(3, 3);
  cov << 1.5, 0.5, 0.2,
         0.5, 2.0, -0.3,
         0.2, -0.3, 0.9;
  MultivariateGaussian g(mu, cov);
  auto m = g.marginal({1, 2});

  const int n = 10000;
  RngStream r1(2024), r2(2025);
  std::vector<double> a0, a1, b0, b1;
  for (int i = 0; i < n; ++i) {
    Vector x = m.sample(r1);
    a0.push_back(x[0]);
    a1.push_back(x[1]);
    Vector y = g.sample(r2);
    b0.push_back(y[1]);
    b1.push_back(y[2]);
  }
  CHECK(testutil::ks_statistic(a0, b0) < testutil::ks_critical(n, n));
  CHECK(testutil::ks_statistic(a1, b1) < testutil::ks_critical(n, n));
}

TEST_CASE("log density is invariant under coordinate permutation") {
  Vector mu(3);
  mu << 0.3, -1.2, 2.5;
  Matrix cov(3, 3);
  cov << 2.0, 0.7, -0.2,
         0.7, 1.1, 0.4,
        -0.2, 0.4, 1.8;
  MultivariateGaussian g(mu, cov);
  Vector x = vec3(0.9, 0.1, -0.7);

  // permutation (2, 0, 1)
  std::vector<int> perm = {2, 0, 1};
  Vector mu_p(3), x_p(3);
  Matrix cov_p(3, 3);
  for (int i = 0; i < 3; ++i) {
    mu_p[i] = mu[perm[i]];
    x_p[i] = x[perm[i]];
    for (int j = 0; j < 3; ++j) cov_p(i, j) = cov(perm[i], perm[j]);
  }
  MultivariateGaussian gp(mu_p, cov_p);
  CHECK(gp.log_density(x_p) == Catch::Approx(g.log_density(x)).epsilon(1e-12));
}
