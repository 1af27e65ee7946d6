#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "accelev/common.hpp"

namespace accelev {

// Explicit polynomial feature function phi: R^n -> R^m over all monomials of
// total degree 1..d (constant excluded), so m = C(n+d, d) - 1.
//
// Monomial order: descending total degree; within a degree, descending
// exponent pattern (squares before cross terms), then lexicographic. The
// degree-1 monomials therefore come last, in coordinate order, and
// phi(x) ends with (x_1, ..., x_n). For n=2, d=2 this realizes
// (x^2, y^2, xy, x, y).
class PolynomialFeatureMap {
 public:
  PolynomialFeatureMap(int input_dim, int degree)
      : input_dim_(input_dim), degree_(degree) {
    require(input_dim >= 1, "feature map: input_dim must be positive");
    require(degree >= 1, "feature map: degree must be positive");
    std::vector<int> exp(input_dim, 0);
    enumerate(exp, 0, degree);
    std::sort(exponents_.begin(), exponents_.end(), MonomialOrder{});
    // trailing block sanity: last n entries are the unit exponents in order
    for (int i = 0; i < input_dim_; ++i) {
      const auto& e = exponents_[exponents_.size() - input_dim_ + i];
      bool unit = e[i] == 1 && std::accumulate(e.begin(), e.end(), 0) == 1;
      require(unit, "feature map: internal ordering failure");
    }
  }

  int input_dim() const { return input_dim_; }
  int degree() const { return degree_; }
  int output_dim() const { return static_cast<int>(exponents_.size()); }
  const std::vector<std::vector<int>>& exponents() const { return exponents_; }

  Vector apply(const Vector& x) const {
    require(x.size() == input_dim_, "feature map: point dimension mismatch");
    Vector out(output_dim());
    for (int j = 0; j < output_dim(); ++j) {
      double v = 1.0;
      for (int i = 0; i < input_dim_; ++i)
        for (int r = 0; r < exponents_[j][i]; ++r) v *= x[i];
      out[j] = v;
    }
    return out;
  }

  std::vector<Vector> apply(const std::vector<Vector>& xs) const {
    std::vector<Vector> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(apply(x));
    return out;
  }

  // indices (m-n, ..., m-1) of the degree-1 block
  std::vector<int> linear_block_indices() const {
    std::vector<int> idx(input_dim_);
    std::iota(idx.begin(), idx.end(), output_dim() - input_dim_);
    return idx;
  }

 private:
  struct MonomialOrder {
    bool operator()(const std::vector<int>& a, const std::vector<int>& b) const {
      int da = std::accumulate(a.begin(), a.end(), 0);
      int db = std::accumulate(b.begin(), b.end(), 0);
      if (da != db) return da > db;
      std::vector<int> pa = a, pb = b;
      std::sort(pa.rbegin(), pa.rend());
      std::sort(pb.rbegin(), pb.rend());
      if (pa != pb) return pa > pb;
      return a > b;
    }
  };

  void enumerate(std::vector<int>& exp, int pos, int budget) {
    if (pos == input_dim_) {
      if (budget < degree_) exponents_.push_back(exp);  // total degree >= 1
      return;
    }
    for (int e = 0; e <= budget; ++e) {
      exp[pos] = e;
      enumerate(exp, pos + 1, budget - e);
    }
    exp[pos] = 0;
  }

  int input_dim_;
  int degree_;
  std::vector<std::vector<int>> exponents_;
};

}  // namespace accelev
