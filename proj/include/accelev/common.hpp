#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace accelev {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Scenario/pipeline errors map to distinct CLI exit codes; argument errors
// use std::invalid_argument throughout.
struct config_error : std::runtime_error {
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct training_error : std::runtime_error {
  explicit training_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct fitting_error : std::runtime_error {
  explicit fitting_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct estimation_error : std::runtime_error {
  explicit estimation_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct oracle_error : std::runtime_error {
  explicit oracle_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Axis-aligned box domain.
struct Box {
  Vector lower;
  Vector upper;

  int dim() const { return static_cast<int>(lower.size()); }

  bool contains(const Vector& x) const {
    if (x.size() != lower.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      if (x[i] < lower[i] || x[i] > upper[i]) return false;
    }
    return true;
  }

  // true when lower < upper on every axis
  bool valid() const {
    if (lower.size() != upper.size() || lower.size() == 0) return false;
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
      if (!(lower[i] < upper[i])) return false;
    }
    return true;
  }
};

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace accelev
