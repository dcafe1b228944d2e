#pragma once

// Eigen-backed helpers shared by the covariance-based classifiers.

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "roadocc/sampling.hpp"

namespace roadocc::detail {

inline constexpr double kConditionLimit = 1e10;
inline constexpr double kRidgeScale = 1e-6;

Eigen::MatrixXd to_matrix(const SampleSet& samples);

Eigen::VectorXd weighted_mean(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights);

/// Weighted covariance sum_i w_i (x_i - m)(x_i - m)^T / denominator.
Eigen::MatrixXd weighted_covariance(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights,
                                    const Eigen::VectorXd& mean, double denominator);

struct Regularized {
  Eigen::MatrixXd cov;
  double ridge = 0.0;
};

/// Adds lambda I with lambda = 1e-6 trace(S)/d when the condition number
/// exceeds 1e10 (or S is not positive definite). fallback_trace replaces a
/// vanishing trace.
Regularized regularize(const Eigen::MatrixXd& cov, double fallback_trace);

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& cov);

std::vector<double> to_vector(const Eigen::MatrixXd& m);
std::vector<double> to_vector(const Eigen::VectorXd& v);
Eigen::MatrixXd to_square(const std::vector<double>& values, std::size_t d);

/// (x - mean)^T inv (x - mean) with inv stored row-major d x d.
inline double quadratic_form(std::span<const double> x, const std::vector<double>& mean,
                             const std::vector<double>& inv) {
  const std::size_t d = mean.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double di = x[i] - mean[i];
    double row = 0.0;
    for (std::size_t j = 0; j < d; ++j) row += inv[i * d + j] * (x[j] - mean[j]);
    acc += di * row;
  }
  return acc;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace roadocc::detail
