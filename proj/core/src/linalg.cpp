#include "linalg.hpp"

#include <cmath>
#include <limits>

#include "roadocc/error.hpp"

namespace roadocc::detail {

Eigen::MatrixXd to_matrix(const SampleSet& samples) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  const auto d = static_cast<Eigen::Index>(samples.dims);
  Eigen::MatrixXd m(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = samples.values[i * d + j];
  }
  return m;
}

Eigen::VectorXd weighted_mean(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights) {
  const double total = weights.sum();
  if (!(total > 0.0)) throw NumericalError("weighted mean of zero total weight");
  return (rows.transpose() * weights) / total;
}

Eigen::MatrixXd weighted_covariance(const Eigen::MatrixXd& rows, const Eigen::VectorXd& weights,
                                    const Eigen::VectorXd& mean, double denominator) {
  const Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * weights.asDiagonal() * centered;
  cov /= denominator;
  return 0.5 * (cov + cov.transpose());
}

Regularized regularize(const Eigen::MatrixXd& cov, double fallback_trace) {
  const auto d = cov.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (condition <= kConditionLimit) return {cov, 0.0};

  double trace = cov.trace();
  if (!(trace > 0.0)) trace = fallback_trace;
  if (!(trace > 0.0)) trace = static_cast<double>(d);  // all samples identical
  double ridge = kRidgeScale * trace / static_cast<double>(d);
  // A negative eigenvalue from rounding needs to be lifted as well.
  if (lo < 0.0) ridge -= lo;
  Eigen::MatrixXd out = cov;
  out.diagonal().array() += ridge;
  return {out, ridge};
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& cov) {
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) throw NumericalError("covariance is not positive definite");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(cov.rows(), cov.cols()));
  return 0.5 * (inv + inv.transpose());
}

std::vector<double> to_vector(const Eigen::MatrixXd& m) {
  std::vector<double> out(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  }
  return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::MatrixXd to_square(const std::vector<double>& values, std::size_t d) {
  Eigen::MatrixXd m(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m(i, j) = values[i * d + j];
  }
  return m;
}

}  // namespace roadocc::detail
