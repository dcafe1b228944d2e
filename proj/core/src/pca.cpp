#include <algorithm>
#include <istream>
#include <ostream>

#include "linalg.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {

PcaModel PcaModel::fit(const SampleSet& samples, double energy) {
  const std::size_t d = samples.dims;
  if (d < 2) {
    throw UnsupportedDimensionError("PCA needs at least two feature dimensions, got " +
                                    std::to_string(d));
  }
  if (samples.size() < 2) throw ConfigError("PCA needs at least two samples");
  if (!(energy > 0.0 && energy <= 1.0)) throw ConfigError("PCA energy must lie in (0, 1]");

  const Eigen::MatrixXd rows = detail::to_matrix(samples);
  const auto n = static_cast<double>(samples.size());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rows.rows());
  const Eigen::VectorXd mean = detail::weighted_mean(rows, ones);
  const Eigen::MatrixXd cov = detail::weighted_covariance(rows, ones, mean, n - 1.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw NumericalError("PCA eigendecomposition failed");
  // Eigen returns ascending order.
  const Eigen::VectorXd values = eig.eigenvalues().reverse().cwiseMax(0.0);
  const Eigen::MatrixXd vectors = eig.eigenvectors().rowwise().reverse();
  const double total = values.sum();

  std::size_t m = 0;
  double kept = 0.0;
  while (m < d - 1) {
    kept += values(static_cast<Eigen::Index>(m));
    ++m;
    if (total <= 0.0 || kept >= energy * total) break;
  }

  PcaModel model;
  model.mean_ = detail::to_vector(mean);
  model.basis_count_ = m;
  model.basis_.resize(m * d);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      model.basis_[j * d + i] =
          vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  model.eigenvalues_ = detail::to_vector(values);
  model.retained_energy_ = total > 0.0 ? kept / total : 1.0;
  return model;
}

double PcaModel::reconstruction_error(std::span<const double> x) const {
  const std::size_t d = mean_.size();
  if (x.size() != d) throw DimensionError("feature", "PCA input width mismatch");
  std::vector<double> centered(d);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    centered[i] = x[i] - mean_[i];
    norm2 += centered[i] * centered[i];
  }
  double projected = 0.0;
  for (std::size_t j = 0; j < basis_count_; ++j) {
    double dot = 0.0;
    for (std::size_t i = 0; i < d; ++i) dot += basis_[j * d + i] * centered[i];
    projected += dot * dot;
  }
  return std::max(0.0, norm2 - projected);
}

void PcaModel::write(std::ostream& os) const {
  detail::put(os, "mean", mean_);
  detail::put(os, "basis_count", std::uint64_t{basis_count_});
  detail::put(os, "basis", basis_);
  detail::put(os, "eigenvalues", eigenvalues_);
  detail::put(os, "retained", retained_energy_);
}

PcaModel PcaModel::read(std::istream& is) {
  PcaModel model;
  model.mean_ = detail::get_doubles(is, "mean");
  model.basis_count_ = detail::get_uint(is, "basis_count");
  model.basis_ = detail::get_doubles(is, "basis");
  model.eigenvalues_ = detail::get_doubles(is, "eigenvalues");
  model.retained_energy_ = detail::get_double(is, "retained");
  if (model.basis_.size() != model.basis_count_ * model.mean_.size()) {
    throw ParseError("PCA record has inconsistent sizes", 0);
  }
  return model;
}

}  // namespace roadocc
