#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "linalg.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {
namespace {

double logistic(double t) {
  return t >= 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t));
}

}  // namespace

MinimaxModel MinimaxModel::from_moments(std::span<const double> mean, std::span<const double> cov) {
  const std::size_t d = mean.size();
  if (d == 0 || cov.size() != d * d) throw DimensionError("feature", "MPM moment sizes disagree");
  const Eigen::Map<const Eigen::VectorXd> m(mean.data(), static_cast<Eigen::Index>(d));
  const Eigen::MatrixXd s = detail::to_square(std::vector<double>(cov.begin(), cov.end()), d);
  const auto reg = detail::regularize(s, s.trace());
  const Eigen::VectorXd sm = detail::spd_inverse(reg.cov) * m;
  const double denom = m.dot(sm);
  if (!(denom > 1e-300) || !std::isfinite(denom)) {
    throw NumericalError("MPM is undefined for a mean at the origin");
  }
  MinimaxModel model;
  model.w_ = detail::to_vector(Eigen::VectorXd(sm / denom));
  model.ridge_ = reg.ridge;
  return model;
}

MinimaxModel MinimaxModel::fit(const SampleSet& samples, double rejection) {
  const std::size_t n = samples.size();
  if (n < 2) throw ConfigError("MPM needs at least two samples");
  if (!(rejection >= 0.0 && rejection < 1.0)) throw ConfigError("MPM rejection must lie in [0, 1)");

  const Eigen::MatrixXd rows = detail::to_matrix(samples);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(rows.rows());
  const Eigen::VectorXd mean = detail::weighted_mean(rows, ones);
  const Eigen::MatrixXd cov =
      detail::weighted_covariance(rows, ones, mean, static_cast<double>(n) - 1.0);
  const std::vector<double> mean_v = detail::to_vector(mean);
  const std::vector<double> cov_v = detail::to_vector(cov);
  MinimaxModel model = from_moments(mean_v, cov_v);

  std::vector<double> train(n);
  for (std::size_t i = 0; i < n; ++i) train[i] = model.raw_score(samples.row(i));
  std::sort(train.begin(), train.end());
  const auto index = static_cast<std::size_t>(std::floor(rejection * static_cast<double>(n)));
  model.offset_ = train[std::min(index, n - 1)];
  return model;
}

double MinimaxModel::raw_score(std::span<const double> x) const {
  if (x.size() != w_.size()) throw DimensionError("feature", "MPM input width mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < w_.size(); ++i) acc += w_[i] * x[i];
  return acc;
}

double MinimaxModel::score(std::span<const double> x) const {
  return logistic(raw_score(x) - offset_);
}

void MinimaxModel::write(std::ostream& os) const {
  detail::put(os, "w", w_);
  detail::put(os, "offset", offset_);
  detail::put(os, "ridge", ridge_);
}

MinimaxModel MinimaxModel::read(std::istream& is) {
  MinimaxModel model;
  model.w_ = detail::get_doubles(is, "w");
  model.offset_ = detail::get_double(is, "offset");
  model.ridge_ = detail::get_double(is, "ridge");
  if (model.w_.empty()) throw ParseError("MPM record has no direction", 0);
  return model;
}

}  // namespace roadocc
