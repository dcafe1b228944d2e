#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include "linalg.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {
namespace {

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  Eigen::MatrixXd inv;
  double ridge = 0.0;
};

Moments fit_support(const Eigen::MatrixXd& rows, const std::vector<std::size_t>& support,
                    double fallback_trace) {
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(rows.rows());
  for (auto i : support) weights(static_cast<Eigen::Index>(i)) = 1.0;
  Moments m;
  m.mean = detail::weighted_mean(rows, weights);
  // Unbiased estimate over the retained samples.
  const double denom = std::max(1.0, static_cast<double>(support.size()) - 1.0);
  auto reg = detail::regularize(detail::weighted_covariance(rows, weights, m.mean, denom),
                                fallback_trace);
  m.cov = std::move(reg.cov);
  m.ridge = reg.ridge;
  m.inv = detail::spd_inverse(m.cov);
  return m;
}

// The `keep` samples with the smallest Mahalanobis distance (ties by
// index), in ascending index order.
std::vector<std::size_t> trim(const Eigen::MatrixXd& rows, const Moments& m, std::size_t keep) {
  const auto n = static_cast<std::size_t>(rows.rows());
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd diff = rows.row(static_cast<Eigen::Index>(i)).transpose() - m.mean;
    dist[i] = diff.dot(m.inv * diff);
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

}  // namespace

double GaussianModel::mahalanobis(std::span<const double> x) const {
  return std::max(0.0, detail::quadratic_form(x, mean_, inv_cov_));
}

GaussianModel GaussianModel::fit(const SampleSet& samples, double rejection) {
  return fit_trimmed(samples, rejection, 2, ClassifierKind::G);
}

GaussianModel GaussianModel::fit_robust(const SampleSet& samples, double rejection,
                                        int max_iterations) {
  return fit_trimmed(samples, rejection, max_iterations, ClassifierKind::RG);
}

GaussianModel GaussianModel::fit_trimmed(const SampleSet& samples, double rejection,
                                         int max_iterations, ClassifierKind kind) {
  const std::size_t n = samples.size();
  const std::size_t d = samples.dims;
  if (d == 0 || n <= d) {
    throw ConfigError("Gaussian fit needs more samples (" + std::to_string(n) +
                      ") than dimensions (" + std::to_string(d) + ")");
  }
  if (!(rejection >= 0.0 && rejection < 0.5)) throw ConfigError("rejection must lie in [0, 0.5)");
  if (max_iterations < 1) throw ConfigError("max_iterations must be positive");

  const Eigen::MatrixXd rows = detail::to_matrix(samples);
  const auto rejected = static_cast<std::size_t>(std::floor(rejection * static_cast<double>(n) + 1e-9));
  const std::size_t keep = std::max(n - rejected, d + 1);

  // Iteration 1 is the plain ML fit; each further iteration refits on the
  // samples closest to the current estimate until the support repeats.
  std::vector<std::size_t> support(n);
  std::iota(support.begin(), support.end(), 0);
  Moments m = fit_support(rows, support, 0.0);
  const double pooled_trace = m.cov.trace();
  int iterations = 1;
  while (iterations < max_iterations && keep < n) {
    auto next = trim(rows, m, keep);
    if (next == support) break;
    support = std::move(next);
    m = fit_support(rows, support, pooled_trace);
    ++iterations;
  }

  GaussianModel model;
  model.kind_ = kind;
  model.mean_ = detail::to_vector(m.mean);
  model.cov_ = detail::to_vector(m.cov);
  model.inv_cov_ = detail::to_vector(m.inv);
  model.ridge_ = m.ridge;
  model.iterations_ = iterations;
  model.support_size_ = support.size();
  return model;
}

void GaussianModel::write(std::ostream& os) const {
  detail::put(os, "mean", mean_);
  detail::put(os, "cov", cov_);
  detail::put(os, "inv", inv_cov_);
  detail::put(os, "ridge", ridge_);
  detail::put(os, "iterations", static_cast<std::uint64_t>(iterations_));
  detail::put(os, "support", std::uint64_t{support_size_});
}

GaussianModel GaussianModel::read(std::istream& is, ClassifierKind kind) {
  GaussianModel model;
  model.kind_ = kind;
  model.mean_ = detail::get_doubles(is, "mean");
  model.cov_ = detail::get_doubles(is, "cov");
  model.inv_cov_ = detail::get_doubles(is, "inv");
  model.ridge_ = detail::get_double(is, "ridge");
  model.iterations_ = static_cast<int>(detail::get_uint(is, "iterations"));
  model.support_size_ = detail::get_uint(is, "support");
  if (model.cov_.size() != model.mean_.size() * model.mean_.size() ||
      model.inv_cov_.size() != model.cov_.size()) {
    throw ParseError("Gaussian model record has inconsistent sizes", 0);
  }
  return model;
}

}  // namespace roadocc
