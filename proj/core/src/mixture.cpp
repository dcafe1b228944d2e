#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>

#include "clustering.hpp"
#include "linalg.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {
namespace {

constexpr int kMaxReseeds = 10;

struct WorkComponent {
  double weight = 0.0;
  std::vector<double> mean;
  Eigen::MatrixXd cov;
  std::vector<double> inv;
  double log_det = 0.0;
  double ridge = 0.0;
};

void set_covariance(WorkComponent& comp, const Eigen::MatrixXd& cov, double fallback_trace) {
  auto reg = detail::regularize(cov, fallback_trace);
  Eigen::LLT<Eigen::MatrixXd> llt(reg.cov);
  if (llt.info() != Eigen::Success) throw NumericalError("mixture covariance is not positive definite");
  comp.cov = reg.cov;
  comp.ridge = reg.ridge;
  comp.inv = detail::to_vector(detail::spd_inverse(reg.cov));
  comp.log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

struct EStep {
  double log_likelihood = 0.0;
  std::vector<double> resp;  // N x K
};

EStep expectation(const SampleSet& samples, const std::vector<WorkComponent>& comps) {
  const std::size_t n = samples.size();
  const std::size_t k = comps.size();
  const double log_norm = static_cast<double>(samples.dims) * std::log(2.0 * std::numbers::pi);
  EStep out;
  out.resp.resize(n * k);
  std::vector<double> offset(k);
  for (std::size_t j = 0; j < k; ++j) {
    offset[j] = std::log(comps[j].weight) - 0.5 * (log_norm + comps[j].log_det);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = samples.row(i);
    double* lp = out.resp.data() + i * k;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < k; ++j) {
      lp[j] = offset[j] - 0.5 * detail::quadratic_form(x, comps[j].mean, comps[j].inv);
      top = std::max(top, lp[j]);
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      lp[j] = std::exp(lp[j] - top);
      sum += lp[j];
    }
    out.log_likelihood += top + std::log(sum);
    for (std::size_t j = 0; j < k; ++j) lp[j] /= sum;
  }
  return out;
}

// Sample farthest (Euclidean) from every current mean.
std::size_t farthest_from_means(const SampleSet& samples, const std::vector<WorkComponent>& comps) {
  std::size_t best = 0;
  double best_d2 = -1.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& c : comps) nearest = std::min(nearest, detail::squared_distance(samples.row(i), c.mean));
    if (nearest > best_d2) {
      best_d2 = nearest;
      best = i;
    }
  }
  return best;
}

std::size_t parameter_count(std::size_t k, std::size_t d) {
  return k * (d + d * (d + 1) / 2) + (k - 1);
}

}  // namespace

MixtureModel MixtureModel::fit(const SampleSet& samples, int components, std::uint64_t seed,
                               FitOptions options) {
  const std::size_t n = samples.size();
  const std::size_t d = samples.dims;
  if (components <= 0) throw ConfigError("mixture needs at least one component");
  const auto k = static_cast<std::size_t>(components);
  if (n < 5 * k) {
    throw ConfigError("mixture of " + std::to_string(k) + " components needs at least " +
                      std::to_string(5 * k) + " samples, got " + std::to_string(n));
  }

  const Eigen::MatrixXd rows = detail::to_matrix(samples);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  const Eigen::VectorXd global_mean = detail::weighted_mean(rows, ones);
  const Eigen::MatrixXd global_cov =
      detail::weighted_covariance(rows, ones, global_mean, static_cast<double>(n));
  const double global_trace = global_cov.trace();

  // k-means start: hard assignments give the initial weights and moments.
  const auto init = detail::lloyd(samples, k, seed, 100);
  std::vector<WorkComponent> comps(k);
  for (std::size_t j = 0; j < k; ++j) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      if (init.assignment[i] == j) w(static_cast<Eigen::Index>(i)) = 1.0;
    }
    const double count = w.sum();
    comps[j].mean.assign(init.centers.begin() + static_cast<std::ptrdiff_t>(j * d),
                         init.centers.begin() + static_cast<std::ptrdiff_t>((j + 1) * d));
    comps[j].weight = std::max(count, 1.0) / static_cast<double>(n);
    if (count >= 2.0) {
      Eigen::Map<const Eigen::VectorXd> mu(comps[j].mean.data(), static_cast<Eigen::Index>(d));
      set_covariance(comps[j], detail::weighted_covariance(rows, w, mu, count), global_trace);
    } else {
      set_covariance(comps[j], global_cov, global_trace);
    }
  }
  {
    double total = 0.0;
    for (const auto& c : comps) total += c.weight;
    for (auto& c : comps) c.weight /= total;
  }

  MixtureModel model;
  model.dims_ = d;
  EStep e = expectation(samples, comps);
  double previous = e.log_likelihood;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // M-step.
    for (std::size_t j = 0; j < k; ++j) {
      Eigen::VectorXd r(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) r(static_cast<Eigen::Index>(i)) = e.resp[i * k + j];
      const double nj = r.sum();
      bool collapsed = nj < 1.0;
      if (!collapsed) {
        const Eigen::VectorXd mu = detail::weighted_mean(rows, r);
        const Eigen::MatrixXd cov = detail::weighted_covariance(rows, r, mu, nj);
        collapsed = cov.trace() <= 1e-12 * global_trace && model.reseeds_ < kMaxReseeds;
        if (!collapsed) {
          comps[j].mean = detail::to_vector(mu);
          comps[j].weight = nj / static_cast<double>(n);
          set_covariance(comps[j], cov, global_trace);
        }
      }
      if (collapsed) {
        const auto row = samples.row(farthest_from_means(samples, comps));
        comps[j].mean.assign(row.begin(), row.end());
        comps[j].weight = 1.0 / static_cast<double>(n);
        set_covariance(comps[j], global_cov, global_trace);
        ++model.reseeds_;
      }
    }
    double total = 0.0;
    for (const auto& c : comps) total += c.weight;
    for (auto& c : comps) c.weight /= total;
    ++model.iterations_;

    e = expectation(samples, comps);
    const double change = std::abs(e.log_likelihood - previous) / static_cast<double>(n);
    previous = e.log_likelihood;
    if (change < options.tolerance) break;
  }

  model.log_likelihood_ = e.log_likelihood;
  model.bic_ = -2.0 * e.log_likelihood +
               static_cast<double>(parameter_count(k, d)) * std::log(static_cast<double>(n));
  for (auto& c : comps) {
    model.components_.push_back(
        {c.weight, std::move(c.mean), detail::to_vector(c.cov), std::move(c.inv), c.ridge});
  }
  return model;
}

MixtureModel MixtureModel::fit_best_bic(const SampleSet& samples, int max_components,
                                        std::uint64_t seed) {
  if (max_components <= 0) throw ConfigError("max_components must be positive");
  std::optional<MixtureModel> best;
  for (int k = 1; k <= max_components; ++k) {
    if (samples.size() < 5 * static_cast<std::size_t>(k)) break;
    MixtureModel candidate = fit(samples, k, seed + static_cast<std::uint64_t>(k));
    if (!best || candidate.bic() < best->bic()) best = std::move(candidate);
  }
  if (!best) throw ConfigError("too few samples for a mixture model");
  return std::move(*best);
}

double MixtureModel::score(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& c : components_) {
    sum += c.weight * std::exp(-std::max(0.0, detail::quadratic_form(x, c.mean, c.inv_cov)));
  }
  return std::clamp(sum, 0.0, 1.0);
}

void MixtureModel::write(std::ostream& os) const {
  detail::put(os, "dims", std::uint64_t{dims_});
  detail::put(os, "components", std::uint64_t{components_.size()});
  for (const auto& c : components_) {
    detail::put(os, "weight", c.weight);
    detail::put(os, "mean", c.mean);
    detail::put(os, "cov", c.cov);
    detail::put(os, "inv", c.inv_cov);
    detail::put(os, "ridge", c.ridge);
  }
  detail::put(os, "iterations", static_cast<std::uint64_t>(iterations_));
  detail::put(os, "reseeds", static_cast<std::uint64_t>(reseeds_));
  detail::put(os, "loglik", log_likelihood_);
  detail::put(os, "bic", bic_);
}

MixtureModel MixtureModel::read(std::istream& is) {
  MixtureModel model;
  model.dims_ = detail::get_uint(is, "dims");
  const auto count = detail::get_uint(is, "components");
  for (std::uint64_t j = 0; j < count; ++j) {
    Component c;
    c.weight = detail::get_double(is, "weight");
    c.mean = detail::get_doubles(is, "mean");
    c.cov = detail::get_doubles(is, "cov");
    c.inv_cov = detail::get_doubles(is, "inv");
    c.ridge = detail::get_double(is, "ridge");
    if (c.mean.size() != model.dims_ || c.inv_cov.size() != model.dims_ * model.dims_) {
      throw ParseError("mixture record has inconsistent sizes", 0);
    }
    model.components_.push_back(std::move(c));
  }
  model.iterations_ = static_cast<int>(detail::get_uint(is, "iterations"));
  model.reseeds_ = static_cast<int>(detail::get_uint(is, "reseeds"));
  model.log_likelihood_ = detail::get_double(is, "loglik");
  model.bic_ = detail::get_double(is, "bic");
  return model;
}

}  // namespace roadocc
