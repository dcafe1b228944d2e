#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>

#include "clustering.hpp"
#include "linalg.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {
namespace detail {
namespace {

struct Nearest {
  std::size_t index;
  double distance2;
};

Nearest nearest_center(std::span<const double> x, const std::vector<double>& centers,
                       std::size_t dims) {
  Nearest best{0, std::numeric_limits<double>::infinity()};
  const std::size_t k = centers.size() / dims;
  for (std::size_t j = 0; j < k; ++j) {
    const double d2 = squared_distance(x, {centers.data() + j * dims, dims});
    if (d2 < best.distance2) best = {j, d2};
  }
  return best;
}

// Index of the sample farthest from its nearest center (lowest index on ties).
std::size_t farthest_sample(const SampleSet& samples, const std::vector<double>& centers) {
  std::size_t best = 0;
  double best_d2 = -1.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d2 = nearest_center(samples.row(i), centers, samples.dims).distance2;
    if (d2 > best_d2) {
      best = i;
      best_d2 = d2;
    }
  }
  return best;
}

}  // namespace

LloydResult lloyd(const SampleSet& samples, std::size_t k, std::uint64_t seed,
                  int max_iterations) {
  const std::size_t n = samples.size();
  const std::size_t d = samples.dims;
  if (k == 0 || k > n) {
    throw ConfigError("k-means needs 1 <= k <= N (k=" + std::to_string(k) +
                      ", N=" + std::to_string(n) + ")");
  }
  LloydResult result;
  std::mt19937_64 rng(seed);
  const std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  auto first_row = samples.row(first);
  result.centers.assign(first_row.begin(), first_row.end());
  while (result.centers.size() < k * d) {
    auto row = samples.row(farthest_sample(samples, result.centers));
    result.centers.insert(result.centers.end(), row.begin(), row.end());
  }

  result.assignment.assign(n, 0);
  std::vector<double> sums(k * d);
  std::vector<std::size_t> counts(k);
  for (int iter = 0; iter < max_iterations; ++iter) {
    double objective = 0.0;
    bool changed = iter == 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Nearest nc = nearest_center(samples.row(i), result.centers, d);
      objective += nc.distance2;
      if (nc.index != result.assignment[i]) changed = true;
      result.assignment[i] = nc.index;
    }
    result.objective_history.push_back(objective);
    if (!changed) break;

    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = samples.row(i);
      const std::size_t j = result.assignment[i];
      ++counts[j];
      for (std::size_t c = 0; c < d; ++c) sums[j * d + c] += r[c];
    }
    std::vector<std::size_t> empty;
    for (std::size_t j = 0; j < k; ++j) {
      if (counts[j] == 0) {
        empty.push_back(j);
        continue;
      }
      for (std::size_t c = 0; c < d; ++c) {
        result.centers[j * d + c] = sums[j * d + c] / static_cast<double>(counts[j]);
      }
    }
    for (std::size_t j : empty) {
      auto row = samples.row(farthest_sample(samples, result.centers));
      std::copy(row.begin(), row.end(), result.centers.begin() + static_cast<std::ptrdiff_t>(j * d));
    }
  }
  return result;
}

}  // namespace detail

CenterModel CenterModel::fit_kmeans(const SampleSet& samples, int k, std::uint64_t seed,
                                    int max_iterations) {
  if (k <= 0) throw ConfigError("k must be positive");
  auto result = detail::lloyd(samples, static_cast<std::size_t>(k), seed, max_iterations);
  CenterModel model;
  model.kind_ = ClassifierKind::km;
  model.dims_ = samples.dims;
  model.centers_ = std::move(result.centers);
  model.objective_history_ = std::move(result.objective_history);
  return model;
}

CenterModel CenterModel::fit_kcenter(const SampleSet& samples, int k) {
  const std::size_t n = samples.size();
  const std::size_t d = samples.dims;
  if (k <= 0 || static_cast<std::size_t>(k) > n) {
    throw ConfigError("k-centers needs 1 <= k <= N (k=" + std::to_string(k) +
                      ", N=" + std::to_string(n) + ")");
  }
  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += samples.row(i)[c];
  }
  for (double& m : mean) m /= static_cast<double>(n);

  // Gonzalez farthest-first traversal seeded at the sample nearest the mean.
  std::size_t first = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double d2 = detail::squared_distance(samples.row(i), mean);
    if (d2 < best) {
      best = d2;
      first = i;
    }
  }
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  CenterModel model;
  model.kind_ = ClassifierKind::kc;
  model.dims_ = d;
  std::size_t next = first;
  for (int j = 0; j < k; ++j) {
    model.center_indices_.push_back(next);
    const auto row = samples.row(next);
    model.centers_.insert(model.centers_.end(), row.begin(), row.end());
    std::size_t far = 0;
    double far_d2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], detail::squared_distance(samples.row(i), row));
      if (nearest[i] > far_d2) {
        far_d2 = nearest[i];
        far = i;
      }
    }
    next = far;
  }
  model.covering_radius_ = std::sqrt(*std::max_element(nearest.begin(), nearest.end()));
  return model;
}

double CenterModel::min_squared_distance(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < center_count(); ++j) {
    best = std::min(best, detail::squared_distance(x, center(j)));
  }
  return best;
}

void CenterModel::write(std::ostream& os) const {
  detail::put(os, "dims", std::uint64_t{dims_});
  detail::put(os, "centers", centers_);
  detail::put(os, "objective", objective_history_);
  std::vector<std::uint64_t> indices(center_indices_.begin(), center_indices_.end());
  detail::put(os, "indices", indices);
  detail::put(os, "radius", covering_radius_);
}

CenterModel CenterModel::read(std::istream& is, ClassifierKind kind) {
  CenterModel model;
  model.kind_ = kind;
  model.dims_ = detail::get_uint(is, "dims");
  model.centers_ = detail::get_doubles(is, "centers");
  model.objective_history_ = detail::get_doubles(is, "objective");
  const auto indices = detail::get_uints(is, "indices");
  model.center_indices_.assign(indices.begin(), indices.end());
  model.covering_radius_ = detail::get_double(is, "radius");
  if (model.dims_ == 0 || model.centers_.size() % model.dims_ != 0) {
    throw ParseError("center model record has inconsistent sizes", 0);
  }
  return model;
}

}  // namespace roadocc
