#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "linalg.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {
namespace {

double median_pairwise_distance(const SampleSet& samples) {
  std::vector<double> dist;
  const std::size_t n = samples.size();
  dist.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      dist.push_back(std::sqrt(detail::squared_distance(samples.row(i), samples.row(j))));
    }
  }
  if (dist.empty()) return 1.0;
  const auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  double h = *mid;
  if (dist.size() % 2 == 0) {
    const double below = *std::max_element(dist.begin(), mid);
    h = 0.5 * (h + below);
  }
  if (h > 0.0) return h;
  const double widest = *std::max_element(dist.begin(), dist.end());
  return widest > 0.0 ? widest : 1.0;
}

}  // namespace

double SvddModel::kernel(std::span<const double> x, std::span<const double> y) const {
  if (kernel_ == SvddKernel::linear) {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
    return dot;
  }
  return std::exp(-detail::squared_distance(x, y) / (bandwidth_ * bandwidth_));
}

// Dual: minimize a^T K a - sum_i a_i K_ii  s.t. sum a = 1, 0 <= a <= C.
// SMO on maximal violating pairs.
SvddModel SvddModel::fit(const SampleSet& samples, FitOptions options) {
  const std::size_t n = samples.size();
  if (n == 0) throw ConfigError("SVDD needs at least one sample");
  if (!(options.nu > 0.0 && options.nu <= 1.0)) throw ConfigError("SVDD nu must lie in (0, 1]");
  if (options.bandwidth < 0.0) throw ConfigError("SVDD bandwidth must be non-negative");

  SvddModel model;
  model.dims_ = samples.dims;
  model.kernel_ = options.kernel;
  model.rows_ = samples.values;
  model.c_ = options.c > 0.0 ? options.c : 1.0 / (options.nu * static_cast<double>(n));
  model.c_ = std::min(model.c_, 1.0);
  if (model.c_ * static_cast<double>(n) < 1.0 - 1e-12) {
    throw ConfigError("SVDD C is below 1/N, the dual is infeasible");
  }
  model.bandwidth_ = options.kernel == SvddKernel::rbf
                         ? (options.bandwidth > 0.0 ? options.bandwidth : median_pairwise_distance(samples))
                         : 1.0;

  const double c = model.c_;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = model.kernel(samples.row(i), samples.row(i));

  // Feasible start: fill coefficients with C in index order.
  std::vector<double> alpha(n, 0.0);
  double remaining = 1.0;
  for (std::size_t i = 0; i < n && remaining > 0.0; ++i) {
    alpha[i] = std::min(c, remaining);
    remaining -= alpha[i];
  }

  std::vector<double> grad(n);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] != 0.0) acc += alpha[i] * model.kernel(samples.row(k), samples.row(i));
    }
    grad[k] = 2.0 * acc - diag[k];
  }

  const double tiny = 1e-12 * c;
  long iter = 0;
  double violation = 0.0;
  for (;; ++iter) {
    std::size_t up = n, low = n;
    double g_up = std::numeric_limits<double>::infinity();
    double g_low = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
      if (alpha[k] < c - tiny && grad[k] < g_up) {
        g_up = grad[k];
        up = k;
      }
      if (alpha[k] > tiny && grad[k] > g_low) {
        g_low = grad[k];
        low = k;
      }
    }
    violation = (up == n || low == n) ? 0.0 : std::max(0.0, g_low - g_up);
    if (violation <= options.tolerance) break;
    if (iter >= options.max_iterations) {
      throw ConvergenceError("SVDD solver hit the iteration limit", violation);
    }

    const double k_ul = model.kernel(samples.row(up), samples.row(low));
    const double curvature = 2.0 * (diag[up] + diag[low] - 2.0 * k_ul);
    const double cap = std::min(c - alpha[up], alpha[low]);
    double t = curvature > 1e-15 ? (g_low - g_up) / curvature : cap;
    t = std::clamp(t, 0.0, cap);
    alpha[up] += t;
    alpha[low] -= t;
    if (alpha[low] < tiny) alpha[low] = 0.0;
    if (alpha[up] > c - tiny) alpha[up] = c;
    for (std::size_t k = 0; k < n; ++k) {
      grad[k] += 2.0 * t *
                 (model.kernel(samples.row(k), samples.row(up)) -
                  model.kernel(samples.row(k), samples.row(low)));
    }
  }
  model.iterations_ = iter;
  model.kkt_violation_ = violation;

  // a^T K a from the gradient: (K a)_k = (g_k + K_kk) / 2.
  double aka = 0.0;
  for (std::size_t k = 0; k < n; ++k) aka += alpha[k] * 0.5 * (grad[k] + diag[k]);
  model.alpha_k_alpha_ = aka;
  model.alpha_ = std::move(alpha);

  // Training distances: d_k^2 = K_kk - 2 (K a)_k + aKa = aKa - g_k.
  const double edge = 1e-9 * c;
  double sum = 0.0;
  std::size_t count = 0;
  double inside_max = -std::numeric_limits<double>::infinity();
  double bounded_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const double d2 = aka - grad[k];
    const double a = model.alpha_[k];
    if (a > edge && a < c - edge) {
      sum += d2;
      ++count;
    } else if (a <= edge) {
      inside_max = std::max(inside_max, d2);
    } else {
      bounded_min = std::min(bounded_min, d2);
    }
  }
  if (count > 0) {
    model.radius2_ = sum / static_cast<double>(count);
  } else if (std::isfinite(inside_max) && std::isfinite(bounded_min)) {
    model.radius2_ = 0.5 * (inside_max + bounded_min);
  } else {
    model.radius2_ = std::isfinite(inside_max) ? inside_max : bounded_min;
  }
  model.radius2_ = std::max(0.0, model.radius2_);
  return model;
}

double SvddModel::center_distance2(std::span<const double> x) const {
  if (x.size() != dims_) throw DimensionError("feature", "SVDD input width mismatch");
  double cross = 0.0;
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    if (alpha_[i] != 0.0) cross += alpha_[i] * kernel(x, training_row(i));
  }
  return std::max(0.0, kernel(x, x) - 2.0 * cross + alpha_k_alpha_);
}

double SvddModel::score(std::span<const double> x) const {
  return distance_to_score(std::max(0.0, center_distance2(x) - radius2_));
}

void SvddModel::write(std::ostream& os) const {
  detail::put(os, "dims", std::uint64_t{dims_});
  detail::put(os, "kernel", std::uint64_t{kernel_ == SvddKernel::rbf ? 0u : 1u});
  detail::put(os, "bandwidth", bandwidth_);
  detail::put(os, "c", c_);
  detail::put(os, "rows", rows_);
  detail::put(os, "alpha", alpha_);
  detail::put(os, "aka", alpha_k_alpha_);
  detail::put(os, "radius2", radius2_);
  detail::put(os, "iterations", static_cast<std::uint64_t>(iterations_));
  detail::put(os, "violation", kkt_violation_);
}

SvddModel SvddModel::read(std::istream& is) {
  SvddModel model;
  model.dims_ = detail::get_uint(is, "dims");
  model.kernel_ = detail::get_uint(is, "kernel") == 0 ? SvddKernel::rbf : SvddKernel::linear;
  model.bandwidth_ = detail::get_double(is, "bandwidth");
  model.c_ = detail::get_double(is, "c");
  model.rows_ = detail::get_doubles(is, "rows");
  model.alpha_ = detail::get_doubles(is, "alpha");
  model.alpha_k_alpha_ = detail::get_double(is, "aka");
  model.radius2_ = detail::get_double(is, "radius2");
  model.iterations_ = static_cast<long>(detail::get_uint(is, "iterations"));
  model.kkt_violation_ = detail::get_double(is, "violation");
  if (model.dims_ == 0 || model.rows_.size() != model.alpha_.size() * model.dims_) {
    throw ParseError("SVDD record has inconsistent sizes", 0);
  }
  return model;
}

}  // namespace roadocc
