#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "linalg.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "roadocc/linprog.hpp"
#include "serial.hpp"

namespace roadocc {

// Variables: w_1..w_N, rho, xi_1..xi_N.
// minimize rho + 1/(nu N) sum xi
// s.t. sum_i w_i D(j,i) - rho - xi_j <= 0 for every j, sum w = 1.
DistanceLpModel DistanceLpModel::fit(const SampleSet& samples, double nu) {
  const std::size_t n = samples.size();
  if (n < 2) throw ConfigError("dLP needs at least two samples");
  if (!(nu > 0.0 && nu <= 1.0)) throw ConfigError("dLP nu must lie in (0, 1]");

  const std::size_t vars = 2 * n + 1;
  const std::size_t rho = n;
  lp::Problem problem;
  problem.objective.assign(vars, 0.0);
  problem.objective[rho] = 1.0;
  for (std::size_t j = 0; j < n; ++j) problem.objective[rho + 1 + j] = 1.0 / (nu * static_cast<double>(n));

  // The LP is homogeneous in the distances: dividing them by their maximum
  // scales rho and xi by the same factor and leaves w unchanged.
  std::vector<double> dist(n * n);
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      dist[j * n + i] = std::sqrt(detail::squared_distance(samples.row(j), samples.row(i)));
      scale = std::max(scale, dist[j * n + i]);
    }
  }
  if (scale == 0.0) scale = 1.0;

  for (std::size_t j = 0; j < n; ++j) {
    lp::Constraint c;
    c.coefficients.assign(vars, 0.0);
    for (std::size_t i = 0; i < n; ++i) c.coefficients[i] = dist[j * n + i] / scale;
    c.coefficients[rho] = -1.0;
    c.coefficients[rho + 1 + j] = -1.0;
    c.relation = lp::Relation::less_equal;
    c.rhs = 0.0;
    problem.constraints.push_back(std::move(c));
  }
  lp::Constraint simplex;
  simplex.coefficients.assign(vars, 0.0);
  for (std::size_t i = 0; i < n; ++i) simplex.coefficients[i] = 1.0;
  simplex.relation = lp::Relation::equal;
  simplex.rhs = 1.0;
  problem.constraints.push_back(std::move(simplex));

  const lp::Solution solution = lp::solve(problem);
  if (solution.status != lp::Status::optimal) {
    static constexpr const char* kStatus[] = {"optimal", "infeasible", "unbounded", "pivot limit"};
    throw NumericalError(std::string("dLP linear program stopped: ") +
                         kStatus[static_cast<int>(solution.status)] + " after " +
                         std::to_string(solution.pivots) + " pivots");
  }

  DistanceLpModel model;
  model.dims_ = samples.dims;
  model.nu_ = nu;
  model.prototypes_ = samples.values;
  model.weights_.assign(solution.x.begin(), solution.x.begin() + static_cast<std::ptrdiff_t>(n));
  model.rho_ = solution.x[rho] * scale;
  model.slacks_.assign(solution.x.begin() + static_cast<std::ptrdiff_t>(rho + 1), solution.x.end());
  for (double& xi : model.slacks_) xi *= scale;
  return model;
}

double DistanceLpModel::proximity(std::span<const double> x) const {
  if (x.size() != dims_) throw DimensionError("feature", "dLP input width mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i] == 0.0) continue;
    sum += weights_[i] * std::sqrt(detail::squared_distance(x, prototype(i)));
  }
  return sum;
}

std::size_t DistanceLpModel::support_count(double threshold) const {
  std::size_t count = 0;
  for (double w : weights_) count += w > threshold ? 1 : 0;
  return count;
}

void DistanceLpModel::write(std::ostream& os) const {
  detail::put(os, "dims", std::uint64_t{dims_});
  detail::put(os, "nu", nu_);
  detail::put(os, "rho", rho_);
  detail::put(os, "prototypes", prototypes_);
  detail::put(os, "weights", weights_);
  detail::put(os, "slacks", slacks_);
}

DistanceLpModel DistanceLpModel::read(std::istream& is) {
  DistanceLpModel model;
  model.dims_ = detail::get_uint(is, "dims");
  model.nu_ = detail::get_double(is, "nu");
  model.rho_ = detail::get_double(is, "rho");
  model.prototypes_ = detail::get_doubles(is, "prototypes");
  model.weights_ = detail::get_doubles(is, "weights");
  model.slacks_ = detail::get_doubles(is, "slacks");
  if (model.dims_ == 0 || model.prototypes_.size() != model.weights_.size() * model.dims_) {
    throw ParseError("dLP record has inconsistent sizes", 0);
  }
  return model;
}

}  // namespace roadocc
