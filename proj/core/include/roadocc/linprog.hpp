#pragma once

#include <cstddef>
#include <vector>

namespace roadocc::lp {

enum class Relation { less_equal, equal, greater_equal };

struct Constraint {
  std::vector<double> coefficients;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

/// minimize c^T x  subject to  rows,  x >= 0.
struct Problem {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
};

enum class Status { optimal, infeasible, unbounded, iteration_limit };

struct Solution {
  Status status = Status::iteration_limit;
  std::vector<double> x;
  double objective = 0.0;
  long pivots = 0;
};

/// Dense two-phase tableau simplex (Dantzig pricing, Bland's rule on stalls).
Solution solve(const Problem& problem, long max_pivots = 1'000'000);

}  // namespace roadocc::lp
