#include "roadocc/linprog.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "roadocc/error.hpp"

namespace roadocc::lp {
namespace {

constexpr double kEps = 1e-9;

// Row-major (rows + 1) x (cols + 1) tableau; the last row is the reduced
// cost row, the last column the right-hand side.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

  double& at(std::size_t r, std::size_t c) { return data_[r * (cols_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * (cols_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, cols_); }
  double& cost(std::size_t c) { return at(rows_, c); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Loads a cost vector and prices out the current basis.
  void set_costs(const std::vector<double>& costs) {
    costs_ = costs;
    costs_.resize(cols_, 0.0);
    price();
  }

  // Snapshot of the constraint rows as built; refactor() restarts from it.
  void freeze() { original_.assign(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(rows_ * (cols_ + 1))); }

  // Recomputes B^-1 [A | b] for the current basis from the original rows,
  // discarding the rounding error accumulated by elimination.
  void refactor() {
    const auto m = static_cast<Eigen::Index>(rows_);
    const auto w = static_cast<Eigen::Index>(cols_ + 1);
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(original_.data(), m, w);
    Eigen::MatrixXd basis_matrix(m, m);
    for (Eigen::Index r = 0; r < m; ++r) basis_matrix.col(r) = a.col(static_cast<Eigen::Index>(basis_[static_cast<std::size_t>(r)]));
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis_matrix);
    const Eigen::MatrixXd fresh = lu.solve(a);
    if (!fresh.allFinite()) return;
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index j = 0; j < w; ++j) at(static_cast<std::size_t>(r), static_cast<std::size_t>(j)) = fresh(r, j);
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      for (std::size_t c = 0; c < rows_; ++c) at(r, basis_[c]) = r == c ? 1.0 : 0.0;
    }
    price();
  }

 private:
  void price() {
    for (std::size_t j = 0; j < cols_; ++j) cost(j) = costs_[j];
    cost(cols_) = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
      const double cb = costs_[basis_[r]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost(j) -= cb * at(r, j);
    }
  }

  std::size_t rows_, cols_;
  std::vector<double> data_;
  std::vector<double> original_;
  std::vector<double> costs_;
  std::vector<std::size_t> basis_;
};

enum class Outcome { optimal, unbounded, limit };

constexpr int kDegenerateStreak = 50;
constexpr long kRefactorInterval = 32;

// Dantzig pricing (most negative reduced cost). After a run of degenerate
// pivots the rule falls back to Bland's (lowest improving index, ties in
// the ratio test to the lowest basic index) until progress resumes, which
// rules out cycling.
Outcome iterate(Tableau& t, std::size_t allowed_cols, long& pivots, long max_pivots) {
  int degenerate = 0;
  bool fresh = false;
  for (;;) {
    const bool bland = degenerate >= kDegenerateStreak;
    std::size_t enter = allowed_cols;
    double most_negative = -kEps;
    for (std::size_t j = 0; j < allowed_cols; ++j) {
      if (t.cost(j) < most_negative) {
        enter = j;
        if (bland) break;
        most_negative = t.cost(j);
      }
    }
    if (enter == allowed_cols) {
      // Confirm optimality on a freshly factored tableau.
      if (fresh) return Outcome::optimal;
      t.refactor();
      fresh = true;
      continue;
    }

    std::size_t leave = t.rows();
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.rows(); ++r) {
      const double a = t.at(r, enter);
      if (a <= kEps) continue;
      const double ratio = std::max(0.0, t.rhs(r)) / a;
      if (leave == t.rows() || ratio < best_ratio - kEps) {
        leave = r;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + kEps && t.basis()[r] < t.basis()[leave]) {
        leave = r;
        best_ratio = std::min(best_ratio, ratio);
      }
    }
    if (leave == t.rows()) return Outcome::unbounded;
    if (pivots >= max_pivots) return Outcome::limit;
    degenerate = best_ratio <= kEps ? degenerate + 1 : 0;
    t.pivot(leave, enter);
    ++pivots;
    fresh = false;
    if (pivots % kRefactorInterval == 0) {
      t.refactor();
      fresh = true;
    }
  }
}

}  // namespace

Solution solve(const Problem& problem, long max_pivots) {
  const std::size_t n = problem.objective.size();
  const std::size_t m = problem.constraints.size();
  for (const auto& c : problem.constraints) {
    if (c.coefficients.size() != n) throw DimensionError("lp", "constraint width differs from objective");
  }

  // Normalize to rhs >= 0 and count auxiliary columns.
  std::vector<Constraint> rows = problem.constraints;
  std::size_t slack_count = 0, artificial_count = 0;
  for (auto& c : rows) {
    if (c.rhs < 0.0) {
      for (double& v : c.coefficients) v = -v;
      c.rhs = -c.rhs;
      if (c.relation == Relation::less_equal) c.relation = Relation::greater_equal;
      else if (c.relation == Relation::greater_equal) c.relation = Relation::less_equal;
    }
    if (c.relation != Relation::equal) ++slack_count;
    if (c.relation != Relation::less_equal) ++artificial_count;
  }

  const std::size_t first_artificial = n + slack_count;
  const std::size_t cols = first_artificial + artificial_count;
  Tableau t(m, cols);
  std::size_t slack = n, artificial = first_artificial;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& c = rows[r];
    for (std::size_t j = 0; j < n; ++j) t.at(r, j) = c.coefficients[j];
    t.rhs(r) = c.rhs;
    switch (c.relation) {
      case Relation::less_equal:
        t.at(r, slack) = 1.0;
        t.basis()[r] = slack++;
        break;
      case Relation::greater_equal:
        t.at(r, slack++) = -1.0;
        t.at(r, artificial) = 1.0;
        t.basis()[r] = artificial++;
        break;
      case Relation::equal:
        t.at(r, artificial) = 1.0;
        t.basis()[r] = artificial++;
        break;
    }
  }

  t.freeze();

  Solution solution;
  if (artificial_count > 0) {
    std::vector<double> phase1(cols, 0.0);
    for (std::size_t j = first_artificial; j < cols; ++j) phase1[j] = 1.0;
    t.set_costs(phase1);
    const Outcome outcome = iterate(t, cols, solution.pivots, max_pivots);
    if (outcome == Outcome::limit) {
      solution.status = Status::iteration_limit;
      return solution;
    }
    double scale = 1.0;
    for (const auto& c : rows) scale = std::max(scale, std::abs(c.rhs));
    if (-t.cost(cols) > 1e-9 * scale) {
      solution.status = Status::infeasible;
      return solution;
    }
    // Drive remaining artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
      if (t.basis()[r] < first_artificial) continue;
      std::size_t best = first_artificial;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (std::abs(t.at(r, j)) > kEps && (best == first_artificial || std::abs(t.at(r, j)) > std::abs(t.at(r, best)))) {
          best = j;
        }
      }
      if (best != first_artificial) {
        t.pivot(r, best);
        ++solution.pivots;
      }
    }
  }

  t.set_costs(problem.objective);
  const Outcome outcome = iterate(t, first_artificial, solution.pivots, max_pivots);
  if (outcome == Outcome::limit) {
    solution.status = Status::iteration_limit;
    return solution;
  }
  if (outcome == Outcome::unbounded) {
    solution.status = Status::unbounded;
    return solution;
  }

  solution.status = Status::optimal;
  solution.x.assign(n, 0.0);
  for (std::size_t r = 0; r < m; ++r) {
    if (t.basis()[r] < n) solution.x[t.basis()[r]] = std::max(0.0, t.rhs(r));
  }
  solution.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) solution.objective += problem.objective[j] * solution.x[j];
  return solution;
}

}  // namespace roadocc::lp
