#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace roadocc {

/// Static kd-tree over a borrowed row-major point array.
class KdTree {
 public:
  KdTree(const double* rows, std::size_t count, std::size_t dims);

  /// Smallest squared Euclidean distance from x to any stored point.
  double nearest_squared(std::span<const double> x) const;

 private:
  struct Node {
    std::size_t begin = 0, end = 0;  // range in order_
    std::size_t axis = 0;
    double split = 0.0;
    int left = -1, right = -1;
  };

  int build(std::size_t begin, std::size_t end, int depth);
  void search(int node, std::span<const double> x, double& best) const;

  const double* rows_;
  std::size_t dims_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace roadocc
