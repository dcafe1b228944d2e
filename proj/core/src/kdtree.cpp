#include "kdtree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace roadocc {
namespace {
constexpr std::size_t kLeafSize = 8;
}

KdTree::KdTree(const double* rows, std::size_t count, std::size_t dims)
    : rows_(rows), dims_(dims), order_(count) {
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (count > 0) build(0, count, 0);
}

int KdTree::build(std::size_t begin, std::size_t end, int depth) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end, 0, 0.0, -1, -1});
  if (end - begin <= kLeafSize) return index;

  // Split on the widest axis of this range.
  std::size_t axis = 0;
  double widest = -1.0;
  for (std::size_t a = 0; a < dims_; ++a) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = begin; i < end; ++i) {
      const double v = rows_[order_[i] * dims_ + a];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > widest) {
      widest = hi - lo;
      axis = a;
    }
  }
  if (widest <= 0.0) return index;

  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     return rows_[a * dims_ + axis] < rows_[b * dims_ + axis];
                   });
  const double split = rows_[order_[mid] * dims_ + axis];
  const int left = build(begin, mid, depth + 1);
  const int right = build(mid, end, depth + 1);
  nodes_[static_cast<std::size_t>(index)].axis = axis;
  nodes_[static_cast<std::size_t>(index)].split = split;
  nodes_[static_cast<std::size_t>(index)].left = left;
  nodes_[static_cast<std::size_t>(index)].right = right;
  return index;
}

double KdTree::nearest_squared(std::span<const double> x) const {
  double best = std::numeric_limits<double>::infinity();
  if (!nodes_.empty()) search(0, x, best);
  return best;
}

void KdTree::search(int node_index, std::span<const double> x, double& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(node_index)];
  if (node.left < 0) {
    for (std::size_t i = node.begin; i < node.end; ++i) {
      const double* p = rows_ + order_[i] * dims_;
      double acc = 0.0;
      for (std::size_t a = 0; a < dims_ && acc < best; ++a) {
        const double diff = x[a] - p[a];
        acc += diff * diff;
      }
      best = std::min(best, acc);
    }
    return;
  }
  const double diff = x[node.axis] - node.split;
  const int near = diff < 0.0 ? node.left : node.right;
  const int far = diff < 0.0 ? node.right : node.left;
  search(near, x, best);
  if (diff * diff < best) search(far, x, best);
}

}  // namespace roadocc
