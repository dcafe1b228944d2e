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

double segment_distance2(std::span<const double> x, std::span<const double> a,
                         std::span<const double> b) {
  double ab2 = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double ab = b[i] - a[i];
    ab2 += ab * ab;
    dot += (x[i] - a[i]) * ab;
  }
  // Endpoint distances use the vertex formula exactly, so the result can
  // never exceed the nearest-vertex distance through rounding.
  const double ends = std::min(detail::squared_distance(x, a), detail::squared_distance(x, b));
  const double t = ab2 > 0.0 ? dot / ab2 : 0.0;
  if (!(t > 0.0 && t < 1.0)) return ends;
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double diff = x[i] - (a[i] + t * (b[i] - a[i]));
    acc += diff * diff;
  }
  return std::min(acc, ends);
}

}  // namespace

// Prim's algorithm on the complete Euclidean graph. Ties go to the lower index.
SpanningTreeModel SpanningTreeModel::fit(const SampleSet& samples) {
  const std::size_t n = samples.size();
  if (n == 0) throw ConfigError("MST needs at least one sample");
  SpanningTreeModel model;
  model.dims_ = samples.dims;
  model.rows_ = samples.values;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, kInf);
  std::vector<std::size_t> parent(n, 0);
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t next = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in_tree[i] && (next == n || best[i] < best[next])) next = i;
    }
    in_tree[next] = true;
    if (step > 0) model.edges_.emplace_back(std::min(parent[next], next), std::max(parent[next], next));
    for (std::size_t i = 0; i < n; ++i) {
      if (in_tree[i]) continue;
      const double d2 = detail::squared_distance(samples.row(next), samples.row(i));
      if (d2 < best[i]) {
        best[i] = d2;
        parent[i] = next;
      }
    }
  }
  return model;
}

double SpanningTreeModel::edge_distance(std::span<const double> x) const {
  if (x.size() != dims_) throw DimensionError("feature", "MST input width mismatch");
  auto row = [&](std::size_t i) { return std::span<const double>(rows_.data() + i * dims_, dims_); };
  if (edges_.empty()) return std::sqrt(detail::squared_distance(x, row(0)));
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : edges_) best = std::min(best, segment_distance2(x, row(a), row(b)));
  return std::sqrt(best);
}

double SpanningTreeModel::total_length() const {
  double sum = 0.0;
  for (const auto& [a, b] : edges_) {
    sum += std::sqrt(detail::squared_distance(
        std::span<const double>(rows_.data() + a * dims_, dims_),
        std::span<const double>(rows_.data() + b * dims_, dims_)));
  }
  return sum;
}

void SpanningTreeModel::write(std::ostream& os) const {
  detail::put(os, "dims", std::uint64_t{dims_});
  detail::put(os, "rows", rows_);
  std::vector<std::uint64_t> flat;
  for (const auto& [a, b] : edges_) {
    flat.push_back(a);
    flat.push_back(b);
  }
  detail::put(os, "edges", flat);
}

SpanningTreeModel SpanningTreeModel::read(std::istream& is) {
  SpanningTreeModel model;
  model.dims_ = detail::get_uint(is, "dims");
  model.rows_ = detail::get_doubles(is, "rows");
  const auto flat = detail::get_uints(is, "edges");
  if (model.dims_ == 0 || model.rows_.size() % model.dims_ != 0 || flat.size() % 2 != 0) {
    throw ParseError("MST record has inconsistent sizes", 0);
  }
  const std::size_t n = model.rows_.size() / model.dims_;
  for (std::size_t i = 0; i < flat.size(); i += 2) {
    if (flat[i] >= n || flat[i + 1] >= n) throw ParseError("MST edge index out of range", 0);
    model.edges_.emplace_back(flat[i], flat[i + 1]);
  }
  return model;
}

}  // namespace roadocc
