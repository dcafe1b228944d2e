#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>

#include "kdtree.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {

NearestNeighborModel::NearestNeighborModel() = default;
NearestNeighborModel::NearestNeighborModel(NearestNeighborModel&&) noexcept = default;
NearestNeighborModel& NearestNeighborModel::operator=(NearestNeighborModel&&) noexcept = default;
NearestNeighborModel::~NearestNeighborModel() = default;

NearestNeighborModel NearestNeighborModel::fit(const SampleSet& samples) {
  if (samples.size() == 0) throw ConfigError("nearest neighbor needs at least one sample");
  const std::size_t d = samples.dims;
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [&](std::size_t a, std::size_t b) {
    const auto ra = samples.row(a);
    const auto rb = samples.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);

  NearestNeighborModel model;
  model.dims_ = d;
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && !less(order[k - 1], order[k])) continue;
    const auto row = samples.row(order[k]);
    model.rows_.insert(model.rows_.end(), row.begin(), row.end());
  }
  model.build();
  return model;
}

void NearestNeighborModel::build() {
  tree_ = std::make_unique<KdTree>(rows_.data(), size(), dims_);
}

double NearestNeighborModel::min_squared_distance(std::span<const double> x) const {
  if (x.size() != dims_) throw DimensionError("feature", "nearest neighbor input width mismatch");
  return tree_->nearest_squared(x);
}

void NearestNeighborModel::write(std::ostream& os) const {
  detail::put(os, "dims", std::uint64_t{dims_});
  detail::put(os, "rows", rows_);
}

NearestNeighborModel NearestNeighborModel::read(std::istream& is) {
  NearestNeighborModel model;
  model.dims_ = detail::get_uint(is, "dims");
  model.rows_ = detail::get_doubles(is, "rows");
  if (model.dims_ == 0 || model.rows_.size() % model.dims_ != 0) {
    throw ParseError("nearest neighbor record has inconsistent sizes", 0);
  }
  model.build();
  return model;
}

}  // namespace roadocc
