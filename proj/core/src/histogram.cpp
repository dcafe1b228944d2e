#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"
#include "serial.hpp"

namespace roadocc {

HistogramModel HistogramModel::fit(const SampleSet& samples, int bins) {
  if (bins <= 0) throw ConfigError("histogram needs a positive bin count");
  if (samples.dims == 0 || samples.size() == 0) throw ConfigError("histogram needs samples");
  if (samples.dims > kMaxDims) {
    throw ConfigError("joint histograms are limited to " + std::to_string(kMaxDims) +
                      " dimensions");
  }
  HistogramModel model;
  model.dims_ = samples.dims;
  model.bins_ = bins;
  model.lo_ = samples.lo;
  model.hi_ = samples.hi;
  std::size_t cells = 1;
  for (std::size_t c = 0; c < samples.dims; ++c) cells *= static_cast<std::size_t>(bins);
  model.mass_.assign(cells, 0.0);
  for (std::size_t i = 0; i < samples.size(); ++i) model.mass_[model.bin_index(samples.row(i))] += 1.0;
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (double& m : model.mass_) m *= inv;
  return model;
}

std::size_t HistogramModel::bin_index(std::span<const double> x) const {
  std::size_t index = 0;
  for (std::size_t c = 0; c < dims_; ++c) {
    const double span = hi_[c] - lo_[c];
    const double u = span > 0.0 ? (x[c] - lo_[c]) / span : 0.0;
    long b = std::isfinite(u) ? static_cast<long>(std::floor(u * bins_)) : 0;
    b = std::clamp<long>(b, 0, bins_ - 1);
    index = index * static_cast<std::size_t>(bins_) + static_cast<std::size_t>(b);
  }
  return index;
}

double HistogramModel::score(std::span<const double> x) const {
  return std::clamp(mass_[bin_index(x)], 0.0, 1.0);
}

void HistogramModel::write(std::ostream& os) const {
  detail::put(os, "dims", std::uint64_t{dims_});
  detail::put(os, "bins", static_cast<std::uint64_t>(bins_));
  detail::put(os, "lo", lo_);
  detail::put(os, "hi", hi_);
  detail::put(os, "mass", mass_);
}

HistogramModel HistogramModel::read(std::istream& is) {
  HistogramModel model;
  model.dims_ = detail::get_uint(is, "dims");
  model.bins_ = static_cast<int>(detail::get_uint(is, "bins"));
  model.lo_ = detail::get_doubles(is, "lo");
  model.hi_ = detail::get_doubles(is, "hi");
  model.mass_ = detail::get_doubles(is, "mass");
  return model;
}

}  // namespace roadocc
