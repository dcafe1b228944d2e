#include "roadocc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "roadocc/error.hpp"

namespace roadocc {
namespace {

double median_of(std::vector<double>& values) {
  const std::size_t n = values.size();
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (n % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace

std::string_view to_string(SampleSource source) {
  switch (source) {
    case SampleSource::full_roi: return "full_roi";
    case SampleSource::superpixel_medians: return "superpixel_medians";
    case SampleSource::augmented: return "augmented";
  }
  return "?";
}

RoiPlacement place_roi(const RoiSpec& spec, int image_width, int image_height) {
  if (spec.width <= 0 || spec.height <= 0) throw ConfigError("ROI size must be positive");
  if (spec.bottom_margin < 0) throw ConfigError("ROI bottom margin must be non-negative");
  if (!(spec.horizontal_anchor >= 0.0 && spec.horizontal_anchor <= 1.0)) {
    throw ConfigError("ROI horizontal anchor must lie in [0, 1]");
  }
  if (spec.width > image_width) {
    throw DimensionError("x", "ROI width " + std::to_string(spec.width) +
                                  " exceeds image width " + std::to_string(image_width));
  }
  if (spec.height + spec.bottom_margin > image_height) {
    throw DimensionError("y", "ROI height " + std::to_string(spec.height) + " plus margin " +
                                  std::to_string(spec.bottom_margin) + " exceeds image height " +
                                  std::to_string(image_height));
  }
  const long centered = std::lround(spec.horizontal_anchor * image_width - spec.width / 2.0);
  const int x0 = static_cast<int>(std::clamp<long>(centered, 0, image_width - spec.width));
  const int y0 = image_height - spec.bottom_margin - spec.height;
  return {x0, y0, spec.width, spec.height};
}

SampleSet SampleSet::from_rows(std::size_t dims, std::vector<double> values,
                               std::vector<double> lo, std::vector<double> hi) {
  if (dims == 0 || values.size() % dims != 0) {
    throw ConfigError("sample values do not form rows of the given width");
  }
  SampleSet set;
  set.dims = dims;
  set.values = std::move(values);
  if (lo.empty() || hi.empty()) {
    lo.assign(dims, 0.0);
    hi.assign(dims, 0.0);
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto r = set.row(i);
      for (std::size_t c = 0; c < dims; ++c) {
        if (i == 0 || r[c] < lo[c]) lo[c] = r[c];
        if (i == 0 || r[c] > hi[c]) hi[c] = r[c];
      }
    }
  }
  if (lo.size() != dims || hi.size() != dims) throw ConfigError("bounds do not match dims");
  set.lo = std::move(lo);
  set.hi = std::move(hi);
  return set;
}

SampleSet extract_roi(const FeatureImage& features, const RoiSpec& spec) {
  const RoiPlacement roi = place_roi(spec, features.width(), features.height());
  SampleSet set;
  set.dims = features.dims();
  set.lo = features.lo;
  set.hi = features.hi;
  set.source = SampleSource::full_roi;
  set.roi_width = roi.width;
  set.roi_height = roi.height;
  set.values.reserve(static_cast<std::size_t>(roi.width) * roi.height * set.dims);
  for (int y = roi.y0; y < roi.y0 + roi.height; ++y) {
    for (int x = roi.x0; x < roi.x0 + roi.width; ++x) {
      const auto r = features.row(x, y);
      set.values.insert(set.values.end(), r.begin(), r.end());
    }
  }
  return set;
}

SampleSet reduce_superpixels(const SampleSet& roi, SuperpixelGrid grid) {
  if (roi.source != SampleSource::full_roi || roi.roi_width <= 0 || roi.roi_height <= 0) {
    throw ConfigError("superpixel reduction needs full-ROI samples");
  }
  if (static_cast<std::size_t>(roi.roi_width) * roi.roi_height != roi.size()) {
    throw ConfigError("ROI geometry does not match the sample count");
  }
  if (grid.cols <= 0 || grid.rows <= 0 || grid.cols > roi.roi_width ||
      grid.rows > roi.roi_height) {
    throw ConfigError("superpixel grid " + std::to_string(grid.cols) + "x" +
                      std::to_string(grid.rows) + " leaves empty cells in a " +
                      std::to_string(roi.roi_width) + "x" + std::to_string(roi.roi_height) +
                      " ROI");
  }
  SampleSet out;
  out.dims = roi.dims;
  out.lo = roi.lo;
  out.hi = roi.hi;
  out.source = SampleSource::superpixel_medians;
  out.seed = roi.seed;
  out.values.reserve(static_cast<std::size_t>(grid.cols) * grid.rows * roi.dims);

  std::vector<double> cell;
  for (int gy = 0; gy < grid.rows; ++gy) {
    const int y_begin = gy * roi.roi_height / grid.rows;
    const int y_end = (gy + 1) * roi.roi_height / grid.rows;
    for (int gx = 0; gx < grid.cols; ++gx) {
      const int x_begin = gx * roi.roi_width / grid.cols;
      const int x_end = (gx + 1) * roi.roi_width / grid.cols;
      for (std::size_t c = 0; c < roi.dims; ++c) {
        cell.clear();
        for (int y = y_begin; y < y_end; ++y) {
          for (int x = x_begin; x < x_end; ++x) {
            cell.push_back(roi.row(static_cast<std::size_t>(y) * roi.roi_width + x)[c]);
          }
        }
        out.values.push_back(median_of(cell));
      }
    }
  }
  return out;
}

SampleSet augment_noise(const SampleSet& samples, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise sigma must be >= 0");
  SampleSet out;
  out.dims = samples.dims;
  out.lo = samples.lo;
  out.hi = samples.hi;
  out.source = SampleSource::augmented;
  out.seed = seed;
  out.values.reserve(samples.values.size() * 2);
  out.values = samples.values;
  out.values.insert(out.values.end(), samples.values.begin(), samples.values.end());
  if (sigma == 0.0) return out;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  const std::size_t offset = samples.values.size();
  for (std::size_t i = 0; i < samples.values.size(); ++i) {
    const std::size_t c = i % samples.dims;
    double& v = out.values[offset + i];
    v = std::clamp(v + noise(rng), samples.lo[c], samples.hi[c]);
  }
  return out;
}

}  // namespace roadocc
