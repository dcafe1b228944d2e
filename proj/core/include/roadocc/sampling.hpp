#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "roadocc/image.hpp"

namespace roadocc {

/// Bottom-of-image training rectangle.
struct RoiSpec {
  int width = 201;
  int height = 66;
  /// ROI center as a fraction of the image width.
  double horizontal_anchor = 0.5;
  /// Rows left free between the ROI and the bottom edge.
  int bottom_margin = 0;
};

struct RoiPlacement {
  int x0, y0, width, height;
};

/// Resolves the ROI rectangle inside a width x height image. Throws
/// DimensionError naming the axis that does not fit.
RoiPlacement place_roi(const RoiSpec& spec, int image_width, int image_height);

enum class SampleSource { full_roi, superpixel_medians, augmented };

std::string_view to_string(SampleSource source);

/// N x d training rows (row-major) with the value bounds of every column.
struct SampleSet {
  std::size_t dims = 0;
  std::vector<double> values;
  std::vector<double> lo;
  std::vector<double> hi;
  SampleSource source = SampleSource::full_roi;
  std::uint64_t seed = 0;
  /// Geometry of the originating ROI; zero when rows are not ROI pixels.
  int roi_width = 0;
  int roi_height = 0;

  std::size_t size() const noexcept { return dims == 0 ? 0 : values.size() / dims; }
  std::span<const double> row(std::size_t i) const {
    return {values.data() + i * dims, dims};
  }
  std::span<double> row(std::size_t i) { return {values.data() + i * dims, dims}; }

  /// Builds a set from loose rows. Bounds default to the data extent.
  static SampleSet from_rows(std::size_t dims, std::vector<double> values,
                             std::vector<double> lo = {}, std::vector<double> hi = {});
};

/// One row per ROI pixel in row-major order.
SampleSet extract_roi(const FeatureImage& features, const RoiSpec& spec);

struct SuperpixelGrid {
  int cols = 15;
  int rows = 6;
};

/// Replaces each grid cell of the ROI by its per-channel median.
SampleSet reduce_superpixels(const SampleSet& roi, SuperpixelGrid grid = {});

inline constexpr double kDefaultNoiseSigma = 30.0 / 256.0;

/// Returns the input followed by a copy with i.i.d. Gaussian noise added,
/// clamped to the column bounds.
SampleSet augment_noise(const SampleSet& samples, double sigma, std::uint64_t seed);

}  // namespace roadocc
