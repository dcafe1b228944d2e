#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace roadocc {

/// Linear RGB reflectance, each component in [0,1].
struct RgbPixel {
  double r = 0.0;
  double g = 0.0;
  double b = 0.0;

  bool operator==(const RgbPixel&) const = default;
};

/// Decoded RGB raster stored row-major.
class ImageBuffer {
 public:
  ImageBuffer() = default;
  ImageBuffer(int width, int height, RgbPixel fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  RgbPixel& at(int x, int y) { return pixels_[index(x, y)]; }
  const RgbPixel& at(int x, int y) const { return pixels_[index(x, y)]; }

  std::span<RgbPixel> pixels() noexcept { return pixels_; }
  std::span<const RgbPixel> pixels() const noexcept { return pixels_; }

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<RgbPixel> pixels_;
};

/// Per-pixel feature rows (H x W x d) together with the value bounds of
/// each feature column.
class FeatureImage {
 public:
  FeatureImage() = default;
  FeatureImage(int width, int height, std::size_t dims);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::span<double> row(std::size_t pixel) {
    return {values_.data() + pixel * dims_, dims_};
  }
  std::span<const double> row(std::size_t pixel) const {
    return {values_.data() + pixel * dims_, dims_};
  }
  std::span<const double> row(int x, int y) const {
    return row(static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x));
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> lo;
  std::vector<double> hi;

 private:
  int width_ = 0;
  int height_ = 0;
  std::size_t dims_ = 0;
  std::vector<double> values_;
};

/// Road / background labelling, one byte per pixel (0 or 1).
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return bits_.size(); }

  bool at(int x, int y) const { return bits_[index(x, y)] != 0; }
  void set(int x, int y, bool value) { bits_[index(x, y)] = value ? 1 : 0; }

  std::span<std::uint8_t> bits() noexcept { return bits_; }
  std::span<const std::uint8_t> bits() const noexcept { return bits_; }

  std::size_t count() const;

  bool operator==(const BinaryMask&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Per-pixel road likelihood in [0,1].
class LikelihoodMap {
 public:
  LikelihoodMap() = default;
  LikelihoodMap(int width, int height, double fill = 0.0);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return values_.size(); }

  double at(int x, int y) const {
    return values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  double& at(int x, int y) {
    return values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

}  // namespace roadocc
