#include "roadocc/image.hpp"

#include <algorithm>

#include "roadocc/error.hpp"

namespace roadocc {
namespace {

void check_size(int width, int height) {
  if (width < 0 || height < 0) throw DimensionError("size", "negative image size");
}

std::size_t area(int width, int height) {
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, RgbPixel fill)
    : width_(width), height_(height) {
  check_size(width, height);
  pixels_.assign(area(width, height), fill);
}

FeatureImage::FeatureImage(int width, int height, std::size_t dims)
    : lo(dims, 0.0), hi(dims, 1.0), width_(width), height_(height), dims_(dims) {
  check_size(width, height);
  values_.assign(area(width, height) * dims, 0.0);
}

BinaryMask::BinaryMask(int width, int height, bool fill) : width_(width), height_(height) {
  check_size(width, height);
  bits_.assign(area(width, height), fill ? 1 : 0);
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

LikelihoodMap::LikelihoodMap(int width, int height, double fill)
    : width_(width), height_(height) {
  check_size(width, height);
  values_.assign(area(width, height), fill);
}

}  // namespace roadocc
