#include <algorithm>
#include <cmath>

#include "roadocc/annotation.hpp"
#include "roadocc/error.hpp"

namespace roadocc {

void fill_polygon(BinaryMask& mask, const PolygonPath& polygon) {
  const auto& v = polygon.vertices;
  const std::size_t n = v.size();
  if (n < 3) return;
  std::vector<double> crossings;
  for (int y = 0; y < mask.height(); ++y) {
    const double cy = y + 0.5;
    crossings.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2& a = v[i];
      const Point2& b = v[(i + 1) % n];
      // Half-open in y so shared vertices are counted once.
      if ((a.y <= cy) != (b.y <= cy)) {
        crossings.push_back(a.x + (cy - a.y) * (b.x - a.x) / (b.y - a.y));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
      // Centers x + 0.5 in [xa, xb).
      const double first = std::ceil(crossings[k] - 0.5);
      const double last = std::ceil(crossings[k + 1] - 0.5) - 1.0;
      const int x0 = static_cast<int>(std::max(first, 0.0));
      const int x1 = static_cast<int>(std::min(last, static_cast<double>(mask.width() - 1)));
      for (int x = x0; x <= x1; ++x) mask.set(x, y, true);
    }
  }
}

BinaryMask rasterize(const AnnotationDocument& doc, std::string_view label, const UserFilter& filter) {
  if (doc.width <= 0 || doc.height <= 0) throw DimensionError("x", "annotation size must be positive");
  BinaryMask mask(doc.width, doc.height);
  for (const auto& obj : doc.objects) {
    if (obj.name != label) continue;
    if (filter.user && obj.user != *filter.user) continue;
    for (const auto& poly : obj.polygons) fill_polygon(mask, poly);
  }
  return mask;
}

std::vector<OccupancyBin> occupancy_histogram(const std::vector<BinaryMask>& masks, double bin_width) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) throw ConfigError("bin width must lie in (0, 1]");
  const double inverse = 1.0 / bin_width;
  const auto nbins = static_cast<std::size_t>(std::llround(inverse));
  if (std::abs(inverse - static_cast<double>(nbins)) > 1e-9 * inverse) {
    throw ConfigError("1 / bin width must be an integer");
  }
  std::vector<OccupancyBin> bins(nbins);
  for (std::size_t k = 0; k < nbins; ++k) {
    bins[k] = {static_cast<double>(k) / static_cast<double>(nbins),
               static_cast<double>(k + 1) / static_cast<double>(nbins), 0};
  }
  for (const auto& mask : masks) {
    const std::size_t total = static_cast<std::size_t>(mask.width()) * static_cast<std::size_t>(mask.height());
    if (total == 0) continue;
    // Integer arithmetic keeps exact fractions such as 25% on their bin edge.
    const std::size_t k = std::min(mask.count() * nbins / total, nbins - 1);
    ++bins[k].count;
  }
  return bins;
}

}  // namespace roadocc
