#pragma once

// Shared oracles and fixtures for the unit and acceptance tests.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "roadocc/annotation.hpp"
#include "roadocc/image_io.hpp"
#include "roadocc/sampling.hpp"

namespace roadocc::testing {

/// Concordance probability over all positive/negative pairs, ties counted
/// as one half. Quadratic; only for small inputs.
inline double concordance_auc(std::span<const double> scores,
                              std::span<const std::uint8_t> truth) {
  double concordant = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!truth[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (truth[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j]) concordant += 1.0;
      else if (scores[i] == scores[j]) concordant += 0.5;
    }
  }
  return concordant / pairs;
}

/// n rows of an isotropic Gaussian around center.
inline std::vector<double> gaussian_rows(std::mt19937_64& rng, std::size_t n,
                                         std::span<const double> center, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  std::vector<double> rows;
  rows.reserve(n * center.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (double c : center) rows.push_back(c + normal(rng));
  }
  return rows;
}

inline std::vector<double> uniform_rows(std::mt19937_64& rng, std::size_t n, std::size_t dims,
                                        double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> rows(n * dims);
  for (double& v : rows) v = u(rng);
  return rows;
}

/// Builds a full-ROI sample set of roi_width x roi_height rows.
inline SampleSet roi_samples(std::size_t dims, std::vector<double> values, int roi_width,
                             int roi_height, std::vector<double> lo = {},
                             std::vector<double> hi = {}) {
  SampleSet set = SampleSet::from_rows(dims, std::move(values), std::move(lo), std::move(hi));
  set.roi_width = roi_width;
  set.roi_height = roi_height;
  return set;
}

/// Writes images/<stem>.ppm and annotations/<stem>.xml for `count` scenes
/// whose bottom band is a gray road and whose top is saturated green, so
/// saturation alone separates the classes. Road brightness grows with the
/// scene index (count <= 5).
inline void write_separable_dataset(const std::filesystem::path& root, int count,
                                    int width = 240, int height = 120) {
  std::filesystem::create_directories(root / "images");
  std::filesystem::create_directories(root / "annotations");
  const int road_top = height - 70;
  for (int k = 0; k < count; ++k) {
    const std::string stem = "img_" + std::to_string(k);
    ImageBuffer img(width, height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const double shade = 0.35 + 0.1 * k + 0.002 * ((x * 7 + y * 3) % 50);
        img.at(x, y) = y >= road_top ? RgbPixel{shade, shade, shade}
                                     : RgbPixel{0.15, 0.55 + 0.001 * (x % 40), 0.1};
      }
    }
    write_ppm(root / "images" / (stem + ".ppm"), img);
    AnnotationDocument doc;
    doc.filename = stem + ".ppm";
    doc.width = width;
    doc.height = height;
    const double w = width, h = height, top = road_top;
    doc.objects.push_back({"road", "tester", {{{{0, top}, {w, top}, {w, h}, {0, h}}}}});
    std::ofstream(root / "annotations" / (stem + ".xml"), std::ios::binary) << write_annotation(doc);
  }
}

}  // namespace roadocc::testing
