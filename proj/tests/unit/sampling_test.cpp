#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "roadocc/color.hpp"
#include "roadocc/error.hpp"
#include "roadocc/sampling.hpp"
#include "support.hpp"

namespace roadocc {
namespace {

FeatureImage gradient_image(int w, int h) {
  ImageBuffer img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) img.at(x, y) = {double(x) / w, double(y) / h, 0.25};
  }
  return extract(img, Representation::parse("RGB"));
}

TEST(ExtractRoi, DefaultSpecYields13266Rows) {
  const auto roi = extract_roi(gradient_image(640, 480), RoiSpec{});
  EXPECT_EQ(roi.size(), 13266u);
  EXPECT_EQ(roi.dims, 3u);
  EXPECT_EQ(roi.source, SampleSource::full_roi);
  EXPECT_EQ(roi.roi_width, 201);
  EXPECT_EQ(roi.roi_height, 66);
}

TEST(ExtractRoi, RowMajorFromBottomCenteredRectangle) {
  const auto features = gradient_image(640, 480);
  const auto roi = extract_roi(features, RoiSpec{});
  const auto place = place_roi(RoiSpec{}, 640, 480);
  EXPECT_EQ(place.y0, 480 - 66);
  EXPECT_EQ(place.x0, 220);
  EXPECT_EQ(roi.row(0)[0], features.row(place.x0, place.y0)[0]);
  EXPECT_EQ(roi.row(1)[0], features.row(place.x0 + 1, place.y0)[0]);
  EXPECT_EQ(roi.row(201)[1], features.row(place.x0, place.y0 + 1)[1]);
}

TEST(ExtractRoi, GrayImageSaturationIsZero) {
  ImageBuffer img(320, 240, {0.3, 0.3, 0.3});
  const auto roi = extract_roi(extract(img, Representation::parse("S")), RoiSpec{});
  for (double v : roi.values) EXPECT_NEAR(v, 0.0, 1e-15);
}

TEST(ExtractRoi, TooSmallImageNamesAxis) {
  try {
    extract_roi(gradient_image(100, 50), RoiSpec{});
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_EQ(e.axis(), "x");
  }
  try {
    extract_roi(gradient_image(300, 50), RoiSpec{});
    FAIL() << "expected DimensionError";
  } catch (const DimensionError& e) {
    EXPECT_EQ(e.axis(), "y");
  }
}

TEST(ExtractRoi, IgnoresPixelsOutsideRoi) {
  ImageBuffer a(320, 240, {0.2, 0.4, 0.6});
  ImageBuffer b = a;
  for (int y = 0; y < 100; ++y) {
    for (int x = 0; x < 320; ++x) b.at(x, y) = {1, 0, 0};
  }
  const auto rep = Representation::parse("RGB");
  EXPECT_EQ(extract_roi(extract(a, rep), {}).values, extract_roi(extract(b, rep), {}).values);
}

TEST(ExtractRoi, AnchorAndMargin) {
  RoiSpec spec;
  spec.horizontal_anchor = 0.0;
  spec.bottom_margin = 10;
  const auto place = place_roi(spec, 640, 480);
  EXPECT_EQ(place.x0, 0);
  EXPECT_EQ(place.y0, 480 - 10 - 66);
  spec.horizontal_anchor = 1.0;
  EXPECT_EQ(place_roi(spec, 640, 480).x0, 640 - 201);
}

TEST(Superpixels, ConstantRoiGives90IdenticalRows) {
  const auto roi = testing::roi_samples(1, std::vector<double>(13266, 0.42), 201, 66);
  const auto sp = reduce_superpixels(roi);
  ASSERT_EQ(sp.size(), 90u);
  EXPECT_EQ(sp.source, SampleSource::superpixel_medians);
  for (double v : sp.values) EXPECT_EQ(v, 0.42);
}

TEST(Superpixels, OddCellTakesMiddleValue) {
  const auto roi = testing::roi_samples(1, {0.9, 0.1, 0.5}, 3, 1);
  const auto sp = reduce_superpixels(roi, {1, 1});
  ASSERT_EQ(sp.size(), 1u);
  EXPECT_EQ(sp.values[0], 0.5);
}

TEST(Superpixels, MediansStayInsideTheirCell) {
  std::mt19937_64 rng(1);
  const int w = 201, h = 66;
  auto values = testing::uniform_rows(rng, w * h, 2);
  const auto roi = testing::roi_samples(2, values, w, h);
  const SuperpixelGrid grid{15, 6};
  const auto sp = reduce_superpixels(roi, grid);
  ASSERT_EQ(sp.size(), 90u);
  for (int gy = 0; gy < grid.rows; ++gy) {
    for (int gx = 0; gx < grid.cols; ++gx) {
      for (std::size_t c = 0; c < 2; ++c) {
        double lo = 1e9, hi = -1e9;
        std::vector<double> cell;
        for (int y = gy * h / grid.rows; y < (gy + 1) * h / grid.rows; ++y) {
          for (int x = gx * w / grid.cols; x < (gx + 1) * w / grid.cols; ++x) {
            const double v = roi.row(std::size_t(y) * w + x)[c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            cell.push_back(v);
          }
        }
        std::sort(cell.begin(), cell.end());
        const std::size_t n = cell.size();
        const double median = n % 2 ? cell[n / 2] : 0.5 * (cell[n / 2 - 1] + cell[n / 2]);
        const double got = sp.row(std::size_t(gy) * grid.cols + gx)[c];
        EXPECT_EQ(got, median);
        EXPECT_GE(got, lo);
        EXPECT_LE(got, hi);
      }
    }
  }
}

TEST(Superpixels, TooFineGridIsConfigError) {
  const auto roi = testing::roi_samples(1, std::vector<double>(12, 0.0), 4, 3);
  EXPECT_THROW(reduce_superpixels(roi, {5, 3}), ConfigError);
  EXPECT_THROW(reduce_superpixels(roi, {4, 4}), ConfigError);
}

TEST(Augment, ZeroSigmaDuplicates) {
  const auto s = SampleSet::from_rows(1, {0.1, 0.2, 0.3}, {0.0}, {1.0});
  const auto a = augment_noise(s, 0.0, 7);
  ASSERT_EQ(a.size(), 6u);
  EXPECT_EQ(a.source, SampleSource::augmented);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.values[i], s.values[i]);
    EXPECT_EQ(a.values[i + 3], s.values[i]);
  }
}

TEST(Augment, DoublesRowCount) {
  std::mt19937_64 rng(2);
  const auto s = SampleSet::from_rows(3, testing::uniform_rows(rng, 90, 3), {0, 0, 0}, {1, 1, 1});
  EXPECT_EQ(augment_noise(s, kDefaultNoiseSigma, 1).size(), 180u);
}

TEST(Augment, NoiseStandardDeviation) {
  const std::size_t n = 100000;
  const auto s = SampleSet::from_rows(1, std::vector<double>(n, 0.0), {-10.0}, {10.0});
  const auto a = augment_noise(s, kDefaultNoiseSigma, 99);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = a.values[n + i] - a.values[i];
    sum += diff;
    sum2 += diff * diff;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  EXPECT_NEAR(sd, 0.1172, 0.002);
  EXPECT_NEAR(mean, 0.0, 0.002);
}

TEST(Augment, ClampsToBounds) {
  const auto s = SampleSet::from_rows(1, std::vector<double>(1000, 0.99), {0.0}, {1.0});
  const auto a = augment_noise(s, 0.5, 3);
  for (double v : a.values) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Augment, SameSeedIsBitIdentical) {
  std::mt19937_64 rng(4);
  const auto s = SampleSet::from_rows(2, testing::uniform_rows(rng, 90, 2), {0, 0}, {1, 1});
  EXPECT_EQ(augment_noise(s, 0.1, 5).values, augment_noise(s, 0.1, 5).values);
  EXPECT_NE(augment_noise(s, 0.1, 5).values, augment_noise(s, 0.1, 6).values);
}

TEST(Augment, NegativeSigmaRejected) {
  const auto s = SampleSet::from_rows(1, {0.5});
  EXPECT_THROW(augment_noise(s, -1.0, 0), ConfigError);
}

}  // namespace
}  // namespace roadocc
