// Generates a small synthetic road dataset (PPM images + annotation XML).

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "roadocc/annotation.hpp"
#include "roadocc/error.hpp"
#include "roadocc/image_io.hpp"

namespace fs = std::filesystem;
using namespace roadocc;

namespace {

struct Scene {
  int width, height;
  double horizon;
  double bottom_left, bottom_right;
  double top_left, top_right;
  RgbPixel road, grass, sky;
  bool shadow;
  bool second_annotator;
};

Scene make_scene(int index, int width, int height, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  Scene s{};
  s.width = width;
  s.height = height;
  s.horizon = std::round(height * (0.38 + 0.03 * index) + 2.0 * jitter(rng));
  const double vanish = width * (0.5 + 0.04 * (index - 2)) + 3.0 * jitter(rng);
  s.top_left = std::round(vanish - width * 0.05);
  s.top_right = std::round(vanish + width * 0.05);
  s.bottom_left = std::round(width * (0.04 + 0.01 * index));
  s.bottom_right = std::round(width * (0.96 - 0.01 * (index % 3)));
  const double gray = 0.34 + 0.05 * index;
  s.road = {gray, gray * 0.98, gray * 1.03};
  s.grass = {0.22 + 0.02 * index, 0.42, 0.14};
  s.sky = {0.50, 0.64, 0.88};
  s.shadow = index % 2 == 0;
  s.second_annotator = index == 1;
  return s;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

RgbPixel noisy(RgbPixel base, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, sigma);
  const double shared = n(rng);
  return {clamp01(base.r + shared + 0.3 * n(rng)), clamp01(base.g + shared + 0.3 * n(rng)),
          clamp01(base.b + shared + 0.3 * n(rng))};
}

void render(const Scene& s, std::uint64_t seed, const fs::path& root, const std::string& stem) {
  std::mt19937_64 rng(seed);
  const PolygonPath road_poly{{{s.bottom_left, static_cast<double>(s.height)},
                               {s.top_left, s.horizon},
                               {s.top_right, s.horizon},
                               {s.bottom_right, static_cast<double>(s.height)}}};
  const PolygonPath sky_poly{{{0.0, 0.0},
                              {static_cast<double>(s.width), 0.0},
                              {static_cast<double>(s.width), s.horizon},
                              {0.0, s.horizon}}};
  BinaryMask road(s.width, s.height);
  fill_polygon(road, road_poly);

  ImageBuffer image(s.width, s.height);
  const double center_top = 0.5 * (s.top_left + s.top_right);
  const double center_bottom = 0.5 * (s.bottom_left + s.bottom_right);
  for (int y = 0; y < s.height; ++y) {
    const double depth = std::max(0.0, (y + 0.5 - s.horizon) / (s.height - s.horizon));
    for (int x = 0; x < s.width; ++x) {
      RgbPixel p;
      if (y + 0.5 < s.horizon) {
        const double t = (y + 0.5) / s.horizon;
        p = noisy({s.sky.r + 0.1 * t, s.sky.g + 0.08 * t, s.sky.b - 0.05 * t}, 0.01, rng);
      } else if (road.at(x, y)) {
        p = noisy(s.road, 0.035, rng);
        // Dashed center line.
        const double cx = center_top + depth * (center_bottom - center_top);
        const double half = 0.5 + 1.5 * depth;
        if (std::abs(x + 0.5 - cx) < half && std::fmod(depth * 10.0, 2.0) < 1.0) p = noisy({0.9, 0.9, 0.86}, 0.02, rng);
      } else {
        p = noisy(s.grass, 0.05, rng);
      }
      if (s.shadow && y + 0.5 > s.horizon && std::abs(y - (s.horizon + 0.55 * (s.height - s.horizon))) < 6.0 &&
          x < s.width * 0.7) {
        p = {p.r * 0.55, p.g * 0.58, p.b * 0.66};
      }
      image.at(x, y) = p;
    }
  }

  AnnotationDocument doc;
  doc.filename = stem + ".ppm";
  doc.width = s.width;
  doc.height = s.height;
  doc.objects.push_back({"road", "annotator1", {road_poly}});
  doc.objects.push_back({"sky", "annotator1", {sky_poly}});
  if (s.second_annotator) {
    PolygonPath rough = road_poly;
    for (auto& v : rough.vertices) v.x = std::clamp(std::round(v.x + (v.x < s.width / 2.0 ? 4.0 : -4.0)), 0.0, double(s.width));
    doc.objects.push_back({"road", "annotator2", {rough}});
  }
  write_ppm(root / "images" / (stem + ".ppm"), image);
  std::ofstream out(root / "annotations" / (stem + ".xml"), std::ios::binary);
  out << write_annotation(doc);
  if (!out) throw IoError("cannot write annotation for " + stem);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roadocc-synth: synthetic road scenes with ground truth"};
  fs::path out;
  int count = 5, width = 240, height = 180;
  std::uint64_t seed = 2024;
  app.add_option("--out", out, "dataset root to create")->required();
  app.add_option("--count", count, "number of images")->capture_default_str()->check(CLI::Range(1, 1000));
  app.add_option("--width", width, "image width")->capture_default_str()->check(CLI::Range(16, 8192));
  app.add_option("--height", height, "image height")->capture_default_str()->check(CLI::Range(16, 8192));
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    fs::create_directories(out / "images");
    fs::create_directories(out / "annotations");
    std::mt19937_64 layout(seed);
    for (int i = 0; i < count; ++i) {
      char stem[32];
      std::snprintf(stem, sizeof stem, "scene_%03d", i);
      const Scene scene = make_scene(i % 5, width, height, layout);
      render(scene, seed * 1000003u + static_cast<std::uint64_t>(i), out, stem);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
