#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "roadocc/color.hpp"
#include "roadocc/eval.hpp"
#include "roadocc/occ.hpp"

namespace {

using namespace roadocc;

ImageBuffer random_image(int w, int h) {
  ImageBuffer img(w, h);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& p : img.pixels()) p = {u(rng), u(rng), u(rng)};
  return img;
}

// Full-ROI-sized training set with ROI shape, so superpixel sources work.
SampleSet roi_rows(std::size_t dims) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.5, 0.1);
  std::vector<double> values(201 * 66 * dims);
  for (double& v : values) v = g(rng);
  auto set = SampleSet::from_rows(dims, std::move(values), std::vector(dims, 0.0), std::vector(dims, 1.0));
  set.roi_width = 201;
  set.roi_height = 66;
  return set;
}

void BM_Extract(benchmark::State& state, const char* rep) {
  const auto img = random_image(640, 480);
  const auto r = Representation::parse(rep);
  for (auto _ : state) benchmark::DoNotOptimize(extract(img, r));
  state.SetItemsProcessed(state.iterations() * 640 * 480);
}
BENCHMARK_CAPTURE(BM_Extract, HS, "HS");
BENCHMARK_CAPTURE(BM_Extract, Lab, "Lab");

void BM_FitAndScore(benchmark::State& state, const char* label) {
  const auto roi = roi_rows(2);
  const auto spec = ClassifierSpec::parse(label);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> queries(2 * 20000);
  for (double& q : queries) q = u(rng);
  for (auto _ : state) {
    const auto model = fit(prepare_training(roi, spec, 0), spec, 0);
    benchmark::DoNotOptimize(score_rows(*model, queries));
  }
}
BENCHMARK_CAPTURE(BM_FitAndScore, G, "G")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FitAndScore, RG, "RG")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FitAndScore, MoG2, "MoG2")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FitAndScore, NN, "NN")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FitAndScore, SVD, "SVD")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FitAndScore, dLP, "dLP")->Unit(benchmark::kMillisecond);

void BM_RocCurve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> s(n);
  std::vector<std::uint8_t> t(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = u(rng), t[i] = rng() % 2;
  for (auto _ : state) benchmark::DoNotOptimize(roc_curve(s, t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RocCurve)->Arg(640 * 480);

}  // namespace
BENCHMARK_MAIN();
