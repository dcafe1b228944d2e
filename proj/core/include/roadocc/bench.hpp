#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roadocc/color.hpp"
#include "roadocc/eval.hpp"
#include "roadocc/image.hpp"
#include "roadocc/occ.hpp"
#include "roadocc/sampling.hpp"

namespace roadocc {

enum class Averaging { vertical, pooled };

struct BenchmarkConfig {
  std::filesystem::path dataset;
  std::vector<Representation> representations = canonical_representations();
  std::vector<ClassifierSpec> classifiers = default_classifier_set();
  RoiSpec roi;
  SuperpixelGrid grid;
  std::uint64_t seed = 0;
  std::filesystem::path output;
  Averaging averaging = Averaging::vertical;
  std::string label = "road";
  /// Ground-truth user. Without it (and without union_users) the first
  /// user that drew the label in each document is used.
  std::optional<std::string> user;
  bool union_users = false;
  bool write_maps = false;
  /// 0 selects the hardware concurrency.
  unsigned threads = 0;
  std::optional<std::filesystem::path> cache_dir;

  void validate() const;
};

struct ResultCell {
  bool absent = false;
  std::string absent_reason;
  /// Averaged (or pooled) curve; its AUC and EER are the headline values.
  RocCurve curve;
  /// Mean of the per-image AUCs, x100.
  double mean_image_auc100 = 0.0;
  std::size_t images = 0;
  /// Stems of the images that contributed, in dataset order.
  std::vector<std::string> image_stems;
  std::vector<double> image_aucs;
  /// Images whose fit or scoring failed for this cell.
  std::size_t failed_images = 0;

  double auc100() const { return curve.auc * 100.0; }
};

/// One cell per (classifier, representation) pair.
struct ResultGrid {
  std::vector<Representation> representations;
  std::vector<ClassifierSpec> classifiers;
  std::vector<ResultCell> cells;  // classifier-major

  ResultCell& at(std::size_t classifier, std::size_t rep) {
    return cells[classifier * representations.size() + rep];
  }
  const ResultCell& at(std::size_t classifier, std::size_t rep) const {
    return cells[classifier * representations.size() + rep];
  }
};

struct SkippedItem {
  std::string stem;
  std::string reason;
};

struct BenchmarkResult {
  ResultGrid grid;
  std::vector<std::string> evaluated;
  std::vector<SkippedItem> skipped;
};

using LogSink = std::function<void(std::string_view)>;

/// Runs every (image, representation, classifier) combination: the model
/// is retrained on each image's own ROI and scored on the full image.
/// Throws ConfigError when no image could be evaluated.
BenchmarkResult run_benchmark(const BenchmarkConfig& config, const LogSink& log = {});

/// Writes auc_table.csv, summary.csv, skipped.csv and roc/<rep>_<clf>.csv
/// for every present cell.
void emit_reports(const BenchmarkResult& result, const std::filesystem::path& outdir);

struct DetectionResult {
  LikelihoodMap likelihood;
  BinaryMask mask;
  std::size_t training_rows = 0;
};

/// Single-image pipeline: convert, train on the ROI, score, threshold.
DetectionResult detect(const ImageBuffer& image, const Representation& rep,
                       const ClassifierSpec& spec, const RoiSpec& roi, std::uint64_t seed,
                       double tau, const SuperpixelGrid& grid = {});

/// Mixes a base seed with string keys (FNV-1a + splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::string_view> keys);

}  // namespace roadocc
