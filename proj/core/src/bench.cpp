#include "roadocc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "roadocc/annotation.hpp"
#include "roadocc/classifiers.hpp"
#include "roadocc/dataset.hpp"
#include "roadocc/error.hpp"
#include "roadocc/image_io.hpp"

namespace roadocc {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t image_hash(const ImageBuffer& image) {
  const int dims[2] = {image.width(), image.height()};
  std::uint64_t h = fnv1a(kFnvOffset, dims, sizeof dims);
  const auto pixels = image.pixels();
  return fnv1a(h, pixels.data(), pixels.size_bytes());
}

// Every parameter that changes the fitted model.
std::string spec_fingerprint(const ClassifierSpec& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s|%d|%d|%d|%a|%a|%a|%a|%d|%a|%d", std::string(kind_name(s.kind)).c_str(),
                s.bins, s.components, s.k, s.rejection, s.energy, s.svdd_c, s.bandwidth,
                static_cast<int>(s.kernel), s.nu, static_cast<int>(s.training_source));
  return buf;
}

std::string roi_fingerprint(const RoiSpec& roi, const SuperpixelGrid& grid) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%d|%d|%a|%d|%d|%d", roi.width, roi.height, roi.horizontal_anchor,
                roi.bottom_margin, grid.cols, grid.rows);
  return buf;
}

// Per (image, cell) outcome.
struct CellOutcome {
  enum class State { skipped, ok, failed } state = State::skipped;
  RocCurve sampled;  // vertical mode: grid-sampled curve
  std::vector<ScoreGroup> groups;  // pooled mode
  double auc = 0.0;
  std::string error;
};

struct ImageOutcome {
  bool evaluated = false;
  std::string skip_reason;
  std::vector<CellOutcome> cells;  // classifier-major
};

std::string absent_reason(const Representation& rep, const ClassifierSpec& spec) {
  if (spec.kind == ClassifierKind::PCA && rep.dims() < 2) return "PCA needs at least two channels";
  if (spec.kind == ClassifierKind::Mb && rep.dims() > HistogramModel::kMaxDims) {
    return "histogram supports at most 3 channels";
  }
  return {};
}

class ModelCache {
 public:
  explicit ModelCache(std::optional<fs::path> dir) : dir_(std::move(dir)) {
    if (dir_) fs::create_directories(*dir_);
  }

  std::unique_ptr<OneClassModel> load(std::uint64_t key) const {
    if (!dir_) return nullptr;
    std::ifstream in(path(key), std::ios::binary);
    if (!in) return nullptr;
    try {
      return load_model(in);
    } catch (const Error&) {
      return nullptr;
    }
  }

  void store(std::uint64_t key, const OneClassModel& model) const {
    if (!dir_) return;
    const fs::path target = path(key);
    fs::path tmp = target;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write model cache " + tmp.string());
      save_model(out, model);
    }
    fs::rename(tmp, target);
  }

 private:
  fs::path path(std::uint64_t key) const {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx.model", static_cast<unsigned long long>(key));
    return *dir_ / name;
  }

  std::optional<fs::path> dir_;
};

ImageOutcome evaluate_image(const BenchmarkConfig& config, const DatasetItem& item,
                            const ModelCache& cache, const LogSink& log) {
  ImageOutcome out;
  const std::size_t reps = config.representations.size();
  const std::size_t clfs = config.classifiers.size();
  out.cells.resize(reps * clfs);

  ImageBuffer image;
  AnnotationDocument doc;
  try {
    image = load_image(item.image);
    doc = load_annotation(item.annotation.string()).document;
  } catch (const Error& e) {
    out.skip_reason = e.what();
    return out;
  }
  if (doc.width != image.width() || doc.height != image.height()) {
    out.skip_reason = "annotation size " + std::to_string(doc.width) + "x" + std::to_string(doc.height) +
                      " differs from image size " + std::to_string(image.width()) + "x" +
                      std::to_string(image.height());
    return out;
  }
  UserFilter filter;
  if (!config.union_users) {
    if (config.user) {
      filter.user = config.user;
    } else {
      const auto users = doc.users_for(config.label);
      if (!users.empty()) filter.user = users.front();
    }
  }
  const BinaryMask truth = rasterize(doc, config.label, filter);
  const std::size_t road = truth.count();
  if (road == 0) {
    out.skip_reason = "no '" + config.label + "' pixels in the ground truth";
    return out;
  }
  if (road == truth.bits().size()) {
    out.skip_reason = "ground truth has no background pixels";
    return out;
  }
  try {
    place_roi(config.roi, image.width(), image.height());
  } catch (const DimensionError& e) {
    out.skip_reason = e.what();
    return out;
  }

  const std::uint64_t img_key = image_hash(image);
  const std::string roi_key = roi_fingerprint(config.roi, config.grid);
  for (std::size_t ri = 0; ri < reps; ++ri) {
    const Representation& rep = config.representations[ri];
    const FeatureImage features = rescale_unit(extract(image, rep));
    const SampleSet full = extract_roi(features, config.roi);
    for (std::size_t ci = 0; ci < clfs; ++ci) {
      const ClassifierSpec& spec = config.classifiers[ci];
      CellOutcome& cell = out.cells[ci * reps + ri];
      if (!absent_reason(rep, spec).empty()) continue;
      const std::string label = spec.label();
      const std::uint64_t seed = derive_seed(config.seed, {item.stem, rep.name(), label});
      try {
        const std::string fingerprint = spec_fingerprint(spec);
        std::uint64_t key = fnv1a(img_key, rep.name().data(), rep.name().size());
        key = fnv1a(key, fingerprint.data(), fingerprint.size());
        key = fnv1a(key, roi_key.data(), roi_key.size());
        key = fnv1a(key, &seed, sizeof seed);
        std::unique_ptr<OneClassModel> model = cache.load(key);
        if (!model) {
          const SampleSet training = prepare_training(full, spec, seed, config.grid);
          model = fit(training, spec, seed);
          cache.store(key, *model);
        }
        const LikelihoodMap map = score_image(*model, features);
        if (config.averaging == Averaging::pooled) {
          cell.groups = score_groups(map.values(), truth.bits());
          cell.auc = pooled_roc(std::span(&cell.groups, 1)).auc;
        } else {
          const RocCurve curve = roc_curve(map, truth);
          cell.auc = curve.auc;
          cell.sampled = average_roc(std::span(&curve, 1));
        }
        if (config.write_maps && !config.output.empty()) {
          write_pgm(config.output / "maps" / (item.stem + "_" + rep.name() + "_" + label + ".pgm"), map);
        }
        cell.state = CellOutcome::State::ok;
      } catch (const Error& e) {
        cell.state = CellOutcome::State::failed;
        cell.error = e.what();
        if (log) log(item.stem + ": " + rep.name() + " " + label + " failed: " + e.what());
      }
    }
  }
  out.evaluated = true;
  return out;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::string_view> keys) {
  std::uint64_t h = kFnvOffset;
  for (const auto key : keys) {
    h = fnv1a(h, key.data(), key.size());
    const unsigned char sep = 0xff;
    h = fnv1a(h, &sep, 1);
  }
  return splitmix64(base ^ splitmix64(h));
}

void BenchmarkConfig::validate() const {
  if (representations.empty()) throw ConfigError("no representations selected");
  if (classifiers.empty()) throw ConfigError("no classifiers selected");
  for (const auto& spec : classifiers) spec.validate();
  for (std::size_t i = 0; i < representations.size(); ++i) {
    for (std::size_t j = i + 1; j < representations.size(); ++j) {
      if (representations[i].name() == representations[j].name()) {
        throw ConfigError("representation '" + representations[i].name() + "' listed twice");
      }
    }
  }
  for (std::size_t i = 0; i < classifiers.size(); ++i) {
    for (std::size_t j = i + 1; j < classifiers.size(); ++j) {
      if (classifiers[i].label() == classifiers[j].label()) {
        throw ConfigError("classifier '" + classifiers[i].label() + "' listed twice");
      }
    }
  }
  if (label.empty()) throw ConfigError("ground-truth label is empty");
  if (roi.width <= 0 || roi.height <= 0) throw ConfigError("ROI size must be positive");
  if (grid.cols <= 0 || grid.rows <= 0) throw ConfigError("superpixel grid must be positive");
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config, const LogSink& log) {
  config.validate();
  if (!fs::is_directory(config.dataset)) {
    throw ConfigError("dataset root '" + config.dataset.string() + "' is not a directory");
  }
  const DatasetListing listing = list_dataset(config.dataset);
  if (config.write_maps && !config.output.empty()) fs::create_directories(config.output / "maps");
  const ModelCache cache(config.cache_dir);

  std::mutex log_mutex;
  const LogSink safe_log = [&](std::string_view line) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    log(line);
  };

  const std::size_t n = listing.items.size();
  std::vector<ImageOutcome> outcomes(n);
  unsigned threads = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      outcomes[i] = evaluate_image(config, listing.items[i], cache, safe_log);
      safe_log(listing.items[i].stem + (outcomes[i].evaluated ? ": done" : ": skipped, " + outcomes[i].skip_reason));
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  // Reduce in dataset order.
  BenchmarkResult result;
  for (const auto& reason : listing.unpaired) {
    const auto colon = reason.find(':');
    result.skipped.push_back({reason.substr(0, colon), reason.substr(colon + 2)});
  }
  auto& grid = result.grid;
  grid.representations = config.representations;
  grid.classifiers = config.classifiers;
  const std::size_t reps = grid.representations.size();
  grid.cells.resize(reps * grid.classifiers.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (outcomes[i].evaluated) {
      result.evaluated.push_back(listing.items[i].stem);
    } else {
      result.skipped.push_back({listing.items[i].stem, outcomes[i].skip_reason});
    }
  }
  if (result.evaluated.empty()) throw ConfigError("no image in the dataset could be evaluated");

  for (std::size_t ci = 0; ci < grid.classifiers.size(); ++ci) {
    for (std::size_t ri = 0; ri < reps; ++ri) {
      ResultCell& cell = grid.at(ci, ri);
      const std::string why = absent_reason(grid.representations[ri], grid.classifiers[ci]);
      if (!why.empty()) {
        cell.absent = true;
        cell.absent_reason = why;
        continue;
      }
      std::vector<RocCurve> curves;
      std::vector<std::vector<ScoreGroup>> groups;
      std::string first_error;
      for (std::size_t i = 0; i < n; ++i) {
        if (!outcomes[i].evaluated) continue;
        CellOutcome& o = outcomes[i].cells[ci * reps + ri];
        if (o.state == CellOutcome::State::failed) {
          ++cell.failed_images;
          if (first_error.empty()) first_error = o.error;
          result.skipped.push_back({listing.items[i].stem, grid.representations[ri].name() + " " +
                                                               grid.classifiers[ci].label() + ": " + o.error});
          continue;
        }
        if (o.state != CellOutcome::State::ok) continue;
        cell.image_stems.push_back(listing.items[i].stem);
        cell.image_aucs.push_back(o.auc);
        if (config.averaging == Averaging::pooled) {
          groups.push_back(std::move(o.groups));
        } else {
          curves.push_back(std::move(o.sampled));
        }
      }
      cell.images = cell.image_stems.size();
      if (cell.images == 0) {
        cell.absent = true;
        cell.absent_reason = first_error.empty() ? "no evaluated image" : first_error;
        continue;
      }
      cell.curve = config.averaging == Averaging::pooled ? pooled_roc(groups) : average_roc(curves);
      double sum = 0.0;
      for (double a : cell.image_aucs) sum += a;
      cell.mean_image_auc100 = 100.0 * sum / static_cast<double>(cell.images);
    }
  }
  return result;
}

DetectionResult detect(const ImageBuffer& image, const Representation& rep, const ClassifierSpec& spec,
                       const RoiSpec& roi, std::uint64_t seed, double tau, const SuperpixelGrid& grid) {
  const FeatureImage features = rescale_unit(extract(image, rep));
  const SampleSet full = extract_roi(features, roi);
  const SampleSet training = prepare_training(full, spec, seed, grid);
  const auto model = fit(training, spec, seed);
  DetectionResult result;
  result.likelihood = score_image(*model, features, std::max(1u, std::thread::hardware_concurrency()));
  result.mask = binarize(result.likelihood, tau);
  result.training_rows = training.size();
  return result;
}

}  // namespace roadocc
