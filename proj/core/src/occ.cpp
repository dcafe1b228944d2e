#include "roadocc/occ.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <thread>
#include <utility>

#include "roadocc/classifiers.hpp"
#include "roadocc/error.hpp"

namespace roadocc {
namespace {

constexpr std::array<std::pair<ClassifierKind, std::string_view>, 12> kKindNames{{
    {ClassifierKind::Mb, "Mb"},
    {ClassifierKind::NN, "NN"},
    {ClassifierKind::G, "G"},
    {ClassifierKind::RG, "RG"},
    {ClassifierKind::MoG, "MoG"},
    {ClassifierKind::km, "km"},
    {ClassifierKind::kc, "kc"},
    {ClassifierKind::PCA, "PCA"},
    {ClassifierKind::dLP, "dLP"},
    {ClassifierKind::SVD, "SVD"},
    {ClassifierKind::MPM, "MPM"},
    {ClassifierKind::MST, "MST"},
}};

int parse_positive(std::string_view text, std::string_view label) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value <= 0) {
    throw ConfigError("bad classifier label '" + std::string(label) + "'");
  }
  return value;
}

}  // namespace

std::string_view kind_name(ClassifierKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "?";
}

std::string ClassifierSpec::label() const {
  switch (kind) {
    case ClassifierKind::Mb:
      return "Mb" + std::to_string(bins) +
             (training_source == SampleSource::augmented ? "-SN" : "-S");
    case ClassifierKind::MoG:
      return components == 0 ? std::string("MoGopt") : "MoG" + std::to_string(components);
    default:
      return std::string(kind_name(kind));
  }
}

void ClassifierSpec::validate() const {
  if (bins < 1 || bins > 4096) throw ConfigError("histogram bins must lie in [1, 4096]");
  if (components < 0 || components > 16) throw ConfigError("mixture components must lie in [0, 16]");
  if (k < 1) throw ConfigError("k must be positive");
  if (!(rejection >= 0.0 && rejection < 0.5)) throw ConfigError("rejection must lie in [0, 0.5)");
  if (!(energy > 0.0 && energy <= 1.0)) throw ConfigError("energy must lie in (0, 1]");
  if (!(svdd_c >= 0.0)) throw ConfigError("SVDD C must be non-negative");
  if (!(bandwidth >= 0.0)) throw ConfigError("bandwidth must be non-negative");
  if (!(nu > 0.0 && nu <= 1.0)) throw ConfigError("nu must lie in (0, 1]");
}

ClassifierSpec ClassifierSpec::defaults(ClassifierKind kind) {
  ClassifierSpec spec;
  spec.kind = kind;
  switch (kind) {
    case ClassifierKind::Mb:
    case ClassifierKind::NN:
    case ClassifierKind::G:
    case ClassifierKind::RG:
    case ClassifierKind::MoG:
      spec.training_source = SampleSource::full_roi;
      break;
    default:
      spec.training_source = SampleSource::superpixel_medians;
      break;
  }
  return spec;
}

ClassifierSpec ClassifierSpec::parse(std::string_view label) {
  if (label.starts_with("Mb")) {
    ClassifierSpec spec = defaults(ClassifierKind::Mb);
    const auto dash = label.find('-');
    if (dash == std::string_view::npos) throw ConfigError("bad classifier label '" + std::string(label) + "'");
    spec.bins = parse_positive(label.substr(2, dash - 2), label);
    const auto suffix = label.substr(dash + 1);
    if (suffix == "SN") {
      spec.training_source = SampleSource::augmented;
    } else if (suffix != "S") {
      throw ConfigError("bad classifier label '" + std::string(label) + "'");
    }
    return spec;
  }
  if (label.starts_with("MoG")) {
    ClassifierSpec spec = defaults(ClassifierKind::MoG);
    const auto rest = label.substr(3);
    spec.components = rest == "opt" ? 0 : parse_positive(rest, label);
    return spec;
  }
  for (const auto& [kind, name] : kKindNames) {
    if (name == label && kind != ClassifierKind::Mb && kind != ClassifierKind::MoG) {
      return defaults(kind);
    }
  }
  throw ConfigError("unknown classifier '" + std::string(label) + "'");
}

std::vector<ClassifierSpec> default_classifier_set() {
  std::vector<ClassifierSpec> set;
  for (std::string_view label : {"NN", "Mb64-S", "Mb64-SN", "Mb100-S", "Mb100-SN", "G", "RG", "MoG2",
                                 "MoG4", "MoGopt", "SVD", "PCA", "MPM", "MST", "dLP", "km", "kc"}) {
    set.push_back(ClassifierSpec::parse(label));
  }
  return set;
}

SampleSet prepare_training(const SampleSet& full_roi, const ClassifierSpec& spec,
                           std::uint64_t seed, const SuperpixelGrid& grid) {
  switch (spec.training_source) {
    case SampleSource::full_roi:
      return full_roi;
    case SampleSource::superpixel_medians:
      return reduce_superpixels(full_roi, grid);
    case SampleSource::augmented:
      return augment_noise(full_roi, kDefaultNoiseSigma, seed);
  }
  throw ConfigError("unknown training source");
}

std::unique_ptr<OneClassModel> fit(const SampleSet& samples, const ClassifierSpec& spec,
                                   std::uint64_t seed) {
  spec.validate();
  if (samples.size() == 0) throw ConfigError("no training samples");
  switch (spec.kind) {
    case ClassifierKind::Mb:
      return std::make_unique<HistogramModel>(HistogramModel::fit(samples, spec.bins));
    case ClassifierKind::NN:
      return std::make_unique<NearestNeighborModel>(NearestNeighborModel::fit(samples));
    case ClassifierKind::G:
      return std::make_unique<GaussianModel>(GaussianModel::fit(samples, spec.rejection));
    case ClassifierKind::RG:
      return std::make_unique<GaussianModel>(GaussianModel::fit_robust(samples, spec.rejection));
    case ClassifierKind::MoG:
      return std::make_unique<MixtureModel>(
          spec.components == 0 ? MixtureModel::fit_best_bic(samples, 5, seed)
                               : MixtureModel::fit(samples, spec.components, seed));
    case ClassifierKind::km:
      return std::make_unique<CenterModel>(CenterModel::fit_kmeans(samples, spec.k, seed));
    case ClassifierKind::kc:
      return std::make_unique<CenterModel>(CenterModel::fit_kcenter(samples, spec.k));
    case ClassifierKind::PCA:
      return std::make_unique<PcaModel>(PcaModel::fit(samples, spec.energy));
    case ClassifierKind::dLP:
      return std::make_unique<DistanceLpModel>(DistanceLpModel::fit(samples, spec.nu));
    case ClassifierKind::SVD: {
      SvddModel::FitOptions options;
      options.c = spec.svdd_c;
      options.nu = spec.nu;
      options.kernel = spec.kernel;
      options.bandwidth = spec.bandwidth;
      return std::make_unique<SvddModel>(SvddModel::fit(samples, options));
    }
    case ClassifierKind::MPM:
      return std::make_unique<MinimaxModel>(MinimaxModel::fit(samples, spec.rejection));
    case ClassifierKind::MST:
      return std::make_unique<SpanningTreeModel>(SpanningTreeModel::fit(samples));
  }
  throw ConfigError("unknown classifier kind");
}

LikelihoodMap score_image(const OneClassModel& model, const FeatureImage& features,
                          unsigned threads) {
  if (features.dims() != model.dims()) {
    throw DimensionError("feature", "model expects " + std::to_string(model.dims()) +
                                        " channels, image has " + std::to_string(features.dims()));
  }
  LikelihoodMap map(features.width(), features.height());
  const int height = features.height();
  const int width = features.width();
  auto work = [&](int y_begin, int y_end) {
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = 0; x < width; ++x) map.at(x, y) = model.score(features.row(x, y));
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(height)));
  if (count <= 1) {
    work(0, height);
    return map;
  }
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) {
      const int begin = static_cast<int>(static_cast<long>(height) * t / count);
      const int end = static_cast<int>(static_cast<long>(height) * (t + 1) / count);
      pool.emplace_back(work, begin, end);
    }
  }
  return map;
}

std::vector<double> score_rows(const OneClassModel& model, std::span<const double> rows) {
  const std::size_t d = model.dims();
  if (d == 0 || rows.size() % d != 0) throw DimensionError("feature", "row buffer width mismatch");
  std::vector<double> out(rows.size() / d);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = model.score(rows.subspan(i * d, d));
  return out;
}

BinaryMask binarize(const LikelihoodMap& map, double tau) {
  BinaryMask mask(map.width(), map.height());
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) mask.set(x, y, map.at(x, y) > tau);
  }
  return mask;
}

}  // namespace roadocc
