// roadocc command-line front end: bench, detect, occupancy,
// validate-annotations.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "roadocc/annotation.hpp"
#include "roadocc/bench.hpp"
#include "roadocc/config.hpp"
#include "roadocc/dataset.hpp"
#include "roadocc/error.hpp"
#include "roadocc/image_io.hpp"

namespace fs = std::filesystem;
using namespace roadocc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitPartial = 2;

const char* const kSubcommands[] = {"bench", "detect", "occupancy", "validate-annotations"};

bool truthy(std::string value) {
  std::transform(value.begin(), value.end(), value.begin(), [](unsigned char c) { return std::tolower(c); });
  return value == "1" || value == "true" || value == "yes" || value == "on";
}

// Expands "--config FILE" into the equivalent flags, placed ahead of the
// explicit arguments so that the command line wins.
std::vector<std::string> expand_config(std::vector<std::string> args, const CLI::App& app) {
  auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
    return std::find(std::begin(kSubcommands), std::end(kSubcommands), a) != std::end(kSubcommands);
  });
  if (sub == args.end()) return args;
  const auto sub_index = static_cast<std::size_t>(sub - args.begin());
  std::string config;
  std::vector<std::string> rest;
  for (std::size_t i = sub_index + 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].starts_with("--config=")) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (config.empty()) return args;

  const CLI::App* subcommand = app.get_subcommand(args[sub_index]);
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(sub_index) + 1);
  for (const auto& [key, value] : load_key_value(config)) {
    const CLI::Option* opt = subcommand->get_option_no_throw("--" + key);
    if (opt == nullptr) throw ConfigError("unknown key '" + key + "' in " + config);
    if (opt->get_expected_min() == 0) {
      if (truthy(value)) out.push_back("--" + key);
    } else {
      out.push_back("--" + key);
      out.push_back(value);
    }
  }
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

struct RoiFlags {
  int width = RoiSpec{}.width;
  int height = RoiSpec{}.height;
  double anchor = RoiSpec{}.horizontal_anchor;
  int margin = RoiSpec{}.bottom_margin;

  void add(CLI::App& app) {
    app.add_option("--roi-width", width, "ROI width in pixels")->capture_default_str();
    app.add_option("--roi-height", height, "ROI height in pixels")->capture_default_str();
    app.add_option("--roi-anchor", anchor, "ROI center as a fraction of the image width")
        ->capture_default_str();
    app.add_option("--roi-margin", margin, "rows between the ROI and the bottom edge")
        ->capture_default_str();
  }
  RoiSpec spec() const { return {width, height, anchor, margin}; }
};

std::vector<Representation> parse_reps(const std::string& text) {
  if (text.empty() || text == "all") return canonical_representations();
  std::vector<Representation> reps;
  for (const auto& item : split_list(text)) reps.push_back(Representation::parse(item));
  return reps;
}

std::vector<ClassifierSpec> parse_classifiers(const std::string& text) {
  if (text.empty() || text == "all") return default_classifier_set();
  std::vector<ClassifierSpec> specs;
  for (const auto& item : split_list(text)) specs.push_back(ClassifierSpec::parse(item));
  return specs;
}

std::vector<fs::path> annotation_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roadocc: one-class road detection benchmark"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", "roadocc 0.1.0");

  // bench
  BenchmarkConfig bench;
  std::string bench_reps, bench_clfs, averaging = "vertical", bench_cache, config_path;
  RoiFlags bench_roi;
  bool quiet = false;
  auto* cmd_bench = app.add_subcommand("bench", "run the representation x classifier grid");
  cmd_bench->add_option("--dataset", bench.dataset, "dataset root with images/ and annotations/")->required();
  cmd_bench->add_option("--out", bench.output, "output directory")->required();
  cmd_bench->add_option("--reps", bench_reps, "comma-separated representations (default: all 19)");
  cmd_bench->add_option("--classifiers", bench_clfs, "comma-separated classifier labels (default: all 17)");
  cmd_bench->add_option("--seed", bench.seed, "base random seed")->capture_default_str();
  cmd_bench->add_option("--averaging", averaging, "ROC averaging across images")
      ->check(CLI::IsMember({"vertical", "pooled"}))
      ->capture_default_str();
  cmd_bench->add_option("--label", bench.label, "ground-truth object name")->capture_default_str();
  cmd_bench->add_option("--user", bench.user, "ground-truth annotator (default: first per file)");
  cmd_bench->add_flag("--union-users", bench.union_users, "merge the polygons of every annotator");
  cmd_bench->add_flag("--maps", bench.write_maps, "write maps/<stem>_<rep>_<clf>.pgm likelihood maps");
  cmd_bench->add_option("--threads", bench.threads, "worker threads, 0 = all cores")->capture_default_str();
  cmd_bench->add_option("--cache-dir", bench_cache, "reuse fitted models from this directory");
  cmd_bench->add_option("--grid-cols", bench.grid.cols, "superpixel grid columns")->capture_default_str();
  cmd_bench->add_option("--grid-rows", bench.grid.rows, "superpixel grid rows")->capture_default_str();
  cmd_bench->add_flag("--quiet", quiet, "suppress progress output");
  cmd_bench->add_option("--config", config_path, "key = value file mirroring these flags");
  bench_roi.add(*cmd_bench);

  // detect
  std::string det_image, det_rep = "HS", det_clf = "RG", det_likelihood, det_mask, det_config;
  double tau = 0.5;
  std::uint64_t det_seed = 0;
  RoiFlags det_roi;
  auto* cmd_detect = app.add_subcommand("detect", "train on one image's ROI and score it");
  cmd_detect->add_option("--image", det_image, "PNG or PPM image")->required();
  cmd_detect->add_option("--rep", det_rep, "color representation")->capture_default_str();
  cmd_detect->add_option("--classifier", det_clf, "classifier label")->capture_default_str();
  cmd_detect->add_option("--tau", tau, "road when likelihood > tau")->capture_default_str();
  cmd_detect->add_option("--seed", det_seed, "random seed")->capture_default_str();
  cmd_detect->add_option("--likelihood", det_likelihood, "output PGM for the likelihood map");
  cmd_detect->add_option("--mask", det_mask, "output PGM for the binary mask");
  cmd_detect->add_option("--config", det_config, "key = value file mirroring these flags");
  det_roi.add(*cmd_detect);

  // occupancy
  fs::path occ_dataset;
  std::string occ_label = "road", occ_out, occ_config;
  std::optional<std::string> occ_user;
  bool occ_union = false;
  double bin_width = 0.05;
  auto* cmd_occ = app.add_subcommand("occupancy", "histogram of road-area fractions");
  cmd_occ->add_option("--dataset", occ_dataset, "dataset root with annotations/")->required();
  cmd_occ->add_option("--label", occ_label, "object name counted as road")->capture_default_str();
  cmd_occ->add_option("--user", occ_user, "annotator (default: first per file)");
  cmd_occ->add_flag("--union-users", occ_union, "merge the polygons of every annotator");
  cmd_occ->add_option("--bin-width", bin_width, "histogram bin width")->capture_default_str();
  cmd_occ->add_option("--out", occ_out, "CSV output (default: stdout)");
  cmd_occ->add_option("--config", occ_config, "key = value file mirroring these flags");

  // validate-annotations
  std::vector<std::string> val_files;
  fs::path val_dataset;
  std::string val_config;
  bool strict = false;
  auto* cmd_val = app.add_subcommand("validate-annotations", "schema check for annotation XML");
  cmd_val->add_option("files", val_files, "annotation files");
  cmd_val->add_option("--dataset", val_dataset, "check every file in <dataset>/annotations");
  cmd_val->add_flag("--strict", strict, "treat warnings as errors");
  cmd_val->add_option("--config", val_config, "key = value file mirroring these flags");
  cmd_val->get_option("files")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = expand_config(std::move(args), app);
    std::vector<const char*> raw;
    for (const auto& a : args) raw.push_back(a.c_str());
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitFatal;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFatal;
  }

  try {
    if (cmd_bench->parsed()) {
      bench.representations = parse_reps(bench_reps);
      bench.classifiers = parse_classifiers(bench_clfs);
      bench.averaging = averaging == "pooled" ? Averaging::pooled : Averaging::vertical;
      bench.roi = bench_roi.spec();
      if (!bench_cache.empty()) bench.cache_dir = bench_cache;
      LogSink log;
      if (!quiet) log = [](std::string_view line) { std::fprintf(stderr, "%.*s\n", static_cast<int>(line.size()), line.data()); };
      const BenchmarkResult result = run_benchmark(bench, log);
      emit_reports(result, bench.output);
      std::fprintf(stderr, "evaluated %zu image(s), %zu skip record(s); reports in %s\n", result.evaluated.size(),
                   result.skipped.size(), bench.output.string().c_str());
      return result.skipped.empty() ? kExitOk : kExitPartial;
    }

    if (cmd_detect->parsed()) {
      const ImageBuffer image = load_image(det_image);
      const DetectionResult r = detect(image, Representation::parse(det_rep), ClassifierSpec::parse(det_clf),
                                       det_roi.spec(), det_seed, tau);
      if (!det_likelihood.empty()) write_pgm(det_likelihood, r.likelihood);
      if (!det_mask.empty()) write_pgm(det_mask, r.mask);
      std::printf("trained on %zu rows; %zu of %zu pixels above tau=%g\n", r.training_rows, r.mask.count(),
                  r.likelihood.size(), tau);
      return kExitOk;
    }

    if (cmd_occ->parsed()) {
      const fs::path dir = occ_dataset / "annotations";
      if (!fs::is_directory(dir)) throw IoError("missing directory " + dir.string());
      std::vector<BinaryMask> masks;
      int failures = 0;
      for (const auto& file : annotation_files(dir)) {
        try {
          const auto doc = load_annotation(file.string()).document;
          UserFilter filter;
          if (!occ_union) {
            if (occ_user) {
              filter.user = occ_user;
            } else if (const auto users = doc.users_for(occ_label); !users.empty()) {
              filter.user = users.front();
            }
          }
          masks.push_back(rasterize(doc, occ_label, filter));
        } catch (const Error& e) {
          std::fprintf(stderr, "%s: %s\n", file.string().c_str(), e.what());
          ++failures;
        }
      }
      if (masks.empty()) throw ConfigError("no readable annotation in " + dir.string());
      std::string csv = "bin_lo,bin_hi,count\n";
      char buf[96];
      for (const auto& bin : occupancy_histogram(masks, bin_width)) {
        std::snprintf(buf, sizeof buf, "%.4g,%.4g,%zu\n", bin.lo, bin.hi, bin.count);
        csv += buf;
      }
      if (occ_out.empty()) {
        std::fputs(csv.c_str(), stdout);
      } else {
        std::ofstream out(occ_out, std::ios::binary);
        if (!(out << csv)) throw IoError("cannot write " + occ_out);
      }
      return failures == 0 ? kExitOk : kExitPartial;
    }

    if (cmd_val->parsed()) {
      std::vector<fs::path> files(val_files.begin(), val_files.end());
      if (!val_dataset.empty()) {
        const auto more = annotation_files(val_dataset / "annotations");
        files.insert(files.end(), more.begin(), more.end());
      }
      if (files.empty()) throw ConfigError("no annotation files given");
      int errors = 0, warnings = 0;
      for (const auto& file : files) {
        try {
          const auto parsed = load_annotation(file.string());
          for (const auto& w : parsed.warnings) std::printf("%s: warning: %s\n", file.string().c_str(), w.c_str());
          warnings += static_cast<int>(parsed.warnings.size());
          if (parsed.warnings.empty()) std::printf("%s: ok\n", file.string().c_str());
        } catch (const Error& e) {
          std::printf("%s: error: %s\n", file.string().c_str(), e.what());
          ++errors;
        }
      }
      return errors > 0 || (strict && warnings > 0) ? kExitFatal : kExitOk;
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFatal;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFatal;
  }
  return kExitFatal;
}
