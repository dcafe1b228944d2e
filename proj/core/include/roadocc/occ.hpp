#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "roadocc/image.hpp"
#include "roadocc/sampling.hpp"

namespace roadocc {

/// One-class classifier families.
enum class ClassifierKind {
  Mb,   // normalized histogram
  NN,   // nearest neighbour
  G,    // Gaussian, Mahalanobis distance
  RG,   // robustified (trimmed) Gaussian
  MoG,  // mixture of Gaussians
  km,   // k-means
  kc,   // k-centers
  PCA,  // subspace reconstruction error
  dLP,  // linear-programming distance data description
  SVD,  // support vector data description
  MPM,  // single-class minimax probability machine
  MST,  // minimum spanning tree
};

std::string_view kind_name(ClassifierKind kind);

enum class SvddKernel { rbf, linear };

struct ClassifierSpec {
  ClassifierKind kind = ClassifierKind::G;
  /// Mb: bins per axis.
  int bins = 64;
  /// MoG: component count; 0 selects 1..5 by BIC.
  int components = 2;
  /// km / kc: number of centers.
  int k = 5;
  /// G / RG / MPM: fraction of training samples rejected.
  double rejection = 0.025;
  /// PCA: retained eigenvalue fraction.
  double energy = 0.95;
  /// SVD: box bound on the dual coefficients; 0 means 1 / (nu N).
  double svdd_c = 0.0;
  /// SVD: RBF width; 0 means median pairwise training distance.
  double bandwidth = 0.0;
  SvddKernel kernel = SvddKernel::rbf;
  /// dLP outlier fraction (and SVD default for C).
  double nu = 0.05;
  SampleSource training_source = SampleSource::full_roi;

  /// Short label used in tables and file names: "Mb64-S", "Mb100-SN",
  /// "MoG2", "MoGopt", "G", "SVD", ...
  std::string label() const;
  /// Throws ConfigError on out-of-range parameters.
  void validate() const;

  /// Default spec for a kind, including its default training source.
  static ClassifierSpec defaults(ClassifierKind kind);
  /// Inverse of label().
  static ClassifierSpec parse(std::string_view label);
};

/// The 17 classifier instances of the benchmark grid: NN; Mb 64/100 bins
/// x S/S&N; G; RG; MoG 2/4/opt; SVD; PCA; MPM; MST; dLP; km; kc.
std::vector<ClassifierSpec> default_classifier_set();

/// Trained classifier. score() is higher for more road-like inputs and
/// always lies in [0,1]. Models are immutable after fitting.
class OneClassModel {
 public:
  virtual ~OneClassModel() = default;

  virtual ClassifierKind kind() const noexcept = 0;
  virtual std::size_t dims() const noexcept = 0;
  virtual double score(std::span<const double> x) const = 0;
  /// Writes the model body (without the versioned header).
  virtual void write(std::ostream& os) const = 0;
};

/// d -> 1/(1+d). Strictly decreasing on d >= 0.
inline double distance_to_score(double d) noexcept { return 1.0 / (1.0 + d); }

/// Derives the training rows for spec from the full ROI sample set:
/// superpixel medians or noise augmentation as requested.
SampleSet prepare_training(const SampleSet& full_roi, const ClassifierSpec& spec,
                           std::uint64_t seed, const SuperpixelGrid& grid = {});

/// Fits the classifier described by spec directly on samples.
std::unique_ptr<OneClassModel> fit(const SampleSet& samples, const ClassifierSpec& spec,
                                   std::uint64_t seed = 0);

/// Scores every pixel. Rows are processed in parallel when threads > 1.
LikelihoodMap score_image(const OneClassModel& model, const FeatureImage& features,
                          unsigned threads = 1);

std::vector<double> score_rows(const OneClassModel& model, std::span<const double> rows);

/// L > tau is road; L == tau is background.
BinaryMask binarize(const LikelihoodMap& map, double tau);

void save_model(std::ostream& os, const OneClassModel& model);
std::unique_ptr<OneClassModel> load_model(std::istream& is);

}  // namespace roadocc
