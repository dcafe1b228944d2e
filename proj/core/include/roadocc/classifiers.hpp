#pragma once

// Concrete one-class models. Most callers only need roadocc/occ.hpp; these
// types expose the learned state for inspection and testing.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "roadocc/occ.hpp"
#include "roadocc/sampling.hpp"

namespace roadocc {

/// Joint normalized histogram over the column bounds. Scores are bin masses.
class HistogramModel final : public OneClassModel {
 public:
  static HistogramModel fit(const SampleSet& samples, int bins);

  ClassifierKind kind() const noexcept override { return ClassifierKind::Mb; }
  std::size_t dims() const noexcept override { return dims_; }
  double score(std::span<const double> x) const override;
  void write(std::ostream& os) const override;
  static HistogramModel read(std::istream& is);

  int bins() const noexcept { return bins_; }
  const std::vector<double>& mass() const noexcept { return mass_; }
  std::size_t bin_index(std::span<const double> x) const;

  inline static constexpr std::size_t kMaxDims = 3;

 private:
  std::size_t dims_ = 0;
  int bins_ = 0;
  std::vector<double> lo_, hi_;
  std::vector<double> mass_;
};

/// Single Gaussian scored by Mahalanobis distance. Used by both G (one
/// trimming pass) and RG (trimming iterated to a fixpoint).
class GaussianModel final : public OneClassModel {
 public:
  static GaussianModel fit(const SampleSet& samples, double rejection);
  static GaussianModel fit_robust(const SampleSet& samples, double rejection,
                                  int max_iterations = 20);

  ClassifierKind kind() const noexcept override { return kind_; }
  std::size_t dims() const noexcept override { return mean_.size(); }
  double score(std::span<const double> x) const override {
    return distance_to_score(mahalanobis(x));
  }
  void write(std::ostream& os) const override;
  static GaussianModel read(std::istream& is, ClassifierKind kind);

  /// Squared form (x-mu)^T S^-1 (x-mu).
  double mahalanobis(std::span<const double> x) const;

  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& covariance() const noexcept { return cov_; }
  double ridge() const noexcept { return ridge_; }
  int iterations() const noexcept { return iterations_; }
  std::size_t support_size() const noexcept { return support_size_; }

 private:
  static GaussianModel fit_trimmed(const SampleSet& samples, double rejection,
                                   int max_iterations, ClassifierKind kind);

  ClassifierKind kind_ = ClassifierKind::G;
  std::vector<double> mean_, cov_, inv_cov_;
  double ridge_ = 0.0;
  int iterations_ = 0;
  std::size_t support_size_ = 0;
};

/// Gaussian mixture fitted by EM. Score is sum_n P_n exp(-m_n(x)), with
/// m_n the squared Mahalanobis distance to component n.
class MixtureModel final : public OneClassModel {
 public:
  struct Component {
    double weight = 0.0;
    std::vector<double> mean;
    std::vector<double> cov;
    std::vector<double> inv_cov;
    double ridge = 0.0;
  };

  struct FitOptions {
    int max_iterations = 100;
    double tolerance = 1e-6;
  };

  static MixtureModel fit(const SampleSet& samples, int components, std::uint64_t seed,
                          FitOptions options);
  static MixtureModel fit(const SampleSet& samples, int components, std::uint64_t seed) {
    return fit(samples, components, seed, FitOptions{});
  }
  /// Fits 1..max_components and keeps the lowest BIC.
  static MixtureModel fit_best_bic(const SampleSet& samples, int max_components,
                                   std::uint64_t seed);

  ClassifierKind kind() const noexcept override { return ClassifierKind::MoG; }
  std::size_t dims() const noexcept override { return dims_; }
  double score(std::span<const double> x) const override;
  void write(std::ostream& os) const override;
  static MixtureModel read(std::istream& is);

  const std::vector<Component>& components() const noexcept { return components_; }
  int iterations() const noexcept { return iterations_; }
  double log_likelihood() const noexcept { return log_likelihood_; }
  double bic() const noexcept { return bic_; }
  int reseeds() const noexcept { return reseeds_; }

 private:
  std::size_t dims_ = 0;
  std::vector<Component> components_;
  int iterations_ = 0;
  int reseeds_ = 0;
  double log_likelihood_ = 0.0;
  double bic_ = 0.0;
};

/// Center-based description (k-means or k-centers). Score is
/// 1/(1 + min_j |x - c_j|^2).
class CenterModel final : public OneClassModel {
 public:
  static CenterModel fit_kmeans(const SampleSet& samples, int k, std::uint64_t seed,
                                int max_iterations = 100);
  static CenterModel fit_kcenter(const SampleSet& samples, int k);

  ClassifierKind kind() const noexcept override { return kind_; }
  std::size_t dims() const noexcept override { return dims_; }
  double score(std::span<const double> x) const override {
    return distance_to_score(min_squared_distance(x));
  }
  void write(std::ostream& os) const override;
  static CenterModel read(std::istream& is, ClassifierKind kind);

  double min_squared_distance(std::span<const double> x) const;

  std::size_t center_count() const noexcept { return dims_ == 0 ? 0 : centers_.size() / dims_; }
  std::span<const double> center(std::size_t j) const {
    return {centers_.data() + j * dims_, dims_};
  }
  /// k-means: sum of min squared distances after every assignment step.
  const std::vector<double>& objective_history() const noexcept { return objective_history_; }
  /// k-centers: max over training rows of the distance to the nearest center.
  double covering_radius() const noexcept { return covering_radius_; }
  /// k-centers: training row indices chosen as centers.
  const std::vector<std::size_t>& center_indices() const noexcept { return center_indices_; }

 private:
  ClassifierKind kind_ = ClassifierKind::km;
  std::size_t dims_ = 0;
  std::vector<double> centers_;
  std::vector<double> objective_history_;
  std::vector<std::size_t> center_indices_;
  double covering_radius_ = 0.0;
};

/// Principal subspace; score is 1/(1 + squared reconstruction error).
class PcaModel final : public OneClassModel {
 public:
  /// Throws UnsupportedDimensionError when samples have a single column.
  static PcaModel fit(const SampleSet& samples, double energy);

  ClassifierKind kind() const noexcept override { return ClassifierKind::PCA; }
  std::size_t dims() const noexcept override { return mean_.size(); }
  double score(std::span<const double> x) const override {
    return distance_to_score(reconstruction_error(x));
  }
  void write(std::ostream& os) const override;
  static PcaModel read(std::istream& is);

  double reconstruction_error(std::span<const double> x) const;

  std::size_t basis_size() const noexcept { return basis_count_; }
  const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }
  double retained_energy() const noexcept { return retained_energy_; }

 private:
  std::vector<double> mean_;
  std::vector<double> basis_;  // basis_count_ x d, orthonormal rows
  std::size_t basis_count_ = 0;
  std::vector<double> eigenvalues_;  // descending
  double retained_energy_ = 0.0;
};

class KdTree;

/// Stores the training rows; score is 1/(1 + min squared distance).
class NearestNeighborModel final : public OneClassModel {
 public:
  static NearestNeighborModel fit(const SampleSet& samples);

  NearestNeighborModel();
  NearestNeighborModel(NearestNeighborModel&&) noexcept;
  NearestNeighborModel& operator=(NearestNeighborModel&&) noexcept;
  ~NearestNeighborModel() override;

  ClassifierKind kind() const noexcept override { return ClassifierKind::NN; }
  std::size_t dims() const noexcept override { return dims_; }
  double score(std::span<const double> x) const override {
    return distance_to_score(min_squared_distance(x));
  }
  void write(std::ostream& os) const override;
  static NearestNeighborModel read(std::istream& is);

  double min_squared_distance(std::span<const double> x) const;
  std::size_t size() const noexcept { return dims_ == 0 ? 0 : rows_.size() / dims_; }

 private:
  void build();

  std::size_t dims_ = 0;
  std::vector<double> rows_;  // duplicates removed, sorted
  std::unique_ptr<KdTree> tree_;
};

/// f(x) = sum_i w_i |x - y_i| with sparse weights from a linear program.
class DistanceLpModel final : public OneClassModel {
 public:
  static DistanceLpModel fit(const SampleSet& samples, double nu);

  ClassifierKind kind() const noexcept override { return ClassifierKind::dLP; }
  std::size_t dims() const noexcept override { return dims_; }
  double score(std::span<const double> x) const override {
    return distance_to_score(proximity(x));
  }
  void write(std::ostream& os) const override;
  static DistanceLpModel read(std::istream& is);

  double proximity(std::span<const double> x) const;

  /// Training rows with their LP weights (zero weights included).
  std::span<const double> prototype(std::size_t i) const {
    return {prototypes_.data() + i * dims_, dims_};
  }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& slacks() const noexcept { return slacks_; }
  double rho() const noexcept { return rho_; }
  double nu() const noexcept { return nu_; }
  std::size_t support_count(double threshold = 1e-8) const;

 private:
  std::size_t dims_ = 0;
  std::vector<double> prototypes_;
  std::vector<double> weights_;
  std::vector<double> slacks_;
  double rho_ = 0.0;
  double nu_ = 0.05;
};

/// Minimum enclosing hypersphere in kernel space, fitted by SMO on the dual.
class SvddModel final : public OneClassModel {
 public:
  struct FitOptions {
    double c = 0.0;          // 0: 1 / (nu N)
    double nu = 0.05;
    SvddKernel kernel = SvddKernel::rbf;
    double bandwidth = 0.0;  // 0: median pairwise distance
    double tolerance = 1e-6;
    long max_iterations = 200000;
  };

  static SvddModel fit(const SampleSet& samples, FitOptions options);
  static SvddModel fit(const SampleSet& samples) { return fit(samples, FitOptions{}); }

  ClassifierKind kind() const noexcept override { return ClassifierKind::SVD; }
  std::size_t dims() const noexcept override { return dims_; }
  double score(std::span<const double> x) const override;
  void write(std::ostream& os) const override;
  static SvddModel read(std::istream& is);

  double kernel(std::span<const double> x, std::span<const double> y) const;
  /// Squared kernel-space distance from x to the sphere center.
  double center_distance2(std::span<const double> x) const;

  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double c() const noexcept { return c_; }
  double radius2() const noexcept { return radius2_; }
  double bandwidth() const noexcept { return bandwidth_; }
  long iterations() const noexcept { return iterations_; }
  double kkt_violation() const noexcept { return kkt_violation_; }
  std::span<const double> training_row(std::size_t i) const {
    return {rows_.data() + i * dims_, dims_};
  }

 private:
  std::size_t dims_ = 0;
  SvddKernel kernel_ = SvddKernel::rbf;
  double bandwidth_ = 1.0;
  double c_ = 1.0;
  std::vector<double> rows_;
  std::vector<double> alpha_;
  double alpha_k_alpha_ = 0.0;
  double radius2_ = 0.0;
  long iterations_ = 0;
  double kkt_violation_ = 0.0;
};

/// Linear single-class minimax machine: w = S^-1 m / (m^T S^-1 m), score
/// is logistic(w.x - b) with b the rejection quantile of the training scores.
class MinimaxModel final : public OneClassModel {
 public:
  static MinimaxModel fit(const SampleSet& samples, double rejection);
  /// Builds w from moments alone; offset is zero.
  static MinimaxModel from_moments(std::span<const double> mean, std::span<const double> cov);

  ClassifierKind kind() const noexcept override { return ClassifierKind::MPM; }
  std::size_t dims() const noexcept override { return w_.size(); }
  double score(std::span<const double> x) const override;
  void write(std::ostream& os) const override;
  static MinimaxModel read(std::istream& is);

  double raw_score(std::span<const double> x) const;
  const std::vector<double>& direction() const noexcept { return w_; }
  double offset() const noexcept { return offset_; }
  double ridge() const noexcept { return ridge_; }

 private:
  std::vector<double> w_;
  double offset_ = 0.0;
  double ridge_ = 0.0;
};

/// Euclidean minimum spanning tree; score is 1/(1 + distance to the
/// nearest tree edge), projections clamped to the segments.
class SpanningTreeModel final : public OneClassModel {
 public:
  static SpanningTreeModel fit(const SampleSet& samples);

  ClassifierKind kind() const noexcept override { return ClassifierKind::MST; }
  std::size_t dims() const noexcept override { return dims_; }
  double score(std::span<const double> x) const override {
    return distance_to_score(edge_distance(x));
  }
  void write(std::ostream& os) const override;
  static SpanningTreeModel read(std::istream& is);

  double edge_distance(std::span<const double> x) const;

  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const noexcept {
    return edges_;
  }
  double total_length() const;

 private:
  std::size_t dims_ = 0;
  std::vector<double> rows_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

}  // namespace roadocc
