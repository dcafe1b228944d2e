#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "roadocc/image.hpp"

namespace roadocc {

struct ConfusionCounts {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;

  double tpr() const;
  double fpr() const;
};

/// Confusion counts of the binarization L > tau against the truth.
ConfusionCounts confusion(std::span<const double> scores, std::span<const std::uint8_t> truth,
                          double tau);

struct RocPoint {
  double fpr;
  double tpr;

  bool operator==(const RocPoint&) const = default;
};

/// Piecewise-linear ROC from (0,0) to (1,1) with its AUC and EER.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
  double eer = 0.0;
};

/// Exact threshold sweep over every distinct score. Equal scores form a
/// single step, so ties contribute half a concordant pair. Throws
/// UndefinedRateError when truth holds a single class.
RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> truth);
RocCurve roc_curve(const LikelihoodMap& scores, const BinaryMask& truth);

/// Positive and negative counts sharing one score value.
struct ScoreGroup {
  double score;
  std::uint64_t positives;
  std::uint64_t negatives;
};

/// Distinct scores in descending order with their class counts.
std::vector<ScoreGroup> score_groups(std::span<const double> scores,
                                     std::span<const std::uint8_t> truth);

/// ROC over the union of several group lists (pixel pooling across images).
RocCurve pooled_roc(std::span<const std::vector<ScoreGroup>> groups);

/// Trapezoidal area under the points.
double auc(std::span<const RocPoint> points);
inline double auc(const RocCurve& curve) { return auc(curve.points); }

/// Error rate where (1 - TPR) = FPR, by linear interpolation.
double eer(std::span<const RocPoint> points);
inline double eer(const RocCurve& curve) { return eer(curve.points); }

/// Highest TPR reached at the given FPR, interpolating linearly between
/// curve points.
double tpr_at(std::span<const RocPoint> points, double fpr);

inline constexpr int kAverageGridSteps = 1000;

/// Vertical averaging: mean TPR on the grid FPR = i/1000, i = 0..1000.
/// The result starts at (0,0) and ends at (1,1).
RocCurve average_roc(std::span<const RocCurve> curves);

/// CSV with header "fpr,tpr", 9 significant digits, and a trailing
/// "auc=<v>,eer=<v>" summary line.
void write_roc_csv(std::ostream& os, const RocCurve& curve);

}  // namespace roadocc
