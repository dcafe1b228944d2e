#include "roadocc/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "roadocc/error.hpp"

namespace roadocc {
namespace {

RocCurve curve_from_groups(const std::vector<ScoreGroup>& groups) {
  std::uint64_t pos = 0, neg = 0;
  for (const auto& g : groups) {
    pos += g.positives;
    neg += g.negatives;
  }
  if (pos == 0 || neg == 0) {
    throw UndefinedRateError("ROC needs at least one positive and one negative pixel");
  }
  RocCurve curve;
  curve.points.reserve(groups.size() + 1);
  curve.points.push_back({0.0, 0.0});
  std::uint64_t tp = 0, fp = 0;
  for (const auto& g : groups) {
    tp += g.positives;
    fp += g.negatives;
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                            static_cast<double>(tp) / static_cast<double>(pos)});
  }
  curve.auc = auc(curve.points);
  curve.eer = eer(curve.points);
  return curve;
}

}  // namespace

double ConfusionCounts::tpr() const {
  if (tp + fn == 0) throw UndefinedRateError("TPR is undefined without positive pixels");
  return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double ConfusionCounts::fpr() const {
  if (fp + tn == 0) throw UndefinedRateError("FPR is undefined without negative pixels");
  return static_cast<double>(fp) / static_cast<double>(fp + tn);
}

ConfusionCounts confusion(std::span<const double> scores, std::span<const std::uint8_t> truth,
                          double tau) {
  if (scores.size() != truth.size()) throw DimensionError("pixels", "score and truth sizes differ");
  ConfusionCounts c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] > tau;
    if (truth[i] != 0) {
      predicted ? ++c.tp : ++c.fn;
    } else {
      predicted ? ++c.fp : ++c.tn;
    }
  }
  return c;
}

std::vector<ScoreGroup> score_groups(std::span<const double> scores,
                                     std::span<const std::uint8_t> truth) {
  if (scores.size() != truth.size()) throw DimensionError("pixels", "score and truth sizes differ");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<ScoreGroup> groups;
  for (std::size_t i : order) {
    if (groups.empty() || groups.back().score != scores[i]) groups.push_back({scores[i], 0, 0});
    truth[i] != 0 ? ++groups.back().positives : ++groups.back().negatives;
  }
  return groups;
}

RocCurve roc_curve(std::span<const double> scores, std::span<const std::uint8_t> truth) {
  return curve_from_groups(score_groups(scores, truth));
}

RocCurve roc_curve(const LikelihoodMap& scores, const BinaryMask& truth) {
  if (scores.width() != truth.width() || scores.height() != truth.height()) {
    throw DimensionError(scores.width() != truth.width() ? "x" : "y",
                         "likelihood map and mask shapes differ");
  }
  return roc_curve(scores.values(), truth.bits());
}

RocCurve pooled_roc(std::span<const std::vector<ScoreGroup>> groups) {
  std::vector<ScoreGroup> merged;
  for (const auto& list : groups) merged.insert(merged.end(), list.begin(), list.end());
  std::stable_sort(merged.begin(), merged.end(),
                   [](const ScoreGroup& a, const ScoreGroup& b) { return a.score > b.score; });
  std::vector<ScoreGroup> out;
  for (const auto& g : merged) {
    if (!out.empty() && out.back().score == g.score) {
      out.back().positives += g.positives;
      out.back().negatives += g.negatives;
    } else {
      out.push_back(g);
    }
  }
  return curve_from_groups(out);
}

double auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) * 0.5;
  }
  return area;
}

double eer(std::span<const RocPoint> points) {
  auto gap = [](const RocPoint& p) { return 1.0 - p.tpr - p.fpr; };
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double g1 = gap(points[i - 1]);
    const double g2 = gap(points[i]);
    if (g1 >= 0.0 && g2 <= 0.0) {
      if (g1 == g2) return points[i - 1].fpr;
      const double t = g1 / (g1 - g2);
      return points[i - 1].fpr + t * (points[i].fpr - points[i - 1].fpr);
    }
  }
  return points.empty() ? 0.0 : points.back().fpr;
}

double tpr_at(std::span<const RocPoint> points, double fpr) {
  double best = 0.0;
  bool found = false;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].fpr == fpr) {
      best = found ? std::max(best, points[i].tpr) : points[i].tpr;
      found = true;
    } else if (i > 0 && points[i - 1].fpr < fpr && fpr < points[i].fpr) {
      const double t = (fpr - points[i - 1].fpr) / (points[i].fpr - points[i - 1].fpr);
      const double v = points[i - 1].tpr + t * (points[i].tpr - points[i - 1].tpr);
      best = found ? std::max(best, v) : v;
      found = true;
    }
  }
  return best;
}

RocCurve average_roc(std::span<const RocCurve> curves) {
  if (curves.empty()) throw ConfigError("average_roc needs at least one curve");
  RocCurve out;
  out.points.reserve(kAverageGridSteps + 2);
  out.points.push_back({0.0, 0.0});
  for (int i = 0; i <= kAverageGridSteps; ++i) {
    const double f = static_cast<double>(i) / kAverageGridSteps;
    double sum = 0.0;
    for (const auto& c : curves) sum += tpr_at(c.points, f);
    out.points.push_back({f, sum / static_cast<double>(curves.size())});
  }
  out.points.back() = {1.0, 1.0};
  out.auc = auc(out.points);
  out.eer = eer(out.points);
  return out;
}

void write_roc_csv(std::ostream& os, const RocCurve& curve) {
  char buf[96];
  os << "fpr,tpr\n";
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g\n", p.fpr, p.tpr);
    os << buf;
  }
  std::snprintf(buf, sizeof buf, "auc=%.9g,eer=%.9g\n", curve.auc, curve.eer);
  os << buf;
}

}  // namespace roadocc
