#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "roadocc/error.hpp"
#include "roadocc/eval.hpp"
#include "support.hpp"

namespace roadocc {
namespace {

using testing::concordance_auc;

TEST(RocCurve, FourPixelExample) {
  const std::vector<double> s = {0.8, 0.6, 0.7, 0.2};
  const std::vector<std::uint8_t> t = {1, 1, 0, 0};
  const auto c = roc_curve(s, t);
  EXPECT_DOUBLE_EQ(c.auc, 0.75);
  EXPECT_DOUBLE_EQ(concordance_auc(s, t), 0.75);
  EXPECT_EQ(c.points.front(), (RocPoint{0, 0}));
  EXPECT_EQ(c.points.back(), (RocPoint{1, 1}));
}

TEST(RocCurve, PerfectSeparation) {
  const std::vector<double> s = {0.9, 0.8, 0.3, 0.1};
  const std::vector<std::uint8_t> t = {1, 1, 0, 0};
  const auto c = roc_curve(s, t);
  EXPECT_EQ(c.auc, 1.0);
  EXPECT_EQ(c.eer, 0.0);
}

TEST(RocCurve, AllTiedIsDiagonal) {
  const std::vector<double> s(10, 0.4);
  std::vector<std::uint8_t> t(10, 0);
  t[0] = t[3] = t[7] = 1;
  const auto c = roc_curve(s, t);
  EXPECT_EQ(c.auc, 0.5);
  EXPECT_EQ(c.points.size(), 2u);
  EXPECT_DOUBLE_EQ(c.eer, 0.5);
}

TEST(RocCurve, SingleClassIsUndefined) {
  const std::vector<double> s = {0.1, 0.2};
  EXPECT_THROW(roc_curve(s, std::vector<std::uint8_t>{1, 1}), UndefinedRateError);
  EXPECT_THROW(roc_curve(s, std::vector<std::uint8_t>{0, 0}), UndefinedRateError);
}

TEST(RocCurve, MonotoneFromOriginToCorner) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> level(0, 20);
  std::vector<double> s;
  std::vector<std::uint8_t> t;
  for (int i = 0; i < 500; ++i) {
    s.push_back(level(rng) / 20.0);
    t.push_back(rng() % 2);
  }
  const auto c = roc_curve(s, t);
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    EXPECT_GE(c.points[i].fpr, c.points[i - 1].fpr);
    EXPECT_GE(c.points[i].tpr, c.points[i - 1].tpr);
  }
  EXPECT_EQ(c.points.front(), (RocPoint{0, 0}));
  EXPECT_EQ(c.points.back(), (RocPoint{1, 1}));
}

TEST(RocCurve, AgreesWithConcordanceOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 199);
    std::uniform_int_distribution<int> level(0, 1 + trial % 30);
    std::vector<double> s(n);
    std::vector<std::uint8_t> t(n);
    for (int i = 0; i < n; ++i) {
      s[i] = level(rng) * 0.037;
      t[i] = rng() % 2;
    }
    t[0] = 1;
    t[1] = 0;
    EXPECT_NEAR(roc_curve(s, t).auc, concordance_auc(s, t), 1e-12);
  }
}

TEST(RocCurve, ClassSwapSymmetry) {
  std::mt19937_64 rng(3);
  std::vector<double> s, flipped;
  std::vector<std::uint8_t> t, swapped;
  for (int i = 0; i < 300; ++i) {
    s.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
    flipped.push_back(1.0 - s.back());
    t.push_back(i % 3 == 0);
    swapped.push_back(!t.back());
  }
  EXPECT_NEAR(roc_curve(s, t).auc, roc_curve(flipped, swapped).auc, 1e-12);
}

TEST(RocCurve, StrictlyIncreasingTransformKeepsPoints) {
  std::mt19937_64 rng(4);
  std::vector<double> s, cubed, affine;
  std::vector<std::uint8_t> t;
  for (int i = 0; i < 400; ++i) {
    const double v = std::uniform_int_distribution<int>(0, 50)(rng) / 50.0;
    s.push_back(v);
    cubed.push_back(v * v * v);
    affine.push_back(0.1 + 0.8 * v);
    t.push_back(rng() % 2);
  }
  const auto base = roc_curve(s, t);
  EXPECT_EQ(base.points, roc_curve(cubed, t).points);
  EXPECT_EQ(base.points, roc_curve(affine, t).points);
}

TEST(RocCurve, ImageOverloadChecksShape) {
  LikelihoodMap map(2, 2, 0.5);
  BinaryMask mask(2, 3);
  EXPECT_THROW(roc_curve(map, mask), DimensionError);
}

TEST(ScoreGroups, DescendingWithCounts) {
  const std::vector<double> s = {0.2, 0.9, 0.2, 0.5};
  const std::vector<std::uint8_t> t = {1, 0, 0, 1};
  const auto g = score_groups(s, t);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0].score, 0.9);
  EXPECT_EQ(g[0].negatives, 1u);
  EXPECT_EQ(g[2].score, 0.2);
  EXPECT_EQ(g[2].positives, 1u);
  EXPECT_EQ(g[2].negatives, 1u);
}

TEST(PooledRoc, EqualsRocOfConcatenation) {
  std::mt19937_64 rng(5);
  std::vector<std::vector<ScoreGroup>> parts;
  std::vector<double> all_s;
  std::vector<std::uint8_t> all_t;
  for (int img = 0; img < 4; ++img) {
    std::vector<double> s;
    std::vector<std::uint8_t> t;
    for (int i = 0; i < 100; ++i) {
      s.push_back(std::uniform_int_distribution<int>(0, 30)(rng) / 30.0);
      t.push_back(rng() % 2);
    }
    parts.push_back(score_groups(s, t));
    all_s.insert(all_s.end(), s.begin(), s.end());
    all_t.insert(all_t.end(), t.begin(), t.end());
  }
  const auto pooled = pooled_roc(parts);
  const auto direct = roc_curve(all_s, all_t);
  EXPECT_EQ(pooled.points, direct.points);
  EXPECT_DOUBLE_EQ(pooled.auc, direct.auc);
}

TEST(Auc, BasicShapes) {
  const std::vector<RocPoint> diagonal = {{0, 0}, {1, 1}};
  const std::vector<RocPoint> step = {{0, 0}, {0, 1}, {1, 1}};
  EXPECT_EQ(auc(diagonal), 0.5);
  EXPECT_EQ(auc(step), 1.0);
}

TEST(Eer, Examples) {
  EXPECT_EQ(eer(std::vector<RocPoint>{{0, 0}, {0, 1}, {1, 1}}), 0.0);
  EXPECT_DOUBLE_EQ(eer(std::vector<RocPoint>{{0, 0}, {1, 1}}), 0.5);
  EXPECT_NEAR(eer(std::vector<RocPoint>{{0, 0}, {0.2, 0.8}, {1, 1}}), 0.2, 1e-15);
  // Crossing inside a segment: from (0.1, 0.5) to (0.5, 0.9), 1 - tpr = fpr
  // at fpr = 0.3.
  EXPECT_NEAR(eer(std::vector<RocPoint>{{0, 0}, {0.1, 0.5}, {0.5, 0.9}, {1, 1}}), 0.3, 1e-12);
}

TEST(Confusion, CountsStrictThreshold) {
  const std::vector<double> s = {0.9, 0.5, 0.5, 0.1};
  const std::vector<std::uint8_t> t = {1, 1, 0, 0};
  const auto c = confusion(s, t, 0.5);
  EXPECT_EQ(c.tp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.fp, 0u);
  EXPECT_EQ(c.tn, 2u);
  EXPECT_DOUBLE_EQ(c.tpr(), 0.5);
  EXPECT_DOUBLE_EQ(c.fpr(), 0.0);
}

TEST(AverageRoc, IdenticalCurvesReturnSameShape) {
  RocCurve c;
  c.points = {{0, 0}, {0.25, 0.75}, {1, 1}};
  const std::vector<RocCurve> curves = {c, c, c};
  const auto avg = average_roc(curves);
  EXPECT_EQ(avg.points.size(), 1002u);
  EXPECT_NEAR(tpr_at(avg.points, 0.25), 0.75, 1e-12);
  EXPECT_NEAR(tpr_at(avg.points, 0.5), tpr_at(c.points, 0.5), 1e-12);
  EXPECT_NEAR(avg.auc, auc(c), 1e-12);
}

TEST(AverageRoc, PerfectPlusRandom) {
  RocCurve perfect, random;
  perfect.points = {{0, 0}, {0, 1}, {1, 1}};
  random.points = {{0, 0}, {1, 1}};
  const std::vector<RocCurve> curves = {perfect, random};
  EXPECT_NEAR(average_roc(curves).auc, 0.75, 0.001);
}

TEST(AverageRoc, StaysWithinInputEnvelope) {
  std::mt19937_64 rng(6);
  std::vector<RocCurve> curves;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> s;
    std::vector<std::uint8_t> t;
    for (int i = 0; i < 80; ++i) {
      s.push_back(std::uniform_real_distribution<double>(0, 1)(rng));
      t.push_back(s.back() + 0.3 * std::uniform_real_distribution<double>(-1, 1)(rng) > 0.5);
    }
    curves.push_back(roc_curve(s, t));
  }
  const auto avg = average_roc(curves);
  for (int i = 0; i < kAverageGridSteps; ++i) {
    const double f = double(i) / kAverageGridSteps;
    double lo = 1.0, hi = 0.0;
    for (const auto& c : curves) {
      lo = std::min(lo, tpr_at(c.points, f));
      hi = std::max(hi, tpr_at(c.points, f));
    }
    const double v = tpr_at(avg.points, f);
    EXPECT_GE(v, lo - 1e-12);
    EXPECT_LE(v, hi + 1e-12);
  }
}

TEST(AverageRoc, EmptyInputRejected) {
  EXPECT_THROW(average_roc(std::vector<RocCurve>{}), ConfigError);
}

TEST(RocCsv, HeaderRowsAndSummary) {
  RocCurve c;
  c.points = {{0, 0}, {0.5, 0.75}, {1, 1}};
  c.auc = auc(c);
  c.eer = eer(c);
  std::ostringstream os;
  write_roc_csv(os, c);
  EXPECT_EQ(os.str(), "fpr,tpr\n0,0\n0.5,0.75\n1,1\nauc=0.625,eer=0.4\n");
}

}  // namespace
}  // namespace roadocc
