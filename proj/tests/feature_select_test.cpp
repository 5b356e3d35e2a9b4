#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <mutex>
#include <set>

#include "test_support.hpp"
#include "winpred/error.hpp"
#include "winpred/feature_select.hpp"

namespace winpred {
namespace {

constexpr auto D = MatchOutcome::DireWin;
constexpr auto R = MatchOutcome::RadiantWin;

std::vector<MatchOutcome> labels_from(const std::vector<int>& ys) {
  std::vector<MatchOutcome> out;
  for (int y : ys) out.push_back(y ? R : D);
  return out;
}

using testing::kLabels;
using testing::toy_five;

TEST(SymmetricUncertainty, Extremes) {
  const auto labels = labels_from(kLabels);
  std::vector<double> same(kLabels.begin(), kLabels.end());
  EXPECT_NEAR(feature_class_correlation(same, labels), 1.0, 1e-12);
  std::vector<double> constant(kLabels.size(), 3.0);
  EXPECT_EQ(feature_class_correlation(constant, labels), 0.0);
  try {
    feature_class_correlation(same, std::vector<MatchOutcome>(kLabels.size(), R));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingleClassData);
  }
}

// Reference values computed once with an independent script and frozen.
TEST(SymmetricUncertainty, FrozenTableValues) {
  const auto labels = labels_from(kLabels);
  const std::vector<double> four = {0, 0, 1, 1, 2, 2, 3, 3, 0, 1, 2, 3, 3, 3, 2, 1, 0, 0, 1, 2};
  EXPECT_NEAR(feature_class_correlation(four, labels), 0.30161202573812473, 1e-9);
  const std::vector<double> wide = {0.5,  1.7,  2.2,  3.9,  4.1,  5.5,  6.3,  7.8,  8.0,  9.4,
                                    10.1, 11.6, 12.2, 13.5, 14.9, 15.0, 16.7, 17.3, 18.8, 19.9};
  const auto codes = discretize(wide);
  EXPECT_EQ(codes.codes, (std::vector<int>{0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6, 7, 7, 8, 8, 9, 9}));
  EXPECT_NEAR(feature_class_correlation(wide, labels), 0.22841641962840439, 1e-9);
  // and the in-test oracle agrees
  std::vector<int> four_int(four.begin(), four.end());
  EXPECT_NEAR(testing::oracle_su(four_int, kLabels), 0.30161202573812473, 1e-12);
}

TEST(SymmetricUncertainty, SymmetricAndBounded) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(30), b(30);
    for (auto& v : a) v = static_cast<double>(rng() % 5);
    for (auto& v : b) v = static_cast<double>(rng() % 50);
    const auto da = discretize(a), db = discretize(b);
    const double ab = symmetric_uncertainty(da, db), ba = symmetric_uncertainty(db, da);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0 + 1e-12);
    std::vector<int> ca(da.codes), cb(db.codes);
    EXPECT_NEAR(ab, testing::oracle_su(ca, cb), 1e-12);
  }
}

TEST(Discretize, HeroColumnsStayThreeValued) {
  const std::vector<double> hero = {-1, 0, 1, 0, 0, 1, -1, 0};
  const auto d = discretize(hero);
  EXPECT_EQ(d.levels, 3);
  EXPECT_EQ(d.codes, (std::vector<int>{0, 1, 2, 1, 1, 2, 0, 1}));
}

// ---------------------------------------------------------------------------

TEST(CfsMerit, AllSubsetsMatchOracle) {
  const auto data = toy_five();
  const CfsEvaluator evaluator(data);
  for (unsigned mask = 1; mask < 32; ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < 5; ++j) {
      if (mask & (1u << j)) idx.push_back(j);
    }
    const double want = testing::oracle_merit(idx, data);
    EXPECT_NEAR(evaluator.merit(FeatureSubset(idx)), want, 1e-9) << mask;
    EXPECT_NEAR(cfs_merit(FeatureSubset(idx), data), want, 1e-9) << mask;
  }
  EXPECT_EQ(evaluator.merit(FeatureSubset{}), 0.0);
}

TEST(CfsMerit, SingleFeatureIsClassCorrelation) {
  const auto data = toy_five();
  const CfsEvaluator evaluator(data);
  for (std::size_t j = 0; j < 5; ++j) {
    EXPECT_DOUBLE_EQ(evaluator.merit(FeatureSubset({j})), evaluator.class_correlation(j));
  }
}

TEST(CfsMerit, RedundantCopyDoesNotHelp) {
  const auto base = toy_five();
  auto col = base.column(0);
  const auto data = testing::from_columns({col, col}, kLabels);
  const CfsEvaluator evaluator(data);
  EXPECT_NEAR(evaluator.merit(FeatureSubset({0, 1})), evaluator.merit(FeatureSubset({0})), 1e-12);
  EXPECT_NEAR(evaluator.feature_correlation(0, 1), 1.0, 1e-12);
}

TEST(CfsMerit, InvariantUnderMonotoneTransforms) {
  const auto data = toy_five();
  std::vector<std::vector<double>> cols;
  for (std::size_t j = 0; j < 5; ++j) {
    auto c = data.column(j);
    for (auto& v : c) v = j % 2 == 0 ? std::exp(v / 50.0) * 3 - 1 : std::cbrt(v) * 10 + 4;
    cols.push_back(c);
  }
  const auto transformed = testing::from_columns(cols, kLabels);
  const CfsEvaluator a(data), b(transformed);
  for (unsigned mask = 1; mask < 32; ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < 5; ++j) {
      if (mask & (1u << j)) idx.push_back(j);
    }
    EXPECT_NEAR(a.merit(FeatureSubset(idx)), b.merit(FeatureSubset(idx)), 1e-9);
  }
}

// ---------------------------------------------------------------------------

TEST(BestFirst, MonotoneEvaluators) {
  const auto up = best_first_search([](const FeatureSubset& s) { return static_cast<double>(s.size()); }, 3,
                                    {.stale_limit = 5});
  EXPECT_EQ(up.subset.indices(), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(up.score, 3.0);
  const auto down = best_first_search([](const FeatureSubset& s) { return -static_cast<double>(s.size()); },
                                      3, {.stale_limit = 5});
  EXPECT_TRUE(down.subset.empty());
  EXPECT_EQ(down.score, 0.0);
}

TEST(BestFirst, NeverEvaluatesTwice) {
  std::mutex mu;
  std::map<FeatureSubset, int> calls;
  std::atomic<std::size_t> total{0};
  std::mt19937_64 rng(5);
  std::vector<double> weights(8);
  for (auto& w : weights) w = static_cast<double>(rng() % 100) / 10.0 - 3.0;
  auto eval = [&](const FeatureSubset& s) {
    {
      std::lock_guard lock(mu);
      ++calls[s];
    }
    ++total;
    double v = 0;
    for (auto i : s.indices()) v += weights[i];
    return v - 0.4 * static_cast<double>(s.size() * s.size());
  };
  const auto result = best_first_search(eval, 8, {.stale_limit = 20, .workers = 3});
  for (const auto& [subset, n] : calls) EXPECT_EQ(n, 1);
  EXPECT_EQ(result.evaluations, total.load());
}

TEST(BestFirst, DeterministicAcrossWorkerCounts) {
  auto eval = [](const FeatureSubset& s) {
    double v = 0;
    for (auto i : s.indices()) v += std::sin(static_cast<double>(i) * 1.3) ;
    return v - 0.05 * static_cast<double>(s.size());
  };
  const auto a = best_first_search(eval, 10, {.stale_limit = 5, .workers = 1});
  const auto b = best_first_search(eval, 10, {.stale_limit = 5, .workers = 4});
  EXPECT_EQ(a.subset, b.subset);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(BestFirst, FindsExhaustiveCfsOptimum) {
  const auto data = testing::six_feature_instance();
  const CfsEvaluator evaluator(data);
  double best = -1;
  unsigned best_mask = 0;
  for (unsigned mask = 0; mask < 64; ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < 6; ++j) {
      if (mask & (1u << j)) idx.push_back(j);
    }
    const double m = testing::oracle_merit(idx, data);
    if (m > best) {
      best = m;
      best_mask = mask;
    }
  }
  ASSERT_EQ(best_mask, 0b000111u);  // the construction's intended optimum
  const auto result =
      best_first_search([&](const FeatureSubset& s) { return evaluator.merit(s); }, 6, {.stale_limit = 5});
  EXPECT_NEAR(result.score, best, 1e-9);
  EXPECT_EQ(result.subset.indices(), (std::vector<std::size_t>{0, 1, 2}));
}

// ---------------------------------------------------------------------------

LabeledData majority_instance() {
  std::mt19937_64 rng(40);
  LabeledData data({"a", "b"});
  for (int i = 0; i < 40; ++i) {
    data.add_row(std::vector{static_cast<double>(rng() % 10), static_cast<double>(rng() % 10)}, i < 30 ? D : R);
  }
  return data;
}

TEST(StratifiedFolds, BalancedAndDeterministic) {
  const auto data = majority_instance();
  const auto folds = stratified_folds(data.labels(), 5, 1);
  EXPECT_EQ(folds, stratified_folds(data.labels(), 5, 1));
  std::map<int, std::array<int, 2>> per;
  for (std::size_t i = 0; i < folds.size(); ++i) ++per[folds[i]][data.label(i) == R];
  ASSERT_EQ(per.size(), 5u);
  for (const auto& [f, c] : per) {
    EXPECT_EQ(c[0], 6);
    EXPECT_EQ(c[1], 2);
  }
  try {
    stratified_folds(std::vector<MatchOutcome>(3, R), 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooFewRows);
  }
}

TEST(Wrapper, EmptySubsetScoresMajorityFraction) {
  const auto data = majority_instance();
  EXPECT_DOUBLE_EQ(wrapper_score(FeatureSubset{}, data, LearnerSpec{LrConfig{}}), 0.75);
  EXPECT_DOUBLE_EQ(wrapper_score(FeatureSubset{}, data, LearnerSpec{RfConfig{.num_trees = 5}}), 0.75);
}

TEST(Wrapper, PerfectFeatureScoresOne) {
  std::mt19937_64 rng(41);
  LabeledData data({"label", "noise"});
  for (int i = 0; i < 40; ++i) {
    const int y = static_cast<int>(rng() % 2);
    data.add_row(std::vector{static_cast<double>(y), static_cast<double>(rng() % 7)}, y ? R : D);
  }
  EXPECT_EQ(wrapper_score(FeatureSubset({0}), data, LearnerSpec{LrConfig{}}), 1.0);
  EXPECT_EQ(wrapper_score(FeatureSubset({0}), data, LearnerSpec{RfConfig{.num_trees = 10}}), 1.0);

  const auto selected = select_features(data, {.kind = SelectorKind::Wrapper, .learner = LearnerSpec{LrConfig{}}});
  EXPECT_TRUE(selected.subset.contains(0));
  EXPECT_EQ(selected.score, 1.0);
}

TEST(Wrapper, MatchesManualCrossValidation) {
  std::mt19937_64 rng(42);
  LabeledData data({"a", "b", "c"});
  std::normal_distribution<double> normal;
  for (int i = 0; i < 40; ++i) {
    const int y = i % 3 == 0 ? 1 : static_cast<int>(rng() % 2);
    data.add_row(std::vector{normal(rng) + y, normal(rng), normal(rng) - 0.5 * y}, y ? R : D);
  }
  const FeatureSubset subset({0, 2});
  const LearnerSpec learner{LrConfig{.ridge = 0.01}};
  const auto folds = stratified_folds(data.labels(), 5, 9);
  const auto cols = data.select_columns(subset.indices());
  double total = 0;
  for (int f = 0; f < 5; ++f) {
    std::vector<std::size_t> tr, te;
    for (std::size_t i = 0; i < data.rows(); ++i) (folds[i] == f ? te : tr).push_back(i);
    const auto model = train_lr(cols.select_rows(tr), LrConfig{.ridge = 0.01});
    int hit = 0;
    for (auto i : te) hit += predict_label(model, cols.row(i)) == data.label(i);
    total += static_cast<double>(hit) / static_cast<double>(te.size());
  }
  EXPECT_NEAR(wrapper_score(subset, data, learner, 5, 9), total / 5.0, 1e-12);
  EXPECT_EQ(wrapper_score(subset, data, learner, 5, 9), wrapper_score(subset, data, learner, 5, 9));
}

TEST(Wrapper, SingleClassDataThrows) {
  LabeledData data({"a"});
  for (int i = 0; i < 10; ++i) data.add_row(std::vector{double(i)}, R);
  EXPECT_THROW(wrapper_score(FeatureSubset({0}), data, LearnerSpec{LrConfig{}}), Error);
}

TEST(SelectFeatures, CfsFindsTheOnlyInformativeFeature) {
  std::mt19937_64 rng(43);
  const std::size_t n = 200;
  std::vector<int> ys(n);
  std::vector<std::vector<double>> cols(6, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) ys[i] = static_cast<int>(i % 2);
  // noise columns are constant within each label-pair block, so exactly
  // independent of the label
  for (std::size_t i = 0; i < n; i += 2) {
    for (std::size_t j = 0; j < 6; ++j) {
      const double v = static_cast<double>(rng() % 5);
      cols[j][i] = v;
      cols[j][i + 1] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) cols[3][i] = ys[i] * 2.0 + static_cast<double>(rng() % 2);
  const auto data = testing::from_columns(cols, ys);
  const CfsEvaluator evaluator(data);
  for (std::size_t j = 0; j < 6; ++j) {
    if (j == 3) EXPECT_GT(evaluator.class_correlation(j), 0.0);
    else EXPECT_NEAR(evaluator.class_correlation(j), 0.0, 1e-12);
  }
  const auto result = select_features(data, {.kind = SelectorKind::Cfs});
  EXPECT_EQ(result.subset.indices(), (std::vector<std::size_t>{3}));
}

TEST(FeatureSubset, CanonicalForm) {
  const FeatureSubset s({3, 1, 3, 2});
  EXPECT_EQ(s.indices(), (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_TRUE(s.with(0).contains(0));
  EXPECT_FALSE(s.without(2).contains(2));
  EXPECT_LT(FeatureSubset({0, 5}), FeatureSubset({1}));
}

}  // namespace
}  // namespace winpred
