#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "winpred/labeled_data.hpp"
#include "winpred/learner.hpp"

namespace winpred {

// Sorted, duplicate-free column indices.
class FeatureSubset {
 public:
  FeatureSubset() = default;
  explicit FeatureSubset(std::vector<std::size_t> indices);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t index) const;

  FeatureSubset with(std::size_t index) const;
  FeatureSubset without(std::size_t index) const;

  auto operator<=>(const FeatureSubset&) const = default;

 private:
  std::vector<std::size_t> indices_;
};

// ---------------------------------------------------------------------------
// Correlation-based filter

// Integer codes for a column. Columns with at most `bins` distinct values keep
// one level per value (hero vectors stay three-valued); wider columns get
// equal-frequency bins, code = floor(bins * #{values < x} / n), which depends
// only on ranks.
struct DiscreteColumn {
  std::vector<int> codes;
  int levels = 0;
};

inline constexpr int kDefaultBins = 10;

DiscreteColumn discretize(std::span<const double> values, int bins = kDefaultBins);
DiscreteColumn class_column(std::span<const MatchOutcome> labels);

// 2 I(A;B) / (H(A) + H(B)); 0 when both entropies vanish.
double symmetric_uncertainty(const DiscreteColumn& a, const DiscreteColumn& b);

// SU between a discretized feature and the class.
// Throws Error(SingleClassData).
double feature_class_correlation(std::span<const double> column,
                                 std::span<const MatchOutcome> labels);

// Holds the discretized training columns and every pairwise SU, so merits of
// many subsets are cheap and evaluation is thread-safe.
class CfsEvaluator {
 public:
  // Throws Error(SingleClassData).
  explicit CfsEvaluator(const LabeledData& data);

  // k * mean(r_cf) / sqrt(k + k (k - 1) * mean(r_ff)); 0 for the empty set.
  double merit(const FeatureSubset& subset) const;
  double class_correlation(std::size_t feature) const { return class_su_[feature]; }
  double feature_correlation(std::size_t a, std::size_t b) const;
  std::size_t feature_count() const { return class_su_.size(); }

 private:
  std::vector<double> class_su_;
  std::vector<double> pair_su_;  // dense d x d
};

double cfs_merit(const FeatureSubset& subset, const LabeledData& data);

// ---------------------------------------------------------------------------
// Search

struct SearchConfig {
  int stale_limit = 5;
  std::size_t workers = 0;  // 0 = worker_count()
};

using SubsetEvaluator = std::function<double(const FeatureSubset&)>;

struct SearchResult {
  FeatureSubset subset;
  double score = 0.0;
  std::size_t evaluations = 0;
};

// Best-first search over the subset lattice starting from the empty set.
// Expanding a node scores every unvisited single-feature addition and
// deletion; the open list is ordered by score, ties to the lexicographically
// smaller subset. Stops after `stale_limit` consecutive expansions that fail
// to raise the best score (or when the open list empties). Each subset is
// evaluated at most once; `evaluator` must be safe to call concurrently.
SearchResult best_first_search(const SubsetEvaluator& evaluator, std::size_t feature_count,
                               const SearchConfig& config = {});

// ---------------------------------------------------------------------------
// Wrapper

// Fold number per row; each class is shuffled with `seed` and dealt
// round-robin, continuing the rotation across classes.
// Throws Error(TooFewRows) when rows < folds or folds < 2.
std::vector<int> stratified_folds(std::span<const MatchOutcome> labels, int folds,
                                  std::uint64_t seed);

// Mean per-fold accuracy of `learner` trained on the other folds, restricted
// to `subset`. A training part holding one class predicts that class.
// Throws Error(SingleClassData), Error(TooFewRows).
double wrapper_score(const FeatureSubset& subset, const LabeledData& data,
                     const LearnerSpec& learner, int folds = 5, std::uint64_t seed = 1);

enum class SelectorKind { Cfs, Wrapper };

struct SelectionConfig {
  SelectorKind kind = SelectorKind::Cfs;
  LearnerSpec learner{LrConfig{}};  // wrapper only
  int folds = 5;
  std::uint64_t seed = 1;
  SearchConfig search;
};

// Must only ever see training rows.
SearchResult select_features(const LabeledData& train, const SelectionConfig& config);

}  // namespace winpred
