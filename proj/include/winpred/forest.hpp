#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "winpred/labeled_data.hpp"

namespace winpred {

struct RfConfig {
  int num_trees = 100;
  int features_per_split = 0;  // 0 = floor(log2 d) + 1
  int max_depth = 0;           // 0 = unlimited
  int min_leaf = 1;
  std::uint64_t seed = 1;
  // When false every tree sees the training rows exactly once (a plain
  // decision tree ensemble); used to isolate tree induction in tests.
  bool bootstrap = true;
};

void validate(const RfConfig& config, std::size_t feature_count);
int resolved_features_per_split(const RfConfig& config, std::size_t feature_count);

// Flat pre-order node storage: an internal node's left child immediately
// follows it; `right` indexes the right subtree.
struct TreeNode {
  int feature = -1;  // -1 for leaves
  double threshold = 0.0;
  int right = -1;
  std::array<std::uint32_t, 2> counts{};  // leaf class counts: {DireWin, RadiantWin}

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(std::span<const double> x) const;
  MatchOutcome predict(std::span<const double> x) const;
  int depth() const;
};

struct RfModel {
  std::vector<DecisionTree> trees;
  RfConfig config;
  std::vector<std::string> feature_names;
};

// Indices drawn uniformly with replacement; |result| == n.
// Throws Error(EmptyData) for n == 0.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::mt19937_64& rng);
LabeledData bootstrap_sample(const LabeledData& data, std::mt19937_64& rng);

struct SplitChoice {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

// Best information-gain split of `rows` over `features`; candidate
// thresholds are midpoints of consecutive distinct values, `x <= threshold`
// goes left, both children need >= min_leaf rows. Gains within 1e-12 count as
// ties and keep the earlier (lower feature, then lower threshold) candidate.
SplitChoice best_split(const LabeledData& data, std::span<const std::size_t> rows,
                       std::span<const std::size_t> features, int min_leaf);

double entropy(std::uint32_t dire, std::uint32_t radiant);

// Grows one tree over `rows` (duplicates allowed). Throws Error(EmptyData).
DecisionTree train_tree(const LabeledData& data, std::span<const std::size_t> rows,
                        const RfConfig& config, std::mt19937_64& rng);

// Tree i draws from its own generator seeded by tree_seed(config.seed, i), so
// training order never affects the result. Throws Error(SingleClassData).
RfModel train_rf(const LabeledData& data, const RfConfig& config);
std::uint64_t tree_seed(std::uint64_t seed, std::size_t tree_index);

// Majority vote; an even split goes to RadiantWin.
MatchOutcome predict_rf(const RfModel& model, std::span<const double> x);
MatchOutcome majority_vote(std::size_t dire_votes, std::size_t radiant_votes);

std::string serialize(const RfModel& model);
RfModel parse_rf_model(std::string_view text);

}  // namespace winpred
