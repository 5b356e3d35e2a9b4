#include "winpred/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "winpred/csv.hpp"
#include "winpred/error.hpp"
#include "winpred/parallel.hpp"

namespace winpred {

namespace {

constexpr double kGainEpsilon = 1e-12;

std::size_t cls(MatchOutcome o) { return o == MatchOutcome::RadiantWin ? 1 : 0; }

struct Builder {
  const LabeledData& data;
  const RfConfig& config;
  std::mt19937_64& rng;
  int features_per_split;
  DecisionTree tree;
  std::vector<std::size_t> feature_pool;

  void grow(std::vector<std::size_t> rows, int depth) {
    TreeNode node;
    for (auto r : rows) ++node.counts[cls(data.label(r))];
    const auto index = tree.nodes.size();
    tree.nodes.push_back(node);

    const bool pure = node.counts[0] == 0 || node.counts[1] == 0;
    const bool too_small = rows.size() < 2 * static_cast<std::size_t>(config.min_leaf);
    const bool too_deep = config.max_depth > 0 && depth >= config.max_depth;
    if (pure || too_small || too_deep || features_per_split == 0) return;

    // Partial Fisher-Yates draw of distinct feature indices.
    std::iota(feature_pool.begin(), feature_pool.end(), std::size_t{0});
    const auto k = static_cast<std::size_t>(features_per_split);
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, feature_pool.size() - 1);
      std::swap(feature_pool[i], feature_pool[pick(rng)]);
    }
    std::vector<std::size_t> features(feature_pool.begin(), feature_pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(features.begin(), features.end());

    const auto split = best_split(data, rows, features, config.min_leaf);
    if (!split.found) return;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (data.at(r, split.feature) <= split.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    tree.nodes[index].feature = static_cast<int>(split.feature);
    tree.nodes[index].threshold = split.threshold;
    tree.nodes[index].counts = {};
    grow(std::move(left), depth + 1);
    tree.nodes[index].right = static_cast<int>(tree.nodes.size());
    grow(std::move(right), depth + 1);
  }
};

}  // namespace

double entropy(std::uint32_t dire, std::uint32_t radiant) {
  const double n = static_cast<double>(dire) + static_cast<double>(radiant);
  if (n == 0.0) return 0.0;
  double h = 0.0;
  for (double c : {static_cast<double>(dire), static_cast<double>(radiant)}) {
    if (c > 0.0) {
      const double p = c / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

void validate(const RfConfig& c, std::size_t feature_count) {
  if (c.num_trees < 1) throw Error(ErrorKind::InvalidConfig, "num_trees must be >= 1");
  if (c.min_leaf < 1) throw Error(ErrorKind::InvalidConfig, "min_leaf must be >= 1");
  if (c.max_depth < 0) throw Error(ErrorKind::InvalidConfig, "max_depth must be >= 0");
  if (c.features_per_split < 0 ||
      static_cast<std::size_t>(c.features_per_split) > feature_count) {
    throw Error(ErrorKind::InvalidConfig,
                fmt::format("features_per_split {} not in 0..{}", c.features_per_split, feature_count));
  }
}

int resolved_features_per_split(const RfConfig& c, std::size_t feature_count) {
  if (feature_count == 0) return 0;
  if (c.features_per_split > 0) return c.features_per_split;
  const int automatic = static_cast<int>(std::floor(std::log2(static_cast<double>(feature_count)))) + 1;
  return std::min(automatic, static_cast<int>(feature_count));
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::mt19937_64& rng) {
  if (n == 0) throw Error(ErrorKind::EmptyData, "cannot bootstrap an empty data set");
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = pick(rng);
  return out;
}

LabeledData bootstrap_sample(const LabeledData& data, std::mt19937_64& rng) {
  const auto idx = bootstrap_indices(data.rows(), rng);
  return data.select_rows(idx);
}

SplitChoice best_split(const LabeledData& data, std::span<const std::size_t> rows,
                       std::span<const std::size_t> features, int min_leaf) {
  SplitChoice best;
  std::array<std::uint32_t, 2> total{};
  for (auto r : rows) ++total[cls(data.label(r))];
  const double parent = entropy(total[0], total[1]);
  const double n = static_cast<double>(rows.size());
  const auto min_side = static_cast<std::size_t>(min_leaf);

  std::vector<std::pair<double, std::size_t>> column(rows.size());
  for (auto f : features) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      column[i] = {data.at(rows[i], f), cls(data.label(rows[i]))};
    }
    std::sort(column.begin(), column.end());
    std::array<std::uint32_t, 2> left{};
    for (std::size_t i = 0; i + 1 < column.size(); ++i) {
      ++left[column[i].second];
      const double a = column[i].first;
      const double b = column[i + 1].first;
      if (a == b) continue;
      const std::size_t n_left = i + 1;
      const std::size_t n_right = column.size() - n_left;
      if (n_left < min_side || n_right < min_side) continue;
      const std::uint32_t rd = total[0] - left[0];
      const std::uint32_t rr = total[1] - left[1];
      const double gain = parent - (static_cast<double>(n_left) / n) * entropy(left[0], left[1]) -
                          (static_cast<double>(n_right) / n) * entropy(rd, rr);
      if (gain > best.gain + kGainEpsilon) {
        double threshold = a + (b - a) / 2.0;
        if (!(threshold < b)) threshold = a;
        best = {true, f, threshold, gain};
      }
    }
  }
  return best;
}

DecisionTree train_tree(const LabeledData& data, std::span<const std::size_t> rows,
                        const RfConfig& config, std::mt19937_64& rng) {
  if (rows.empty()) throw Error(ErrorKind::EmptyData, "cannot grow a tree from zero rows");
  validate(config, data.cols());
  Builder builder{data, config, rng, resolved_features_per_split(config, data.cols()), {},
                  std::vector<std::size_t>(data.cols())};
  builder.grow(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
  return std::move(builder.tree);
}

std::uint64_t tree_seed(std::uint64_t seed, std::size_t tree_index) {
  // splitmix64 finalizer over (seed, index).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(tree_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RfModel train_rf(const LabeledData& data, const RfConfig& config) {
  if (data.empty()) throw Error(ErrorKind::EmptyData, "no training rows");
  if (!data.has_both_classes()) throw Error(ErrorKind::SingleClassData, "training labels hold one class");
  validate(config, data.cols());
  RfModel model;
  model.config = config;
  model.feature_names = data.feature_names();
  model.trees.resize(static_cast<std::size_t>(config.num_trees));
  std::vector<std::size_t> all(data.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  parallel_for(model.trees.size(), worker_count(), [&](std::size_t i) {
    std::mt19937_64 rng(tree_seed(config.seed, i));
    if (config.bootstrap) {
      const auto rows = bootstrap_indices(data.rows(), rng);
      model.trees[i] = train_tree(data, rows, config, rng);
    } else {
      model.trees[i] = train_tree(data, all, config, rng);
    }
  });
  return model;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    i = x[static_cast<std::size_t>(nodes[i].feature)] <= nodes[i].threshold
            ? i + 1
            : static_cast<std::size_t>(nodes[i].right);
  }
  return nodes[i];
}

MatchOutcome DecisionTree::predict(std::span<const double> x) const {
  const auto& leaf = leaf_for(x);
  return majority_vote(leaf.counts[0], leaf.counts[1]);
}

int DecisionTree::depth() const {
  // Pre-order walk with an explicit stack of (node, depth).
  int deepest = 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, d);
    if (!nodes[i].is_leaf()) {
      stack.push_back({i + 1, d + 1});
      stack.push_back({static_cast<std::size_t>(nodes[i].right), d + 1});
    }
  }
  return deepest;
}

MatchOutcome majority_vote(std::size_t dire_votes, std::size_t radiant_votes) {
  return radiant_votes >= dire_votes ? MatchOutcome::RadiantWin : MatchOutcome::DireWin;
}

MatchOutcome predict_rf(const RfModel& model, std::span<const double> x) {
  if (x.size() != model.feature_names.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("input has {} features, model expects {}", x.size(),
                            model.feature_names.size()));
  }
  std::size_t votes[2] = {0, 0};
  for (const auto& tree : model.trees) ++votes[cls(tree.predict(x))];
  return majority_vote(votes[0], votes[1]);
}

// ---------------------------------------------------------------------------
// Text persistence:
//   winpred-rf 1
//   num_trees / features_per_split / max_depth / min_leaf / seed / bootstrap
//   features <d>, then one feature name per line
//   per tree: "tree <node count>" then nodes in pre-order,
//     "N <feature> <threshold>" or "L <dire count> <radiant count>"

std::string serialize(const RfModel& m) {
  std::string out = "winpred-rf 1\n";
  out += fmt::format("num_trees {}\n", m.config.num_trees);
  out += fmt::format("features_per_split {}\n", m.config.features_per_split);
  out += fmt::format("max_depth {}\n", m.config.max_depth);
  out += fmt::format("min_leaf {}\n", m.config.min_leaf);
  out += fmt::format("seed {}\n", m.config.seed);
  out += fmt::format("bootstrap {}\n", m.config.bootstrap ? "true" : "false");
  out += fmt::format("features {}\n", m.feature_names.size());
  for (const auto& name : m.feature_names) out += name + '\n';
  for (const auto& tree : m.trees) {
    out += fmt::format("tree {}\n", tree.nodes.size());
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) {
        out += fmt::format("L {} {}\n", node.counts[0], node.counts[1]);
      } else {
        out += fmt::format("N {} {}\n", node.feature, csv::format_exact(node.threshold));
      }
    }
  }
  return out;
}

namespace {

struct ModelReader {
  std::istringstream in;
  std::string line;

  std::string value(std::string_view key) {
    if (!std::getline(in, line)) throw Error(ErrorKind::MalformedModel, fmt::format("missing '{}'", key));
    const auto sp = line.find(' ');
    if (sp == std::string::npos || line.substr(0, sp) != key) {
      throw Error(ErrorKind::MalformedModel, fmt::format("expected '{}', got '{}'", key, line));
    }
    return line.substr(sp + 1);
  }
};

// Rebuilds `right` links from the pre-order node sequence; returns the index
// one past the subtree rooted at `i`.
std::size_t link(std::vector<TreeNode>& nodes, std::size_t i) {
  if (i >= nodes.size()) throw Error(ErrorKind::MalformedModel, "truncated tree");
  if (nodes[i].is_leaf()) return i + 1;
  const auto right = link(nodes, i + 1);
  nodes[i].right = static_cast<int>(right);
  return link(nodes, right);
}

}  // namespace

RfModel parse_rf_model(std::string_view text) {
  ModelReader r{std::istringstream(std::string(text)), {}};
  try {
    if (r.value("winpred-rf") != "1") throw Error(ErrorKind::MalformedModel, "unsupported version");
    RfModel m;
    m.config.num_trees = static_cast<int>(csv::parse_int(r.value("num_trees"), "num_trees"));
    m.config.features_per_split =
        static_cast<int>(csv::parse_int(r.value("features_per_split"), "features_per_split"));
    m.config.max_depth = static_cast<int>(csv::parse_int(r.value("max_depth"), "max_depth"));
    m.config.min_leaf = static_cast<int>(csv::parse_int(r.value("min_leaf"), "min_leaf"));
    m.config.seed = static_cast<std::uint64_t>(csv::parse_int(r.value("seed"), "seed"));
    m.config.bootstrap = csv::parse_bool(r.value("bootstrap"), "bootstrap");
    const auto d = static_cast<std::size_t>(csv::parse_int(r.value("features"), "features"));
    for (std::size_t j = 0; j < d; ++j) {
      if (!std::getline(r.in, r.line)) throw Error(ErrorKind::MalformedModel, "truncated feature list");
      m.feature_names.push_back(r.line);
    }
    for (int t = 0; t < m.config.num_trees; ++t) {
      const auto count = static_cast<std::size_t>(csv::parse_int(r.value("tree"), "tree"));
      DecisionTree tree;
      tree.nodes.reserve(count);
      for (std::size_t k = 0; k < count; ++k) {
        if (!std::getline(r.in, r.line)) throw Error(ErrorKind::MalformedModel, "truncated tree");
        std::istringstream fields(r.line);
        std::string tag, a, b;
        fields >> tag >> a >> b;
        TreeNode node;
        if (tag == "L") {
          node.counts = {static_cast<std::uint32_t>(csv::parse_int(a, "count")),
                         static_cast<std::uint32_t>(csv::parse_int(b, "count"))};
        } else if (tag == "N") {
          node.feature = static_cast<int>(csv::parse_int(a, "feature"));
          if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= d) {
            throw Error(ErrorKind::MalformedModel, "split feature out of range");
          }
          node.threshold = csv::parse_real(b, "threshold");
        } else {
          throw Error(ErrorKind::MalformedModel, fmt::format("bad node '{}'", r.line));
        }
        tree.nodes.push_back(node);
      }
      if (link(tree.nodes, 0) != tree.nodes.size()) {
        throw Error(ErrorKind::MalformedModel, "tree has trailing nodes");
      }
      m.trees.push_back(std::move(tree));
    }
    return m;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedModel) throw;
    throw Error(ErrorKind::MalformedModel, e.what());
  }
}

}  // namespace winpred
