#include "winpred/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "winpred/error.hpp"
#include "winpred/parallel.hpp"

namespace winpred {

FeatureSubset::FeatureSubset(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

bool FeatureSubset::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

FeatureSubset FeatureSubset::with(std::size_t index) const {
  FeatureSubset out = *this;
  auto it = std::lower_bound(out.indices_.begin(), out.indices_.end(), index);
  if (it == out.indices_.end() || *it != index) out.indices_.insert(it, index);
  return out;
}

FeatureSubset FeatureSubset::without(std::size_t index) const {
  FeatureSubset out = *this;
  auto it = std::lower_bound(out.indices_.begin(), out.indices_.end(), index);
  if (it != out.indices_.end() && *it == index) out.indices_.erase(it);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

double entropy_of(const std::vector<std::size_t>& counts, double n) {
  double h = 0.0;
  for (auto c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log2(p);
    }
  }
  return h;
}

}  // namespace

DiscreteColumn discretize(std::span<const double> values, int bins) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFiniteFeature, "cannot discretize NaN/Inf");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  DiscreteColumn out;
  out.codes.resize(values.size());
  if (distinct.size() <= static_cast<std::size_t>(bins)) {
    out.levels = static_cast<int>(distinct.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      out.codes[i] = static_cast<int>(
          std::lower_bound(distinct.begin(), distinct.end(), values[i]) - distinct.begin());
    }
    return out;
  }
  out.levels = bins;
  const auto n = sorted.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto below = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), values[i]) - sorted.begin());
    out.codes[i] = static_cast<int>(static_cast<std::size_t>(bins) * below / n);
  }
  return out;
}

DiscreteColumn class_column(std::span<const MatchOutcome> labels) {
  DiscreteColumn out;
  out.levels = 2;
  out.codes.reserve(labels.size());
  for (auto l : labels) out.codes.push_back(l == MatchOutcome::RadiantWin ? 1 : 0);
  return out;
}

double symmetric_uncertainty(const DiscreteColumn& a, const DiscreteColumn& b) {
  if (a.codes.size() != b.codes.size()) {
    throw Error(ErrorKind::DimensionMismatch, "columns differ in length");
  }
  if (a.codes.empty()) return 0.0;
  const auto la = static_cast<std::size_t>(a.levels);
  const auto lb = static_cast<std::size_t>(b.levels);
  std::vector<std::size_t> ca(la, 0), cb(lb, 0), joint(la * lb, 0);
  for (std::size_t i = 0; i < a.codes.size(); ++i) {
    const auto x = static_cast<std::size_t>(a.codes[i]);
    const auto y = static_cast<std::size_t>(b.codes[i]);
    ++ca[x];
    ++cb[y];
    ++joint[x * lb + y];
  }
  const double n = static_cast<double>(a.codes.size());
  const double ha = entropy_of(ca, n);
  const double hb = entropy_of(cb, n);
  if (ha + hb <= 0.0) return 0.0;
  const double mutual = ha + hb - entropy_of(joint, n);
  return std::clamp(2.0 * mutual / (ha + hb), 0.0, 1.0);
}

double feature_class_correlation(std::span<const double> column,
                                 std::span<const MatchOutcome> labels) {
  const bool radiant = std::find(labels.begin(), labels.end(), MatchOutcome::RadiantWin) != labels.end();
  const bool dire = std::find(labels.begin(), labels.end(), MatchOutcome::DireWin) != labels.end();
  if (!radiant || !dire) throw Error(ErrorKind::SingleClassData, "labels hold one class");
  return symmetric_uncertainty(discretize(column), class_column(labels));
}

CfsEvaluator::CfsEvaluator(const LabeledData& data) {
  if (!data.has_both_classes()) throw Error(ErrorKind::SingleClassData, "labels hold one class");
  const std::size_t d = data.cols();
  std::vector<DiscreteColumn> columns(d);
  const auto cls = class_column(data.labels());
  class_su_.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    columns[j] = discretize(data.column(j));
    class_su_[j] = symmetric_uncertainty(columns[j], cls);
  }
  pair_su_.assign(d * d, 1.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      const double su = symmetric_uncertainty(columns[a], columns[b]);
      pair_su_[a * d + b] = su;
      pair_su_[b * d + a] = su;
    }
  }
}

double CfsEvaluator::feature_correlation(std::size_t a, std::size_t b) const {
  return pair_su_[a * class_su_.size() + b];
}

double CfsEvaluator::merit(const FeatureSubset& subset) const {
  const auto& idx = subset.indices();
  const std::size_t k = idx.size();
  if (k == 0) return 0.0;
  double rcf = 0.0;
  for (auto j : idx) {
    if (j >= class_su_.size()) throw Error(ErrorKind::DimensionMismatch, "feature index out of range");
    rcf += class_su_[j];
  }
  rcf /= static_cast<double>(k);
  double rff = 0.0;
  if (k > 1) {
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) rff += feature_correlation(idx[a], idx[b]);
    }
    rff /= static_cast<double>(k * (k - 1) / 2);
  }
  const double kk = static_cast<double>(k);
  return kk * rcf / std::sqrt(kk + kk * (kk - 1.0) * rff);
}

double cfs_merit(const FeatureSubset& subset, const LabeledData& data) {
  return CfsEvaluator(data).merit(subset);
}

// ---------------------------------------------------------------------------

SearchResult best_first_search(const SubsetEvaluator& evaluator, std::size_t feature_count,
                               const SearchConfig& config) {
  if (config.stale_limit < 1) throw Error(ErrorKind::InvalidConfig, "stale_limit must be >= 1");
  const std::size_t workers = config.workers ? config.workers : worker_count();

  struct Entry {
    double score;
    FeatureSubset subset;
  };
  auto before = [](const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.subset < b.subset;
  };
  std::set<Entry, decltype(before)> open(before);
  std::set<FeatureSubset> visited;

  SearchResult result;
  result.score = evaluator(result.subset);
  result.evaluations = 1;
  visited.insert(result.subset);
  open.insert({result.score, result.subset});

  int stale = 0;
  std::vector<FeatureSubset> candidates;
  std::vector<double> scores;
  while (!open.empty() && stale < config.stale_limit) {
    const Entry node = *open.begin();
    open.erase(open.begin());

    candidates.clear();
    for (std::size_t f = 0; f < feature_count; ++f) {
      auto next = node.subset.contains(f) ? node.subset.without(f) : node.subset.with(f);
      if (visited.insert(next).second) candidates.push_back(std::move(next));
    }
    scores.assign(candidates.size(), 0.0);
    parallel_for(candidates.size(), workers,
                 [&](std::size_t i) { scores[i] = evaluator(candidates[i]); });
    result.evaluations += candidates.size();

    std::size_t top = candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      open.insert({scores[i], candidates[i]});
      if (top == candidates.size() || scores[i] > scores[top] ||
          (scores[i] == scores[top] && candidates[i] < candidates[top])) {
        top = i;
      }
    }
    if (top < candidates.size() && scores[top] > result.score) {
      result.score = scores[top];
      result.subset = candidates[top];
      stale = 0;
    } else {
      ++stale;
    }
  }
  return result;
}

// ---------------------------------------------------------------------------

std::vector<int> stratified_folds(std::span<const MatchOutcome> labels, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorKind::TooFewRows, "need at least two folds");
  if (labels.size() < static_cast<std::size_t>(folds)) {
    throw Error(ErrorKind::TooFewRows,
                fmt::format("{} rows cannot fill {} folds", labels.size(), folds));
  }
  std::mt19937_64 rng(seed);
  std::vector<int> fold(labels.size(), 0);
  std::size_t position = 0;
  for (auto outcome : {MatchOutcome::DireWin, MatchOutcome::RadiantWin}) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == outcome) rows.push_back(i);
    }
    std::shuffle(rows.begin(), rows.end(), rng);
    for (auto r : rows) fold[r] = static_cast<int>(position++ % static_cast<std::size_t>(folds));
  }
  return fold;
}

double wrapper_score(const FeatureSubset& subset, const LabeledData& data,
                     const LearnerSpec& learner, int folds, std::uint64_t seed) {
  if (folds < 2 || data.rows() < static_cast<std::size_t>(folds)) {
    throw Error(ErrorKind::TooFewRows,
                fmt::format("{} rows cannot fill {} folds", data.rows(), folds));
  }
  if (!data.has_both_classes()) throw Error(ErrorKind::SingleClassData, "labels hold one class");
  const auto projected = data.select_columns(subset.indices());
  const auto fold_of = stratified_folds(data.labels(), folds, seed);

  double total = 0.0;
  for (int k = 0; k < folds; ++k) {
    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t i = 0; i < data.rows(); ++i) {
      (fold_of[i] == k ? test_rows : train_rows).push_back(i);
    }
    const auto train_part = projected.select_rows(train_rows);
    std::size_t correct = 0;
    if (!train_part.has_both_classes()) {
      const auto only = train_part.label(0);
      for (auto r : test_rows) correct += projected.label(r) == only ? 1 : 0;
    } else {
      const auto model = train(learner, train_part);
      for (auto r : test_rows) {
        correct += predict(model, projected.row(r)) == projected.label(r) ? 1 : 0;
      }
    }
    total += static_cast<double>(correct) / static_cast<double>(test_rows.size());
  }
  return total / static_cast<double>(folds);
}

SearchResult select_features(const LabeledData& train, const SelectionConfig& config) {
  if (config.kind == SelectorKind::Cfs) {
    const CfsEvaluator evaluator(train);
    return best_first_search([&](const FeatureSubset& s) { return evaluator.merit(s); },
                             train.cols(), config.search);
  }
  if (!train.has_both_classes()) throw Error(ErrorKind::SingleClassData, "labels hold one class");
  return best_first_search(
      [&](const FeatureSubset& s) {
        return wrapper_score(s, train, config.learner, config.folds, config.seed);
      },
      train.cols(), config.search);
}

}  // namespace winpred
