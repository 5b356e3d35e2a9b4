#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "winpred/match_data.hpp"

namespace winpred {

// Dense row-major feature matrix with one binary label per row. This is the
// common currency between featurization, the learners and the selectors.
class LabeledData {
 public:
  LabeledData() = default;
  explicit LabeledData(std::vector<std::string> feature_names);

  std::size_t rows() const { return labels_.size(); }
  std::size_t cols() const { return feature_names_.size(); }
  bool empty() const { return labels_.empty(); }

  const std::vector<std::string>& feature_names() const { return feature_names_; }
  const std::vector<MatchOutcome>& labels() const { return labels_; }
  const std::vector<std::string>& row_ids() const { return row_ids_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols(), cols()};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * cols() + j]; }
  MatchOutcome label(std::size_t i) const { return labels_[i]; }
  std::vector<double> column(std::size_t j) const;

  // Throws Error(DimensionMismatch) if `values` has the wrong width.
  void add_row(std::span<const double> values, MatchOutcome label, std::string row_id = {});

  LabeledData select_columns(std::span<const std::size_t> columns) const;
  LabeledData select_rows(std::span<const std::size_t> rows) const;

  std::size_t count(MatchOutcome outcome) const;
  bool has_both_classes() const;

 private:
  std::vector<std::string> feature_names_;
  std::vector<double> values_;
  std::vector<MatchOutcome> labels_;
  std::vector<std::string> row_ids_;
};

}  // namespace winpred
