#include "winpred/labeled_data.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "winpred/error.hpp"

namespace winpred {

LabeledData::LabeledData(std::vector<std::string> feature_names)
    : feature_names_(std::move(feature_names)) {}

std::vector<double> LabeledData::column(std::size_t j) const {
  std::vector<double> out(rows());
  for (std::size_t i = 0; i < rows(); ++i) out[i] = at(i, j);
  return out;
}

void LabeledData::add_row(std::span<const double> values, MatchOutcome label, std::string row_id) {
  if (values.size() != cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                fmt::format("row has {} values, expected {}", values.size(), cols()));
  }
  values_.insert(values_.end(), values.begin(), values.end());
  labels_.push_back(label);
  row_ids_.push_back(std::move(row_id));
}

LabeledData LabeledData::select_columns(std::span<const std::size_t> columns) const {
  std::vector<std::string> names;
  names.reserve(columns.size());
  for (auto c : columns) {
    if (c >= cols()) {
      throw Error(ErrorKind::DimensionMismatch, fmt::format("column {} out of range", c));
    }
    names.push_back(feature_names_[c]);
  }
  LabeledData out(std::move(names));
  out.values_.reserve(rows() * columns.size());
  for (std::size_t i = 0; i < rows(); ++i) {
    for (auto c : columns) out.values_.push_back(at(i, c));
  }
  out.labels_ = labels_;
  out.row_ids_ = row_ids_;
  return out;
}

LabeledData LabeledData::select_rows(std::span<const std::size_t> rows_to_keep) const {
  LabeledData out(feature_names_);
  out.values_.reserve(rows_to_keep.size() * cols());
  for (auto r : rows_to_keep) {
    if (r >= rows()) throw Error(ErrorKind::DimensionMismatch, fmt::format("row {} out of range", r));
    auto src = row(r);
    out.values_.insert(out.values_.end(), src.begin(), src.end());
    out.labels_.push_back(labels_[r]);
    out.row_ids_.push_back(row_ids_[r]);
  }
  return out;
}

std::size_t LabeledData::count(MatchOutcome outcome) const {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), outcome));
}

bool LabeledData::has_both_classes() const {
  return count(MatchOutcome::RadiantWin) > 0 && count(MatchOutcome::DireWin) > 0;
}

}  // namespace winpred
