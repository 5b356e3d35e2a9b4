#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "winpred/forest.hpp"
#include "winpred/labeled_data.hpp"
#include "winpred/logistic.hpp"

namespace winpred {

// Either learner, chosen at run time by the wrapper selector and evaluator.
struct LearnerSpec {
  std::variant<LrConfig, RfConfig> config;

  bool is_lr() const { return std::holds_alternative<LrConfig>(config); }
  // Short name for reports: "LR" / "RF".
  std::string_view name() const { return is_lr() ? "LR" : "RF"; }
  // Name plus the swept hyperparameter, e.g. "LR(ridge=1e-08)".
  std::string label() const;
};

using TrainedModel = std::variant<LrModel, RfModel>;

// RF features_per_split is clamped to the column count so one spec can be
// reused across feature subsets of any width.
TrainedModel train(const LearnerSpec& spec, const LabeledData& data);
MatchOutcome predict(const TrainedModel& model, std::span<const double> x);
const std::vector<std::string>& feature_names(const TrainedModel& model);

std::string serialize(const TrainedModel& model);
// Dispatches on the format header. Throws Error(MalformedModel).
TrainedModel parse_model(std::string_view text);

}  // namespace winpred
