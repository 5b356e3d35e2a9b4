#include "winpred/learner.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "winpred/error.hpp"

namespace winpred {

std::string LearnerSpec::label() const {
  if (const auto* lr = std::get_if<LrConfig>(&config)) return fmt::format("LR(ridge={})", lr->ridge);
  return fmt::format("RF(trees={})", std::get<RfConfig>(config).num_trees);
}

TrainedModel train(const LearnerSpec& spec, const LabeledData& data) {
  if (const auto* lr = std::get_if<LrConfig>(&spec.config)) return train_lr(data, *lr);
  RfConfig rf = std::get<RfConfig>(spec.config);
  rf.features_per_split = std::min(rf.features_per_split, static_cast<int>(data.cols()));
  return train_rf(data, rf);
}

MatchOutcome predict(const TrainedModel& model, std::span<const double> x) {
  if (const auto* lr = std::get_if<LrModel>(&model)) return predict_label(*lr, x);
  return predict_rf(std::get<RfModel>(model), x);
}

const std::vector<std::string>& feature_names(const TrainedModel& model) {
  return std::visit([](const auto& m) -> const std::vector<std::string>& { return m.feature_names; },
                    model);
}

std::string serialize(const TrainedModel& model) {
  return std::visit([](const auto& m) { return serialize(m); }, model);
}

TrainedModel parse_model(std::string_view text) {
  if (text.rfind("winpred-lr ", 0) == 0) return parse_lr_model(text);
  if (text.rfind("winpred-rf ", 0) == 0) return parse_rf_model(text);
  throw Error(ErrorKind::MalformedModel, "unrecognized model header");
}

}  // namespace winpred
