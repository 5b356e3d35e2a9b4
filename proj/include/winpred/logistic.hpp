#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "winpred/labeled_data.hpp"

namespace winpred {

// Binary logistic regression, RadiantWin as the positive class, trained by
// maximizing  L(w, b) = sum_i log p(y_i | x_i) - ridge * ||w||^2  (the bias is
// not penalized).
struct LrConfig {
  double ridge = 1e-8;
  int max_iterations = 2000;
  // Training halts once one accepted step improves L by less than this.
  double convergence_tolerance = 1e-10;
  bool standardize = false;
};

void validate(const LrConfig& config);

struct LrModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<std::string> feature_names;
  LrConfig config;
  // Populated only when config.standardize; x~ = (x - mean) / stddev.
  std::vector<double> means;
  std::vector<double> stddevs;
  int iterations = 0;
};

// Deterministic damped Newton ascent from w = 0, b = 0: each step solves
// against the (slightly regularized) Hessian and backtracks until the Armijo
// condition holds, so L never decreases.
// Throws Error(SingleClassData), Error(DimensionMismatch) (< 2 rows) or
// Error(NonFiniteFeature).
LrModel train_lr(const LabeledData& data, const LrConfig& config);

// P(RadiantWin | x). Throws Error(DimensionMismatch).
double predict_proba(const LrModel& model, std::span<const double> x);
// RadiantWin iff predict_proba >= 0.5.
MatchOutcome predict_label(const LrModel& model, std::span<const double> x);
MatchOutcome label_from_probability(double p);

// Objective and its analytic gradient on `data` as given (no standardization).
double penalized_log_likelihood(std::span<const double> weights, double bias,
                                const LabeledData& data, double ridge);

struct LrGradient {
  std::vector<double> weights;
  double bias = 0.0;
};

// Throws Error(NonFiniteFeature) on NaN/Inf inputs.
LrGradient penalized_gradient(std::span<const double> weights, double bias,
                              const LabeledData& data, double ridge);

std::string serialize(const LrModel& model);
// Throws Error(MalformedModel).
LrModel parse_lr_model(std::string_view text);

}  // namespace winpred
