#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "winpred/labeled_data.hpp"
#include "winpred/match_data.hpp"

namespace winpred {

// ---------------------------------------------------------------------------
// Hero vectors: +1 for a Radiant pick, -1 for a Dire pick, 0 otherwise.

struct HeroVector {
  std::string match_id;
  std::vector<std::int8_t> values;
  MatchOutcome label = MatchOutcome::RadiantWin;
};

// Throws Error(HeroOutOfRange) if any pick is >= roster_size.
HeroVector hero_vector(const MatchRecord& match, int roster_size = kDefaultRosterSize);
std::vector<HeroVector> build_hero_dataset(std::span<const MatchRecord> matches,
                                           int roster_size = kDefaultRosterSize);

std::vector<std::string> hero_feature_names(int roster_size = kDefaultRosterSize);
LabeledData to_labeled(std::span<const HeroVector> vectors, int roster_size = kDefaultRosterSize);
std::string write_hero_vectors(std::span<const HeroVector> vectors,
                               int roster_size = kDefaultRosterSize);

// ---------------------------------------------------------------------------
// In-game window vectors.

enum class Variant : std::uint8_t { D, R, RminusD, dD, dR };
inline constexpr std::size_t kVariantCount = 5;
inline constexpr std::array<Variant, kVariantCount> kAllVariants = {
    Variant::D, Variant::R, Variant::RminusD, Variant::dD, Variant::dR};

struct MetricVariant {
  Metric metric = Metric::Kills;
  Variant variant = Variant::RminusD;

  constexpr std::size_t index() const {
    return static_cast<std::size_t>(metric) * kVariantCount + static_cast<std::size_t>(variant);
  }
  bool operator==(const MetricVariant&) const = default;
};

inline constexpr std::size_t kMetricVariantCount = kMetricCount * kVariantCount;  // 30
inline constexpr int kWindowLength = 5;
inline constexpr std::size_t kWindowFeatureCount =
    kMetricVariantCount * static_cast<std::size_t>(kWindowLength);  // 150
inline constexpr int kMinWindowEnd = kWindowLength;

std::string_view to_string(Variant variant);
// Canonical `<Metric>_<variant>`, e.g. `Kills_R-D`.
std::string metric_variant_name(MetricVariant mv);
MetricVariant metric_variant_at(std::size_t index);

// Indexed by MetricVariant::index().
using BaseMetrics = std::array<double, kMetricVariantCount>;

// D, R, R-D at minute t and the one-minute gradients dD, dR.
// Throws Error(MissingSample) unless samples exist at t and t-1 (t >= 1).
BaseMetrics base_metrics_at(const MatchDataset& dataset, std::string_view match_id, int t);

struct WindowVector {
  std::string match_id;
  int window_end_minute = 0;
  // Canonical order: metric-major, variant-minor, offset innermost
  // (minutes t-4 .. t).
  std::array<double, kWindowFeatureCount> features{};
  std::array<int, kWindowLength> timestamps{};
  MatchOutcome label = MatchOutcome::RadiantWin;

  // `minute` is absolute and must lie in t-4..t.
  double at(MetricVariant mv, int minute) const;
};

// Position of (variant, offset) in WindowVector::features; offset 0 is t-4,
// offset 4 is t.
inline constexpr std::size_t window_feature_index(MetricVariant mv, int offset) {
  return mv.index() * static_cast<std::size_t>(kWindowLength) + static_cast<std::size_t>(offset);
}

// `Kills_R-D@t-4` ... `Kills_R-D@t`; names are relative so models trained at
// different minutes share a vocabulary.
std::string window_feature_name(std::size_t index);
std::vector<std::string> window_feature_names(bool include_timestamps = false);
// Accepts a full name or a bare `<Metric>_<variant>` meaning offset t.
std::optional<std::size_t> find_window_feature(std::string_view name);

// Throws Error(WindowBelowMinimum) for t < 5, Error(MatchTooShort) when the
// match ends before minute t.
WindowVector window_vector(const MatchDataset& dataset, std::string_view match_id, int t);

struct WindowDataset {
  std::vector<WindowVector> vectors;
  std::size_t skipped = 0;  // matches shorter than t
};

// One vector per match lasting at least t minutes, in input order.
WindowDataset build_window_dataset(const MatchDataset& dataset, int t);
// Same, restricted to `matches` (which must belong to `dataset`).
WindowDataset build_window_dataset(const MatchDataset& dataset,
                                   std::span<const MatchRecord> matches, int t);

// Timestamps become the leading columns ts1..ts5 when requested.
LabeledData to_labeled(std::span<const WindowVector> vectors, bool include_timestamps = false);
std::string write_window_vectors(std::span<const WindowVector> vectors);

}  // namespace winpred
