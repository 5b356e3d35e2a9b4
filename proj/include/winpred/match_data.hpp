#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace winpred {

inline constexpr int kDefaultRosterSize = 113;
inline constexpr int kTeamSize = 5;

struct HeroId {
  int value = 0;
  auto operator<=>(const HeroId&) const = default;
};

enum class MatchOutcome : std::uint8_t { DireWin, RadiantWin };

std::string_view to_string(MatchOutcome outcome);
// Parses the literal `RadiantWin` / `DireWin`.
std::optional<MatchOutcome> parse_outcome(std::string_view text);

inline MatchOutcome flipped(MatchOutcome o) {
  return o == MatchOutcome::RadiantWin ? MatchOutcome::DireWin : MatchOutcome::RadiantWin;
}

using Team = std::array<HeroId, kTeamSize>;

struct MatchRecord {
  std::string match_id;
  std::int64_t start_time = 0;
  bool is_professional = false;
  std::string tournament_id;  // empty = none
  int duration_minutes = 1;
  Team radiant_heroes{};      // sorted ascending
  Team dire_heroes{};         // sorted ascending
  MatchOutcome winner = MatchOutcome::RadiantWin;
  std::optional<std::int64_t> skill_score;

  bool operator==(const MatchRecord&) const = default;
};

// Throws Error(InvariantViolation) unless both teams hold five distinct
// in-range heroes, the teams are disjoint, the duration is positive and the
// skill score is present exactly for non-professional matches.
void validate_match(const MatchRecord& match, int roster_size = kDefaultRosterSize);

// The six cumulative team metrics, in canonical (feature column) order.
enum class Metric : std::uint8_t { DamageDealt, Kills, LastHits, NetWorth, TowerDamage, XpGained };
inline constexpr std::size_t kMetricCount = 6;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::DamageDealt, Metric::Kills,       Metric::LastHits,
    Metric::NetWorth,    Metric::TowerDamage, Metric::XpGained};

std::string_view to_string(Metric metric);

using MetricValues = std::array<double, kMetricCount>;

struct MetricSample {
  std::string match_id;
  int minute = 0;
  MetricValues dire{};
  MetricValues radiant{};

  bool operator==(const MetricSample&) const = default;
};

// Matches plus their per-minute samples. Immutable once constructed; every
// match either has no samples at all (hero-only data) or one sample for each
// minute 0..duration_minutes.
class MatchDataset {
 public:
  MatchDataset() = default;
  explicit MatchDataset(std::vector<MatchRecord> matches);
  // Validates coverage, uniqueness and monotonicity of `samples`.
  MatchDataset(std::vector<MatchRecord> matches, std::vector<MetricSample> samples);

  const std::vector<MatchRecord>& matches() const { return matches_; }
  const MatchRecord& match(std::string_view match_id) const;
  bool contains(std::string_view match_id) const;

  // Samples ordered by minute; sample i is minute i. Empty if the match has
  // no metrics attached.
  std::span<const MetricSample> samples(std::string_view match_id) const;
  bool has_metrics() const { return !samples_.empty(); }

 private:
  std::vector<MatchRecord> matches_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::vector<MetricSample>> samples_;
};

std::vector<MatchRecord> load_matches(const std::filesystem::path& path,
                                      int roster_size = kDefaultRosterSize);
std::vector<MatchRecord> parse_matches(std::span<const std::string> lines,
                                       int roster_size = kDefaultRosterSize);
std::string write_matches(std::span<const MatchRecord> matches);

MatchDataset load_metrics(const std::filesystem::path& path, std::vector<MatchRecord> matches);
MatchDataset parse_metrics(std::span<const std::string> lines, std::vector<MatchRecord> matches);
std::string write_metrics(const MatchDataset& dataset);

inline constexpr std::string_view kMatchesHeader =
    "match_id,start_time,is_professional,tournament_id,duration_minutes,radiant_heroes,"
    "dire_heroes,winner,skill_score";
inline constexpr std::string_view kMetricsHeader =
    "match_id,minute,dire_damage,radiant_damage,dire_kills,radiant_kills,dire_lasthits,"
    "radiant_lasthits,dire_networth,radiant_networth,dire_towerdamage,radiant_towerdamage,"
    "dire_xp,radiant_xp";

// Ascending start_time; equal start times ordered by match_id.
std::vector<MatchRecord> sort_chronological(std::vector<MatchRecord> matches);

struct DurationHistogram {
  std::map<int, double> fraction_by_minute;
  std::size_t match_count = 0;
  int threshold_minutes = 20;
  double fraction_at_least_threshold = 0.0;
};

// Throws Error(EmptySelection) when no match survives the pro_only filter.
DurationHistogram duration_histogram(std::span<const MatchRecord> matches, bool pro_only,
                                     int threshold_minutes = 20);

}  // namespace winpred
