#include "winpred/match_data.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "winpred/csv.hpp"
#include "winpred/error.hpp"

namespace winpred {

std::string_view to_string(MatchOutcome outcome) {
  return outcome == MatchOutcome::RadiantWin ? "RadiantWin" : "DireWin";
}

std::optional<MatchOutcome> parse_outcome(std::string_view text) {
  if (text == "RadiantWin") return MatchOutcome::RadiantWin;
  if (text == "DireWin") return MatchOutcome::DireWin;
  return std::nullopt;
}

std::string_view to_string(Metric metric) {
  switch (metric) {
    case Metric::DamageDealt: return "DamageDealt";
    case Metric::Kills: return "Kills";
    case Metric::LastHits: return "LastHits";
    case Metric::NetWorth: return "NetWorth";
    case Metric::TowerDamage: return "TowerDamage";
    case Metric::XpGained: return "XpGained";
  }
  return "?";
}

namespace {

void check_team(const MatchRecord& m, const Team& team, std::string_view side, int roster_size) {
  for (std::size_t i = 0; i < team.size(); ++i) {
    if (team[i].value < 0 || team[i].value >= roster_size) {
      throw Error(ErrorKind::InvariantViolation,
                  fmt::format("match {}: {} hero {} outside roster of {}", m.match_id, side,
                              team[i].value, roster_size));
    }
    if (i > 0 && !(team[i - 1] < team[i])) {
      throw Error(ErrorKind::InvariantViolation,
                  fmt::format("match {}: {} heroes not distinct and sorted", m.match_id, side));
    }
  }
}

bool valid_id(std::string_view id) {
  return !id.empty() && id.find_first_of(",\"\n\r") == std::string_view::npos;
}

Team parse_team(std::string_view field, std::string_view match_id, std::string_view side) {
  std::vector<int> ids;
  std::size_t start = 0;
  while (start <= field.size()) {
    const auto end = std::min(field.find(';', start), field.size());
    ids.push_back(static_cast<int>(
        csv::parse_int(field.substr(start, end - start), fmt::format("{} heroes", side))));
    start = end + 1;
  }
  if (ids.size() != kTeamSize) {
    throw Error(ErrorKind::InvariantViolation,
                fmt::format("match {}: {} team has {} heroes, expected {}", match_id, side,
                            ids.size(), kTeamSize));
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error(ErrorKind::InvariantViolation,
                fmt::format("match {}: duplicate hero in {} team", match_id, side));
  }
  Team team;
  for (std::size_t i = 0; i < kTeamSize; ++i) team[i] = HeroId{ids[i]};
  return team;
}

std::string team_field(const Team& team) {
  std::string s = "\"";
  for (std::size_t i = 0; i < team.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(team[i].value);
  }
  s += '"';
  return s;
}

}  // namespace

void validate_match(const MatchRecord& m, int roster_size) {
  if (!valid_id(m.match_id)) {
    throw Error(ErrorKind::InvariantViolation, fmt::format("invalid match id '{}'", m.match_id));
  }
  if (m.tournament_id.find_first_of(",\"\n\r") != std::string::npos) {
    throw Error(ErrorKind::InvariantViolation,
                fmt::format("match {}: invalid tournament id", m.match_id));
  }
  if (m.duration_minutes < 1) {
    throw Error(ErrorKind::InvariantViolation,
                fmt::format("match {}: duration {} < 1", m.match_id, m.duration_minutes));
  }
  check_team(m, m.radiant_heroes, "radiant", roster_size);
  check_team(m, m.dire_heroes, "dire", roster_size);
  for (const auto& h : m.radiant_heroes) {
    if (std::binary_search(m.dire_heroes.begin(), m.dire_heroes.end(), h)) {
      throw Error(ErrorKind::InvariantViolation,
                  fmt::format("match {}: hero {} on both teams", m.match_id, h.value));
    }
  }
  if (m.is_professional == m.skill_score.has_value()) {
    throw Error(ErrorKind::InvariantViolation,
                fmt::format("match {}: skill_score must be present exactly for public matches",
                            m.match_id));
  }
}

// ---------------------------------------------------------------------------
// MatchDataset

MatchDataset::MatchDataset(std::vector<MatchRecord> matches) : matches_(std::move(matches)) {
  for (std::size_t i = 0; i < matches_.size(); ++i) {
    if (!index_.emplace(matches_[i].match_id, i).second) {
      throw Error(ErrorKind::DuplicateMatchId, matches_[i].match_id);
    }
  }
}

MatchDataset::MatchDataset(std::vector<MatchRecord> matches, std::vector<MetricSample> samples)
    : MatchDataset(std::move(matches)) {
  for (const auto& m : matches_) {
    samples_[m.match_id].resize(static_cast<std::size_t>(m.duration_minutes) + 1);
  }
  std::unordered_map<std::string, std::vector<bool>> seen;
  for (auto& s : samples) {
    auto it = samples_.find(s.match_id);
    if (it == samples_.end()) {
      throw Error(ErrorKind::UnknownMatchId, fmt::format("metrics for unknown match '{}'", s.match_id));
    }
    auto& slots = it->second;
    if (s.minute < 0 || static_cast<std::size_t>(s.minute) >= slots.size()) {
      throw Error(ErrorKind::MinuteOutOfRange,
                  fmt::format("match {}: minute {} outside 0..{}", s.match_id, s.minute,
                              slots.size() - 1));
    }
    auto& flags = seen[s.match_id];
    flags.resize(slots.size(), false);
    if (flags[static_cast<std::size_t>(s.minute)]) {
      throw Error(ErrorKind::DuplicateMinute,
                  fmt::format("match {}: minute {} appears twice", s.match_id, s.minute));
    }
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      if (!std::isfinite(s.dire[k]) || !std::isfinite(s.radiant[k]) || s.dire[k] < 0 ||
          s.radiant[k] < 0) {
        throw Error(ErrorKind::InvariantViolation,
                    fmt::format("match {}: minute {} has a negative or non-finite {}", s.match_id,
                                s.minute, to_string(kAllMetrics[k])));
      }
    }
    flags[static_cast<std::size_t>(s.minute)] = true;
    slots[static_cast<std::size_t>(s.minute)] = std::move(s);
  }
  for (const auto& m : matches_) {
    const auto& flags = seen[m.match_id];
    for (std::size_t minute = 0; minute <= static_cast<std::size_t>(m.duration_minutes); ++minute) {
      if (minute >= flags.size() || !flags[minute]) {
        throw Error(ErrorKind::MissingMinute,
                    fmt::format("match {}: no sample for minute {}", m.match_id, minute));
      }
    }
    const auto& slots = samples_[m.match_id];
    for (std::size_t minute = 1; minute < slots.size(); ++minute) {
      for (std::size_t k = 0; k < kMetricCount; ++k) {
        const bool dire_drop = slots[minute].dire[k] < slots[minute - 1].dire[k];
        const bool radiant_drop = slots[minute].radiant[k] < slots[minute - 1].radiant[k];
        if (dire_drop || radiant_drop) {
          throw Error(ErrorKind::NonMonotoneCumulative,
                      fmt::format("match {}: {} {} decreases between minutes {} and {}",
                                  m.match_id, dire_drop ? "dire" : "radiant",
                                  to_string(kAllMetrics[k]), minute - 1, minute));
        }
      }
    }
  }
}

const MatchRecord& MatchDataset::match(std::string_view match_id) const {
  auto it = index_.find(std::string(match_id));
  if (it == index_.end()) throw Error(ErrorKind::UnknownMatchId, std::string(match_id));
  return matches_[it->second];
}

bool MatchDataset::contains(std::string_view match_id) const {
  return index_.count(std::string(match_id)) > 0;
}

std::span<const MetricSample> MatchDataset::samples(std::string_view match_id) const {
  auto it = samples_.find(std::string(match_id));
  if (it == samples_.end()) return {};
  return it->second;
}

// ---------------------------------------------------------------------------
// matches.csv

std::vector<MatchRecord> parse_matches(std::span<const std::string> lines, int roster_size) {
  if (lines.empty() || lines.front() != kMatchesHeader) {
    throw Error(ErrorKind::MalformedRow, "matches file is missing the expected header");
  }
  std::vector<MatchRecord> out;
  std::set<std::string, std::less<>> ids;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = csv::split_line(lines[row]);
    if (fields.size() != 9) {
      throw Error(ErrorKind::MalformedRow,
                  fmt::format("line {}: {} columns, expected 9", row + 1, fields.size()));
    }
    MatchRecord m;
    m.match_id = fields[0];
    if (!valid_id(m.match_id)) {
      throw Error(ErrorKind::MalformedRow, fmt::format("line {}: empty or invalid match_id", row + 1));
    }
    m.start_time = csv::parse_int(fields[1], "start_time");
    m.is_professional = csv::parse_bool(fields[2], "is_professional");
    m.tournament_id = fields[3];
    m.duration_minutes = static_cast<int>(csv::parse_int(fields[4], "duration_minutes"));
    m.radiant_heroes = parse_team(fields[5], m.match_id, "radiant");
    m.dire_heroes = parse_team(fields[6], m.match_id, "dire");
    const auto winner = parse_outcome(fields[7]);
    if (!winner) {
      throw Error(ErrorKind::MalformedRow, fmt::format("line {}: bad winner '{}'", row + 1, fields[7]));
    }
    m.winner = *winner;
    if (!fields[8].empty()) m.skill_score = csv::parse_int(fields[8], "skill_score");
    validate_match(m, roster_size);
    if (!ids.insert(m.match_id).second) {
      throw Error(ErrorKind::DuplicateMatchId, m.match_id);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MatchRecord> load_matches(const std::filesystem::path& path, int roster_size) {
  const auto lines = csv::read_lines(path);
  return parse_matches(lines, roster_size);
}

std::string write_matches(std::span<const MatchRecord> matches) {
  std::string out(kMatchesHeader);
  out += '\n';
  for (const auto& m : matches) {
    out += fmt::format("{},{},{},{},{},{},{},{},{}\n", m.match_id, m.start_time,
                       m.is_professional ? "true" : "false", m.tournament_id, m.duration_minutes,
                       team_field(m.radiant_heroes), team_field(m.dire_heroes),
                       to_string(m.winner),
                       m.skill_score ? std::to_string(*m.skill_score) : std::string());
  }
  return out;
}

// ---------------------------------------------------------------------------
// metrics.csv

MatchDataset parse_metrics(std::span<const std::string> lines, std::vector<MatchRecord> matches) {
  if (lines.empty() || lines.front() != kMetricsHeader) {
    throw Error(ErrorKind::MalformedRow, "metrics file is missing the expected header");
  }
  std::vector<MetricSample> samples;
  samples.reserve(lines.size() - 1);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = csv::split_line(lines[row]);
    if (fields.size() != 2 + 2 * kMetricCount) {
      throw Error(ErrorKind::MalformedRow,
                  fmt::format("line {}: {} columns, expected {}", row + 1, fields.size(),
                              2 + 2 * kMetricCount));
    }
    MetricSample s;
    s.match_id = fields[0];
    s.minute = static_cast<int>(csv::parse_int(fields[1], "minute"));
    for (std::size_t k = 0; k < kMetricCount; ++k) {
      s.dire[k] = csv::parse_real(fields[2 + 2 * k], "metric");
      s.radiant[k] = csv::parse_real(fields[3 + 2 * k], "metric");
    }
    samples.push_back(std::move(s));
  }
  return MatchDataset(std::move(matches), std::move(samples));
}

MatchDataset load_metrics(const std::filesystem::path& path, std::vector<MatchRecord> matches) {
  const auto lines = csv::read_lines(path);
  return parse_metrics(lines, std::move(matches));
}

std::string write_metrics(const MatchDataset& dataset) {
  std::string out(kMetricsHeader);
  out += '\n';
  for (const auto& m : dataset.matches()) {
    for (const auto& s : dataset.samples(m.match_id)) {
      out += s.match_id;
      out += ',';
      out += std::to_string(s.minute);
      for (std::size_t k = 0; k < kMetricCount; ++k) {
        out += ',';
        out += csv::format_real(s.dire[k]);
        out += ',';
        out += csv::format_real(s.radiant[k]);
      }
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<MatchRecord> sort_chronological(std::vector<MatchRecord> matches) {
  std::stable_sort(matches.begin(), matches.end(), [](const MatchRecord& a, const MatchRecord& b) {
    if (a.start_time != b.start_time) return a.start_time < b.start_time;
    return a.match_id < b.match_id;
  });
  return matches;
}

DurationHistogram duration_histogram(std::span<const MatchRecord> matches, bool pro_only,
                                     int threshold_minutes) {
  std::map<int, std::size_t> counts;
  std::size_t total = 0;
  std::size_t long_games = 0;
  for (const auto& m : matches) {
    if (pro_only && !m.is_professional) continue;
    ++counts[m.duration_minutes];
    ++total;
    if (m.duration_minutes >= threshold_minutes) ++long_games;
  }
  if (total == 0) {
    throw Error(ErrorKind::EmptySelection, pro_only ? "no professional matches" : "no matches");
  }
  DurationHistogram h;
  h.match_count = total;
  h.threshold_minutes = threshold_minutes;
  for (const auto& [minute, count] : counts) {
    h.fraction_by_minute[minute] = static_cast<double>(count) / static_cast<double>(total);
  }
  h.fraction_at_least_threshold = static_cast<double>(long_games) / static_cast<double>(total);
  return h;
}

}  // namespace winpred
