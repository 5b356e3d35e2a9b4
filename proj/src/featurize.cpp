#include "winpred/featurize.hpp"

#include <fmt/format.h>

#include "winpred/csv.hpp"
#include "winpred/error.hpp"

namespace winpred {

HeroVector hero_vector(const MatchRecord& match, int roster_size) {
  HeroVector hv;
  hv.match_id = match.match_id;
  hv.label = match.winner;
  hv.values.assign(static_cast<std::size_t>(roster_size), 0);
  auto place = [&](const Team& team, std::int8_t sign) {
    for (const auto& h : team) {
      if (h.value < 0 || h.value >= roster_size) {
        throw Error(ErrorKind::HeroOutOfRange,
                    fmt::format("match {}: hero {} outside roster of {}", match.match_id, h.value,
                                roster_size));
      }
      hv.values[static_cast<std::size_t>(h.value)] = sign;
    }
  };
  place(match.radiant_heroes, 1);
  place(match.dire_heroes, -1);
  return hv;
}

std::vector<HeroVector> build_hero_dataset(std::span<const MatchRecord> matches, int roster_size) {
  std::vector<HeroVector> out;
  out.reserve(matches.size());
  for (const auto& m : matches) out.push_back(hero_vector(m, roster_size));
  return out;
}

std::vector<std::string> hero_feature_names(int roster_size) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(roster_size));
  for (int i = 0; i < roster_size; ++i) names.push_back(fmt::format("h{}", i));
  return names;
}

LabeledData to_labeled(std::span<const HeroVector> vectors, int roster_size) {
  LabeledData data(hero_feature_names(roster_size));
  std::vector<double> row(static_cast<std::size_t>(roster_size));
  for (const auto& hv : vectors) {
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = hv.values.at(i);
    data.add_row(row, hv.label, hv.match_id);
  }
  return data;
}

std::string write_hero_vectors(std::span<const HeroVector> vectors, int roster_size) {
  std::string out = "match_id,label";
  for (const auto& name : hero_feature_names(roster_size)) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (const auto& hv : vectors) {
    out += hv.match_id;
    out += ',';
    out += to_string(hv.label);
    for (auto v : hv.values) {
      out += ',';
      out += std::to_string(static_cast<int>(v));
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::D: return "D";
    case Variant::R: return "R";
    case Variant::RminusD: return "R-D";
    case Variant::dD: return "dD";
    case Variant::dR: return "dR";
  }
  return "?";
}

std::string metric_variant_name(MetricVariant mv) {
  return fmt::format("{}_{}", to_string(mv.metric), to_string(mv.variant));
}

MetricVariant metric_variant_at(std::size_t index) {
  return {kAllMetrics.at(index / kVariantCount), kAllVariants.at(index % kVariantCount)};
}

BaseMetrics base_metrics_at(const MatchDataset& dataset, std::string_view match_id, int t) {
  const auto samples = dataset.samples(match_id);
  if (t < 1 || static_cast<std::size_t>(t) >= samples.size()) {
    throw Error(ErrorKind::MissingSample,
                fmt::format("match {}: need samples at minutes {} and {}", match_id, t - 1, t));
  }
  const auto& now = samples[static_cast<std::size_t>(t)];
  const auto& prev = samples[static_cast<std::size_t>(t - 1)];
  BaseMetrics out{};
  for (std::size_t k = 0; k < kMetricCount; ++k) {
    const auto base = k * kVariantCount;
    out[base + static_cast<std::size_t>(Variant::D)] = now.dire[k];
    out[base + static_cast<std::size_t>(Variant::R)] = now.radiant[k];
    out[base + static_cast<std::size_t>(Variant::RminusD)] = now.radiant[k] - now.dire[k];
    out[base + static_cast<std::size_t>(Variant::dD)] = now.dire[k] - prev.dire[k];
    out[base + static_cast<std::size_t>(Variant::dR)] = now.radiant[k] - prev.radiant[k];
  }
  return out;
}

double WindowVector::at(MetricVariant mv, int minute) const {
  const int offset = minute - (window_end_minute - (kWindowLength - 1));
  if (offset < 0 || offset >= kWindowLength) {
    throw Error(ErrorKind::MissingSample,
                fmt::format("minute {} outside window ending at {}", minute, window_end_minute));
  }
  return features[window_feature_index(mv, offset)];
}

std::string window_feature_name(std::size_t index) {
  const auto mv = metric_variant_at(index / static_cast<std::size_t>(kWindowLength));
  const int back = kWindowLength - 1 - static_cast<int>(index % static_cast<std::size_t>(kWindowLength));
  if (back == 0) return metric_variant_name(mv) + "@t";
  return fmt::format("{}@t-{}", metric_variant_name(mv), back);
}

std::vector<std::string> window_feature_names(bool include_timestamps) {
  std::vector<std::string> names;
  names.reserve(kWindowFeatureCount + kWindowLength);
  if (include_timestamps) {
    for (int i = 1; i <= kWindowLength; ++i) names.push_back(fmt::format("ts{}", i));
  }
  for (std::size_t i = 0; i < kWindowFeatureCount; ++i) names.push_back(window_feature_name(i));
  return names;
}

std::optional<std::size_t> find_window_feature(std::string_view name) {
  const std::string full =
      name.find('@') == std::string_view::npos ? std::string(name) + "@t" : std::string(name);
  for (std::size_t i = 0; i < kWindowFeatureCount; ++i) {
    if (window_feature_name(i) == full) return i;
  }
  return std::nullopt;
}

WindowVector window_vector(const MatchDataset& dataset, std::string_view match_id, int t) {
  if (t < kMinWindowEnd) {
    throw Error(ErrorKind::WindowBelowMinimum,
                fmt::format("window end {} < minimum {}", t, kMinWindowEnd));
  }
  const auto& match = dataset.match(match_id);
  if (match.duration_minutes < t) {
    throw Error(ErrorKind::MatchTooShort,
                fmt::format("match {} lasts {} minutes, window ends at {}", match_id,
                            match.duration_minutes, t));
  }
  WindowVector wv;
  wv.match_id = match.match_id;
  wv.window_end_minute = t;
  wv.label = match.winner;
  for (int offset = 0; offset < kWindowLength; ++offset) {
    const int minute = t - (kWindowLength - 1) + offset;
    wv.timestamps[static_cast<std::size_t>(offset)] = minute;
    const auto base = base_metrics_at(dataset, match_id, minute);
    for (std::size_t v = 0; v < kMetricVariantCount; ++v) {
      wv.features[v * static_cast<std::size_t>(kWindowLength) + static_cast<std::size_t>(offset)] =
          base[v];
    }
  }
  return wv;
}

WindowDataset build_window_dataset(const MatchDataset& dataset, int t) {
  return build_window_dataset(dataset, dataset.matches(), t);
}

WindowDataset build_window_dataset(const MatchDataset& dataset,
                                   std::span<const MatchRecord> matches, int t) {
  if (t < kMinWindowEnd) {
    throw Error(ErrorKind::WindowBelowMinimum,
                fmt::format("window end {} < minimum {}", t, kMinWindowEnd));
  }
  WindowDataset out;
  for (const auto& m : matches) {
    if (m.duration_minutes < t) {
      ++out.skipped;
      continue;
    }
    out.vectors.push_back(window_vector(dataset, m.match_id, t));
  }
  return out;
}

LabeledData to_labeled(std::span<const WindowVector> vectors, bool include_timestamps) {
  LabeledData data(window_feature_names(include_timestamps));
  std::vector<double> row;
  for (const auto& wv : vectors) {
    row.clear();
    if (include_timestamps) row.insert(row.end(), wv.timestamps.begin(), wv.timestamps.end());
    row.insert(row.end(), wv.features.begin(), wv.features.end());
    data.add_row(row, wv.label, wv.match_id);
  }
  return data;
}

std::string write_window_vectors(std::span<const WindowVector> vectors) {
  std::string out = "match_id,label";
  for (int i = 1; i <= kWindowLength; ++i) out += fmt::format(",ts{}", i);
  for (const auto& name : window_feature_names(false)) {
    out += ',';
    out += name;
  }
  out += '\n';
  for (const auto& wv : vectors) {
    out += wv.match_id;
    out += ',';
    out += to_string(wv.label);
    for (int ts : wv.timestamps) out += fmt::format(",{}", ts);
    for (double v : wv.features) {
      out += ',';
      out += csv::format_real(v);
    }
    out += '\n';
  }
  return out;
}

}  // namespace winpred
