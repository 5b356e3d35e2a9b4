#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"
#include "winpred/error.hpp"
#include "winpred/featurize.hpp"
#include "winpred/synth.hpp"

namespace winpred {
namespace {

std::size_t mvi(Metric m, Variant v) { return MetricVariant{m, v}.index(); }

MatchRecord swapped(MatchRecord m) {
  std::swap(m.radiant_heroes, m.dire_heroes);
  m.winner = flipped(m.winner);
  return m;
}

TEST(HeroVector, ToyRoster) {
  const auto m = testing::make_match("a", 1, {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, MatchOutcome::DireWin);
  const auto v = hero_vector(m, 10);
  const std::vector<std::int8_t> expected = {1, 1, 1, 1, 1, -1, -1, -1, -1, -1};
  EXPECT_EQ(v.values, expected);
  EXPECT_EQ(v.label, MatchOutcome::DireWin);
  EXPECT_EQ(v.match_id, "a");
}

TEST(HeroVector, OutOfRange) {
  const auto m = testing::make_match("a", 1, {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, MatchOutcome::DireWin);
  try {
    hero_vector(m, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HeroOutOfRange);
  }
}

TEST(HeroVector, InvariantsAndSwapAntisymmetry) {
  const auto ds = synthesize({.n_matches = 100, .seed = 11});
  const auto vectors = build_hero_dataset(ds.matches());
  ASSERT_EQ(vectors.size(), 100u);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    EXPECT_EQ(v.match_id, ds.matches()[i].match_id);
    EXPECT_EQ(v.values.size(), static_cast<std::size_t>(kDefaultRosterSize));
    int sum = 0, nonzero = 0;
    for (auto x : v.values) {
      sum += x;
      nonzero += x != 0;
    }
    EXPECT_EQ(sum, 0);
    EXPECT_EQ(nonzero, 10);
    const auto neg = hero_vector(swapped(ds.matches()[i]));
    for (std::size_t k = 0; k < v.values.size(); ++k) EXPECT_EQ(neg.values[k], -v.values[k]);
    EXPECT_EQ(neg.label, flipped(v.label));
  }
  EXPECT_TRUE(build_hero_dataset({}).empty());
}

TEST(HeroVector, CsvLayout) {
  const auto m = testing::make_match("a", 1, {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, MatchOutcome::RadiantWin);
  const std::vector<HeroVector> vs = {hero_vector(m, 10)};
  const auto text = write_hero_vectors(vs, 10);
  EXPECT_EQ(text.substr(0, text.find('\n')), "match_id,label,h0,h1,h2,h3,h4,h5,h6,h7,h8,h9");
  const auto labeled = to_labeled(vs, 10);
  EXPECT_EQ(labeled.rows(), 1u);
  EXPECT_EQ(labeled.cols(), 10u);
  EXPECT_EQ(labeled.at(0, 0), 1.0);
  EXPECT_EQ(labeled.at(0, 9), -1.0);
}

// ---------------------------------------------------------------------------

MatchDataset kills_example() {
  auto m = testing::make_match("k", 1, {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, MatchOutcome::RadiantWin, 12);
  auto samples = testing::linear_samples("k", 12, 0, 0);
  const auto k = static_cast<std::size_t>(Metric::Kills);
  for (auto& s : samples) {
    s.dire[k] = s.minute < 9 ? 0 : s.minute == 9 ? 4 : 6;
    s.radiant[k] = s.minute < 9 ? 0 : 5;
  }
  return MatchDataset({m}, samples);
}

TEST(BaseMetrics, KillsExample) {
  const auto ds = kills_example();
  const auto b = base_metrics_at(ds, "k", 10);
  auto at = [&](Variant v) { return b[MetricVariant{Metric::Kills, v}.index()]; };
  EXPECT_EQ(at(Variant::D), 6);
  EXPECT_EQ(at(Variant::R), 5);
  EXPECT_EQ(at(Variant::RminusD), -1);
  EXPECT_EQ(at(Variant::dD), 2);
  EXPECT_EQ(at(Variant::dR), 0);
}

TEST(BaseMetrics, FlatTeamsGiveZeros) {
  auto m = testing::make_match("f", 1, {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, MatchOutcome::RadiantWin, 6);
  auto samples = testing::linear_samples("f", 6, 0, 0);
  for (auto& s : samples) {
    s.dire.fill(7);
    s.radiant.fill(7);
  }
  samples[0].dire.fill(0);
  samples[0].radiant.fill(0);
  const MatchDataset ds({m}, samples);
  const auto b = base_metrics_at(ds, "f", 4);
  for (auto metric : kAllMetrics) {
    EXPECT_EQ(b[mvi(metric, Variant::RminusD)], 0);
    EXPECT_EQ(b[mvi(metric, Variant::dD)], 0);
    EXPECT_EQ(b[mvi(metric, Variant::dR)], 0);
  }
}

TEST(BaseMetrics, MissingSample) {
  const auto ds = kills_example();
  for (int t : {0, 13, -1}) {
    try {
      base_metrics_at(ds, "k", t);
      FAIL() << t;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::MissingSample);
    }
  }
}

TEST(BaseMetrics, MatchesRecomputationFromRawCsv) {
  const auto ds = synthesize({.n_matches = 30, .seed = 17});
  const auto raw = testing::parse_raw_metrics(write_metrics(ds));
  for (const auto& m : ds.matches()) {
    const auto& rows = raw.at(m.match_id);
    for (int t = 1; t <= m.duration_minutes; ++t) {
      const auto b = base_metrics_at(ds, m.match_id, t);
      const auto& now = rows.at(t);
      const auto& prev = rows.at(t - 1);
      for (std::size_t k = 0; k < kMetricCount; ++k) {
        const Metric metric = kAllMetrics[k];
        // raw columns alternate dire, radiant per metric
        const double d = now[2 * k], r = now[2 * k + 1];
        EXPECT_EQ(b[mvi(metric, Variant::D)], d);
        EXPECT_EQ(b[mvi(metric, Variant::R)], r);
        EXPECT_EQ(b[mvi(metric, Variant::RminusD)], r - d);
        EXPECT_EQ(b[mvi(metric, Variant::dD)], d - prev[2 * k]);
        EXPECT_EQ(b[mvi(metric, Variant::dR)], r - prev[2 * k + 1]);
      }
    }
  }
}

TEST(BaseMetrics, TeamRelabelingNegatesDifference) {
  const auto ds = synthesize({.n_matches = 10, .seed = 23});
  std::vector<MetricSample> mirrored;
  std::vector<MatchRecord> matches;
  for (const auto& m : ds.matches()) {
    matches.push_back(swapped(m));
    for (auto s : ds.samples(m.match_id)) {
      std::swap(s.dire, s.radiant);
      mirrored.push_back(s);
    }
  }
  const MatchDataset other(matches, mirrored);
  for (const auto& m : ds.matches()) {
    for (int t = 1; t <= m.duration_minutes; ++t) {
      const auto a = base_metrics_at(ds, m.match_id, t);
      const auto b = base_metrics_at(other, m.match_id, t);
      for (auto metric : kAllMetrics) {
        auto idx = [&](Variant v) { return MetricVariant{metric, v}.index(); };
        EXPECT_EQ(a[idx(Variant::RminusD)], -b[idx(Variant::RminusD)]);
        EXPECT_EQ(a[idx(Variant::dD)], b[idx(Variant::dR)]);
        EXPECT_EQ(a[idx(Variant::dR)], b[idx(Variant::dD)]);
      }
    }
  }
}

// ---------------------------------------------------------------------------

TEST(WindowVector, KeysAtTwenty) {
  const auto ds = synthesize({.n_matches = 40, .seed = 3});
  const MatchRecord* chosen = nullptr;
  for (const auto& m : ds.matches()) {
    if (m.duration_minutes >= 20) {
      chosen = &m;
      break;
    }
  }
  ASSERT_NE(chosen, nullptr);
  const auto w = window_vector(ds, chosen->match_id, 20);
  EXPECT_EQ(w.window_end_minute, 20);
  EXPECT_EQ(w.timestamps, (std::array<int, 5>{16, 17, 18, 19, 20}));
  EXPECT_EQ(w.features.size(), 150u);
  EXPECT_EQ(w.label, chosen->winner);
  // cell-by-cell against base metrics
  for (int minute = 16; minute <= 20; ++minute) {
    const auto b = base_metrics_at(ds, chosen->match_id, minute);
    for (std::size_t v = 0; v < kMetricVariantCount; ++v) {
      const auto mv = metric_variant_at(v);
      EXPECT_EQ(w.at(mv, minute), b[v]);
      EXPECT_EQ(w.features[window_feature_index(mv, minute - 16)], b[v]);
    }
  }
}

TEST(WindowVector, Errors) {
  auto m = testing::make_match("short", 1, {0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}, MatchOutcome::DireWin, 19);
  const MatchDataset ds({m}, testing::linear_samples("short", 19, 1, 2));
  auto kind = [&](int t) {
    try {
      window_vector(ds, "short", t);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind(20), ErrorKind::MatchTooShort);
  EXPECT_EQ(kind(4), ErrorKind::WindowBelowMinimum);
  EXPECT_NO_THROW(window_vector(ds, "short", 19));
  EXPECT_NO_THROW(window_vector(ds, "short", 5));
}

TEST(WindowVector, ShiftConsistency) {
  const auto ds = synthesize({.n_matches = 20, .seed = 31});
  for (const auto& m : ds.matches()) {
    for (int t = 6; t <= m.duration_minutes; ++t) {
      const auto now = window_vector(ds, m.match_id, t);
      const auto before = window_vector(ds, m.match_id, t - 1);
      for (std::size_t v = 0; v < kMetricVariantCount; ++v) {
        const auto mv = metric_variant_at(v);
        for (int minute = t - 4; minute <= t - 1; ++minute) {
          EXPECT_EQ(now.at(mv, minute), before.at(mv, minute));
        }
      }
    }
  }
}

TEST(WindowVector, GradientsTelescope) {
  const auto ds = synthesize({.n_matches = 20, .seed = 37});
  for (const auto& m : ds.matches()) {
    const auto s = ds.samples(m.match_id);
    for (auto metric : kAllMetrics) {
      const auto k = static_cast<std::size_t>(metric);
      double dire_sum = 0, radiant_sum = 0;
      const int a = 2;
      for (int t = a + 1; t <= m.duration_minutes; ++t) {
        const auto b = base_metrics_at(ds, m.match_id, t);
        dire_sum += b[mvi(metric, Variant::dD)];
        radiant_sum += b[mvi(metric, Variant::dR)];
      }
      EXPECT_EQ(dire_sum, s.back().dire[k] - s[a].dire[k]);
      EXPECT_EQ(radiant_sum, s.back().radiant[k] - s[a].radiant[k]);
    }
  }
}

TEST(WindowNames, Bijective) {
  const auto names = window_feature_names();
  ASSERT_EQ(names.size(), kWindowFeatureCount);
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), kWindowFeatureCount);
  for (std::size_t i = 0; i < names.size(); ++i) {
    EXPECT_EQ(find_window_feature(names[i]), i);
    EXPECT_EQ(window_feature_name(i), names[i]);
  }
  EXPECT_EQ(names.front(), "DamageDealt_D@t-4");
  EXPECT_EQ(find_window_feature("Kills_R-D"), window_feature_index({Metric::Kills, Variant::RminusD}, 4));
  EXPECT_FALSE(find_window_feature("Kills_X@t").has_value());
  for (std::size_t v = 0; v < kMetricVariantCount; ++v) EXPECT_EQ(metric_variant_at(v).index(), v);

  const auto with_ts = window_feature_names(true);
  ASSERT_EQ(with_ts.size(), kWindowFeatureCount + 5);
  EXPECT_EQ(with_ts[0], "ts1");
  EXPECT_EQ(with_ts[5], names[0]);
}

TEST(WindowDataset, EligibilityRecount) {
  const auto ds = synthesize({.n_matches = 300, .mean_duration_minutes = 22, .seed = 41});
  for (int t : {5, 20, 30}) {
    const auto w = build_window_dataset(ds, t);
    std::size_t eligible = 0;
    for (const auto& m : ds.matches()) eligible += m.duration_minutes >= t;
    EXPECT_EQ(w.vectors.size(), eligible);
    EXPECT_EQ(w.skipped, ds.matches().size() - eligible);
  }
  const auto none = build_window_dataset(ds, 1000);
  EXPECT_TRUE(none.vectors.empty());
  EXPECT_EQ(none.skipped, 300u);
}

TEST(WindowDataset, CsvLayout) {
  const auto ds = synthesize({.n_matches = 5, .seed = 1});
  const auto w = build_window_dataset(ds, 5);
  const auto text = write_window_vectors(w.vectors);
  const auto header = text.substr(0, text.find('\n'));
  EXPECT_EQ(header.rfind("match_id,label,ts1,ts2,ts3,ts4,ts5,DamageDealt_D@t-4,", 0), 0u);
  EXPECT_EQ(static_cast<std::size_t>(std::count(header.begin(), header.end(), ',')), 2 + 5 + 150 - 1);
  const auto labeled = to_labeled(w.vectors);
  EXPECT_EQ(labeled.cols(), 150u);
  EXPECT_EQ(to_labeled(w.vectors, true).cols(), 155u);
}

}  // namespace
}  // namespace winpred
