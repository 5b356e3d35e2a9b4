#pragma once

#include <cstdint>
#include <string_view>

#include "winpred/match_data.hpp"

namespace winpred {

// Seeded generator of matches with a known Bayes-optimal accuracy.
//
// Recipe (std::mt19937_64 seeded with `seed`, draws in exactly this order,
// per match i = 0..n_matches-1):
//   1. match_id = "s" + i zero-padded to 5 digits.
//   2. start_time = kSynthEpoch + U{0, kSynthSpanSeconds - 1}.
//   3. is_professional = U[0,1) < pro_fraction. Professional matches whose
//      start_time falls in the final kSynthTournamentSeconds of the span get
//      tournament_id kSynthTournament; public matches get a skill score
//      U{6001, 7500}.
//   4. duration = clamp(round(N(mean, 0.25 * mean)), 5, 150).
//   5. Ten distinct heroes by partial Fisher-Yates over the roster; the first
//      five are Radiant, the next five Dire.
//   6. The kill leader is Radiant iff U[0,1) < 0.5.
//   7. Minute 0 is all zeros. For each minute 1..duration draw
//      a, b ~ Poisson(0.6); the leader gains max(a, b) kills (+1 extra at
//      minute 1) and the trailer min(a, b), so the leader is strictly ahead on
//      kills at every minute >= 1. Then, leader first, each team with kill
//      increment k adds
//        damage      250k + U{150, 650}
//        last hits     k  + U{3, 9}
//        net worth   150k + U{250, 650}
//        tower dmg    40k + U{0, 150}
//        xp          120k + U{250, 550}
//   8. With probability kill_signal_strength (U[0,1) < s) the leader wins;
//      otherwise Radiant wins iff U[0,1) < radiant_bias.
//
// Because the leader is identified exactly by the sign of the kills
// difference at any minute >= 1 and every other metric carries no label
// information beyond the kill increments, the Bayes-optimal accuracy from any
// window is given by synth_bayes_rate(); 0.5 + 0.5 s when radiant_bias = 0.5.
struct SynthConfig {
  int n_matches = 1000;
  int roster_size = kDefaultRosterSize;
  double mean_duration_minutes = 40.0;
  double kill_signal_strength = 0.5;
  double radiant_bias = 0.5;
  std::uint64_t seed = 1;
  double pro_fraction = 0.14;
};

inline constexpr std::int64_t kSynthEpoch = 1490572800;  // 2017-03-27T00:00:00Z
inline constexpr std::int64_t kSynthSpanSeconds = 38LL * 24 * 3600;
inline constexpr std::int64_t kSynthTournamentSeconds = 7LL * 24 * 3600;
inline constexpr std::string_view kSynthTournament = "synth_major";

// Throws Error(InvalidConfig) on out-of-range fields.
void validate(const SynthConfig& config);

MatchDataset synthesize(const SynthConfig& config);

// Accuracy of the Bayes-optimal classifier for data generated by `config`.
double synth_bayes_rate(const SynthConfig& config);

}  // namespace winpred
