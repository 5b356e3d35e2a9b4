#include "winpred/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "winpred/error.hpp"

namespace winpred {

void validate(const SynthConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidConfig, what); };
  if (c.n_matches < 0) fail("n_matches must be non-negative");
  if (c.roster_size < 2 * kTeamSize) fail("roster_size must be at least 10");
  if (!(c.mean_duration_minutes >= 1.0) || !std::isfinite(c.mean_duration_minutes)) {
    fail("mean_duration_minutes must be >= 1");
  }
  if (!(c.kill_signal_strength >= 0.0 && c.kill_signal_strength <= 1.0)) {
    fail("kill_signal_strength must lie in [0,1]");
  }
  if (!(c.radiant_bias >= 0.0 && c.radiant_bias <= 1.0)) fail("radiant_bias must lie in [0,1]");
  if (!(c.pro_fraction >= 0.0 && c.pro_fraction <= 1.0)) fail("pro_fraction must lie in [0,1]");
}

MatchDataset synthesize(const SynthConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::int64_t> start_offset(0, kSynthSpanSeconds - 1);
  std::uniform_int_distribution<std::int64_t> skill(6001, 7500);
  std::normal_distribution<double> duration_dist(config.mean_duration_minutes,
                                                 0.25 * config.mean_duration_minutes);
  std::poisson_distribution<int> kill_dist(0.6);
  auto uniform_int = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  std::vector<MatchRecord> matches;
  std::vector<MetricSample> samples;
  matches.reserve(static_cast<std::size_t>(config.n_matches));
  std::vector<int> roster(static_cast<std::size_t>(config.roster_size));

  for (int i = 0; i < config.n_matches; ++i) {
    MatchRecord m;
    m.match_id = fmt::format("s{:05d}", i);
    m.start_time = kSynthEpoch + start_offset(rng);
    m.is_professional = unit(rng) < config.pro_fraction;
    if (m.is_professional) {
      if (m.start_time >= kSynthEpoch + kSynthSpanSeconds - kSynthTournamentSeconds) {
        m.tournament_id = std::string(kSynthTournament);
      }
    } else {
      m.skill_score = skill(rng);
    }
    m.duration_minutes =
        static_cast<int>(std::clamp(std::lround(duration_dist(rng)), 5L, 150L));

    std::iota(roster.begin(), roster.end(), 0);
    for (int k = 0; k < 2 * kTeamSize; ++k) {
      const int j = uniform_int(k, config.roster_size - 1);
      std::swap(roster[static_cast<std::size_t>(k)], roster[static_cast<std::size_t>(j)]);
    }
    std::sort(roster.begin(), roster.begin() + kTeamSize);
    std::sort(roster.begin() + kTeamSize, roster.begin() + 2 * kTeamSize);
    for (int k = 0; k < kTeamSize; ++k) {
      m.radiant_heroes[static_cast<std::size_t>(k)] = HeroId{roster[static_cast<std::size_t>(k)]};
      m.dire_heroes[static_cast<std::size_t>(k)] =
          HeroId{roster[static_cast<std::size_t>(k + kTeamSize)]};
    }

    const bool radiant_leads = unit(rng) < 0.5;
    MetricValues leader{};
    MetricValues trailer{};
    auto emit = [&](int minute) {
      MetricSample s;
      s.match_id = m.match_id;
      s.minute = minute;
      s.radiant = radiant_leads ? leader : trailer;
      s.dire = radiant_leads ? trailer : leader;
      samples.push_back(std::move(s));
    };
    auto advance = [&](MetricValues& team, int kills) {
      team[0] += 250.0 * kills + uniform_int(150, 650);
      team[1] += kills;
      team[2] += kills + uniform_int(3, 9);
      team[3] += 150.0 * kills + uniform_int(250, 650);
      team[4] += 40.0 * kills + uniform_int(0, 150);
      team[5] += 120.0 * kills + uniform_int(250, 550);
    };
    emit(0);
    for (int minute = 1; minute <= m.duration_minutes; ++minute) {
      const int a = kill_dist(rng);
      const int b = kill_dist(rng);
      advance(leader, std::max(a, b) + (minute == 1 ? 1 : 0));
      advance(trailer, std::min(a, b));
      emit(minute);
    }

    if (unit(rng) < config.kill_signal_strength) {
      m.winner = radiant_leads ? MatchOutcome::RadiantWin : MatchOutcome::DireWin;
    } else {
      m.winner = unit(rng) < config.radiant_bias ? MatchOutcome::RadiantWin : MatchOutcome::DireWin;
    }
    matches.push_back(std::move(m));
  }
  return MatchDataset(std::move(matches), std::move(samples));
}

double synth_bayes_rate(const SynthConfig& config) {
  validate(config);
  const double s = config.kill_signal_strength;
  const double rb = config.radiant_bias;
  const double p_radiant_given_radiant_leads = s + (1.0 - s) * rb;
  const double p_radiant_given_dire_leads = (1.0 - s) * rb;
  return 0.5 * std::max(p_radiant_given_radiant_leads, 1.0 - p_radiant_given_radiant_leads) +
         0.5 * std::max(p_radiant_given_dire_leads, 1.0 - p_radiant_given_dire_leads);
}

}  // namespace winpred
