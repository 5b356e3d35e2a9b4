#pragma once

// Shared fixtures and independent oracles for the test suites. Nothing here
// calls into the code paths it is used to check.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "winpred/labeled_data.hpp"
#include "winpred/match_data.hpp"

namespace winpred::testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("winpred_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path write(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline MatchRecord make_match(std::string id, std::int64_t start, std::array<int, 5> radiant,
                              std::array<int, 5> dire, MatchOutcome winner, int duration = 40,
                              bool pro = false, std::string tournament = {}) {
  MatchRecord m;
  m.match_id = std::move(id);
  m.start_time = start;
  m.is_professional = pro;
  m.tournament_id = std::move(tournament);
  m.duration_minutes = duration;
  std::sort(radiant.begin(), radiant.end());
  std::sort(dire.begin(), dire.end());
  for (int i = 0; i < 5; ++i) {
    m.radiant_heroes[static_cast<std::size_t>(i)] = HeroId{radiant[static_cast<std::size_t>(i)]};
    m.dire_heroes[static_cast<std::size_t>(i)] = HeroId{dire[static_cast<std::size_t>(i)]};
  }
  m.winner = winner;
  if (!pro) m.skill_score = 6500;
  return m;
}

// Cumulative samples 0..duration where Dire gains `dire_step` and Radiant
// `radiant_step` of every metric each minute.
inline std::vector<MetricSample> linear_samples(const std::string& id, int duration, double dire_step,
                                                double radiant_step) {
  std::vector<MetricSample> out;
  for (int t = 0; t <= duration; ++t) {
    MetricSample s;
    s.match_id = id;
    s.minute = t;
    s.dire.fill(dire_step * t);
    s.radiant.fill(radiant_step * t);
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

// Raw metrics CSV parsed with plain streams: id -> minute -> 12 columns.
using RawMetrics = std::map<std::string, std::map<int, std::vector<double>>>;

inline RawMetrics parse_raw_metrics(const std::string& text) {
  RawMetrics out;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string id, cell;
    std::getline(fields, id, ',');
    std::getline(fields, cell, ',');
    const int minute = std::stoi(cell);
    std::vector<double> values;
    while (std::getline(fields, cell, ',')) values.push_back(std::strtod(cell.c_str(), nullptr));
    out[id][minute] = values;
  }
  return out;
}

// Entropy (bits) of a sequence of discrete symbols.
template <typename T>
double entropy_bits(const std::vector<T>& xs) {
  std::map<T, double> counts;
  for (const auto& x : xs) counts[x] += 1.0;
  double h = 0.0;
  for (const auto& [k, c] : counts) {
    const double p = c / static_cast<double>(xs.size());
    h -= p * std::log2(p);
  }
  return h;
}

inline double oracle_su(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<std::pair<int, int>> joint;
  for (std::size_t i = 0; i < a.size(); ++i) joint.emplace_back(a[i], b[i]);
  const double ha = entropy_bits(a), hb = entropy_bits(b);
  if (ha + hb == 0.0) return 0.0;
  return 2.0 * (ha + hb - entropy_bits(joint)) / (ha + hb);
}

// Exhaustive information-gain split search in (feature, threshold) order.
struct OracleSplit {
  bool found = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;
};

inline double oracle_entropy2(double a, double b) {
  double h = 0.0;
  for (double c : {a, b}) {
    if (c > 0) {
      const double p = c / (a + b);
      h -= p * std::log2(p);
    }
  }
  return h;
}

inline OracleSplit oracle_best_split(const LabeledData& data, const std::vector<std::size_t>& rows,
                                     const std::vector<std::size_t>& features, int min_leaf) {
  OracleSplit best;
  double total_r = 0, total_d = 0;
  for (auto r : rows) (data.label(r) == MatchOutcome::RadiantWin ? total_r : total_d) += 1;
  const double parent = oracle_entropy2(total_d, total_r);
  const double n = static_cast<double>(rows.size());
  for (auto f : features) {
    std::vector<double> values;
    for (auto r : rows) values.push_back(data.at(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double thr = values[k] + (values[k + 1] - values[k]) / 2.0;
      double ld = 0, lr = 0, rd = 0, rr = 0;
      for (auto r : rows) {
        const bool radiant = data.label(r) == MatchOutcome::RadiantWin;
        if (data.at(r, f) <= thr) (radiant ? lr : ld) += 1;
        else (radiant ? rr : rd) += 1;
      }
      if (ld + lr < min_leaf || rd + rr < min_leaf) continue;
      const double gain = parent - ((ld + lr) / n) * oracle_entropy2(ld, lr) -
                          ((rd + rr) / n) * oracle_entropy2(rd, rr);
      if (gain > best.gain + 1e-12) best = {true, f, thr, gain};
    }
  }
  return best;
}


// ---------------------------------------------------------------------------
// Feature-selection fixtures and oracles

inline LabeledData from_columns(const std::vector<std::vector<double>>& cols, const std::vector<int>& ys) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < cols.size(); ++j) names.push_back("f" + std::to_string(j));
  LabeledData out(names);
  for (std::size_t i = 0; i < ys.size(); ++i) {
    std::vector<double> row;
    for (const auto& c : cols) row.push_back(c[i]);
    out.add_row(row, ys[i] ? MatchOutcome::RadiantWin : MatchOutcome::DireWin);
  }
  return out;
}

// Independent discretizer following the documented rule.
inline std::vector<int> oracle_codes(const std::vector<double>& xs) {
  std::set<double> distinct(xs.begin(), xs.end());
  std::vector<int> out;
  if (distinct.size() <= 10) {
    for (double x : xs) out.push_back(static_cast<int>(std::distance(distinct.begin(), distinct.find(x))));
    return out;
  }
  for (double x : xs) {
    std::size_t below = 0;
    for (double y : xs) below += y < x;
    out.push_back(static_cast<int>(10 * below / xs.size()));
  }
  return out;
}

inline double oracle_merit(const std::vector<std::size_t>& subset, const LabeledData& data) {
  if (subset.empty()) return 0.0;
  std::vector<int> cls;
  for (auto y : data.labels()) cls.push_back(y == MatchOutcome::RadiantWin);
  double rcf = 0, rff = 0;
  for (auto a : subset) rcf += oracle_su(oracle_codes(data.column(a)), cls);
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      rff += oracle_su(oracle_codes(data.column(subset[i])), oracle_codes(data.column(subset[j])));
      ++pairs;
    }
  }
  const double k = static_cast<double>(subset.size());
  rcf /= k;
  rff = pairs ? rff / static_cast<double>(pairs) : 0.0;
  return k * rcf / std::sqrt(k + k * (k - 1) * rff);
}

// 20-row label vector shared by the SU tables.
inline const std::vector<int> kLabels = {0, 0, 0, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 1, 0, 0, 1, 0, 1};

// Five columns of mixed kind over kLabels: two noisy label copies (one
// continuous), a pure-noise column, a dependent copy and a one-class spread.
inline LabeledData toy_five() {
  std::mt19937_64 rng(55);
  std::vector<std::vector<double>> cols(5, std::vector<double>(kLabels.size()));
  for (std::size_t i = 0; i < kLabels.size(); ++i) {
    cols[0][i] = kLabels[i] + static_cast<double>(rng() % 2);
    cols[1][i] = static_cast<double>(rng() % 4);
    cols[2][i] = cols[0][i] * 2 + static_cast<double>(rng() % 2);
    cols[3][i] = static_cast<double>(rng() % 1000) / 7.0 + 50.0 * kLabels[i];
    cols[4][i] = kLabels[i] == 1 ? static_cast<double>(rng() % 3) : 2.0;
  }
  return from_columns(cols, kLabels);
}

// Three informative, mutually weakly related features and three pure-noise
// features: the merit optimum is the informative trio, reachable by single
// additions that each raise the merit.
inline LabeledData six_feature_instance() {
  std::mt19937_64 rng(606);
  const std::size_t n = 400;
  std::vector<int> ys(n);
  std::vector<std::vector<double>> cols(6, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    ys[i] = static_cast<int>(rng() % 2);
    for (std::size_t j = 0; j < 3; ++j) {
      // each agrees with the label 80% of the time, independently
      const bool agree = rng() % 10 < 8;
      cols[j][i] = agree ? ys[i] : 1 - ys[i];
    }
    for (std::size_t j = 3; j < 6; ++j) cols[j][i] = static_cast<double>(rng() % 4);
  }
  return from_columns(cols, ys);
}

}  // namespace winpred::testing
