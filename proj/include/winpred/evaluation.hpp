#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "winpred/feature_select.hpp"
#include "winpred/labeled_data.hpp"
#include "winpred/learner.hpp"
#include "winpred/match_data.hpp"

namespace winpred {

// ---------------------------------------------------------------------------
// Splits

struct ChronologicalSplit {
  double train_fraction = 0.66;
};
struct TournamentHoldout {
  std::string tournament_id;
};
using SplitSpec = std::variant<ChronologicalSplit, TournamentHoldout>;

// "chronological:0.66" / "tournament:<id>"
std::string describe(const SplitSpec& spec);

struct MatchSplit {
  std::vector<MatchRecord> train;
  std::vector<MatchRecord> test;
};

// Chronological: sort by (start_time, match_id), the first ceil(f * n) matches
// train. Holdout: the tournament's matches test, all others train.
// Throws Error(EmptySide), Error(UnknownTournament), Error(InvalidConfig).
MatchSplit split(std::span<const MatchRecord> matches, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Run configuration

struct HeroRepresentation {};
struct InGameRepresentation {
  int t = 20;
  bool include_timestamps = false;
};
using Representation = std::variant<HeroRepresentation, InGameRepresentation>;

std::string describe(const Representation& representation);

struct Selection {
  enum class Kind { All, SingleFeature, Cfs, Wrapper };
  Kind kind = Kind::All;
  std::string feature;  // SingleFeature only

  // "all" / "single:<feature>" / "cfs" / "wrapper"
  std::string describe() const;
  // Table column heading: "All" / "1-Attr" / "CFS" / "Wrapper".
  std::string column() const;
};

struct RunConfig {
  std::string run_id;
  Representation representation = InGameRepresentation{};
  LearnerSpec learner{LrConfig{}};
  Selection selection;
  SplitSpec split = ChronologicalSplit{};
  int roster_size = kDefaultRosterSize;
  int folds = 5;
  std::uint64_t selection_seed = 1;
  int stale_limit = 5;
};

// Builds a RunConfig from `key = value` settings (the grid-file vocabulary;
// see grid.hpp). Throws Error(InvalidConfig) for unknown keys or bad values.
RunConfig make_run_config(const std::map<std::string, std::string>& settings);

// Static checks that need no data; a SingleFeature name that does not exist
// in the representation throws Error(UnknownFeature).
void validate(const RunConfig& run);

// Column index of `name` in the representation's feature list; a bare
// `<Metric>_<variant>` resolves to offset t.
std::optional<std::size_t> resolve_feature(const RunConfig& run, std::string_view name);

struct Representations {
  LabeledData train;
  LabeledData test;
  std::size_t skipped = 0;
};

Representations build_representations(const RunConfig& run, const MatchDataset& dataset,
                                      const MatchSplit& parts);

// ---------------------------------------------------------------------------
// Evaluation

struct Confusion {
  std::size_t tp = 0;  // predicted Radiant, Radiant won
  std::size_t tn = 0;  // predicted Dire, Dire won
  std::size_t fp = 0;  // predicted Radiant, Dire won
  std::size_t fn = 0;  // predicted Dire, Radiant won

  std::size_t total() const { return tp + tn + fp + fn; }
};

struct EvalReport {
  RunConfig config;
  bool ok = true;
  std::string error;  // set when !ok
  double accuracy = 0.0;
  Confusion confusion;
  std::vector<std::string> selected_features;  // canonical column order
  double selection_score = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t skipped = 0;
  double wall_seconds = 0.0;
  TrainedModel model;
};

// Every LabeledData handed to a selector or trainer passes through `on_fit`
// first; tests use it to prove no test row leaks into fitting.
struct EvalHooks {
  std::function<void(const LabeledData&)> on_fit;
};

// Split, featurize, select on train, fit on train, score on test.
EvalReport evaluate(const RunConfig& run, const MatchDataset& dataset, const EvalHooks& hooks = {});

// Runs every config (up to `workers` at a time, 0 = worker_count()); a failing
// config yields a report with ok = false. Output order follows the grid.
std::vector<EvalReport> sweep(std::span<const RunConfig> grid, const MatchDataset& dataset,
                              std::size_t workers = 0);

inline constexpr std::string_view kReportHeader =
    "run_id,representation,learner,selection,split,accuracy,tp,tn,fp,fn,train_size,test_size,"
    "selected_features";

std::string report_csv(std::span<const EvalReport> reports);

// One block per (representation, split); rows are learners, columns are
// selection modes; the best accuracy in each block is flagged.
struct TableCell {
  std::size_t report = 0;
  bool best = false;
};
struct TableBlock {
  std::string representation;
  std::string split;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::map<std::pair<std::size_t, std::size_t>, TableCell> cells;  // (row, column)
};

std::vector<TableBlock> build_tables(std::span<const EvalReport> reports);
std::string markdown_tables(std::span<const EvalReport> reports);
std::string csv_tables(std::span<const EvalReport> reports);

// ---------------------------------------------------------------------------
// Kills difference quadrants

struct QuadrantPoint {
  std::string match_id;
  double kills_r_minus_d = 0.0;
  MatchOutcome winner = MatchOutcome::RadiantWin;
};

struct QuadrantStats {
  double radiant_above = 0.0;  // of points with value > 0, fraction Radiant won
  double dire_below = 0.0;     // of points with value < 0, fraction Dire won
  std::size_t above = 0;
  std::size_t below = 0;
  std::size_t zero = 0;  // excluded from both fractions
  std::vector<QuadrantPoint> points;
};

// Throws Error(EmptyDataset) for no points.
QuadrantStats quadrant_stats(std::vector<QuadrantPoint> points);
// Kills_R-D at minute t for every match lasting at least t minutes.
QuadrantStats quadrant_stats(const MatchDataset& dataset, int t);
std::string plot_points_csv(const QuadrantStats& stats);

}  // namespace winpred
