#include "winpred/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "winpred/csv.hpp"
#include "winpred/error.hpp"
#include "winpred/featurize.hpp"
#include "winpred/parallel.hpp"

namespace winpred {

std::string describe(const SplitSpec& spec) {
  if (const auto* c = std::get_if<ChronologicalSplit>(&spec)) {
    return fmt::format("chronological:{}", c->train_fraction);
  }
  return "tournament:" + std::get<TournamentHoldout>(spec).tournament_id;
}

MatchSplit split(std::span<const MatchRecord> matches, const SplitSpec& spec) {
  if (matches.empty()) throw Error(ErrorKind::EmptySide, "no matches to split");
  MatchSplit out;
  if (const auto* c = std::get_if<ChronologicalSplit>(&spec)) {
    if (!(c->train_fraction > 0.0 && c->train_fraction < 1.0)) {
      throw Error(ErrorKind::InvalidConfig, "train_fraction must lie in (0,1)");
    }
    auto sorted = sort_chronological(std::vector<MatchRecord>(matches.begin(), matches.end()));
    // The small slack keeps fractions like 0.66 * 100 from rounding up past
    // the exact product.
    const auto n_train = static_cast<std::size_t>(
        std::ceil(c->train_fraction * static_cast<double>(sorted.size()) - 1e-9));
    if (n_train == 0 || n_train >= sorted.size()) {
      throw Error(ErrorKind::EmptySide,
                  fmt::format("{} matches at fraction {} leave one side empty", sorted.size(),
                              c->train_fraction));
    }
    out.train.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test.assign(sorted.begin() + static_cast<std::ptrdiff_t>(n_train), sorted.end());
    return out;
  }
  const auto& id = std::get<TournamentHoldout>(spec).tournament_id;
  for (const auto& m : matches) (m.tournament_id == id && !id.empty() ? out.test : out.train).push_back(m);
  if (out.test.empty()) throw Error(ErrorKind::UnknownTournament, fmt::format("no matches in '{}'", id));
  if (out.train.empty()) throw Error(ErrorKind::EmptySide, "holdout leaves no training matches");
  return out;
}

// ---------------------------------------------------------------------------

std::string describe(const Representation& representation) {
  if (const auto* g = std::get_if<InGameRepresentation>(&representation)) {
    return fmt::format("InGame(t={})", g->t);
  }
  return "Hero";
}

std::string Selection::describe() const {
  switch (kind) {
    case Kind::All: return "all";
    case Kind::SingleFeature: return "single:" + feature;
    case Kind::Cfs: return "cfs";
    case Kind::Wrapper: return "wrapper";
  }
  return "?";
}

std::string Selection::column() const {
  switch (kind) {
    case Kind::All: return "All";
    case Kind::SingleFeature: return "1-Attr";
    case Kind::Cfs: return "CFS";
    case Kind::Wrapper: return "Wrapper";
  }
  return "?";
}

namespace {

[[noreturn]] void bad_setting(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorKind::InvalidConfig, fmt::format("{} = '{}': {}", key, value, why));
}

template <typename T>
T number(std::string_view key, const std::string& value) {
  try {
    if constexpr (std::is_floating_point_v<T>) {
      return static_cast<T>(csv::parse_real(value, key));
    } else {
      return static_cast<T>(csv::parse_int(value, key));
    }
  } catch (const Error&) {
    bad_setting(key, value, "not a number");
  }
}

bool boolean(std::string_view key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad_setting(key, value, "expected true or false");
}

std::vector<std::string> selected_names(const LabeledData& data, const FeatureSubset& subset) {
  std::vector<std::string> names;
  for (auto j : subset.indices()) names.push_back(data.feature_names()[j]);
  return names;
}

}  // namespace

RunConfig make_run_config(const std::map<std::string, std::string>& settings) {
  RunConfig run;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = settings.find(key);
    return it == settings.end() ? nullptr : &it->second;
  };
  static const std::set<std::string, std::less<>> known = {
      "id", "representation", "t", "include_timestamps", "learner", "ridge", "max_iterations",
      "tolerance", "standardize", "trees", "features_per_split", "max_depth", "min_leaf",
      "seed", "selection", "folds", "stale_limit", "split", "roster"};
  for (const auto& [key, value] : settings) {
    if (!known.count(key)) bad_setting(key, value, "unknown key");
  }

  if (const auto* v = get("id")) run.run_id = *v;
  bool in_game = true;
  if (const auto* v = get("representation")) {
    if (*v == "hero") in_game = false;
    else if (*v != "ingame") bad_setting("representation", *v, "expected hero or ingame");
  }
  if (in_game) {
    InGameRepresentation g;
    if (const auto* v = get("t")) g.t = number<int>("t", *v);
    if (const auto* v = get("include_timestamps")) g.include_timestamps = boolean("include_timestamps", *v);
    run.representation = g;
  } else {
    run.representation = HeroRepresentation{};
  }
  if (const auto* v = get("roster")) run.roster_size = number<int>("roster", *v);

  std::uint64_t seed = 1;
  if (const auto* v = get("seed")) seed = number<std::uint64_t>("seed", *v);
  run.selection_seed = seed;

  const std::string learner = get("learner") ? *get("learner") : "lr";
  if (learner == "lr") {
    LrConfig lr;
    lr.standardize = in_game;
    if (const auto* v = get("ridge")) lr.ridge = number<double>("ridge", *v);
    if (const auto* v = get("max_iterations")) lr.max_iterations = number<int>("max_iterations", *v);
    if (const auto* v = get("tolerance")) lr.convergence_tolerance = number<double>("tolerance", *v);
    if (const auto* v = get("standardize")) lr.standardize = boolean("standardize", *v);
    validate(lr);
    run.learner = LearnerSpec{lr};
  } else if (learner == "rf") {
    RfConfig rf;
    rf.seed = seed;
    if (const auto* v = get("trees")) rf.num_trees = number<int>("trees", *v);
    if (const auto* v = get("features_per_split")) rf.features_per_split = number<int>("features_per_split", *v);
    if (const auto* v = get("max_depth")) rf.max_depth = number<int>("max_depth", *v);
    if (const auto* v = get("min_leaf")) rf.min_leaf = number<int>("min_leaf", *v);
    validate(rf, static_cast<std::size_t>(std::max(rf.features_per_split, 0)));
    run.learner = LearnerSpec{rf};
  } else {
    bad_setting("learner", learner, "expected lr or rf");
  }

  if (const auto* v = get("selection")) {
    if (*v == "all") run.selection.kind = Selection::Kind::All;
    else if (*v == "cfs") run.selection.kind = Selection::Kind::Cfs;
    else if (*v == "wrapper") run.selection.kind = Selection::Kind::Wrapper;
    else if (v->rfind("single:", 0) == 0 && v->size() > 7) {
      run.selection.kind = Selection::Kind::SingleFeature;
      run.selection.feature = v->substr(7);
    } else {
      bad_setting("selection", *v, "expected all, cfs, wrapper or single:<feature>");
    }
  }
  if (const auto* v = get("folds")) run.folds = number<int>("folds", *v);
  if (const auto* v = get("stale_limit")) run.stale_limit = number<int>("stale_limit", *v);

  if (const auto* v = get("split")) {
    if (v->rfind("chronological:", 0) == 0) {
      run.split = ChronologicalSplit{number<double>("split", v->substr(14))};
    } else if (*v == "chronological") {
      run.split = ChronologicalSplit{};
    } else if (v->rfind("tournament:", 0) == 0 && v->size() > 11) {
      run.split = TournamentHoldout{v->substr(11)};
    } else {
      bad_setting("split", *v, "expected chronological:<fraction> or tournament:<id>");
    }
  }
  return run;
}

std::optional<std::size_t> resolve_feature(const RunConfig& run, std::string_view name) {
  if (std::holds_alternative<HeroRepresentation>(run.representation)) {
    const auto names = hero_feature_names(run.roster_size);
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
  }
  const auto& g = std::get<InGameRepresentation>(run.representation);
  const std::size_t shift = g.include_timestamps ? kWindowLength : 0;
  if (g.include_timestamps) {
    for (int i = 1; i <= kWindowLength; ++i) {
      if (name == fmt::format("ts{}", i)) return static_cast<std::size_t>(i - 1);
    }
  }
  if (auto idx = find_window_feature(name)) return *idx + shift;
  return std::nullopt;
}

void validate(const RunConfig& run) {
  if (const auto* g = std::get_if<InGameRepresentation>(&run.representation)) {
    if (g->t < kMinWindowEnd) {
      throw Error(ErrorKind::WindowBelowMinimum, fmt::format("t = {} < {}", g->t, kMinWindowEnd));
    }
  }
  if (run.roster_size < 2 * kTeamSize) throw Error(ErrorKind::InvalidConfig, "roster too small");
  if (run.selection.kind == Selection::Kind::SingleFeature &&
      !resolve_feature(run, run.selection.feature)) {
    throw Error(ErrorKind::UnknownFeature,
                fmt::format("unknown feature '{}' for {}", run.selection.feature,
                            describe(run.representation)));
  }
  if (run.selection.kind == Selection::Kind::Wrapper && run.folds < 2) {
    throw Error(ErrorKind::InvalidConfig, "folds must be >= 2");
  }
  if (run.stale_limit < 1) throw Error(ErrorKind::InvalidConfig, "stale_limit must be >= 1");
}

Representations build_representations(const RunConfig& run, const MatchDataset& dataset,
                                      const MatchSplit& parts) {
  Representations out;
  if (std::holds_alternative<HeroRepresentation>(run.representation)) {
    out.train = to_labeled(build_hero_dataset(parts.train, run.roster_size), run.roster_size);
    out.test = to_labeled(build_hero_dataset(parts.test, run.roster_size), run.roster_size);
    return out;
  }
  const auto& g = std::get<InGameRepresentation>(run.representation);
  if (!dataset.has_metrics()) {
    throw Error(ErrorKind::MissingSample, "in-game representation needs per-minute metrics");
  }
  const auto train = build_window_dataset(dataset, parts.train, g.t);
  const auto test = build_window_dataset(dataset, parts.test, g.t);
  out.train = to_labeled(train.vectors, g.include_timestamps);
  out.test = to_labeled(test.vectors, g.include_timestamps);
  out.skipped = train.skipped + test.skipped;
  return out;
}

EvalReport evaluate(const RunConfig& run, const MatchDataset& dataset, const EvalHooks& hooks) {
  const auto start = std::chrono::steady_clock::now();
  validate(run);
  EvalReport report;
  report.config = run;

  const auto parts = split(dataset.matches(), run.split);
  const auto reps = build_representations(run, dataset, parts);
  if (reps.train.empty()) throw Error(ErrorKind::EmptySide, "no eligible training rows");
  if (reps.test.empty()) throw Error(ErrorKind::EmptySide, "no eligible test rows");
  report.train_size = reps.train.rows();
  report.test_size = reps.test.rows();
  report.skipped = reps.skipped;

  auto fit_guard = [&](const LabeledData& data) {
    if (hooks.on_fit) hooks.on_fit(data);
  };

  FeatureSubset subset;
  switch (run.selection.kind) {
    case Selection::Kind::All: {
      std::vector<std::size_t> all(reps.train.cols());
      std::iota(all.begin(), all.end(), std::size_t{0});
      subset = FeatureSubset(std::move(all));
      break;
    }
    case Selection::Kind::SingleFeature:
      subset = FeatureSubset({*resolve_feature(run, run.selection.feature)});
      break;
    case Selection::Kind::Cfs:
    case Selection::Kind::Wrapper: {
      SelectionConfig sc;
      sc.kind = run.selection.kind == Selection::Kind::Cfs ? SelectorKind::Cfs : SelectorKind::Wrapper;
      sc.learner = run.learner;
      sc.folds = run.folds;
      sc.seed = run.selection_seed;
      sc.search.stale_limit = run.stale_limit;
      fit_guard(reps.train);
      const auto found = select_features(reps.train, sc);
      subset = found.subset;
      report.selection_score = found.score;
      break;
    }
  }
  report.selected_features = selected_names(reps.train, subset);

  const auto train_data = reps.train.select_columns(subset.indices());
  const auto test_data = reps.test.select_columns(subset.indices());
  fit_guard(train_data);
  report.model = train(run.learner, train_data);

  for (std::size_t i = 0; i < test_data.rows(); ++i) {
    const bool predicted_radiant = predict(report.model, test_data.row(i)) == MatchOutcome::RadiantWin;
    const bool radiant = test_data.label(i) == MatchOutcome::RadiantWin;
    if (predicted_radiant && radiant) ++report.confusion.tp;
    else if (!predicted_radiant && !radiant) ++report.confusion.tn;
    else if (predicted_radiant) ++report.confusion.fp;
    else ++report.confusion.fn;
  }
  report.accuracy = static_cast<double>(report.confusion.tp + report.confusion.tn) /
                    static_cast<double>(report.test_size);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<EvalReport> sweep(std::span<const RunConfig> grid, const MatchDataset& dataset,
                              std::size_t workers) {
  std::vector<EvalReport> reports(grid.size());
  parallel_for(grid.size(), workers ? workers : worker_count(), [&](std::size_t i) {
    try {
      reports[i] = evaluate(grid[i], dataset);
    } catch (const std::exception& e) {
      reports[i] = EvalReport{};
      reports[i].config = grid[i];
      reports[i].ok = false;
      reports[i].error = e.what();
    }
  });
  return reports;
}

// ---------------------------------------------------------------------------
// Reports

std::string report_csv(std::span<const EvalReport> reports) {
  std::string out(kReportHeader);
  out += '\n';
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    const auto id = r.config.run_id.empty() ? fmt::format("run{}", i + 1) : r.config.run_id;
    out += fmt::format("{},{},{},{},{},", id, describe(r.config.representation),
                       r.config.learner.label(), r.config.selection.describe(),
                       describe(r.config.split));
    if (!r.ok) {
      std::string message = r.error;
      std::replace(message.begin(), message.end(), '"', '\'');
      out += fmt::format("NA,,,,,,,\"ERROR {}\"\n", message);
      continue;
    }
    std::string features;
    for (std::size_t j = 0; j < r.selected_features.size(); ++j) {
      if (j) features += ';';
      features += r.selected_features[j];
    }
    out += fmt::format("{:.6f},{},{},{},{},{},{},{}\n", r.accuracy, r.confusion.tp,
                       r.confusion.tn, r.confusion.fp, r.confusion.fn, r.train_size, r.test_size,
                       features);
  }
  return out;
}

std::vector<TableBlock> build_tables(std::span<const EvalReport> reports) {
  std::vector<TableBlock> blocks;
  auto index_of = [](std::vector<std::string>& list, const std::string& key) {
    auto it = std::find(list.begin(), list.end(), key);
    if (it != list.end()) return static_cast<std::size_t>(it - list.begin());
    list.push_back(key);
    return list.size() - 1;
  };
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& cfg = reports[i].config;
    const auto rep = describe(cfg.representation);
    const auto spl = describe(cfg.split);
    auto it = std::find_if(blocks.begin(), blocks.end(), [&](const TableBlock& b) {
      return b.representation == rep && b.split == spl;
    });
    if (it == blocks.end()) {
      blocks.push_back({rep, spl, {}, {}, {}});
      it = blocks.end() - 1;
    }
    const auto row = index_of(it->rows, cfg.learner.label());
    const auto col = index_of(it->columns, cfg.selection.column());
    it->cells.emplace(std::pair{row, col}, TableCell{i, false});
  }
  for (auto& block : blocks) {
    TableCell* best = nullptr;
    for (auto& [key, cell] : block.cells) {
      const auto& r = reports[cell.report];
      if (!r.ok) continue;
      if (!best || r.accuracy > reports[best->report].accuracy ||
          (r.accuracy == reports[best->report].accuracy && cell.report < best->report)) {
        best = &cell;
      }
    }
    if (best) best->best = true;
  }
  return blocks;
}

namespace {

std::string cell_text(const EvalReport& r) {
  if (!r.ok) return "error";
  auto text = fmt::format("{:.4f}", 100.0 * r.accuracy);
  if (r.config.selection.kind == Selection::Kind::SingleFeature && !r.selected_features.empty()) {
    text += fmt::format(" ({})", r.selected_features.front());
  }
  return text;
}

}  // namespace

std::string markdown_tables(std::span<const EvalReport> reports) {
  std::string out;
  for (const auto& block : build_tables(reports)) {
    if (!out.empty()) out += '\n';
    out += fmt::format("### {} | {}\n\n| Predictor |", block.representation, block.split);
    for (const auto& c : block.columns) out += fmt::format(" {} |", c);
    out += "\n|---|";
    for (std::size_t c = 0; c < block.columns.size(); ++c) out += "---:|";
    out += '\n';
    for (std::size_t r = 0; r < block.rows.size(); ++r) {
      out += fmt::format("| {} |", block.rows[r]);
      for (std::size_t c = 0; c < block.columns.size(); ++c) {
        auto it = block.cells.find({r, c});
        if (it == block.cells.end()) {
          out += "  |";
          continue;
        }
        const auto text = cell_text(reports[it->second.report]);
        out += it->second.best ? fmt::format(" **{}** |", text) : fmt::format(" {} |", text);
      }
      out += '\n';
    }
  }
  return out;
}

std::string csv_tables(std::span<const EvalReport> reports) {
  std::string out = "representation,split,predictor,selection,accuracy_percent,best\n";
  for (const auto& block : build_tables(reports)) {
    for (const auto& [key, cell] : block.cells) {
      const auto& r = reports[cell.report];
      out += fmt::format("{},{},{},{},{},{}\n", block.representation, block.split,
                         block.rows[key.first], block.columns[key.second],
                         r.ok ? fmt::format("{:.4f}", 100.0 * r.accuracy) : std::string("NA"),
                         cell.best ? "true" : "false");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

QuadrantStats quadrant_stats(std::vector<QuadrantPoint> points) {
  if (points.empty()) throw Error(ErrorKind::EmptyDataset, "no points for the quadrant statistic");
  QuadrantStats s;
  std::size_t radiant_above = 0;
  std::size_t dire_below = 0;
  for (const auto& p : points) {
    if (p.kills_r_minus_d > 0) {
      ++s.above;
      radiant_above += p.winner == MatchOutcome::RadiantWin ? 1 : 0;
    } else if (p.kills_r_minus_d < 0) {
      ++s.below;
      dire_below += p.winner == MatchOutcome::DireWin ? 1 : 0;
    } else {
      ++s.zero;
    }
  }
  if (s.above) s.radiant_above = static_cast<double>(radiant_above) / static_cast<double>(s.above);
  if (s.below) s.dire_below = static_cast<double>(dire_below) / static_cast<double>(s.below);
  s.points = std::move(points);
  return s;
}

QuadrantStats quadrant_stats(const MatchDataset& dataset, int t) {
  const auto windows = build_window_dataset(dataset, t);
  const auto cell = window_feature_index({Metric::Kills, Variant::RminusD}, kWindowLength - 1);
  std::vector<QuadrantPoint> points;
  points.reserve(windows.vectors.size());
  for (const auto& wv : windows.vectors) {
    points.push_back({wv.match_id, wv.features[cell], wv.label});
  }
  return quadrant_stats(std::move(points));
}

std::string plot_points_csv(const QuadrantStats& stats) {
  std::string out = "match_id,kills_r_minus_d,winner\n";
  for (const auto& p : stats.points) {
    out += fmt::format("{},{},{}\n", p.match_id, csv::format_real(p.kills_r_minus_d), to_string(p.winner));
  }
  return out;
}

}  // namespace winpred
