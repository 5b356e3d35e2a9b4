// Command-line front end: ingest, synth, featurize, train, eval, sweep,
// quadrant, durations. Exit codes: 0 success, 1 validation/data error,
// 2 usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "winpred/csv.hpp"
#include "winpred/error.hpp"
#include "winpred/evaluation.hpp"
#include "winpred/featurize.hpp"
#include "winpred/grid.hpp"
#include "winpred/learner.hpp"
#include "winpred/match_data.hpp"
#include "winpred/synth.hpp"

namespace fs = std::filesystem;
using namespace winpred;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataFlags {
  std::string matches;
  std::string metrics;
  int roster = kDefaultRosterSize;

  void add(CLI::App* app, bool metrics_required) {
    app->add_option("--matches", matches, "matches.csv")->required();
    auto* m = app->add_option("--metrics", metrics, "metrics.csv");
    if (metrics_required) m->required();
    app->add_option("--roster", roster, "hero roster size")->capture_default_str();
  }

  MatchDataset load() const {
    auto matches_list = load_matches(matches, roster);
    if (metrics.empty()) return MatchDataset(std::move(matches_list));
    return load_metrics(metrics, std::move(matches_list));
  }
};

// Flags that map 1:1 onto grid-file keys.
struct RunFlags {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string single_feature;
  CLI::Option* single_option = nullptr;

  void add(CLI::App* app) {
    static const std::vector<std::pair<std::string, std::string>> keys = {
        {"representation", "hero | ingame"},
        {"t", "window end minute"},
        {"include_timestamps", "true | false"},
        {"learner", "lr | rf"},
        {"ridge", "LR ridge"},
        {"max_iterations", "LR iteration cap"},
        {"tolerance", "LR convergence tolerance"},
        {"standardize", "true | false"},
        {"trees", "RF tree count"},
        {"features_per_split", "RF features per split (0 = auto)"},
        {"max_depth", "RF depth cap (0 = none)"},
        {"min_leaf", "RF minimum leaf size"},
        {"selection", "all | cfs | wrapper"},
        {"folds", "wrapper CV folds"},
        {"stale_limit", "best-first stale limit"},
        {"split", "chronological:<f> | tournament:<id>"},
    };
    for (const auto& [key, help] : keys) {
      std::string flag = "--" + key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      options[key] = app->add_option(flag, values[key], help);
    }
    single_option = app->add_option("--single-feature", single_feature,
                                    "train on one named feature, e.g. Kills_R-D");
  }

  std::map<std::string, std::string> settings(std::uint64_t seed, int roster) const {
    std::map<std::string, std::string> out;
    for (const auto& [key, opt] : options) {
      if (opt->count()) out[key] = values.at(key);
    }
    if (single_option->count()) out["selection"] = "single:" + single_feature;
    out["seed"] = std::to_string(seed);
    out["roster"] = std::to_string(roster);
    return out;
  }

  RunConfig config(std::uint64_t seed, int roster) const {
    RunConfig run;
    try {
      run = make_run_config(settings(seed, roster));
      validate(run);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::UnknownFeature) {
        throw UsageError(fmt::format("--single-feature: unknown feature '{}'", single_feature));
      }
      if (e.kind() == ErrorKind::InvalidConfig || e.kind() == ErrorKind::WindowBelowMinimum) {
        throw UsageError(e.what());
      }
      throw;
    }
    return run;
  }
};

void write_out(const fs::path& path, const std::string& contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  csv::write_file(path, contents);
}

void print_report(const EvalReport& r) {
  fmt::print("representation: {}\nlearner: {}\nselection: {}\nsplit: {}\n",
             describe(r.config.representation), r.config.learner.label(),
             r.config.selection.describe(), describe(r.config.split));
  fmt::print("train rows: {}  test rows: {}  skipped (short matches): {}\n", r.train_size,
             r.test_size, r.skipped);
  fmt::print("selected features ({}):", r.selected_features.size());
  for (const auto& f : r.selected_features) fmt::print(" {}", f);
  fmt::print("\naccuracy: {:.4f}%  (tp={} tn={} fp={} fn={})\nwall time: {:.2f}s\n",
             100.0 * r.accuracy, r.confusion.tp, r.confusion.tn, r.confusion.fp, r.confusion.fn,
             r.wall_seconds);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Esports win-prediction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 1;
  app.add_option("--seed", seed, "seed for every random choice")->capture_default_str();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "validate matches/metrics CSVs");
  DataFlags ingest_data;
  ingest_data.add(ingest, false);

  // synth
  auto* synth = app.add_subcommand("synth", "write synthetic matches.csv and metrics.csv");
  SynthConfig synth_cfg;
  std::string synth_out = ".";
  synth->add_option("--out", synth_out, "output directory")->capture_default_str();
  synth->add_option("--n", synth_cfg.n_matches, "match count")->capture_default_str();
  synth->add_option("--roster", synth_cfg.roster_size, "roster size")->capture_default_str();
  synth->add_option("--mean-duration", synth_cfg.mean_duration_minutes, "mean duration (min)")
      ->capture_default_str();
  synth->add_option("--signal", synth_cfg.kill_signal_strength, "kill signal strength in [0,1]")
      ->capture_default_str();
  synth->add_option("--radiant-bias", synth_cfg.radiant_bias, "P(Radiant) for unsignalled labels")
      ->capture_default_str();
  synth->add_option("--pro-fraction", synth_cfg.pro_fraction, "fraction of pro matches")
      ->capture_default_str();

  // featurize
  auto* featurize = app.add_subcommand("featurize", "emit hero or window vector CSVs");
  DataFlags feat_data;
  feat_data.add(featurize, false);
  std::string feat_kind = "hero";
  int feat_t = 20;
  std::string feat_out = ".";
  featurize->add_option("--kind", feat_kind, "hero | window")
      ->check(CLI::IsMember({"hero", "window"}))
      ->capture_default_str();
  featurize->add_option("--t", feat_t, "window end minute")->capture_default_str();
  featurize->add_option("--out", feat_out, "output directory")->capture_default_str();

  // train
  auto* train_cmd = app.add_subcommand("train", "select features, train on all given matches, save model");
  DataFlags train_data;
  train_data.add(train_cmd, false);
  RunFlags train_flags;
  train_flags.add(train_cmd);
  std::string model_out;
  train_cmd->add_option("--model-out", model_out, "model file")->required();

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "evaluate one configuration");
  DataFlags eval_data;
  eval_data.add(eval_cmd, false);
  RunFlags eval_flags;
  eval_flags.add(eval_cmd);
  std::string eval_report;
  eval_cmd->add_option("--report", eval_report, "write a one-row report CSV here");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate every run in a grid file");
  DataFlags sweep_data;
  sweep_data.add(sweep_cmd, false);
  std::string grid_path;
  std::string sweep_out = ".";
  sweep_cmd->add_option("--grid", grid_path, "grid file")->required();
  sweep_cmd->add_option("--out", sweep_out, "output directory")->capture_default_str();

  // quadrant
  auto* quadrant = app.add_subcommand("quadrant", "Kills_R-D quadrant statistic and plot points");
  DataFlags quad_data;
  quad_data.add(quadrant, true);
  int quad_t = 20;
  std::string quad_out = "plot_points.csv";
  quadrant->add_option("--t", quad_t, "minute")->capture_default_str();
  quadrant->add_option("--out", quad_out, "plot points CSV")->capture_default_str();

  // durations
  auto* durations = app.add_subcommand("durations", "match duration histogram");
  DataFlags dur_data;
  dur_data.add(durations, false);
  bool pro_only = false;
  int dur_threshold = 20;
  std::string dur_out = "durations.csv";
  durations->add_flag("--pro-only", pro_only, "professional matches only");
  durations->add_option("--threshold", dur_threshold, "report the fraction at least this long")
      ->capture_default_str();
  durations->add_option("--out", dur_out, "histogram CSV")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) {
      const auto ds = ingest_data.load();
      std::size_t pro = 0;
      for (const auto& m : ds.matches()) pro += m.is_professional ? 1 : 0;
      fmt::print("{} matches ({} professional), metrics {}\n", ds.matches().size(), pro,
                 ds.has_metrics() ? "valid" : "not given");
    } else if (synth->parsed()) {
      synth_cfg.seed = seed;
      const auto ds = synthesize(synth_cfg);
      fs::create_directories(synth_out);
      write_out(fs::path(synth_out) / "matches.csv", write_matches(ds.matches()));
      write_out(fs::path(synth_out) / "metrics.csv", write_metrics(ds));
      fmt::print("wrote {} matches to {} (Bayes-optimal accuracy {:.4f})\n", ds.matches().size(),
                 synth_out, synth_bayes_rate(synth_cfg));
    } else if (featurize->parsed()) {
      const auto ds = feat_data.load();
      if (feat_kind == "hero") {
        const auto vectors = build_hero_dataset(ds.matches(), feat_data.roster);
        write_out(fs::path(feat_out) / "hero_vectors.csv", write_hero_vectors(vectors, feat_data.roster));
        fmt::print("{} hero vectors\n", vectors.size());
      } else {
        if (!ds.has_metrics()) throw UsageError("--metrics is required for --kind window");
        const auto windows = build_window_dataset(ds, feat_t);
        write_out(fs::path(feat_out) / fmt::format("window_vectors_t{}.csv", feat_t),
                  write_window_vectors(windows.vectors));
        fmt::print("{} window vectors, {} matches shorter than {} minutes skipped\n",
                   windows.vectors.size(), windows.skipped, feat_t);
      }
    } else if (train_cmd->parsed()) {
      const auto run = train_flags.config(seed, train_data.roster);
      const auto ds = train_data.load();
      MatchSplit everything{ds.matches(), {}};
      auto reps = build_representations(run, ds, everything);
      FeatureSubset subset;
      if (run.selection.kind == Selection::Kind::SingleFeature) {
        subset = FeatureSubset({*resolve_feature(run, run.selection.feature)});
      } else if (run.selection.kind == Selection::Kind::All) {
        std::vector<std::size_t> all(reps.train.cols());
        for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
        subset = FeatureSubset(std::move(all));
      } else {
        SelectionConfig sc;
        sc.kind = run.selection.kind == Selection::Kind::Cfs ? SelectorKind::Cfs : SelectorKind::Wrapper;
        sc.learner = run.learner;
        sc.folds = run.folds;
        sc.seed = run.selection_seed;
        sc.search.stale_limit = run.stale_limit;
        subset = select_features(reps.train, sc).subset;
      }
      const auto model = train(run.learner, reps.train.select_columns(subset.indices()));
      write_out(model_out, serialize(model));
      fmt::print("trained {} on {} rows, {} features -> {}\n", run.learner.label(), reps.train.rows(),
                 subset.size(), model_out);
    } else if (eval_cmd->parsed()) {
      const auto run = eval_flags.config(seed, eval_data.roster);
      const auto ds = eval_data.load();
      const auto report = evaluate(run, ds);
      print_report(report);
      if (!eval_report.empty()) write_out(eval_report, report_csv(std::span(&report, 1)));
    } else if (sweep_cmd->parsed()) {
      std::vector<RunConfig> grid;
      try {
        grid = parse_grid(csv::read_file(grid_path),
                          {{"seed", std::to_string(seed)}, {"roster", std::to_string(sweep_data.roster)}});
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) throw;
        throw UsageError(fmt::format("--grid: {}", e.what()));
      }
      for (const auto& run : grid) {
        try {
          validate(run);
        } catch (const Error& e) {
          throw UsageError(fmt::format("--grid: run '{}': {}", run.run_id, e.what()));
        }
      }
      const auto ds = sweep_data.load();
      const auto reports = sweep(grid, ds);
      fs::create_directories(sweep_out);
      write_out(fs::path(sweep_out) / "report.csv", report_csv(reports));
      write_out(fs::path(sweep_out) / "table.md", markdown_tables(reports));
      write_out(fs::path(sweep_out) / "table.csv", csv_tables(reports));
      std::fputs(markdown_tables(reports).c_str(), stdout);
      std::size_t failed = 0;
      for (const auto& r : reports) failed += r.ok ? 0 : 1;
      if (failed) fmt::print(stderr, "{} of {} runs failed; see report.csv\n", failed, reports.size());
    } else if (quadrant->parsed()) {
      const auto ds = quad_data.load();
      const auto stats = quadrant_stats(ds, quad_t);
      write_out(quad_out, plot_points_csv(stats));
      fmt::print("minute {}: {} above (Radiant won {:.2f}%), {} below (Dire won {:.2f}%), {} zero\n",
                 quad_t, stats.above, 100.0 * stats.radiant_above, stats.below,
                 100.0 * stats.dire_below, stats.zero);
    } else if (durations->parsed()) {
      const auto ds = dur_data.load();
      const auto hist = duration_histogram(ds.matches(), pro_only, dur_threshold);
      std::string out = "duration_minutes,fraction\n";
      for (const auto& [minute, fraction] : hist.fraction_by_minute) {
        out += fmt::format("{},{}\n", minute, csv::format_exact(fraction));
      }
      write_out(dur_out, out);
      fmt::print("{} matches; {:.1f}% last {} minutes or longer\n", hist.match_count,
                 100.0 * hist.fraction_at_least_threshold, dur_threshold);
    }
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return e.kind() == ErrorKind::InvalidConfig ? kExitUsage : kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitValidation;
  }
  return 0;
}
