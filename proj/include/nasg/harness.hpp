// Copyright 2026 The nasg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nasg/dataset.hpp"
#include "nasg/diagnostics.hpp"
#include "nasg/objective.hpp"
#include "nasg/optimizers.hpp"
#include "nasg/run.hpp"
#include "nasg/schedule.hpp"
#include "nasg/shuffling.hpp"

namespace nasg {

enum class ObjectiveKind { kLogistic, kSoftmax, kQuadratic };

std::string_view to_string(ObjectiveKind kind);
ObjectiveKind parse_objective_kind(std::string_view name);

struct DatasetSource {
  enum class Kind { kLibsvm, kQuadratic };
  Kind kind = Kind::kQuadratic;
  // libsvm
  std::string path;
  LoadOptions load;
  // quadratic
  std::size_t n = 50;
  std::size_t d = 10;
  std::uint64_t seed = 7;
  double spread = 1.0;
};

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::kConstant;
  double lr = 0.1;
  double theta = 0.0;
  /// sigma^2 of the generalized variance condition, for thm2 bounds on
  /// objectives without a certified value.
  std::optional<double> sigma_sq;
};

struct DiagnosticsConfig {
  bool dispersion = false;
  bool bounds = true;
  bool accuracy = true;
  /// Adds a wall_seconds column to trace CSVs (which makes them
  /// non-reproducible byte for byte).
  bool timing = false;
};

/// Declarative description of one experiment. See docs/config.md.
struct ExperimentConfig {
  std::string label;
  DatasetSource dataset;
  std::optional<ObjectiveKind> objective;
  Method optimizer = Method::kNasg;
  SchemeKind scheme = SchemeKind::kRandomReshuffling;
  ScheduleConfig schedule;
  int epochs = 20;
  /// Extra horizons T for a rate sweep; each is a fresh run of T epochs.
  std::vector<int> horizons;
  std::size_t batch_size = 1;
  std::vector<std::uint64_t> seeds{1};
  /// Constant learning rates to grid-search before the main run.
  std::vector<double> grid;
  /// Epochs per grid point; 0 means `epochs`.
  int tuning_epochs = 20;
  OptimizerOptions options;
  Point x0;
  DiagnosticsConfig diagnostics;
  double reference_tol = 1e-10;
  long reference_max_iterations = 1'000'000;
  /// Output directory; empty disables artifact writing.
  std::string out;
  /// Worker threads for independent runs; 0 means hardware concurrency.
  unsigned threads = 0;

  /// Throws InvalidArgument when a field is out of range.
  void validate() const;
  std::string effective_label() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Problem instance a config resolves to, with its reference solution.
struct Problem {
  std::shared_ptr<const Dataset> dataset;
  std::shared_ptr<const Objective> objective;
  std::optional<double> reference_value;  // F*
  Point reference_point;                  // x*, empty when unavailable
  std::optional<double> sigma_star_sq;
  std::string reference_error;
};

Problem build_problem(const ExperimentConfig& config);

struct SeedOutcome {
  std::uint64_t seed = 0;
  bool diverged = false;
  std::string error;
  int epochs_completed = 0;
  double final_value = 0.0;
  std::optional<double> final_gap;
  std::vector<EpochRecord> trace;  // not part of the JSON summary
};

/// Per-epoch aggregate over non-diverged seeds: mean and mean +/- 1.96 stderr.
struct SeriesStats {
  std::string metric;
  std::vector<int> epochs;
  std::vector<double> mean;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::vector<double> min;
  std::vector<double> max;
};

struct GridEntry {
  double lr = 0.0;
  bool diverged = false;
  std::optional<double> mean_final_value;
};

struct HorizonResult {
  int horizon = 0;
  std::vector<double> gaps;  // per non-diverged seed
  double mean_gap = 0.0;
  bool diverged = false;
};

struct LemmaSummary {
  long checks = 0;
  long violations = 0;
  double min_margin = 0.0;
};

struct RunSummary {
  std::string label;
  std::string method;
  std::string objective;
  std::string scheme;
  std::string schedule;
  int epochs = 0;
  std::size_t batch_size = 1;
  std::size_t n = 0;
  std::size_t dim = 0;
  double smoothness = 0.0;
  std::optional<double> reference_value;
  std::optional<double> sigma_star_sq;
  std::optional<double> delta;
  std::optional<double> selected_lr;
  std::vector<GridEntry> grid;
  std::vector<SeedOutcome> seeds;
  std::vector<SeriesStats> series;
  std::vector<HorizonResult> horizons;
  std::optional<RateFit> rate;
  std::vector<BoundReport> bounds;
  std::optional<LemmaSummary> lemma_kt;
  bool degraded = false;
  std::vector<std::string> notes;

  const SeriesStats* find_series(std::string_view metric) const;
};

/// Runs every seed (after an optional grid search), aggregates and, when
/// `config.out` is set, writes artifacts via write_artifacts().
RunSummary run_experiment(const ExperimentConfig& config);

nlohmann::json summary_to_json(const RunSummary& summary);
RunSummary summary_from_json(const nlohmann::json& j);

/// `<label>_seed<s>.csv` per seed, `<label>_summary.json`, `<label>_plot.csv`.
void write_artifacts(const RunSummary& summary, const std::filesystem::path& dir,
                     bool timing_column = false);

/// Per-epoch trace CSV for one seed.
std::string trace_csv(const SeedOutcome& seed, std::optional<double> reference_value,
                      bool timing_column);

/// Long-format plot data: method,epoch,mean,ci_low,ci_high,metric.
std::string plot_data_csv(std::span<const RunSummary> summaries);
void emit_plot_data(std::span<const RunSummary> summaries, const std::filesystem::path& path);

}  // namespace nasg
