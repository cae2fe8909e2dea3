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

#include "nasg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>

#include "nasg/error.hpp"
#include "nasg/synthetic.hpp"

namespace nasg {

using nlohmann::json;

std::string_view to_string(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kLogistic: return "logistic";
    case ObjectiveKind::kSoftmax: return "softmax";
    case ObjectiveKind::kQuadratic: return "quadratic";
  }
  return "?";
}

ObjectiveKind parse_objective_kind(std::string_view name) {
  if (name == "logistic") return ObjectiveKind::kLogistic;
  if (name == "softmax") return ObjectiveKind::kSoftmax;
  if (name == "quadratic") return ObjectiveKind::kQuadratic;
  throw InvalidArgument("unknown objective '" + std::string(name) +
                        "' (expected logistic, softmax or quadratic)");
}

namespace {

std::string_view to_string(LabelMode mode) {
  switch (mode) {
    case LabelMode::kBinary: return "binary";
    case LabelMode::kMulticlass: return "multiclass";
    case LabelMode::kRegression: return "regression";
  }
  return "?";
}

LabelMode parse_label_mode(std::string_view name) {
  if (name == "binary") return LabelMode::kBinary;
  if (name == "multiclass") return LabelMode::kMulticlass;
  if (name == "regression") return LabelMode::kRegression;
  throw InvalidArgument("unknown label mode '" + std::string(name) + "'");
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

void reject_unknown_keys(const json& j, std::initializer_list<std::string_view> known,
                         std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InvalidArgument("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("epochs must be >= 1");
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (seeds.empty()) throw InvalidArgument("seeds must not be empty");
  for (double lr : grid) {
    if (!(lr > 0.0) || !std::isfinite(lr)) throw InvalidArgument("grid entries must be positive");
  }
  if (!grid.empty() && schedule.kind != ScheduleKind::kConstant) {
    throw InvalidArgument("grid search applies to the constant schedule only");
  }
  if (tuning_epochs < 0) throw InvalidArgument("tuning_epochs must be >= 0");
  for (int T : horizons) {
    if (T < 1) throw InvalidArgument("horizons must be >= 1");
  }
  if (schedule.kind == ScheduleKind::kConstant && !(schedule.lr > 0.0)) {
    throw InvalidArgument("constant schedule needs lr > 0");
  }
  if (!(reference_tol > 0.0)) throw InvalidArgument("reference_tol must be positive");
  if (dataset.kind == DatasetSource::Kind::kLibsvm && dataset.path.empty()) {
    throw InvalidArgument("libsvm dataset needs a path");
  }
  if (dataset.kind == DatasetSource::Kind::kQuadratic && objective &&
      *objective != ObjectiveKind::kQuadratic) {
    throw InvalidArgument("a quadratic dataset only supports the quadratic objective");
  }
  if (dataset.kind == DatasetSource::Kind::kLibsvm && objective == ObjectiveKind::kQuadratic) {
    throw InvalidArgument("the quadratic objective needs a quadratic dataset");
  }
}

std::string ExperimentConfig::effective_label() const {
  return label.empty() ? std::string(to_string(optimizer)) : label;
}

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  reject_unknown_keys(j,
                      {"label", "dataset", "objective", "optimizer", "scheme", "schedule",
                       "epochs", "horizons", "batch_size", "seeds", "grid", "tuning_epochs",
                       "momentum", "adam", "with_replacement", "x0", "diagnostics",
                       "reference_tol", "reference_max_iterations", "out", "threads"},
                      "config");
  ExperimentConfig c;
  try {
    c.label = get_or<std::string>(j, "label", "");
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      reject_unknown_keys(d, {"kind", "path", "labels", "dimension", "bias", "scale", "n", "d",
                              "seed", "spread"},
                          "dataset");
      const auto kind = get_or<std::string>(d, "kind", d.contains("path") ? "libsvm" : "quadratic");
      if (kind == "libsvm") {
        c.dataset.kind = DatasetSource::Kind::kLibsvm;
      } else if (kind == "quadratic") {
        c.dataset.kind = DatasetSource::Kind::kQuadratic;
      } else {
        throw InvalidArgument("unknown dataset kind '" + kind + "'");
      }
      c.dataset.path = get_or<std::string>(d, "path", "");
      c.dataset.load.mode = parse_label_mode(get_or<std::string>(d, "labels", "binary"));
      c.dataset.load.dimension = get_or<std::size_t>(d, "dimension", 0);
      c.dataset.load.append_bias = get_or<bool>(d, "bias", false);
      c.dataset.load.scale_max_abs = get_or<bool>(d, "scale", false);
      c.dataset.n = get_or<std::size_t>(d, "n", c.dataset.n);
      c.dataset.d = get_or<std::size_t>(d, "d", c.dataset.d);
      c.dataset.seed = get_or<std::uint64_t>(d, "seed", c.dataset.seed);
      c.dataset.spread = get_or<double>(d, "spread", c.dataset.spread);
    }
    if (j.contains("objective") && !j.at("objective").is_null()) {
      c.objective = parse_objective_kind(j.at("objective").get<std::string>());
    }
    c.optimizer = parse_method(get_or<std::string>(j, "optimizer", "nasg"));
    c.scheme = parse_scheme(get_or<std::string>(j, "scheme", "rr"));
    if (j.contains("schedule")) {
      const json& s = j.at("schedule");
      reject_unknown_keys(s, {"kind", "lr", "theta", "sigma_sq"}, "schedule");
      c.schedule.kind = parse_schedule_kind(get_or<std::string>(s, "kind", "constant"));
      c.schedule.lr = get_or<double>(s, "lr", c.schedule.lr);
      c.schedule.theta = get_or<double>(s, "theta", 0.0);
      if (s.contains("sigma_sq") && !s.at("sigma_sq").is_null()) {
        c.schedule.sigma_sq = s.at("sigma_sq").get<double>();
      }
    }
    c.epochs = get_or<int>(j, "epochs", c.epochs);
    c.horizons = get_or<std::vector<int>>(j, "horizons", {});
    c.batch_size = get_or<std::size_t>(j, "batch_size", 1);
    c.seeds = get_or<std::vector<std::uint64_t>>(j, "seeds", c.seeds);
    c.grid = get_or<std::vector<double>>(j, "grid", {});
    c.tuning_epochs = get_or<int>(j, "tuning_epochs", c.tuning_epochs);
    c.options.momentum = get_or<double>(j, "momentum", c.options.momentum);
    if (j.contains("adam")) {
      const json& a = j.at("adam");
      reject_unknown_keys(a, {"beta1", "beta2", "epsilon"}, "adam");
      c.options.beta1 = get_or<double>(a, "beta1", c.options.beta1);
      c.options.beta2 = get_or<double>(a, "beta2", c.options.beta2);
      c.options.epsilon = get_or<double>(a, "epsilon", c.options.epsilon);
    }
    c.options.with_replacement = get_or<bool>(j, "with_replacement", false);
    c.x0 = get_or<std::vector<double>>(j, "x0", {});
    if (j.contains("diagnostics")) {
      const json& g = j.at("diagnostics");
      reject_unknown_keys(g, {"dispersion", "bounds", "accuracy", "timing"}, "diagnostics");
      c.diagnostics.dispersion = get_or<bool>(g, "dispersion", c.diagnostics.dispersion);
      c.diagnostics.bounds = get_or<bool>(g, "bounds", c.diagnostics.bounds);
      c.diagnostics.accuracy = get_or<bool>(g, "accuracy", c.diagnostics.accuracy);
      c.diagnostics.timing = get_or<bool>(g, "timing", c.diagnostics.timing);
    }
    c.reference_tol = get_or<double>(j, "reference_tol", c.reference_tol);
    c.reference_max_iterations =
        get_or<long>(j, "reference_max_iterations", c.reference_max_iterations);
    c.out = get_or<std::string>(j, "out", "");
    c.threads = get_or<unsigned>(j, "threads", 0);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["label"] = c.effective_label();
  json d;
  if (c.dataset.kind == DatasetSource::Kind::kLibsvm) {
    d = {{"kind", "libsvm"},
         {"path", c.dataset.path},
         {"labels", to_string(c.dataset.load.mode)},
         {"dimension", c.dataset.load.dimension},
         {"bias", c.dataset.load.append_bias},
         {"scale", c.dataset.load.scale_max_abs}};
  } else {
    d = {{"kind", "quadratic"},
         {"n", c.dataset.n},
         {"d", c.dataset.d},
         {"seed", c.dataset.seed},
         {"spread", c.dataset.spread}};
  }
  j["dataset"] = d;
  j["objective"] = c.objective ? json(to_string(*c.objective)) : json(nullptr);
  j["optimizer"] = to_string(c.optimizer);
  j["scheme"] = to_string(c.scheme);
  j["schedule"] = {{"kind", to_string(c.schedule.kind)},
                   {"lr", c.schedule.lr},
                   {"theta", c.schedule.theta},
                   {"sigma_sq", c.schedule.sigma_sq ? json(*c.schedule.sigma_sq) : json(nullptr)}};
  j["epochs"] = c.epochs;
  j["horizons"] = c.horizons;
  j["batch_size"] = c.batch_size;
  j["seeds"] = c.seeds;
  j["grid"] = c.grid;
  j["tuning_epochs"] = c.tuning_epochs;
  j["momentum"] = c.options.momentum;
  j["adam"] = {{"beta1", c.options.beta1},
               {"beta2", c.options.beta2},
               {"epsilon", c.options.epsilon}};
  j["with_replacement"] = c.options.with_replacement;
  j["x0"] = c.x0;
  j["diagnostics"] = {{"dispersion", c.diagnostics.dispersion},
                      {"bounds", c.diagnostics.bounds},
                      {"accuracy", c.diagnostics.accuracy},
                      {"timing", c.diagnostics.timing}};
  j["reference_tol"] = c.reference_tol;
  j["reference_max_iterations"] = c.reference_max_iterations;
  j["out"] = c.out;
  j["threads"] = c.threads;
  return j;
}

// ---------------------------------------------------------------------------
// Problem construction

Problem build_problem(const ExperimentConfig& config) {
  config.validate();
  Problem p;
  if (config.dataset.kind == DatasetSource::Kind::kQuadratic) {
    QuadraticProblem q = make_quadratic(config.dataset.n, config.dataset.d, config.dataset.seed,
                                        config.dataset.spread);
    p.objective = q.objective;
    p.reference_point = q.minimizer;
    p.reference_value = q.optimal_value;
    p.sigma_star_sq = q.variance_at_optimum;
    return p;
  }

  LoadOptions load = config.dataset.load;
  if (config.objective == ObjectiveKind::kSoftmax) load.mode = LabelMode::kMulticlass;
  p.dataset = std::make_shared<const Dataset>(load_libsvm_file(config.dataset.path, load));
  const ObjectiveKind kind = config.objective.value_or(
      p.dataset->label_mode() == LabelMode::kMulticlass ? ObjectiveKind::kSoftmax
                                                         : ObjectiveKind::kLogistic);
  if (kind == ObjectiveKind::kLogistic) {
    p.objective = std::make_shared<const LogisticObjective>(p.dataset);
  } else {
    p.objective = std::make_shared<const SoftmaxObjective>(p.dataset);
  }

  ReferenceOptions ref;
  ref.tolerance = config.reference_tol;
  ref.max_iterations = config.reference_max_iterations;
  try {
    ReferenceSolution sol = solve_reference(*p.objective, ref);
    p.reference_value = sol.value;
    p.sigma_star_sq = variance_at_point(*p.objective, sol.minimizer);
    p.reference_point = std::move(sol.minimizer);
  } catch (const ConvergenceError& e) {
    p.reference_error = e.what();
  }
  return p;
}

// ---------------------------------------------------------------------------
// Execution

namespace {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Results are
// written by index, so the outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  unsigned workers = threads != 0 ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Schedule make_schedule(const ScheduleConfig& s, double lr, int horizon, const Objective& obj) {
  const double L = obj.smoothness_bound();
  switch (s.kind) {
    case ScheduleKind::kConstant: return Schedule::constant(lr);
    case ScheduleKind::kTheoremUnified: return Schedule::theorem_unified(horizon, L);
    case ScheduleKind::kTheoremVariance: return Schedule::theorem_variance(horizon, L, s.theta);
    case ScheduleKind::kTheoremRandomized: return Schedule::theorem_randomized(horizon, L);
    case ScheduleKind::kInitialCondition:
      return Schedule::initial_condition(horizon, L, obj.num_components());
  }
  throw InvalidArgument("unknown schedule");
}

SeedOutcome run_seed(const ExperimentConfig& config, const Problem& problem, double lr,
                     int epochs, std::uint64_t seed, bool full_trace) {
  RunSpec spec;
  spec.method = config.optimizer;
  spec.scheme = {config.scheme, seed};
  spec.schedule = make_schedule(config.schedule, lr, epochs, *problem.objective);
  spec.epochs = epochs;
  spec.batch_size = config.batch_size;
  spec.options = config.options;
  spec.x0 = config.x0;
  spec.trace.dispersion = full_trace && config.diagnostics.dispersion;
  spec.trace.accuracy = full_trace && config.diagnostics.accuracy;

  RunResult r = run(*problem.objective, spec);
  SeedOutcome out;
  out.seed = seed;
  out.diverged = r.diverged;
  out.error = r.error;
  out.epochs_completed = static_cast<int>(r.trace.size());
  if (!r.trace.empty()) out.final_value = r.trace.back().value;
  if (!r.diverged && problem.reference_value) {
    out.final_gap = out.final_value - *problem.reference_value;
  }
  out.trace = std::move(r.trace);
  return out;
}

void add_stats(SeriesStats& s, int epoch, const std::vector<double>& values) {
  const double m = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / m;
  double half = 0.0;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    half = 1.96 * std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  s.epochs.push_back(epoch);
  s.mean.push_back(mean);
  s.ci_low.push_back(mean - half);
  s.ci_high.push_back(mean + half);
  s.min.push_back(*std::min_element(values.begin(), values.end()));
  s.max.push_back(*std::max_element(values.begin(), values.end()));
}

std::vector<SeriesStats> aggregate(const std::vector<SeedOutcome>& seeds,
                                   std::optional<double> reference_value) {
  std::vector<const SeedOutcome*> ok;
  for (const auto& s : seeds) {
    if (!s.diverged) ok.push_back(&s);
  }
  std::vector<SeriesStats> out;
  if (ok.empty()) return out;
  const std::size_t T = ok.front()->trace.size();

  auto series = [&](const char* metric, auto get) {
    SeriesStats s;
    s.metric = metric;
    std::vector<double> values;
    for (std::size_t t = 0; t < T; ++t) {
      values.clear();
      for (const SeedOutcome* o : ok) {
        const std::optional<double> v = get(o->trace[t]);
        if (!v) return;
        values.push_back(*v);
      }
      add_stats(s, ok.front()->trace[t].epoch, values);
    }
    out.push_back(std::move(s));
  };

  series("loss", [](const EpochRecord& r) { return std::optional<double>(r.value); });
  if (reference_value) {
    series("loss_residual", [&](const EpochRecord& r) {
      return std::optional<double>(r.value - *reference_value);
    });
  }
  series("grad_norm_sq", [](const EpochRecord& r) { return std::optional<double>(r.grad_sq_norm); });
  series("accuracy", [](const EpochRecord& r) { return r.accuracy; });
  return out;
}

bool is_randomized(SchemeKind kind) { return kind != SchemeKind::kIncrementalGradient; }

std::vector<Theorem> theorems_for(const ExperimentConfig& c) {
  switch (c.schedule.kind) {
    case ScheduleKind::kConstant: return {};
    case ScheduleKind::kTheoremUnified:
      if (is_randomized(c.scheme)) return {Theorem::kUnified, Theorem::kRandomized};
      return {Theorem::kUnified};
    case ScheduleKind::kTheoremVariance: return {Theorem::kVariance};
    case ScheduleKind::kTheoremRandomized: return {Theorem::kRandomized};
    case ScheduleKind::kInitialCondition:
      if (is_randomized(c.scheme)) {
        return {Theorem::kInitialConditionUnified, Theorem::kInitialConditionRandomized};
      }
      return {Theorem::kInitialConditionUnified};
  }
  return {};
}

}  // namespace

const SeriesStats* RunSummary::find_series(std::string_view metric) const {
  for (const auto& s : series) {
    if (s.metric == metric) return &s;
  }
  return nullptr;
}

RunSummary run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Problem problem = build_problem(config);
  const Objective& obj = *problem.objective;
  if (!config.x0.empty() && config.x0.size() != obj.dim()) {
    throw InvalidArgument("x0 has " + std::to_string(config.x0.size()) + " entries, objective has " +
                          std::to_string(obj.dim()));
  }

  RunSummary summary;
  summary.label = config.effective_label();
  summary.method = to_string(config.optimizer);
  summary.objective = obj.name();
  summary.scheme = to_string(config.scheme);
  summary.schedule = to_string(config.schedule.kind);
  summary.epochs = config.epochs;
  summary.batch_size = config.batch_size;
  summary.n = obj.num_components();
  summary.dim = obj.dim();
  summary.smoothness = obj.smoothness_bound();
  summary.reference_value = problem.reference_value;
  summary.sigma_star_sq = problem.sigma_star_sq;
  if (!problem.reference_error.empty()) {
    summary.notes.push_back("reference unavailable: " + problem.reference_error);
  }
  const Point x0 = config.x0.empty() ? Point(obj.dim(), 0.0) : config.x0;
  if (!problem.reference_point.empty()) {
    summary.delta = squared_distance(x0, problem.reference_point);
  }

  const std::size_t S = config.seeds.size();
  double lr = config.schedule.lr;

  if (!config.grid.empty()) {
    const int tune_epochs = config.tuning_epochs > 0 ? config.tuning_epochs : config.epochs;
    const std::size_t G = config.grid.size();
    std::vector<SeedOutcome> tuning(G * S);
    parallel_for(G * S, config.threads, [&](std::size_t k) {
      tuning[k] = run_seed(config, problem, config.grid[k / S], tune_epochs, config.seeds[k % S],
                           false);
    });
    std::optional<std::size_t> best;
    for (std::size_t g = 0; g < G; ++g) {
      GridEntry e;
      e.lr = config.grid[g];
      double sum = 0.0;
      for (std::size_t s = 0; s < S; ++s) {
        const SeedOutcome& o = tuning[g * S + s];
        if (o.diverged || !std::isfinite(o.final_value)) e.diverged = true;
        sum += o.final_value;
      }
      if (!e.diverged) {
        e.mean_final_value = sum / static_cast<double>(S);
        const auto& cur = summary.grid;
        if (!best || *e.mean_final_value < *cur[*best].mean_final_value ||
            (*e.mean_final_value == *cur[*best].mean_final_value && e.lr < cur[*best].lr)) {
          best = g;
        }
      }
      summary.grid.push_back(e);
    }
    if (!best) throw Error(ErrorCode::kDiverged, "every grid learning rate diverged");
    lr = config.grid[*best];
    summary.selected_lr = lr;
  } else if (config.schedule.kind == ScheduleKind::kConstant) {
    summary.selected_lr = lr;
  }

  summary.seeds.resize(S);
  parallel_for(S, config.threads, [&](std::size_t s) {
    summary.seeds[s] = run_seed(config, problem, lr, config.epochs, config.seeds[s], true);
  });
  for (const auto& s : summary.seeds) {
    if (s.diverged) {
      summary.degraded = true;
      summary.notes.push_back("seed " + std::to_string(s.seed) + " diverged: " + s.error);
    }
  }
  summary.series = aggregate(summary.seeds, problem.reference_value);

  // Rate sweep: one fresh run per (horizon, seed).
  if (!config.horizons.empty()) {
    const std::size_t H = config.horizons.size();
    std::vector<SeedOutcome> sweep(H * S);
    parallel_for(H * S, config.threads, [&](std::size_t k) {
      sweep[k] = run_seed(config, problem, lr, config.horizons[k / S], config.seeds[k % S], false);
    });
    std::vector<std::pair<double, double>> points;
    for (std::size_t h = 0; h < H; ++h) {
      HorizonResult hr;
      hr.horizon = config.horizons[h];
      for (std::size_t s = 0; s < S; ++s) {
        const SeedOutcome& o = sweep[h * S + s];
        if (o.diverged) {
          hr.diverged = true;
        } else if (o.final_gap) {
          hr.gaps.push_back(*o.final_gap);
        }
      }
      if (hr.diverged) summary.degraded = true;
      if (!hr.gaps.empty()) {
        double sum = 0.0;
        for (double g : hr.gaps) sum += g;
        hr.mean_gap = sum / static_cast<double>(hr.gaps.size());
        points.emplace_back(hr.horizon, hr.mean_gap);
      }
      summary.horizons.push_back(std::move(hr));
    }
    if (points.size() >= 3) {
      try {
        summary.rate = fit_rate(points);
      } catch (const InvalidArgument& e) {
        summary.notes.push_back(std::string("rate fit skipped: ") + e.what());
      }
    }
  }

  // Bound reports, NASG only.
  const auto theorems = theorems_for(config);
  if (config.diagnostics.bounds && !theorems.empty()) {
    if (config.optimizer != Method::kNasg) {
      summary.notes.push_back("bounds skipped: theoretical bounds are stated for nasg");
    } else if (!summary.sigma_star_sq || !summary.delta || !summary.reference_value) {
      summary.notes.push_back("bounds skipped: reference solution unavailable");
    } else {
      for (Theorem th : theorems) {
        BoundReport rep;
        rep.theorem = th;
        rep.constants.smoothness = summary.smoothness;
        rep.constants.sigma_star_sq = summary.sigma_star_sq;
        rep.constants.delta = summary.delta;
        rep.constants.n = summary.n;
        rep.constants.e_sq = *summary.delta * static_cast<double>(summary.n);
        if (th == Theorem::kVariance) {
          rep.constants.theta = config.schedule.theta;
          if (config.schedule.sigma_sq) {
            rep.constants.sigma_sq = config.schedule.sigma_sq;
          } else if (obj.name() == "quadratic") {
            rep.constants.sigma_sq = summary.sigma_star_sq;
          } else {
            summary.notes.push_back("variance bound skipped: sigma^2 not supplied");
            continue;
          }
        }
        auto add_row = [&](int horizon, const std::vector<double>& gaps) {
          if (gaps.empty() || horizon < 2) return;
          double sum = 0.0;
          for (double g : gaps) sum += g;
          rep.add(horizon, sum / static_cast<double>(gaps.size()));
        };
        std::vector<double> gaps;
        for (const auto& s : summary.seeds) {
          if (s.final_gap) gaps.push_back(*s.final_gap);
        }
        add_row(config.epochs, gaps);
        for (const auto& h : summary.horizons) {
          if (h.horizon != config.epochs) add_row(h.horizon, h.gaps);
        }
        summary.bounds.push_back(std::move(rep));
      }
    }
  }

  // K_t lemma check on every recorded epoch.
  if (config.diagnostics.dispersion && config.optimizer == Method::kNasg &&
      config.schedule.kind != ScheduleKind::kConstant && summary.sigma_star_sq &&
      summary.reference_value) {
    LemmaSummary lem;
    lem.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& s : summary.seeds) {
      for (const auto& r : s.trace) {
        if (!r.dispersion_k) continue;
        const LemmaCheck c = check_lemma_kt(*r.dispersion_k, r.step_size, summary.smoothness,
                                            r.value - *summary.reference_value,
                                            *summary.sigma_star_sq);
        ++lem.checks;
        if (!c.satisfied) ++lem.violations;
        lem.min_margin = std::min(lem.min_margin, c.margin);
      }
    }
    if (lem.checks > 0) summary.lemma_kt = lem;
  }

  if (!config.out.empty()) write_artifacts(summary, config.out, config.diagnostics.timing);
  return summary;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json opt_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

json constants_to_json(const BoundConstants& c) {
  return {{"L", c.smoothness},
          {"sigma_star_sq", opt_to_json(c.sigma_star_sq)},
          {"delta", opt_to_json(c.delta)},
          {"theta", opt_to_json(c.theta)},
          {"sigma_sq", opt_to_json(c.sigma_sq)},
          {"n", c.n ? json(*c.n) : json(nullptr)},
          {"e_sq", opt_to_json(c.e_sq)}};
}

BoundConstants constants_from_json(const json& j) {
  BoundConstants c;
  c.smoothness = j.at("L").get<double>();
  c.sigma_star_sq = opt_from_json(j, "sigma_star_sq");
  c.delta = opt_from_json(j, "delta");
  c.theta = opt_from_json(j, "theta");
  c.sigma_sq = opt_from_json(j, "sigma_sq");
  if (!j.at("n").is_null()) c.n = j.at("n").get<std::size_t>();
  c.e_sq = opt_from_json(j, "e_sq");
  return c;
}

}  // namespace

json summary_to_json(const RunSummary& s) {
  json j;
  j["label"] = s.label;
  j["method"] = s.method;
  j["objective"] = s.objective;
  j["scheme"] = s.scheme;
  j["schedule"] = s.schedule;
  j["epochs"] = s.epochs;
  j["batch_size"] = s.batch_size;
  j["n"] = s.n;
  j["dim"] = s.dim;
  j["L"] = s.smoothness;
  j["reference_value"] = opt_to_json(s.reference_value);
  j["sigma_star_sq"] = opt_to_json(s.sigma_star_sq);
  j["delta"] = opt_to_json(s.delta);
  j["selected_lr"] = opt_to_json(s.selected_lr);
  json grid = json::array();
  for (const auto& g : s.grid) {
    grid.push_back({{"lr", g.lr},
                    {"diverged", g.diverged},
                    {"mean_final_value", opt_to_json(g.mean_final_value)}});
  }
  j["grid"] = grid;
  json seeds = json::array();
  for (const auto& o : s.seeds) {
    seeds.push_back({{"seed", o.seed},
                     {"diverged", o.diverged},
                     {"error", o.error},
                     {"epochs_completed", o.epochs_completed},
                     {"final_value", o.final_value},
                     {"final_gap", opt_to_json(o.final_gap)}});
  }
  j["seeds"] = seeds;
  json series = json::array();
  for (const auto& st : s.series) {
    series.push_back({{"metric", st.metric},
                      {"epochs", st.epochs},
                      {"mean", st.mean},
                      {"ci_low", st.ci_low},
                      {"ci_high", st.ci_high},
                      {"min", st.min},
                      {"max", st.max}});
  }
  j["series"] = series;
  json horizons = json::array();
  for (const auto& h : s.horizons) {
    horizons.push_back({{"horizon", h.horizon},
                        {"gaps", h.gaps},
                        {"mean_gap", h.mean_gap},
                        {"diverged", h.diverged}});
  }
  j["horizons"] = horizons;
  j["rate"] = s.rate ? json{{"slope", s.rate->slope}, {"intercept", s.rate->intercept}}
                     : json(nullptr);
  json bounds = json::array();
  for (const auto& b : s.bounds) {
    json rows = json::array();
    for (const auto& r : b.rows) {
      rows.push_back({{"horizon", r.horizon},
                      {"gap", r.gap},
                      {"bound", r.bound},
                      {"satisfied", r.satisfied}});
    }
    bounds.push_back({{"theorem", to_string(b.theorem)},
                      {"constants", constants_to_json(b.constants)},
                      {"rows", rows}});
  }
  j["bounds"] = bounds;
  j["lemma_kt"] = s.lemma_kt ? json{{"checks", s.lemma_kt->checks},
                                    {"violations", s.lemma_kt->violations},
                                    {"min_margin", s.lemma_kt->min_margin}}
                             : json(nullptr);
  j["degraded"] = s.degraded;
  j["notes"] = s.notes;
  return j;
}

RunSummary summary_from_json(const json& j) {
  RunSummary s;
  try {
    s.label = j.at("label").get<std::string>();
    s.method = j.at("method").get<std::string>();
    s.objective = j.at("objective").get<std::string>();
    s.scheme = j.at("scheme").get<std::string>();
    s.schedule = j.at("schedule").get<std::string>();
    s.epochs = j.at("epochs").get<int>();
    s.batch_size = j.at("batch_size").get<std::size_t>();
    s.n = j.at("n").get<std::size_t>();
    s.dim = j.at("dim").get<std::size_t>();
    s.smoothness = j.at("L").get<double>();
    s.reference_value = opt_from_json(j, "reference_value");
    s.sigma_star_sq = opt_from_json(j, "sigma_star_sq");
    s.delta = opt_from_json(j, "delta");
    s.selected_lr = opt_from_json(j, "selected_lr");
    for (const auto& g : j.at("grid")) {
      s.grid.push_back({g.at("lr").get<double>(), g.at("diverged").get<bool>(),
                        opt_from_json(g, "mean_final_value")});
    }
    for (const auto& o : j.at("seeds")) {
      SeedOutcome out;
      out.seed = o.at("seed").get<std::uint64_t>();
      out.diverged = o.at("diverged").get<bool>();
      out.error = o.at("error").get<std::string>();
      out.epochs_completed = o.at("epochs_completed").get<int>();
      out.final_value = o.at("final_value").get<double>();
      out.final_gap = opt_from_json(o, "final_gap");
      s.seeds.push_back(std::move(out));
    }
    for (const auto& st : j.at("series")) {
      SeriesStats x;
      x.metric = st.at("metric").get<std::string>();
      x.epochs = st.at("epochs").get<std::vector<int>>();
      x.mean = st.at("mean").get<std::vector<double>>();
      x.ci_low = st.at("ci_low").get<std::vector<double>>();
      x.ci_high = st.at("ci_high").get<std::vector<double>>();
      x.min = st.at("min").get<std::vector<double>>();
      x.max = st.at("max").get<std::vector<double>>();
      s.series.push_back(std::move(x));
    }
    for (const auto& h : j.at("horizons")) {
      HorizonResult hr;
      hr.horizon = h.at("horizon").get<int>();
      hr.gaps = h.at("gaps").get<std::vector<double>>();
      hr.mean_gap = h.at("mean_gap").get<double>();
      hr.diverged = h.at("diverged").get<bool>();
      s.horizons.push_back(std::move(hr));
    }
    if (!j.at("rate").is_null()) {
      s.rate = RateFit{j.at("rate").at("slope").get<double>(),
                       j.at("rate").at("intercept").get<double>()};
    }
    for (const auto& b : j.at("bounds")) {
      BoundReport rep;
      rep.theorem = parse_theorem(b.at("theorem").get<std::string>());
      rep.constants = constants_from_json(b.at("constants"));
      for (const auto& r : b.at("rows")) {
        rep.rows.push_back({r.at("horizon").get<int>(), r.at("gap").get<double>(),
                            r.at("bound").get<double>(), r.at("satisfied").get<bool>()});
      }
      s.bounds.push_back(std::move(rep));
    }
    if (!j.at("lemma_kt").is_null()) {
      const json& l = j.at("lemma_kt");
      s.lemma_kt = LemmaSummary{l.at("checks").get<long>(), l.at("violations").get<long>(),
                                l.at("min_margin").get<double>()};
    }
    s.degraded = j.at("degraded").get<bool>();
    s.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed summary JSON: ") + e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string trace_csv(const SeedOutcome& seed, std::optional<double> reference_value,
                      bool timing_column) {
  std::string out = "epoch,value,loss_residual,grad_norm_sq,step_size,k_t,i_t,accuracy";
  if (timing_column) out += ",wall_seconds";
  out += '\n';
  for (const EpochRecord& r : seed.trace) {
    out += std::to_string(r.epoch);
    out += ',' + format_double(r.value);
    out += ',' + cell(reference_value ? std::optional<double>(r.value - *reference_value)
                                      : std::nullopt);
    out += ',' + format_double(r.grad_sq_norm);
    out += ',' + format_double(r.step_size);
    out += ',' + cell(r.dispersion_k);
    out += ',' + cell(r.dispersion_i);
    out += ',' + cell(r.accuracy);
    if (timing_column) out += ',' + format_double(r.wall_seconds);
    out += '\n';
  }
  return out;
}

std::string plot_data_csv(std::span<const RunSummary> summaries) {
  std::string out = "method,epoch,mean,ci_low,ci_high,metric\n";
  for (const RunSummary& s : summaries) {
    for (const SeriesStats& st : s.series) {
      for (std::size_t k = 0; k < st.epochs.size(); ++k) {
        out += s.label + ',' + std::to_string(st.epochs[k]) + ',' + format_double(st.mean[k]) +
               ',' + format_double(st.ci_low[k]) + ',' + format_double(st.ci_high[k]) + ',' +
               st.metric + '\n';
      }
    }
  }
  return out;
}

void emit_plot_data(std::span<const RunSummary> summaries, const std::filesystem::path& path) {
  write_file(path, plot_data_csv(summaries));
}

void write_artifacts(const RunSummary& summary, const std::filesystem::path& dir,
                     bool timing_column) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const SeedOutcome& s : summary.seeds) {
    write_file(dir / (summary.label + "_seed" + std::to_string(s.seed) + ".csv"),
               trace_csv(s, summary.reference_value, timing_column));
  }
  write_file(dir / (summary.label + "_summary.json"), summary_to_json(summary).dump(2) + "\n");
  emit_plot_data(std::span<const RunSummary>(&summary, 1), dir / (summary.label + "_plot.csv"));
}

}  // namespace nasg
