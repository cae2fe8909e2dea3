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

// nasg command-line runner. Talks to the library through the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nasg/nasg.h"

namespace {

using nlohmann::json;

struct RunFlags {
  std::string config;
  std::string dataset;
  std::string labels;
  std::string objective;
  std::string optimizer;
  std::string scheme;
  std::string schedule;
  std::vector<double> lr;
  std::vector<double> theta;
  std::vector<int> epochs;
  std::vector<std::size_t> batch_size;
  std::string seeds;
  std::string grid;
  std::string horizons;
  std::string out;
  std::vector<unsigned> threads;
  bool dispersion = false;
  bool quiet = false;
};

int report(nasg_status status) {
  std::cerr << "error: " << nasg_last_error() << "\n";
  return static_cast<int>(status);
}

template <class T>
std::vector<T> split_list(const std::string& text, const char* what) {
  std::vector<T> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) {
      throw CLI::ValidationError(what, "cannot parse '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.empty()) throw CLI::ValidationError(what, "empty list");
  return values;
}

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config '" + path + "' is not valid JSON: " + e.what());
  }
}

json compose(const RunFlags& f) {
  json cfg = f.config.empty() ? json::object() : load_config(f.config);
  if (!f.dataset.empty()) {
    json d = {{"kind", "libsvm"}, {"path", f.dataset}};
    if (cfg.contains("dataset") && cfg["dataset"].value("kind", "") == "libsvm") {
      d = cfg["dataset"];
      d["path"] = f.dataset;
    }
    cfg["dataset"] = d;
  }
  if (!f.labels.empty()) cfg["dataset"]["labels"] = f.labels;
  if (!f.objective.empty()) cfg["objective"] = f.objective;
  if (!f.optimizer.empty()) cfg["optimizer"] = f.optimizer;
  if (!f.scheme.empty()) cfg["scheme"] = f.scheme;
  if (!f.schedule.empty()) cfg["schedule"]["kind"] = f.schedule;
  if (!f.lr.empty()) cfg["schedule"]["lr"] = f.lr.front();
  if (!f.theta.empty()) cfg["schedule"]["theta"] = f.theta.front();
  if (!f.epochs.empty()) cfg["epochs"] = f.epochs.front();
  if (!f.batch_size.empty()) cfg["batch_size"] = f.batch_size.front();
  if (!f.seeds.empty()) cfg["seeds"] = split_list<std::uint64_t>(f.seeds, "--seeds");
  if (!f.grid.empty()) cfg["grid"] = split_list<double>(f.grid, "--grid");
  if (!f.horizons.empty()) cfg["horizons"] = split_list<int>(f.horizons, "--horizons");
  if (!f.out.empty()) cfg["out"] = f.out;
  if (!f.threads.empty()) cfg["threads"] = f.threads.front();
  if (f.dispersion) cfg["diagnostics"]["dispersion"] = true;
  return cfg;
}

void print_summary(const json& s) {
  std::cout << "label      " << s["label"].get<std::string>() << "\n";
  std::cout << "method     " << s["method"].get<std::string>() << " / "
            << s["scheme"].get<std::string>() << " / " << s["schedule"].get<std::string>()
            << "\n";
  std::cout << "problem    " << s["objective"].get<std::string>() << ", n=" << s["n"]
            << ", dim=" << s["dim"] << ", L=" << s["L"] << "\n";
  if (!s["selected_lr"].is_null()) std::cout << "lr         " << s["selected_lr"] << "\n";
  for (const auto& seed : s["seeds"]) {
    std::cout << "seed " << seed["seed"] << "     F=" << seed["final_value"];
    if (!seed["final_gap"].is_null()) std::cout << " gap=" << seed["final_gap"];
    if (seed["diverged"].get<bool>()) std::cout << " DIVERGED";
    std::cout << "\n";
  }
  if (!s["rate"].is_null()) std::cout << "slope      " << s["rate"]["slope"] << "\n";
  for (const auto& b : s["bounds"]) {
    bool ok = true;
    for (const auto& r : b["rows"]) ok = ok && r["satisfied"].get<bool>();
    std::cout << "bound      " << b["theorem"].get<std::string>() << ": "
              << (ok ? "satisfied" : "VIOLATED") << " (" << b["rows"].size() << " rows)\n";
  }
  for (const auto& n : s["notes"]) std::cout << "note       " << n.get<std::string>() << "\n";
}

int cmd_run(const RunFlags& f) {
  json cfg;
  try {
    cfg = compose(f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  nasg_summary* summary = nullptr;
  const nasg_status st = nasg_experiment_run(cfg.dump().c_str(), &summary);
  if (st != NASG_OK) return report(st);
  const json s = json::parse(nasg_summary_json(summary));
  if (!f.quiet) print_summary(s);
  if (nasg_summary_degraded(summary)) std::cerr << "warning: run degraded (divergence)\n";
  nasg_summary_free(summary);
  return 0;
}

int cmd_check(const std::string& path, const std::string& labels) {
  nasg_load_options opts{NASG_LABELS_BINARY, 0, 0, 0};
  if (labels == "multiclass") {
    opts.mode = NASG_LABELS_MULTICLASS;
  } else if (labels == "regression") {
    opts.mode = NASG_LABELS_REGRESSION;
  }
  nasg_dataset* data = nullptr;
  const nasg_status st = nasg_dataset_load(path.c_str(), &opts, &data);
  if (st != NASG_OK) return report(st);
  std::cout << "samples  " << nasg_dataset_num_samples(data) << "\n"
            << "features " << nasg_dataset_dim(data) << "\n"
            << "classes  " << nasg_dataset_num_classes(data) << "\n"
            << "nonzeros " << nasg_dataset_num_entries(data) << "\n";
  nasg_dataset_free(data);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuffling-based Nesterov gradient experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nasg_version()));

  RunFlags f;
  auto* run = app.add_subcommand("run", "Run an experiment and write its artifacts");
  run->add_option("--config", f.config, "JSON config file")->check(CLI::ExistingFile);
  run->add_option("--dataset", f.dataset, "LIBSVM file (overrides the config dataset)");
  run->add_option("--labels", f.labels, "Label mode")
      ->check(CLI::IsMember({"binary", "multiclass", "regression"}));
  run->add_option("--objective", f.objective)
      ->check(CLI::IsMember({"logistic", "softmax", "quadratic"}));
  run->add_option("--optimizer", f.optimizer)
      ->check(CLI::IsMember({"nasg", "nasg-pi", "nag", "sgd", "sgdm", "adam"}));
  run->add_option("--scheme", f.scheme)->check(CLI::IsMember({"rr", "ss", "ig"}));
  run->add_option("--schedule", f.schedule)
      ->check(CLI::IsMember({"constant", "thm1", "thm2", "thm3", "init-cond"}));
  run->add_option("--lr", f.lr, "Constant learning rate")->expected(1);
  run->add_option("--theta", f.theta, "Theta for thm2")->expected(1);
  run->add_option("--epochs", f.epochs, "Epochs T")->expected(1);
  run->add_option("--batch-size", f.batch_size)->expected(1);
  run->add_option("--seeds", f.seeds, "Comma-separated seeds");
  run->add_option("--grid", f.grid, "Comma-separated learning rates to search");
  run->add_option("--horizons", f.horizons, "Comma-separated horizons for a rate sweep");
  run->add_option("--out", f.out, "Output directory");
  run->add_option("--threads", f.threads)->expected(1);
  run->add_flag("--dispersion", f.dispersion, "Record K_t / I_t");
  run->add_flag("-q,--quiet", f.quiet);

  std::string check_path;
  std::string check_labels = "binary";
  auto* check = app.add_subcommand("check-data", "Parse a LIBSVM file and print its shape");
  check->add_option("file", check_path)->required();
  check->add_option("--labels", check_labels)
      ->check(CLI::IsMember({"binary", "multiclass", "regression"}));

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(f);
  return cmd_check(check_path, check_labels);
}
