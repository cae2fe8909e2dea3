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

#include "nasg/nasg.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "nasg/dataset.hpp"
#include "nasg/diagnostics.hpp"
#include "nasg/error.hpp"
#include "nasg/harness.hpp"
#include "nasg/objective.hpp"
#include "nasg/schedule.hpp"

struct nasg_dataset {
  std::shared_ptr<const nasg::Dataset> data;
};

struct nasg_objective {
  std::shared_ptr<const nasg::Objective> obj;
};

struct nasg_summary {
  nasg::RunSummary summary;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

nasg_status fail(nasg_status code, const char* msg) {
  g_last_error = msg;
  return code;
}

template <class Fn>
nasg_status guarded(Fn&& fn) {
  try {
    fn();
    return NASG_OK;
  } catch (const nasg::Error& e) {
    return fail(static_cast<nasg_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NASG_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(NASG_INTERNAL, e.what());
  } catch (...) {
    return fail(NASG_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* msg) {
  if (!ok) throw nasg::InvalidArgument(msg);
}

nasg::LoadOptions to_options(const nasg_load_options* o) {
  nasg::LoadOptions opts;
  if (o == nullptr) return opts;
  switch (o->mode) {
    case NASG_LABELS_BINARY: opts.mode = nasg::LabelMode::kBinary; break;
    case NASG_LABELS_MULTICLASS: opts.mode = nasg::LabelMode::kMulticlass; break;
    case NASG_LABELS_REGRESSION: opts.mode = nasg::LabelMode::kRegression; break;
    default: throw nasg::InvalidArgument("unknown label mode");
  }
  opts.dimension = o->dimension;
  opts.append_bias = o->append_bias != 0;
  opts.scale_max_abs = o->scale_max_abs != 0;
  return opts;
}

std::optional<double> maybe(double v) {
  if (v < 0.0) return std::nullopt;
  return v;
}

}  // namespace

extern "C" {

const char* nasg_version(void) { return "0.1.0"; }

const char* nasg_last_error(void) { return g_last_error.c_str(); }

nasg_status nasg_dataset_parse(const char* text, size_t length, const nasg_load_options* options,
                               nasg_dataset** out) {
  return guarded([&] {
    require(out != nullptr && (text != nullptr || length == 0), "null argument");
    auto ds = std::make_shared<const nasg::Dataset>(
        nasg::parse_libsvm(std::string_view(text == nullptr ? "" : text, length),
                           to_options(options)));
    *out = new nasg_dataset{std::move(ds)};
  });
}

nasg_status nasg_dataset_load(const char* path, const nasg_load_options* options,
                              nasg_dataset** out) {
  return guarded([&] {
    require(out != nullptr && path != nullptr, "null argument");
    auto ds = std::make_shared<const nasg::Dataset>(
        nasg::load_libsvm_file(path, to_options(options)));
    *out = new nasg_dataset{std::move(ds)};
  });
}

size_t nasg_dataset_num_samples(const nasg_dataset* d) { return d ? d->data->num_samples() : 0; }
size_t nasg_dataset_dim(const nasg_dataset* d) { return d ? d->data->dim() : 0; }
size_t nasg_dataset_num_classes(const nasg_dataset* d) { return d ? d->data->num_classes() : 0; }
size_t nasg_dataset_num_entries(const nasg_dataset* d) { return d ? d->data->num_entries() : 0; }

nasg_status nasg_dataset_label(const nasg_dataset* d, size_t i, double* out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    require(i < d->data->num_samples(), "sample index out of range");
    *out = d->data->label(i);
  });
}

nasg_status nasg_dataset_serialize(const nasg_dataset* d, char* buf, size_t size,
                                   size_t* needed) {
  return guarded([&] {
    require(d != nullptr && needed != nullptr, "null argument");
    const std::string text = nasg::serialize_libsvm(*d->data);
    *needed = text.size();
    if (buf != nullptr && size > text.size()) {
      std::memcpy(buf, text.data(), text.size());
      buf[text.size()] = '\0';
    }
  });
}

void nasg_dataset_free(nasg_dataset* d) { delete d; }

nasg_status nasg_objective_logistic(const nasg_dataset* d, nasg_objective** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = new nasg_objective{std::make_shared<const nasg::LogisticObjective>(d->data)};
  });
}

nasg_status nasg_objective_softmax(const nasg_dataset* d, nasg_objective** out) {
  return guarded([&] {
    require(d != nullptr && out != nullptr, "null argument");
    *out = new nasg_objective{std::make_shared<const nasg::SoftmaxObjective>(d->data)};
  });
}

nasg_status nasg_objective_quadratic(size_t dim, const double* centers, size_t n,
                                     nasg_objective** out) {
  return guarded([&] {
    require(out != nullptr && (centers != nullptr || n * dim == 0), "null argument");
    std::vector<double> c(centers, centers + n * dim);
    *out = new nasg_objective{std::make_shared<const nasg::QuadraticObjective>(dim, std::move(c))};
  });
}

size_t nasg_objective_num_components(const nasg_objective* o) {
  return o ? o->obj->num_components() : 0;
}
size_t nasg_objective_dim(const nasg_objective* o) { return o ? o->obj->dim() : 0; }
double nasg_objective_smoothness(const nasg_objective* o) {
  return o ? o->obj->smoothness_bound() : 0.0;
}

nasg_status nasg_objective_value(const nasg_objective* o, const double* w, double* out) {
  return guarded([&] {
    require(o != nullptr && w != nullptr && out != nullptr, "null argument");
    *out = o->obj->full_value({w, o->obj->dim()});
  });
}

nasg_status nasg_objective_gradient(const nasg_objective* o, const double* w, double* out) {
  return guarded([&] {
    require(o != nullptr && w != nullptr && out != nullptr, "null argument");
    const std::size_t d = o->obj->dim();
    o->obj->full_gradient({w, d}, {out, d});
  });
}

nasg_status nasg_objective_component_value(const nasg_objective* o, const double* w, size_t i,
                                           double* out) {
  return guarded([&] {
    require(o != nullptr && w != nullptr && out != nullptr, "null argument");
    *out = o->obj->component_value({w, o->obj->dim()}, i);
  });
}

nasg_status nasg_objective_component_gradient(const nasg_objective* o, const double* w, size_t i,
                                              double* out) {
  return guarded([&] {
    require(o != nullptr && w != nullptr && out != nullptr, "null argument");
    const std::size_t d = o->obj->dim();
    std::fill(out, out + d, 0.0);
    o->obj->add_component_gradient({w, d}, i, 1.0, {out, d});
  });
}

void nasg_objective_free(nasg_objective* o) { delete o; }

nasg_status nasg_step_size(const char* schedule, double lr, int horizon, double smoothness,
                           double theta, size_t n, int epoch, double* out) {
  return guarded([&] {
    require(schedule != nullptr && out != nullptr, "null argument");
    using nasg::Schedule;
    using nasg::ScheduleKind;
    std::optional<Schedule> s;
    switch (nasg::parse_schedule_kind(schedule)) {
      case ScheduleKind::kConstant: s = Schedule::constant(lr); break;
      case ScheduleKind::kTheoremUnified: s = Schedule::theorem_unified(horizon, smoothness); break;
      case ScheduleKind::kTheoremVariance:
        s = Schedule::theorem_variance(horizon, smoothness, theta);
        break;
      case ScheduleKind::kTheoremRandomized:
        s = Schedule::theorem_randomized(horizon, smoothness);
        break;
      case ScheduleKind::kInitialCondition:
        s = Schedule::initial_condition(horizon, smoothness, n);
        break;
    }
    *out = s->step_size(epoch);
  });
}

nasg_status nasg_theorem_bound(const char* theorem, double smoothness, double sigma_star_sq,
                               double delta, double theta, double sigma_sq, size_t n, double e_sq,
                               int horizon, double* out) {
  return guarded([&] {
    require(theorem != nullptr && out != nullptr, "null argument");
    nasg::BoundConstants c;
    c.smoothness = smoothness;
    c.sigma_star_sq = maybe(sigma_star_sq);
    c.delta = maybe(delta);
    c.theta = maybe(theta);
    c.sigma_sq = maybe(sigma_sq);
    if (n > 0) c.n = n;
    c.e_sq = maybe(e_sq);
    *out = nasg::theorem_bound(nasg::parse_theorem(theorem), c, horizon);
  });
}

nasg_status nasg_experiment_run(const char* config_json, nasg_summary** out) {
  return guarded([&] {
    require(config_json != nullptr && out != nullptr, "null argument");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw nasg::ParseError(0, std::string("config is not valid JSON: ") + e.what());
    }
    auto s = std::make_unique<nasg_summary>();
    s->summary = nasg::run_experiment(nasg::config_from_json(j));
    s->json = nasg::summary_to_json(s->summary).dump(2);
    *out = s.release();
  });
}

const char* nasg_summary_json(const nasg_summary* s) { return s ? s->json.c_str() : ""; }

int nasg_summary_degraded(const nasg_summary* s) { return s && s->summary.degraded ? 1 : 0; }

void nasg_summary_free(nasg_summary* s) { delete s; }

}  // extern "C"
