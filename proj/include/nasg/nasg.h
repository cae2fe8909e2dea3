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

/* C interface to the nasg library.
 *
 * All functions return a nasg_status; NASG_OK is zero. On failure a
 * human-readable message is available from nasg_last_error() on the calling
 * thread until the next failing call on that thread. Handles are opaque and
 * must be released with the matching *_free function (NULL is accepted).
 */
#ifndef NASG_NASG_H_
#define NASG_NASG_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NASG_BUILDING_LIBRARY)
#    define NASG_API __declspec(dllexport)
#  else
#    define NASG_API __declspec(dllimport)
#  endif
#else
#  define NASG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nasg_status {
  NASG_OK = 0,
  NASG_INVALID_ARGUMENT = 1,
  NASG_PARSE_ERROR = 2,
  NASG_IO_ERROR = 3,
  NASG_DIVERGED = 4,
  NASG_NOT_CONVERGED = 5,
  NASG_PRECONDITION = 6,
  NASG_INTERNAL = 7
} nasg_status;

typedef enum nasg_label_mode {
  NASG_LABELS_BINARY = 0,
  NASG_LABELS_MULTICLASS = 1,
  NASG_LABELS_REGRESSION = 2
} nasg_label_mode;

typedef struct nasg_load_options {
  nasg_label_mode mode;
  size_t dimension; /* 0: max index seen */
  int append_bias;
  int scale_max_abs;
} nasg_load_options;

typedef struct nasg_dataset nasg_dataset;
typedef struct nasg_objective nasg_objective;
typedef struct nasg_summary nasg_summary;

NASG_API const char* nasg_version(void);
NASG_API const char* nasg_last_error(void);

/* Datasets */
NASG_API nasg_status nasg_dataset_parse(const char* text, size_t length,
                                        const nasg_load_options* options, nasg_dataset** out);
NASG_API nasg_status nasg_dataset_load(const char* path, const nasg_load_options* options,
                                       nasg_dataset** out);
NASG_API size_t nasg_dataset_num_samples(const nasg_dataset* data);
NASG_API size_t nasg_dataset_dim(const nasg_dataset* data);
NASG_API size_t nasg_dataset_num_classes(const nasg_dataset* data);
NASG_API size_t nasg_dataset_num_entries(const nasg_dataset* data);
NASG_API nasg_status nasg_dataset_label(const nasg_dataset* data, size_t i, double* out);
/* Writes the libsvm text into buf (NUL-terminated when it fits) and the
 * required size, excluding the terminator, into *needed. */
NASG_API nasg_status nasg_dataset_serialize(const nasg_dataset* data, char* buf, size_t size,
                                            size_t* needed);
NASG_API void nasg_dataset_free(nasg_dataset* data);

/* Objectives */
NASG_API nasg_status nasg_objective_logistic(const nasg_dataset* data, nasg_objective** out);
NASG_API nasg_status nasg_objective_softmax(const nasg_dataset* data, nasg_objective** out);
/* centers: n * dim values, row-major. */
NASG_API nasg_status nasg_objective_quadratic(size_t dim, const double* centers, size_t n,
                                              nasg_objective** out);
NASG_API size_t nasg_objective_num_components(const nasg_objective* obj);
NASG_API size_t nasg_objective_dim(const nasg_objective* obj);
NASG_API double nasg_objective_smoothness(const nasg_objective* obj);
NASG_API nasg_status nasg_objective_value(const nasg_objective* obj, const double* w, double* out);
NASG_API nasg_status nasg_objective_gradient(const nasg_objective* obj, const double* w,
                                             double* out);
NASG_API nasg_status nasg_objective_component_value(const nasg_objective* obj, const double* w,
                                                    size_t i, double* out);
NASG_API nasg_status nasg_objective_component_gradient(const nasg_objective* obj,
                                                       const double* w, size_t i, double* out);
NASG_API void nasg_objective_free(nasg_objective* obj);

/* Schedules and bounds. schedule: constant, thm1, thm2, thm3, init-cond.
 * theorem: unified, variance, randomized, init-cond-unified,
 * init-cond-randomized. Negative constants mean "not supplied". */
NASG_API nasg_status nasg_step_size(const char* schedule, double lr, int horizon,
                                    double smoothness, double theta, size_t n, int epoch,
                                    double* out);
NASG_API nasg_status nasg_theorem_bound(const char* theorem, double smoothness,
                                        double sigma_star_sq, double delta, double theta,
                                        double sigma_sq, size_t n, double e_sq, int horizon,
                                        double* out);

/* Experiments. config_json follows the documented config schema. */
NASG_API nasg_status nasg_experiment_run(const char* config_json, nasg_summary** out);
/* Summary JSON, owned by the handle and valid until nasg_summary_free. */
NASG_API const char* nasg_summary_json(const nasg_summary* summary);
NASG_API int nasg_summary_degraded(const nasg_summary* summary);
NASG_API void nasg_summary_free(nasg_summary* summary);

#ifdef __cplusplus
}
#endif

#endif /* NASG_NASG_H_ */
