/*
 * Copyright 2026 The acger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the acger library. All objects are opaque handles; every
 * fallible call returns an acger_status and leaves a message retrievable
 * with acger_last_error() on the calling thread. */

#ifndef ACGER_ACGER_H_
#define ACGER_ACGER_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ACGER_API __declspec(dllexport)
#elif defined(ACGER_BUILDING_LIBRARY)
#define ACGER_API __attribute__((visibility("default")))
#else
#define ACGER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum acger_status {
  ACGER_OK = 0,
  ACGER_ERR_USAGE = 1,
  ACGER_ERR_DATA = 2,
  ACGER_ERR_NUMERIC = 3,
  ACGER_ERR_IO = 4,
  ACGER_ERR_INTERNAL = 5
} acger_status;

typedef enum acger_actor_kind { ACGER_USER = 0, ACGER_GROUP = 1 } acger_actor_kind;
typedef enum acger_split { ACGER_VALIDATION = 0, ACGER_TEST = 1, ACGER_ALL = 2 } acger_split;
typedef enum acger_attention {
  ACGER_ATTENTION_CONTEXT = 0,
  ACGER_ATTENTION_MEMBERS = 1
} acger_attention;

typedef struct acger_config acger_config;
typedef struct acger_dataset acger_dataset;
typedef struct acger_model acger_model;

typedef struct acger_metric {
  size_t n;
  double precision;
  double recall;
  double ndcg;
} acger_metric;

typedef struct acger_ranked {
  uint32_t event;
  double score;
} acger_ranked;

typedef struct acger_slot_check {
  char name[96];
  double max_rel_error;
  size_t entries;
  size_t skipped; /* probes that straddled a ReLU kink */
} acger_slot_check;

typedef struct acger_train_summary {
  size_t epochs_run;
  size_t best_epoch;
  double best_score;
} acger_train_summary;

/* Receives each metrics-log row as it is produced. */
typedef void (*acger_epoch_fn)(const char* log_row, void* user);

ACGER_API const char* acger_version(void);
/* Message of the last failed call on this thread ("" if none). */
ACGER_API const char* acger_last_error(void);

/* Strings are copied into buf (NUL-terminated, truncated to cap). When
 * needed is non-NULL it receives the full length excluding the NUL. */

/* --- configuration ------------------------------------------------------- */
ACGER_API acger_status acger_config_create(acger_config** out);
ACGER_API void acger_config_destroy(acger_config* config);
ACGER_API acger_status acger_config_set(acger_config* config, const char* key, const char* value);
ACGER_API acger_status acger_config_get(const acger_config* config, const char* key, char* buf,
                                        size_t cap, size_t* needed);
ACGER_API acger_status acger_config_load_file(acger_config* config, const char* path);
ACGER_API acger_status acger_config_dump(const acger_config* config, char* buf, size_t cap,
                                         size_t* needed);

/* Manifest: resolved configuration, input digests and outputs of a run. */
ACGER_API acger_status acger_manifest_write(const acger_config* config, const char* command,
                                            const char* const* inputs, size_t n_inputs,
                                            const char* const* outputs, size_t n_outputs,
                                            const char* path);
/* Verifies input digests; the recorded command goes to command_buf. */
ACGER_API acger_status acger_manifest_load(const char* path, acger_config** out,
                                           char* command_buf, size_t cap);

/* --- data ------------------------------------------------------------------ */
ACGER_API acger_status acger_synth(const acger_config* config, const char* out_dir);
ACGER_API acger_status acger_dataset_load(const acger_config* config, acger_dataset** out);
ACGER_API void acger_dataset_destroy(acger_dataset* dataset);
ACGER_API acger_status acger_dataset_summary(const acger_dataset* dataset, char* buf, size_t cap,
                                             size_t* needed);
/* Number of input files and the path of input i, for manifests. */
ACGER_API size_t acger_dataset_input_count(const acger_dataset* dataset);
ACGER_API const char* acger_dataset_input(const acger_dataset* dataset, size_t i);
/* {user,group}_{train,validation,test}.tsv in out_dir. */
ACGER_API acger_status acger_dataset_write_splits(const acger_dataset* dataset,
                                                  const char* out_dir);
ACGER_API acger_status acger_random_baseline(const acger_dataset* dataset, acger_actor_kind task,
                                             acger_split split, size_t n, double* out);

/* --- models ---------------------------------------------------------------- */
ACGER_API acger_status acger_model_create(const acger_config* config,
                                          const acger_dataset* dataset, acger_model** out);
ACGER_API void acger_model_destroy(acger_model* model);
/* Trains in place and keeps the best validation parameters. The metrics log
 * is written to metrics_path when it is non-NULL. */
ACGER_API acger_status acger_model_train(acger_model* model, const acger_dataset* dataset,
                                         const acger_config* config, const char* metrics_path,
                                         acger_epoch_fn on_epoch, void* user,
                                         acger_train_summary* summary);
ACGER_API acger_status acger_model_save(const acger_model* model, const char* path);
/* dataset may be NULL; when given its schema must match the checkpoint. */
ACGER_API acger_status acger_model_load(const char* path, const acger_dataset* dataset,
                                        acger_model** out);
/* Applies the variant_* keys of config to a loaded model. */
ACGER_API acger_status acger_model_set_variant(acger_model* model, const acger_config* config);
ACGER_API size_t acger_model_factors(const acger_model* model);
ACGER_API size_t acger_model_events(const acger_model* model);

/* --- inference ------------------------------------------------------------- */
ACGER_API acger_status acger_score(const acger_model* model, acger_actor_kind kind,
                                   uint32_t actor, uint32_t event, const uint32_t* context,
                                   size_t k, double* out);
/* Top-n events. context (length k) applies to every candidate; with
 * context == NULL each candidate uses its own recorded context. candidates
 * == NULL ranks every event. out must hold n entries. */
ACGER_API acger_status acger_recommend(const acger_model* model, acger_actor_kind kind,
                                       uint32_t actor, const uint32_t* context, size_t k,
                                       const uint32_t* candidates, size_t n_candidates, size_t n,
                                       acger_ranked* out, size_t* written);
/* Full-ranking metrics for every cutoff in ns; out holds n_ns entries.
 * details_path, when non-NULL, receives one line per actor. */
ACGER_API acger_status acger_evaluate(const acger_model* model, const acger_dataset* dataset,
                                      acger_actor_kind task, acger_split split,
                                      const size_t* ns, size_t n_ns, size_t threads,
                                      acger_metric* out, size_t* actors,
                                      const char* details_path);
/* Attention weights for the records of a split (both tasks) written to
 * path. mean_out (cap entries) receives the per-position mean. */
ACGER_API acger_status acger_dump_attention(const acger_model* model,
                                            const acger_dataset* dataset, acger_split split,
                                            acger_attention target, const char* path,
                                            double* mean_out, size_t cap, size_t* width,
                                            size_t* records);

/* --- diagnostics ----------------------------------------------------------- */
/* Finite-difference check on the built-in toy instance under the variant of
 * config (may be NULL). out holds cap entries; count receives the number of
 * parameter slots. */
ACGER_API acger_status acger_gradcheck(const acger_config* config, uint64_t seed, double h,
                                       acger_slot_check* out, size_t cap, size_t* count,
                                       double* max_rel_error);

#ifdef __cplusplus
}
#endif

#endif /* ACGER_ACGER_H_ */
