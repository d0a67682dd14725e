/* SPDX-License-Identifier: Apache-2.0
 *
 * starwpcn: max-min throughput optimization for STAR-RIS assisted WPCNs
 * Copyright (C) 2026 starwpcn developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C interface of the experiment harness and the single-scenario solvers.
 * All handles are opaque; every call returns a starwpcn_status and, on
 * failure, leaves a message retrievable with starwpcn_last_error() on the
 * calling thread.
 */

#ifndef STARWPCN_H
#define STARWPCN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define STARWPCN_API __declspec(dllexport)
#else
#define STARWPCN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum starwpcn_status
{
    STARWPCN_OK = 0,
    STARWPCN_ERR_ARGUMENT = 1,      /* null pointer, bad index, unknown name */
    STARWPCN_ERR_SPEC = 2,          /* malformed or inconsistent experiment spec */
    STARWPCN_ERR_IO = 3,            /* file could not be read or written */
    STARWPCN_ERR_HASH_MISMATCH = 4, /* resume target belongs to another spec */
    STARWPCN_ERR_SOLVER = 5,        /* numerical failure */
    STARWPCN_ERR_INTERNAL = 6,
    STARWPCN_ERR_BUFFER = 7         /* output buffer too small; see *needed */
} starwpcn_status;

typedef struct starwpcn_spec starwpcn_spec;
typedef struct starwpcn_summary starwpcn_summary;

/* Called after each finished cell, serialized. */
typedef void (*starwpcn_progress_fn)(void *user, size_t done, size_t total, const char *scheme, double axis,
                                     uint64_t seed, double gamma, int ok);

STARWPCN_API const char *starwpcn_version(void);
STARWPCN_API const char *starwpcn_last_error(void);
STARWPCN_API const char *starwpcn_status_string(starwpcn_status status);

/* Experiment specs (JSON). */
STARWPCN_API starwpcn_status starwpcn_spec_load(const char *path, starwpcn_spec **out);
STARWPCN_API starwpcn_status starwpcn_spec_parse(const char *json_text, starwpcn_spec **out);
STARWPCN_API void starwpcn_spec_free(starwpcn_spec *spec);
STARWPCN_API starwpcn_status starwpcn_spec_set_seed_base(starwpcn_spec *spec, uint64_t seed_base);
STARWPCN_API starwpcn_status starwpcn_spec_set_output(starwpcn_spec *spec, const char *path);
/* Writes a NUL-terminated string; *needed receives the required size. */
STARWPCN_API starwpcn_status starwpcn_spec_output(const starwpcn_spec *spec, char *buf, size_t len, size_t *needed);
STARWPCN_API starwpcn_status starwpcn_spec_hash(const starwpcn_spec *spec, char *buf, size_t len, size_t *needed);
STARWPCN_API starwpcn_status starwpcn_spec_cell_count(const starwpcn_spec *spec, size_t *out);

/* Runs every cell (resume != 0: only cells missing from the output file).
 * summary may be NULL. */
STARWPCN_API starwpcn_status starwpcn_run(const starwpcn_spec *spec, int workers, int resume,
                                          starwpcn_progress_fn progress, void *user, starwpcn_summary **summary);

/* Summarizes a result CSV. spec may be NULL, in which case the spec stored
 * in the sidecar (<csv>.json) is used for trend checks when present. */
STARWPCN_API starwpcn_status starwpcn_summarize_file(const char *csv_path, const starwpcn_spec *spec,
                                                     starwpcn_summary **out);
STARWPCN_API void starwpcn_summary_free(starwpcn_summary *summary);
STARWPCN_API size_t starwpcn_summary_row_count(const starwpcn_summary *summary);
STARWPCN_API starwpcn_status starwpcn_summary_row(const starwpcn_summary *summary, size_t index, const char **scheme,
                                                  double *axis, int *count, int *failures, double *mean,
                                                  double *stddev);
STARWPCN_API size_t starwpcn_summary_trend_count(const starwpcn_summary *summary);
STARWPCN_API starwpcn_status starwpcn_summary_trend(const starwpcn_summary *summary, size_t index, const char **name,
                                                    int *pass, const char **detail);
STARWPCN_API int starwpcn_summary_cells_ok(const starwpcn_summary *summary);
STARWPCN_API int starwpcn_summary_trends_ok(const starwpcn_summary *summary);
STARWPCN_API starwpcn_status starwpcn_summary_json(const starwpcn_summary *summary, char *buf, size_t len,
                                                   size_t *needed);

/* One cell of a spec: scheme by name (e.g. "star_noma", "no_ris_tdma"). */
STARWPCN_API starwpcn_status starwpcn_solve_cell(const starwpcn_spec *spec, const char *scheme, double axis,
                                                 uint64_t seed, double *gamma, int *ok);

#ifdef __cplusplus
}
#endif

#endif
