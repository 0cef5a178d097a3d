/* SPDX-License-Identifier: MIT */

/*
 * C interface to the offspring-selection genetic programming engine.
 *
 * Handles are opaque and must be released with their matching *_free
 * function. Calls that can fail return an osgp_status and, when a non-NULL
 * errbuf is supplied, copy a NUL-terminated diagnostic into it (truncated to
 * errbuf_len). Strings returned through char** out-parameters are heap
 * allocated and must be released with osgp_string_free.
 */

#ifndef OSGP_H
#define OSGP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum osgp_status {
    OSGP_OK = 0,
    OSGP_ERROR_INVALID_ARGUMENT = 1,
    OSGP_ERROR_IO = 2,
    OSGP_ERROR_PARSE = 3,
    OSGP_ERROR_VALIDATION = 4,
    OSGP_ERROR_RUNTIME = 5
} osgp_status;

typedef struct osgp_config osgp_config;
typedef struct osgp_batch osgp_batch;
typedef struct osgp_runlog osgp_runlog;

const char* osgp_version(void);

void osgp_string_free(char* text);

/* ---- run configuration ---- */

/* Parses a `key = value` config file; unset keys take documented defaults. */
osgp_status osgp_config_load(const char* path, osgp_config** out, char* errbuf,
                             size_t errbuf_len);

/* Same, from an in-memory string. */
osgp_status osgp_config_parse(const char* text, osgp_config** out, char* errbuf,
                              size_t errbuf_len);

/* Overrides one key (same vocabulary as the config file) and revalidates. */
osgp_status osgp_config_set(osgp_config* cfg, const char* key, const char* value,
                            char* errbuf, size_t errbuf_len);

/* Renders the fully-resolved configuration back to config-file text. */
osgp_status osgp_config_render(const osgp_config* cfg, char** out_text, char* errbuf,
                               size_t errbuf_len);

void osgp_config_free(osgp_config* cfg);

/* ---- single run ---- */

osgp_status osgp_run(const osgp_config* cfg, osgp_runlog** out, char* errbuf,
                     size_t errbuf_len);

/* Number of logged generation rows (the initial generation included). */
uint32_t osgp_runlog_rows(const osgp_runlog* log);

osgp_status osgp_runlog_row(const osgp_runlog* log, uint32_t index, uint32_t* generation,
                            uint64_t* evaluations, double* best_quality,
                            double* avg_tree_size, double* selection_pressure);

uint64_t osgp_runlog_total_evaluations(const osgp_runlog* log);

double osgp_runlog_best_quality(const osgp_runlog* log);

/* Prefix rendering of the final best tree; owned by the log handle. */
const char* osgp_runlog_best_tree(const osgp_runlog* log);

/* "max_evaluations" or "max_selection_pressure"; static storage. */
const char* osgp_runlog_termination(const osgp_runlog* log);

/* Writes `<problem>_<kind>_<seed>.csv` into dir; returns the path. */
osgp_status osgp_runlog_write_csv(const osgp_runlog* log, const char* dir,
                                  char** out_path, char* errbuf, size_t errbuf_len);

/* Key = value report: termination, best quality and tree, totals. */
osgp_status osgp_runlog_summary(const osgp_runlog* log, char** out_text, char* errbuf,
                                size_t errbuf_len);

void osgp_runlog_free(osgp_runlog* log);

/* ---- batch execution ---- */

osgp_status osgp_batch_load(const char* path, osgp_batch** out, char* errbuf,
                            size_t errbuf_len);

osgp_status osgp_batch_parse(const char* text, osgp_batch** out, char* errbuf,
                             size_t errbuf_len);

osgp_status osgp_batch_set(osgp_batch* spec, const char* key, const char* value,
                           char* errbuf, size_t errbuf_len);

/*
 * Runs every (crossover kind, repetition) combination, writing one CSV per
 * run plus summary.csv. out_dir NULL uses the spec's output_dir. failed_runs
 * may be NULL. Individual run failures are counted, not fatal.
 */
osgp_status osgp_batch_run(const osgp_batch* spec, const char* out_dir,
                           char** out_summary_path, uint32_t* failed_runs, char* errbuf,
                           size_t errbuf_len);

void osgp_batch_free(osgp_batch* spec);

/* ---- datasets and aggregation ---- */

/*
 * Writes a benchmark dataset as CSV. problem: "poly10" or "mackey_glass"
 * (classification data comes from files). rows 0 picks the problem default.
 * raw_series nonzero emits the plain time series instead of the
 * lag-embedded table.
 */
osgp_status osgp_gen_data(const char* problem, uint64_t rows, uint64_t seed,
                          int raw_series, const char* out_csv, char* errbuf,
                          size_t errbuf_len);

/*
 * Resamples per-generation logs onto a common evaluations grid and writes
 * per-point min/median/max. quantity: "best_quality", "avg_tree_size" or
 * "selection_pressure". step 0 picks a default grid.
 */
osgp_status osgp_aggregate(const char* const* csv_paths, size_t path_count,
                           const char* quantity, uint64_t step, const char* out_csv,
                           char* errbuf, size_t errbuf_len);

#ifdef __cplusplus
}
#endif

#endif /* OSGP_H */
