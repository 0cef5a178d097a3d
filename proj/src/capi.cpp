// SPDX-License-Identifier: MIT

#include "osgp.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "config.hpp"
#include "dataset.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "problems.hpp"
#include "runio.hpp"

struct osgp_config {
    osgp::RunConfig cfg;
};

struct osgp_batch {
    osgp::BatchSpec spec;
};

struct osgp_runlog {
    osgp::RunLog log;
};

namespace {

void set_error(char* errbuf, size_t errbuf_len, const char* message) {
    if (errbuf == nullptr || errbuf_len == 0) return;
    std::snprintf(errbuf, errbuf_len, "%s", message);
}

template <typename Fn>
osgp_status guarded(char* errbuf, size_t errbuf_len, Fn&& fn) {
    try {
        fn();
        return OSGP_OK;
    } catch (const osgp::ParseError& e) {
        set_error(errbuf, errbuf_len, e.what());
        return OSGP_ERROR_PARSE;
    } catch (const osgp::IoError& e) {
        set_error(errbuf, errbuf_len, e.what());
        return OSGP_ERROR_IO;
    } catch (const osgp::InvalidCoordinate& e) {
        set_error(errbuf, errbuf_len, e.what());
        return OSGP_ERROR_INVALID_ARGUMENT;
    } catch (const osgp::ValidationError& e) {
        set_error(errbuf, errbuf_len, e.what());
        return OSGP_ERROR_VALIDATION;
    } catch (const std::exception& e) {
        set_error(errbuf, errbuf_len, e.what());
        return OSGP_ERROR_RUNTIME;
    } catch (...) {
        set_error(errbuf, errbuf_len, "unknown error");
        return OSGP_ERROR_RUNTIME;
    }
}

osgp_status null_argument(const char* name, char* errbuf, size_t errbuf_len) {
    std::string message = std::string(name) + " must not be NULL";
    set_error(errbuf, errbuf_len, message.c_str());
    return OSGP_ERROR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& text) {
    char* out = static_cast<char*>(std::malloc(text.size() + 1));
    if (out == nullptr) throw std::bad_alloc();
    std::memcpy(out, text.c_str(), text.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* osgp_version(void) { return "0.1.0"; }

void osgp_string_free(char* text) { std::free(text); }

osgp_status osgp_config_load(const char* path, osgp_config** out, char* errbuf,
                             size_t errbuf_len) {
    if (path == nullptr) return null_argument("path", errbuf, errbuf_len);
    if (out == nullptr) return null_argument("out", errbuf, errbuf_len);
    *out = nullptr;
    return guarded(errbuf, errbuf_len,
                   [&] { *out = new osgp_config{osgp::parse_config(path)}; });
}

osgp_status osgp_config_parse(const char* text, osgp_config** out, char* errbuf,
                              size_t errbuf_len) {
    if (text == nullptr) return null_argument("text", errbuf, errbuf_len);
    if (out == nullptr) return null_argument("out", errbuf, errbuf_len);
    *out = nullptr;
    return guarded(errbuf, errbuf_len,
                   [&] { *out = new osgp_config{osgp::parse_config_text(text)}; });
}

osgp_status osgp_config_set(osgp_config* cfg, const char* key, const char* value,
                            char* errbuf, size_t errbuf_len) {
    if (cfg == nullptr) return null_argument("cfg", errbuf, errbuf_len);
    if (key == nullptr) return null_argument("key", errbuf, errbuf_len);
    if (value == nullptr) return null_argument("value", errbuf, errbuf_len);
    return guarded(errbuf, errbuf_len, [&] {
        osgp::RunConfig next = cfg->cfg;
        if (!osgp::apply_config_key(next, key, value))
            throw osgp::ValidationError("unknown config key '" + std::string(key) + "'");
        next.resolve_defaults();
        next.validate();
        cfg->cfg = next;
    });
}

osgp_status osgp_config_render(const osgp_config* cfg, char** out_text, char* errbuf,
                               size_t errbuf_len) {
    if (cfg == nullptr) return null_argument("cfg", errbuf, errbuf_len);
    if (out_text == nullptr) return null_argument("out_text", errbuf, errbuf_len);
    *out_text = nullptr;
    return guarded(errbuf, errbuf_len,
                   [&] { *out_text = copy_string(osgp::render_config(cfg->cfg)); });
}

void osgp_config_free(osgp_config* cfg) { delete cfg; }

osgp_status osgp_run(const osgp_config* cfg, osgp_runlog** out, char* errbuf,
                     size_t errbuf_len) {
    if (cfg == nullptr) return null_argument("cfg", errbuf, errbuf_len);
    if (out == nullptr) return null_argument("out", errbuf, errbuf_len);
    *out = nullptr;
    return guarded(errbuf, errbuf_len, [&] { *out = new osgp_runlog{osgp::run(cfg->cfg)}; });
}

uint32_t osgp_runlog_rows(const osgp_runlog* log) {
    if (log == nullptr) return 0;
    return static_cast<uint32_t>(log->log.generations.size());
}

osgp_status osgp_runlog_row(const osgp_runlog* log, uint32_t index, uint32_t* generation,
                            uint64_t* evaluations, double* best_quality,
                            double* avg_tree_size, double* selection_pressure) {
    if (log == nullptr) return OSGP_ERROR_INVALID_ARGUMENT;
    if (index >= log->log.generations.size()) return OSGP_ERROR_INVALID_ARGUMENT;
    const osgp::GenerationLog& row = log->log.generations[index];
    if (generation != nullptr) *generation = row.generation;
    if (evaluations != nullptr) *evaluations = row.cumulative_evaluations;
    if (best_quality != nullptr) *best_quality = row.best_quality;
    if (avg_tree_size != nullptr) *avg_tree_size = row.average_tree_size;
    if (selection_pressure != nullptr) *selection_pressure = row.selection_pressure;
    return OSGP_OK;
}

uint64_t osgp_runlog_total_evaluations(const osgp_runlog* log) {
    if (log == nullptr) return 0;
    return log->log.total_evaluations;
}

double osgp_runlog_best_quality(const osgp_runlog* log) {
    if (log == nullptr) return osgp::Quality::worst_value();
    return log->log.best_quality;
}

const char* osgp_runlog_best_tree(const osgp_runlog* log) {
    if (log == nullptr) return "";
    return log->log.best_tree.c_str();
}

const char* osgp_runlog_termination(const osgp_runlog* log) {
    if (log == nullptr) return "";
    return osgp::to_string(log->log.termination).data();
}

osgp_status osgp_runlog_write_csv(const osgp_runlog* log, const char* dir,
                                  char** out_path, char* errbuf, size_t errbuf_len) {
    if (log == nullptr) return null_argument("log", errbuf, errbuf_len);
    return guarded(errbuf, errbuf_len, [&] {
        const std::string target = dir != nullptr ? dir : log->log.config.output_dir;
        const std::string path = osgp::emit_logs(log->log, target);
        if (out_path != nullptr) *out_path = copy_string(path);
    });
}

osgp_status osgp_runlog_summary(const osgp_runlog* log, char** out_text, char* errbuf,
                                size_t errbuf_len) {
    if (log == nullptr) return null_argument("log", errbuf, errbuf_len);
    if (out_text == nullptr) return null_argument("out_text", errbuf, errbuf_len);
    *out_text = nullptr;
    return guarded(errbuf, errbuf_len,
                   [&] { *out_text = copy_string(osgp::run_summary(log->log)); });
}

void osgp_runlog_free(osgp_runlog* log) { delete log; }

osgp_status osgp_batch_load(const char* path, osgp_batch** out, char* errbuf,
                            size_t errbuf_len) {
    if (path == nullptr) return null_argument("path", errbuf, errbuf_len);
    if (out == nullptr) return null_argument("out", errbuf, errbuf_len);
    *out = nullptr;
    return guarded(errbuf, errbuf_len,
                   [&] { *out = new osgp_batch{osgp::parse_batch(path)}; });
}

osgp_status osgp_batch_parse(const char* text, osgp_batch** out, char* errbuf,
                             size_t errbuf_len) {
    if (text == nullptr) return null_argument("text", errbuf, errbuf_len);
    if (out == nullptr) return null_argument("out", errbuf, errbuf_len);
    *out = nullptr;
    return guarded(errbuf, errbuf_len,
                   [&] { *out = new osgp_batch{osgp::parse_batch_text(text)}; });
}

osgp_status osgp_batch_set(osgp_batch* spec, const char* key, const char* value,
                           char* errbuf, size_t errbuf_len) {
    if (spec == nullptr) return null_argument("spec", errbuf, errbuf_len);
    if (key == nullptr) return null_argument("key", errbuf, errbuf_len);
    if (value == nullptr) return null_argument("value", errbuf, errbuf_len);
    return guarded(errbuf, errbuf_len, [&] {
        osgp::BatchSpec next = spec->spec;
        if (!osgp::apply_batch_key(next, key, value))
            throw osgp::ValidationError("unknown batch key '" + std::string(key) + "'");
        next.base.resolve_defaults();
        next.validate();
        spec->spec = next;
    });
}

osgp_status osgp_batch_run(const osgp_batch* spec, const char* out_dir,
                           char** out_summary_path, uint32_t* failed_runs, char* errbuf,
                           size_t errbuf_len) {
    if (spec == nullptr) return null_argument("spec", errbuf, errbuf_len);
    return guarded(errbuf, errbuf_len, [&] {
        const osgp::BatchOutcome outcome =
            osgp::run_batch(spec->spec, out_dir != nullptr ? out_dir : "");
        if (failed_runs != nullptr) {
            uint32_t failures = 0;
            for (const osgp::BatchRunResult& run : outcome.runs)
                if (run.failed) ++failures;
            *failed_runs = failures;
        }
        if (out_summary_path != nullptr)
            *out_summary_path = copy_string(outcome.summary_path);
    });
}

void osgp_batch_free(osgp_batch* spec) { delete spec; }

osgp_status osgp_gen_data(const char* problem, uint64_t rows, uint64_t seed,
                          int raw_series, const char* out_csv, char* errbuf,
                          size_t errbuf_len) {
    if (problem == nullptr) return null_argument("problem", errbuf, errbuf_len);
    if (out_csv == nullptr) return null_argument("out_csv", errbuf, errbuf_len);
    return guarded(errbuf, errbuf_len, [&] {
        const auto kind = osgp::problem_kind_from(problem);
        if (!kind)
            throw osgp::ValidationError("unknown problem '" + std::string(problem) + "'");
        switch (*kind) {
        case osgp::ProblemKind::Poly10: {
            if (raw_series != 0)
                throw osgp::ValidationError(
                    "raw series output applies to mackey_glass only");
            osgp::Rng rng(seed);
            const size_t n =
                rows != 0 ? static_cast<size_t>(rows) : osgp::default_rows(*kind);
            osgp::write_csv(osgp::gen_poly10(rng, n), out_csv);
            break;
        }
        case osgp::ProblemKind::MackeyGlass: {
            const size_t max_lag = 128;
            osgp::MackeyGlassParams params;
            if (raw_series != 0) {
                params.count = rows != 0 ? static_cast<size_t>(rows)
                                         : osgp::default_rows(*kind) + max_lag;
                osgp::Dataset ds({"x"}, osgp::gen_mackey_glass(params), 0);
                osgp::write_csv(ds, out_csv);
            } else {
                const size_t n =
                    rows != 0 ? static_cast<size_t>(rows) : osgp::default_rows(*kind);
                params.count = n + max_lag;
                const std::vector<double> series = osgp::gen_mackey_glass(params);
                osgp::write_csv(osgp::lag_embed(series, osgp::mackey_glass_lags(), n),
                                out_csv);
            }
            break;
        }
        case osgp::ProblemKind::Classification:
            throw osgp::ValidationError(
                "classification datasets are loaded from files, not generated; "
                "point data_file at a CSV instead");
        }
    });
}

osgp_status osgp_aggregate(const char* const* csv_paths, size_t path_count,
                           const char* quantity, uint64_t step, const char* out_csv,
                           char* errbuf, size_t errbuf_len) {
    if (csv_paths == nullptr && path_count != 0)
        return null_argument("csv_paths", errbuf, errbuf_len);
    if (quantity == nullptr) return null_argument("quantity", errbuf, errbuf_len);
    if (out_csv == nullptr) return null_argument("out_csv", errbuf, errbuf_len);
    return guarded(errbuf, errbuf_len, [&] {
        std::vector<std::string> files;
        files.reserve(path_count);
        for (size_t i = 0; i < path_count; ++i) {
            if (csv_paths[i] == nullptr)
                throw osgp::ValidationError("csv_paths contains a NULL entry");
            files.emplace_back(csv_paths[i]);
        }
        const osgp::AggregateTable table = osgp::aggregate(files, quantity, step);
        osgp::write_aggregate_csv(table, out_csv);
    });
}

} // extern "C"
