// SPDX-License-Identifier: MIT

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "osgp.h"

namespace {

constexpr size_t kErrbufLen = 1024;

struct KeyValue {
    std::string key;
    std::string value;
};

std::vector<KeyValue> split_overrides(const std::vector<std::string>& raw) {
    std::vector<KeyValue> out;
    out.reserve(raw.size());
    for (const std::string& item : raw) {
        const size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--set", "expected key=value, got '" + item + "'");
        out.push_back({item.substr(0, eq), item.substr(eq + 1)});
    }
    return out;
}

int fail(osgp_status status, const char* errbuf) {
    std::fprintf(stderr, "error: %s\n", errbuf[0] != '\0' ? errbuf : "unspecified failure");
    return static_cast<int>(status);
}

// Expands *, ? patterns against the filesystem (non-recursive, basename
// only); plain paths pass through so shell-expanded arguments still work.
bool wildcard_match(const std::string& pattern, const std::string& name) {
    size_t p = 0;
    size_t n = 0;
    size_t star = std::string::npos;
    size_t mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::string> expand_inputs(const std::vector<std::string>& patterns) {
    namespace fs = std::filesystem;
    std::vector<std::string> out;
    for (const std::string& pattern : patterns) {
        if (pattern.find_first_of("*?") == std::string::npos) {
            out.push_back(pattern);
            continue;
        }
        const fs::path full(pattern);
        const fs::path dir = full.parent_path().empty() ? fs::path(".") : full.parent_path();
        const std::string leaf = full.filename().string();
        std::vector<std::string> matched;
        std::error_code ec;
        for (const fs::directory_entry& entry : fs::directory_iterator(dir, ec)) {
            if (!entry.is_regular_file()) continue;
            if (wildcard_match(leaf, entry.path().filename().string()))
                matched.push_back(entry.path().string());
        }
        std::sort(matched.begin(), matched.end());
        out.insert(out.end(), matched.begin(), matched.end());
    }
    return out;
}

int run_command(const std::string& config_path, const std::vector<std::string>& raw_sets,
                const std::string& out_dir, bool quiet) {
    char errbuf[kErrbufLen] = {};
    osgp_config* cfg = nullptr;
    osgp_status status = osgp_config_load(config_path.c_str(), &cfg, errbuf, kErrbufLen);
    if (status != OSGP_OK) return fail(status, errbuf);
    std::unique_ptr<osgp_config, decltype(&osgp_config_free)> cfg_guard(cfg,
                                                                        osgp_config_free);

    for (const KeyValue& kv : split_overrides(raw_sets)) {
        status = osgp_config_set(cfg, kv.key.c_str(), kv.value.c_str(), errbuf, kErrbufLen);
        if (status != OSGP_OK) return fail(status, errbuf);
    }
    if (!out_dir.empty()) {
        status = osgp_config_set(cfg, "output_dir", out_dir.c_str(), errbuf, kErrbufLen);
        if (status != OSGP_OK) return fail(status, errbuf);
    }

    osgp_runlog* log = nullptr;
    status = osgp_run(cfg, &log, errbuf, kErrbufLen);
    if (status != OSGP_OK) return fail(status, errbuf);
    std::unique_ptr<osgp_runlog, decltype(&osgp_runlog_free)> log_guard(log,
                                                                        osgp_runlog_free);

    char* csv_path = nullptr;
    status = osgp_runlog_write_csv(log, nullptr, &csv_path, errbuf, kErrbufLen);
    if (status != OSGP_OK) return fail(status, errbuf);
    std::unique_ptr<char, decltype(&osgp_string_free)> path_guard(csv_path,
                                                                  osgp_string_free);

    if (!quiet) {
        char* summary = nullptr;
        status = osgp_runlog_summary(log, &summary, errbuf, kErrbufLen);
        if (status != OSGP_OK) return fail(status, errbuf);
        std::printf("%s", summary);
        osgp_string_free(summary);
    }
    std::printf("log_csv = %s\n", csv_path);
    return 0;
}

int batch_command(const std::string& spec_path, const std::vector<std::string>& raw_sets,
                  const std::string& out_dir) {
    char errbuf[kErrbufLen] = {};
    osgp_batch* spec = nullptr;
    osgp_status status = osgp_batch_load(spec_path.c_str(), &spec, errbuf, kErrbufLen);
    if (status != OSGP_OK) return fail(status, errbuf);
    std::unique_ptr<osgp_batch, decltype(&osgp_batch_free)> spec_guard(spec,
                                                                       osgp_batch_free);

    for (const KeyValue& kv : split_overrides(raw_sets)) {
        status = osgp_batch_set(spec, kv.key.c_str(), kv.value.c_str(), errbuf, kErrbufLen);
        if (status != OSGP_OK) return fail(status, errbuf);
    }

    char* summary_path = nullptr;
    uint32_t failed = 0;
    status = osgp_batch_run(spec, out_dir.empty() ? nullptr : out_dir.c_str(),
                            &summary_path, &failed, errbuf, kErrbufLen);
    if (status != OSGP_OK) return fail(status, errbuf);
    std::unique_ptr<char, decltype(&osgp_string_free)> path_guard(summary_path,
                                                                  osgp_string_free);

    std::printf("summary_csv = %s\n", summary_path);
    if (failed != 0) {
        std::fprintf(stderr, "warning: %u run(s) failed; see summary\n", failed);
        return 1;
    }
    return 0;
}

int gen_data_command(const std::string& problem, const std::string& out_csv, uint64_t rows,
                     uint64_t seed, bool series) {
    char errbuf[kErrbufLen] = {};
    const osgp_status status =
        osgp_gen_data(problem.c_str(), rows, seed, series ? 1 : 0, out_csv.c_str(), errbuf,
                      kErrbufLen);
    if (status != OSGP_OK) return fail(status, errbuf);
    std::printf("wrote %s\n", out_csv.c_str());
    return 0;
}

int aggregate_command(const std::string& quantity, std::vector<std::string> positionals,
                      uint64_t step) {
    const std::string out_csv = positionals.back();
    positionals.pop_back();
    const std::vector<std::string> inputs = expand_inputs(positionals);
    if (inputs.empty()) {
        std::fprintf(stderr, "error: no input CSV files matched\n");
        return static_cast<int>(OSGP_ERROR_INVALID_ARGUMENT);
    }

    std::vector<const char*> paths;
    paths.reserve(inputs.size());
    for (const std::string& path : inputs) paths.push_back(path.c_str());

    char errbuf[kErrbufLen] = {};
    const osgp_status status = osgp_aggregate(paths.data(), paths.size(), quantity.c_str(),
                                              step, out_csv.c_str(), errbuf, kErrbufLen);
    if (status != OSGP_OK) return fail(status, errbuf);
    std::printf("wrote %s (%zu runs)\n", out_csv.c_str(), inputs.size());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Genetic programming with strict offspring selection"};
    app.set_version_flag("--version", std::string(osgp_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> run_sets;
    std::string run_out_dir;
    bool quiet = false;
    CLI::App* run = app.add_subcommand("run", "Execute a single configured run");
    run->add_option("config", config_path, "Run configuration file")->required();
    run->add_option("--set", run_sets, "Override a config key (key=value, repeatable)");
    run->add_option("--out-dir", run_out_dir, "Directory for the per-generation CSV");
    run->add_flag("--quiet", quiet, "Suppress the end-of-run summary");

    std::string spec_path;
    std::vector<std::string> batch_sets;
    std::string batch_out_dir;
    CLI::App* batch =
        app.add_subcommand("batch", "Run repetitions of every configured crossover");
    batch->add_option("spec", spec_path, "Batch specification file")->required();
    batch->add_option("--set", batch_sets, "Override a spec key (key=value, repeatable)");
    batch->add_option("--out-dir", batch_out_dir, "Directory for run CSVs and summary.csv");

    std::string problem;
    std::string data_out;
    uint64_t rows = 0;
    uint64_t seed = 1;
    bool series = false;
    CLI::App* gen = app.add_subcommand("gen-data", "Write a benchmark dataset as CSV");
    gen->add_option("problem", problem, "poly10 or mackey_glass")->required();
    gen->add_option("output", data_out, "Destination CSV path")->required();
    gen->add_option("--rows", rows, "Row count (0 = problem default)");
    gen->add_option("--seed", seed, "Generator seed");
    gen->add_flag("--series", series, "Emit the raw time series instead of lagged rows");

    std::string quantity;
    std::vector<std::string> agg_paths;
    uint64_t step = 0;
    CLI::App* agg = app.add_subcommand(
        "aggregate", "Combine per-generation logs into min/median/max curves");
    agg->add_option("quantity", quantity,
                    "best_quality, avg_tree_size or selection_pressure")
        ->required();
    agg->add_option("files", agg_paths, "Input CSVs (globs allowed), then the output CSV")
        ->required()
        ->expected(-2);
    agg->add_option("--step", step, "Evaluations grid step (0 = automatic)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_command(config_path, run_sets, run_out_dir, quiet);
    if (batch->parsed()) return batch_command(spec_path, batch_sets, batch_out_dir);
    if (gen->parsed()) return gen_data_command(problem, data_out, rows, seed, series);
    if (agg->parsed()) return aggregate_command(quantity, agg_paths, step);
    return 0;
}
