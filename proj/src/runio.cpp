// SPDX-License-Identifier: MIT

#include "runio.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "dataset.hpp"

namespace osgp {

namespace {

constexpr std::string_view kLogHeader =
    "generation,evaluations,best_quality,avg_tree_size,selection_pressure";

void write_text_file(const std::string& path, const std::string& text) {
    FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open for writing: " + path);
    if (!text.empty() && std::fwrite(text.data(), 1, text.size(), f) != text.size()) {
        std::fclose(f);
        throw IoError("short write: " + path);
    }
    if (std::fclose(f) != 0) throw IoError("failed to close: " + path);
}

} // namespace

std::string emit_logs(const RunLog& log, const std::string& dir) {
    std::string text(kLogHeader);
    text += '\n';
    for (const GenerationLog& g : log.generations) {
        text += std::to_string(g.generation);
        text += ',';
        text += std::to_string(g.cumulative_evaluations);
        text += ',';
        text += format_real(g.best_quality);
        text += ',';
        text += format_real(g.average_tree_size);
        text += ',';
        text += format_real(g.selection_pressure);
        text += '\n';
    }
    const std::string name = std::string(to_string(log.config.problem)) + "_" +
                             std::string(to_string(log.config.crossover)) + "_" +
                             std::to_string(log.config.seed) + ".csv";
    if (dir.empty() || dir == ".") {
        write_text_file(name, text);
        return name;
    }
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    write_text_file(path, text);
    return path;
}

namespace {

template <typename T>
T parse_field(std::string_view text, const std::string& path, size_t lineno) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError(path + ": line " + std::to_string(lineno) + ": bad field '" +
                         std::string(text) + "'");
    return v;
}

} // namespace

std::vector<GenerationLog> parse_log_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kLogHeader)
        throw ParseError(path + ": unexpected header '" + line + "'");

    std::vector<GenerationLog> out;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::string_view rest(line);
        std::string_view field[5];
        for (int i = 0; i < 5; ++i) {
            const size_t comma = rest.find(',');
            if ((comma == std::string_view::npos) != (i == 4))
                throw ParseError(path + ": line " + std::to_string(lineno) +
                                 ": expected 5 fields");
            field[i] = rest.substr(0, comma);
            rest = comma == std::string_view::npos ? std::string_view{}
                                                   : rest.substr(comma + 1);
        }
        GenerationLog g;
        g.generation = parse_field<uint32_t>(field[0], path, lineno);
        g.cumulative_evaluations = parse_field<uint64_t>(field[1], path, lineno);
        g.best_quality = parse_field<double>(field[2], path, lineno);
        g.average_tree_size = parse_field<double>(field[3], path, lineno);
        g.selection_pressure = parse_field<double>(field[4], path, lineno);
        out.push_back(g);
    }
    if (out.empty()) throw ParseError(path + ": no data rows");
    return out;
}

namespace {

double quantity_of(const GenerationLog& g, int selector) {
    switch (selector) {
    case 0: return g.best_quality;
    case 1: return g.average_tree_size;
    default: return g.selection_pressure;
    }
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Piecewise-linear read of a run's quantity at an evaluations count; clamps
// to the first/last generation value outside the run's own range.
double value_at(const std::vector<GenerationLog>& run, int selector, uint64_t evals) {
    if (evals <= run.front().cumulative_evaluations)
        return quantity_of(run.front(), selector);
    if (evals >= run.back().cumulative_evaluations)
        return quantity_of(run.back(), selector);
    size_t hi = 1;
    while (run[hi].cumulative_evaluations < evals) ++hi;
    const GenerationLog& a = run[hi - 1];
    const GenerationLog& b = run[hi];
    const double va = quantity_of(a, selector);
    const double vb = quantity_of(b, selector);
    const double span =
        static_cast<double>(b.cumulative_evaluations - a.cumulative_evaluations);
    const double t = static_cast<double>(evals - a.cumulative_evaluations) / span;
    return va + t * (vb - va);
}

} // namespace

AggregateTable aggregate(const std::vector<std::string>& files, const std::string& quantity,
                         uint64_t step) {
    int selector;
    if (quantity == "best_quality")
        selector = 0;
    else if (quantity == "avg_tree_size")
        selector = 1;
    else if (quantity == "selection_pressure")
        selector = 2;
    else
        throw ValidationError("quantity must be one of best_quality, avg_tree_size, "
                              "selection_pressure");

    AggregateTable table;
    table.quantity = quantity;
    std::vector<std::vector<GenerationLog>> runs;
    for (const std::string& path : files) {
        try {
            runs.push_back(parse_log_csv(path));
        } catch (const Error&) {
            ++table.unparseable_files;
        }
    }
    if (runs.empty()) throw ValidationError("no parseable log files");
    table.runs = runs.size();

    uint64_t start = UINT64_MAX, end = 0;
    for (const auto& run : runs) {
        start = std::min(start, run.front().cumulative_evaluations);
        end = std::max(end, run.back().cumulative_evaluations);
    }
    if (step == 0) step = std::max<uint64_t>(1, (end - start) / 200);

    std::vector<uint64_t> grid;
    for (uint64_t e = start; e < end; e += step) grid.push_back(e);
    grid.push_back(end);

    std::vector<double> values(runs.size());
    for (uint64_t e : grid) {
        for (size_t r = 0; r < runs.size(); ++r) values[r] = value_at(runs[r], selector, e);
        AggregateRow row;
        row.evaluations = e;
        row.min = *std::min_element(values.begin(), values.end());
        row.max = *std::max_element(values.begin(), values.end());
        row.median = median_of(values);
        table.rows.push_back(row);
    }
    return table;
}

void write_aggregate_csv(const AggregateTable& table, const std::string& path) {
    std::string text = "evaluations,min,median,max\n";
    for (const AggregateRow& row : table.rows) {
        text += std::to_string(row.evaluations);
        text += ',';
        text += format_real(row.min);
        text += ',';
        text += format_real(row.median);
        text += ',';
        text += format_real(row.max);
        text += '\n';
    }
    write_text_file(path, text);
}

BatchOutcome run_batch(const BatchSpec& spec, const std::string& out_dir_override) {
    spec.validate();
    const std::string out_dir =
        out_dir_override.empty() ? spec.base.output_dir : out_dir_override;
    std::filesystem::create_directories(out_dir);

    const size_t reps = spec.repetitions;
    const size_t total = spec.kinds.size() * reps;
    std::vector<RunConfig> configs(total);
    BatchOutcome outcome;
    outcome.runs.resize(total);
    for (size_t ki = 0; ki < spec.kinds.size(); ++ki) {
        for (size_t r = 0; r < reps; ++r) {
            const size_t idx = ki * reps + r;
            RunConfig cfg = spec.base;
            cfg.crossover = spec.kinds[ki];
            cfg.seed = spec.base_seed + idx;
            cfg.output_dir = out_dir;
            configs[idx] = std::move(cfg);
            outcome.runs[idx].kind = spec.kinds[ki];
            outcome.runs[idx].seed = spec.base_seed + idx;
        }
    }

    size_t workers = spec.workers > 0
                         ? spec.workers
                         : std::max<size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, total);

    std::atomic<size_t> cursor{0};
    auto work = [&]() {
        for (;;) {
            const size_t idx = cursor.fetch_add(1);
            if (idx >= total) return;
            BatchRunResult& slot = outcome.runs[idx];
            try {
                const RunLog log = run(configs[idx]);
                slot.csv_path = emit_logs(log, out_dir);
                slot.final_best_quality = log.best_quality;
                slot.final_avg_tree_size = log.generations.back().average_tree_size;
                slot.final_selection_pressure = log.generations.back().selection_pressure;
            } catch (const std::exception& e) {
                slot.failed = true;
                slot.error = e.what();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    std::string text = "crossover,runs,failed,best_quality,median_quality,worst_quality,"
                       "median_final_avg_tree_size,median_final_selection_pressure\n";
    for (size_t ki = 0; ki < spec.kinds.size(); ++ki) {
        std::vector<double> quality, size, pressure;
        size_t failed = 0;
        for (size_t r = 0; r < reps; ++r) {
            const BatchRunResult& slot = outcome.runs[ki * reps + r];
            if (slot.failed) {
                ++failed;
                continue;
            }
            quality.push_back(slot.final_best_quality);
            size.push_back(slot.final_avg_tree_size);
            pressure.push_back(slot.final_selection_pressure);
        }
        text += std::string(to_string(spec.kinds[ki]));
        text += ',' + std::to_string(reps);
        text += ',' + std::to_string(failed);
        if (quality.empty()) {
            text += ",nan,nan,nan,nan,nan\n";
            continue;
        }
        text += ',' + format_real(*std::min_element(quality.begin(), quality.end()));
        text += ',' + format_real(median_of(quality));
        text += ',' + format_real(*std::max_element(quality.begin(), quality.end()));
        text += ',' + format_real(median_of(size));
        text += ',' + format_real(median_of(pressure));
        text += '\n';
    }
    outcome.summary_path = out_dir + "/summary.csv";
    write_text_file(outcome.summary_path, text);
    return outcome;
}

} // namespace osgp
