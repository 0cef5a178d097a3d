// SPDX-License-Identifier: MIT

#ifndef OSGP_RUNIO_HPP
#define OSGP_RUNIO_HPP

#include <string>
#include <vector>

#include "engine.hpp"

namespace osgp {

// Writes `<problem>_<kind>_<seed>.csv` under dir with the per-generation
// schema `generation,evaluations,best_quality,avg_tree_size,
// selection_pressure`; returns the file path.
std::string emit_logs(const RunLog& log, const std::string& dir);

std::vector<GenerationLog> parse_log_csv(const std::string& path);

struct AggregateRow {
    uint64_t evaluations = 0;
    double min = 0;
    double median = 0;
    double max = 0;
};

struct AggregateTable {
    std::string quantity;
    std::vector<AggregateRow> rows;
    size_t runs = 0;
    size_t unparseable_files = 0;
};

// Resamples each run's quantity onto a shared evaluations grid (linear
// interpolation between generation points, first/last value carried outside
// a run's own range) and reduces to min/median/max per grid point. step 0
// picks roughly 1/200 of the grid span. Quantity is one of best_quality,
// avg_tree_size, selection_pressure.
AggregateTable aggregate(const std::vector<std::string>& files, const std::string& quantity,
                         uint64_t step = 0);

void write_aggregate_csv(const AggregateTable& table, const std::string& path);

struct BatchRunResult {
    CrossoverKind kind = CrossoverKind::Standard;
    uint64_t seed = 0;
    std::string csv_path;
    bool failed = false;
    std::string error;
    double final_best_quality = 0;
    double final_avg_tree_size = 0;
    double final_selection_pressure = 0;
};

struct BatchOutcome {
    std::vector<BatchRunResult> runs;
    std::string summary_path;
};

// Executes |kinds| x repetitions runs (seed = base_seed + run index, runs
// ordered by kind then repetition), each writing its own per-generation CSV,
// then writes summary.csv with per-kind final-quality and size statistics.
// Worker threads only affect scheduling; outputs are identical regardless.
// Individual run failures are recorded, not fatal.
BatchOutcome run_batch(const BatchSpec& spec, const std::string& out_dir_override = "");

} // namespace osgp

#endif
