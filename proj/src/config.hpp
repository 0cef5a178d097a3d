// SPDX-License-Identifier: MIT

#ifndef OSGP_CONFIG_HPP
#define OSGP_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genops.hpp"

namespace osgp {

enum class ProblemKind { Poly10, MackeyGlass, Classification };

std::string_view to_string(ProblemKind kind);
std::optional<ProblemKind> problem_kind_from(std::string_view name);

uint64_t default_max_evaluations(ProblemKind kind);
size_t default_rows(ProblemKind kind);

// Full parameterization of one run. Parsed from `key = value` text files
// (# starts a comment); unset fields keep the defaults below, with rows and
// max_evaluations resolved per problem.
struct RunConfig {
    ProblemKind problem = ProblemKind::Poly10;
    // Row count for generated datasets (poly10 samples, lag-embedded rows);
    // 0 means the per-problem default.
    size_t rows = 0;
    // Classification input file, or an optional precomputed series for the
    // time-series problem (one value per line, header allowed).
    std::string data_file;
    std::string target_column = "class";
    // Raw target cell -> numeric value, e.g. {"2": 2, "4": 4}.
    std::map<std::string, double> target_map;
    std::vector<std::string> exclude_columns;
    // Retained rows for the classification loader.
    size_t sample_count = 400;

    size_t population_size = 1000;
    double mutation_rate = 0.15;
    CrossoverKind crossover = CrossoverKind::Standard;
    double max_selection_pressure = 200.0;
    // 0 means the per-problem default.
    uint64_t max_evaluations = 0;
    size_t init_size_min = 3;
    size_t init_size_max = 50;
    uint64_t seed = 1;
    std::string output_dir = ".";

    // Fills rows and max_evaluations when left at 0.
    void resolve_defaults();
    // Throws ValidationError naming the offending field.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

struct BatchSpec {
    RunConfig base;
    std::vector<CrossoverKind> kinds = {
        CrossoverKind::Standard, CrossoverKind::OnePoint,  CrossoverKind::Uniform,
        CrossoverKind::SizeFair, CrossoverKind::Homologous, CrossoverKind::Mixed};
    size_t repetitions = 20;
    uint64_t base_seed = 1;
    // 0 picks the hardware concurrency.
    size_t workers = 0;

    void validate() const;

    bool operator==(const BatchSpec&) const = default;
};

// Returns false when the key is not a run-config key; throws ParseError for
// malformed values and ValidationError for out-of-vocabulary names.
bool apply_config_key(RunConfig& cfg, std::string_view key, std::string_view value);
bool apply_batch_key(BatchSpec& spec, std::string_view key, std::string_view value);

RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::string& path);
BatchSpec parse_batch_text(std::string_view text);
BatchSpec parse_batch(const std::string& path);

std::string render_config(const RunConfig& cfg);
std::string render_batch(const BatchSpec& spec);

} // namespace osgp

#endif
