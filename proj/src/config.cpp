// SPDX-License-Identifier: MIT

#include "config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dataset.hpp"
#include "errors.hpp"

namespace osgp {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t start = 0;
    while (start <= s.size()) {
        const size_t end = s.find(sep, start);
        if (end == std::string_view::npos) {
            out.push_back(s.substr(start));
            break;
        }
        out.push_back(s.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

uint64_t parse_u64(std::string_view key, std::string_view value) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ParseError(std::string(key) + ": not a non-negative integer: '" +
                         std::string(value) + "'");
    return v;
}

double parse_f64(std::string_view key, std::string_view value) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ParseError(std::string(key) + ": not a number: '" + std::string(value) + "'");
    return v;
}

constexpr std::string_view kCrossoverChoices =
    "standard, onepoint, uniform, sizefair, homologous, mixed";

CrossoverKind parse_crossover(std::string_view key, std::string_view value) {
    auto kind = crossover_kind_from(value);
    if (!kind)
        throw ValidationError(std::string(key) + ": unknown crossover '" + std::string(value) +
                              "'; valid kinds: " + std::string(kCrossoverChoices));
    return *kind;
}

std::map<std::string, double> parse_target_map(std::string_view value) {
    std::map<std::string, double> out;
    if (trim(value).empty()) return out;
    for (std::string_view entry : split(value, ',')) {
        entry = trim(entry);
        const size_t colon = entry.rfind(':');
        if (colon == std::string_view::npos)
            throw ParseError("target_map: expected 'label:value' entries, got '" +
                             std::string(entry) + "'");
        const std::string_view label = trim(entry.substr(0, colon));
        if (label.empty()) throw ParseError("target_map: empty label");
        out[std::string(label)] = parse_f64("target_map", trim(entry.substr(colon + 1)));
    }
    return out;
}

std::vector<std::string> parse_name_list(std::string_view value) {
    std::vector<std::string> out;
    if (trim(value).empty()) return out;
    for (std::string_view entry : split(value, ',')) {
        entry = trim(entry);
        if (!entry.empty()) out.emplace_back(entry);
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Runs fn over every `key = value` line, rethrowing with the line number.
template <typename Fn>
void for_each_kv(std::string_view text, Fn&& fn) {
    size_t lineno = 0;
    for (std::string_view line : split(text, '\n')) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        try {
            if (!fn(key, value))
                throw ParseError("unknown key '" + std::string(key) + "'");
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

} // namespace

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::Poly10: return "poly10";
    case ProblemKind::MackeyGlass: return "mackey_glass";
    case ProblemKind::Classification: return "classification";
    }
    return "?";
}

std::optional<ProblemKind> problem_kind_from(std::string_view name) {
    for (ProblemKind k : {ProblemKind::Poly10, ProblemKind::MackeyGlass,
                          ProblemKind::Classification})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

uint64_t default_max_evaluations(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::Poly10: return 1'000'000;
    case ProblemKind::MackeyGlass: return 5'000'000;
    case ProblemKind::Classification: return 2'000'000;
    }
    return 1'000'000;
}

size_t default_rows(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::Poly10: return 100;
    case ProblemKind::MackeyGlass: return 928;
    case ProblemKind::Classification: return 0;
    }
    return 0;
}

void RunConfig::resolve_defaults() {
    if (rows == 0) rows = default_rows(problem);
    if (max_evaluations == 0) max_evaluations = default_max_evaluations(problem);
}

void RunConfig::validate() const {
    if (population_size < 2)
        throw ValidationError("population_size: must be at least 2");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
        throw ValidationError("mutation_rate: must lie in [0, 1]");
    if (!(max_selection_pressure > 1.0))
        throw ValidationError("max_selection_pressure: must be greater than 1");
    if (max_evaluations < 1)
        throw ValidationError("max_evaluations: must be at least 1");
    if (init_size_min < 1 || init_size_min > init_size_max)
        throw ValidationError("init_size_min/init_size_max: need 1 <= min <= max");
    if (output_dir.empty())
        throw ValidationError("output_dir: must not be empty");
    if (problem != ProblemKind::Classification && rows < 1)
        throw ValidationError("rows: must be at least 1");
    if (problem == ProblemKind::Classification) {
        if (data_file.empty())
            throw ValidationError("data_file: required for the classification problem");
        if (target_column.empty())
            throw ValidationError("target_column: must not be empty");
        if (sample_count < 1)
            throw ValidationError("sample_count: must be at least 1");
    }
    if (!data_file.empty() && !std::filesystem::exists(data_file))
        throw ValidationError("data_file: no such file: " + data_file);
}

void BatchSpec::validate() const {
    base.validate();
    if (kinds.empty()) throw ValidationError("crossovers: must name at least one kind");
    if (repetitions < 1) throw ValidationError("repetitions: must be at least 1");
}

bool apply_config_key(RunConfig& cfg, std::string_view key, std::string_view value) {
    if (key == "problem") {
        auto kind = problem_kind_from(value);
        if (!kind)
            throw ValidationError("problem: unknown problem '" + std::string(value) +
                                  "'; valid: poly10, mackey_glass, classification");
        cfg.problem = *kind;
    } else if (key == "rows") {
        cfg.rows = parse_u64(key, value);
    } else if (key == "data_file") {
        cfg.data_file = std::string(value);
    } else if (key == "target_column") {
        cfg.target_column = std::string(value);
    } else if (key == "target_map") {
        cfg.target_map = parse_target_map(value);
    } else if (key == "exclude_columns") {
        cfg.exclude_columns = parse_name_list(value);
    } else if (key == "sample_count") {
        cfg.sample_count = parse_u64(key, value);
    } else if (key == "population_size") {
        cfg.population_size = parse_u64(key, value);
    } else if (key == "mutation_rate") {
        cfg.mutation_rate = parse_f64(key, value);
    } else if (key == "crossover") {
        cfg.crossover = parse_crossover(key, value);
    } else if (key == "max_selection_pressure") {
        cfg.max_selection_pressure = parse_f64(key, value);
    } else if (key == "max_evaluations") {
        cfg.max_evaluations = parse_u64(key, value);
    } else if (key == "init_size_min") {
        cfg.init_size_min = parse_u64(key, value);
    } else if (key == "init_size_max") {
        cfg.init_size_max = parse_u64(key, value);
    } else if (key == "seed") {
        cfg.seed = parse_u64(key, value);
    } else if (key == "output_dir") {
        cfg.output_dir = std::string(value);
    } else {
        return false;
    }
    return true;
}

bool apply_batch_key(BatchSpec& spec, std::string_view key, std::string_view value) {
    if (key == "crossovers") {
        std::vector<CrossoverKind> kinds;
        for (const std::string& name : parse_name_list(value))
            kinds.push_back(parse_crossover("crossovers", name));
        if (kinds.empty()) throw ValidationError("crossovers: empty list");
        spec.kinds = std::move(kinds);
    } else if (key == "repetitions") {
        spec.repetitions = parse_u64(key, value);
    } else if (key == "base_seed") {
        spec.base_seed = parse_u64(key, value);
    } else if (key == "workers") {
        spec.workers = parse_u64(key, value);
    } else {
        return apply_config_key(spec.base, key, value);
    }
    return true;
}

RunConfig parse_config_text(std::string_view text) {
    RunConfig cfg;
    for_each_kv(text, [&cfg](std::string_view k, std::string_view v) {
        return apply_config_key(cfg, k, v);
    });
    cfg.resolve_defaults();
    cfg.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) { return parse_config_text(read_file(path)); }

BatchSpec parse_batch_text(std::string_view text) {
    BatchSpec spec;
    for_each_kv(text, [&spec](std::string_view k, std::string_view v) {
        return apply_batch_key(spec, k, v);
    });
    spec.base.resolve_defaults();
    spec.validate();
    return spec;
}

BatchSpec parse_batch(const std::string& path) { return parse_batch_text(read_file(path)); }

namespace {

void render_config_into(const RunConfig& cfg, std::string& out) {
    auto kv = [&out](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    kv("problem", std::string(to_string(cfg.problem)));
    kv("rows", std::to_string(cfg.rows));
    kv("data_file", cfg.data_file);
    kv("target_column", cfg.target_column);
    std::string map_text;
    for (const auto& [label, value] : cfg.target_map) {
        if (!map_text.empty()) map_text += ',';
        map_text += label + ":" + format_real(value);
    }
    kv("target_map", map_text);
    std::string excl;
    for (const auto& name : cfg.exclude_columns) {
        if (!excl.empty()) excl += ',';
        excl += name;
    }
    kv("exclude_columns", excl);
    kv("sample_count", std::to_string(cfg.sample_count));
    kv("population_size", std::to_string(cfg.population_size));
    kv("mutation_rate", format_real(cfg.mutation_rate));
    kv("crossover", std::string(to_string(cfg.crossover)));
    kv("max_selection_pressure", format_real(cfg.max_selection_pressure));
    kv("max_evaluations", std::to_string(cfg.max_evaluations));
    kv("init_size_min", std::to_string(cfg.init_size_min));
    kv("init_size_max", std::to_string(cfg.init_size_max));
    kv("seed", std::to_string(cfg.seed));
    kv("output_dir", cfg.output_dir);
}

} // namespace

std::string render_config(const RunConfig& cfg) {
    std::string out;
    render_config_into(cfg, out);
    return out;
}

std::string render_batch(const BatchSpec& spec) {
    std::string out;
    render_config_into(spec.base, out);
    std::string kinds;
    for (CrossoverKind k : spec.kinds) {
        if (!kinds.empty()) kinds += ',';
        kinds += to_string(k);
    }
    out += "crossovers = " + kinds + '\n';
    out += "repetitions = " + std::to_string(spec.repetitions) + '\n';
    out += "base_seed = " + std::to_string(spec.base_seed) + '\n';
    out += "workers = " + std::to_string(spec.workers) + '\n';
    return out;
}

} // namespace osgp
