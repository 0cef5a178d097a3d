// SPDX-License-Identifier: MIT

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "runio.hpp"

using namespace osgp;

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

RunConfig desk_config(CrossoverKind kind, uint64_t seed, uint64_t max_evals) {
    RunConfig cfg;
    cfg.problem = ProblemKind::Poly10;
    cfg.population_size = 100;
    cfg.max_evaluations = max_evals;
    cfg.crossover = kind;
    cfg.seed = seed;
    cfg.resolve_defaults();
    cfg.validate();
    return cfg;
}

ExpressionTree random_tree(Rng& rng, const PrimitiveSet& prims, size_t lo, size_t hi) {
    return ptc2(rng, rng.integer(lo, hi), prims);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Criterion 1: every accepted non-elite child is strictly better than the
// better of its parents (three runs, zero tolerance, under 120 s).
Outcome strict_acceptance(std::vector<RunLog>& sink) {
    const auto start = Clock::now();
    uint64_t accepted = 0, violations = 0;
    for (uint64_t seed = 1; seed <= 3; ++seed) {
        const RunConfig cfg = desk_config(CrossoverKind::Standard, seed, 100'000);
        RunHooks hooks;
        hooks.on_offspring = [&](const OffspringAudit& audit) {
            if (!audit.success) return;
            ++accepted;
            const double better =
                std::min(audit.parent1_quality, audit.parent2_quality);
            if (!(audit.child_quality < better)) ++violations;
        };
        sink.push_back(run(cfg, &hooks));
    }
    const double secs = seconds_since(start);
    Outcome out;
    out.pass = violations == 0 && accepted > 0 && secs < 120.0;
    out.detail = std::to_string(accepted) + " accepted, " + std::to_string(violations) +
                 " violations, 3 runs in " + fmt1(secs) + " s (limit 120)";
    return out;
}

// Criterion 2: every logged generation's selection pressure is exactly the
// generation's evaluation count divided by the population size. The check
// compares the logged double against the recomputed ratio bit for bit;
// multiplying the rounded ratio back by the population size is not an IEEE
// identity, the ratio itself is.
Outcome pressure_accounting(const std::vector<RunLog>& logs) {
    size_t rows = 0, mismatches = 0;
    for (const RunLog& log : logs) {
        uint64_t prev = 0;
        for (const GenerationLog& g : log.generations) {
            const uint64_t evals = g.cumulative_evaluations - prev;
            prev = g.cumulative_evaluations;
            ++rows;
            const double exact = static_cast<double>(evals) /
                                 static_cast<double>(log.config.population_size);
            if (g.selection_pressure != exact) ++mismatches;
        }
    }
    Outcome out;
    out.pass = rows > 0 && mismatches == 0;
    out.detail = std::to_string(rows) + " generation rows across " +
                 std::to_string(logs.size()) + " runs, " + std::to_string(mismatches) +
                 " mismatches";
    return out;
}

// Criterion 3: standard crossover reduces the best MSE at least 100-fold
// from generation 0 in at least 4 of 5 seeds, under 300 s.
Outcome quality_trend(std::vector<RunLog>& sink, double& secs_out) {
    const auto start = Clock::now();
    int hits = 0;
    double worst_factor = std::numeric_limits<double>::infinity();
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        RunLog log = run(desk_config(CrossoverKind::Standard, seed, 200'000));
        const double initial = log.generations.front().best_quality;
        const double final_q = log.generations.back().best_quality;
        if (final_q <= initial / 100.0) ++hits;
        const double factor = final_q > 0 ? initial / final_q
                                          : std::numeric_limits<double>::infinity();
        worst_factor = std::min(worst_factor, factor);
        sink.push_back(std::move(log));
    }
    secs_out = seconds_since(start);
    Outcome out;
    out.pass = hits >= 4 && secs_out < 300.0;
    out.detail = std::to_string(hits) + "/5 seeds improved 100x (worst factor " +
                 fmt1(worst_factor) + ") in " + fmt1(secs_out) + " s (limit 300)";
    return out;
}

struct ShapeTrace {
    size_t generation1 = 0;
    size_t final_pop = 0;
    bool have_generation1 = false;
};

// Runs the one-point desk set shared by criteria 4 and 5, recording distinct
// shape-signature counts per adopted population.
std::vector<ShapeTrace> run_onepoint_set(std::vector<RunLog>& sink, double& secs_out) {
    const auto start = Clock::now();
    std::vector<ShapeTrace> traces;
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        ShapeTrace trace;
        RunHooks hooks;
        hooks.on_population = [&trace](const Population& pop) {
            std::set<ShapeSignature> sigs;
            for (const Individual& ind : pop.members)
                sigs.insert(shape_signature(ind.tree));
            if (pop.generation == 1) {
                trace.generation1 = sigs.size();
                trace.have_generation1 = true;
            }
            trace.final_pop = sigs.size();
        };
        sink.push_back(run(desk_config(CrossoverKind::OnePoint, seed, 200'000), &hooks));
        traces.push_back(trace);
    }
    secs_out = seconds_since(start);
    return traces;
}

// Criterion 4: median final average tree size grows at least 3x under
// standard crossover and stays within 2x under one-point, under 600 s for
// the desk runs involved.
Outcome size_growth(const std::vector<RunLog>& standard_logs,
                    const std::vector<RunLog>& onepoint_logs, double desk_secs) {
    if (standard_logs.empty() || onepoint_logs.empty())
        return {false, "prerequisite desk runs missing"};
    std::vector<double> std0, stdf, one0, onef;
    for (const RunLog& log : standard_logs) {
        std0.push_back(log.generations.front().average_tree_size);
        stdf.push_back(log.generations.back().average_tree_size);
    }
    for (const RunLog& log : onepoint_logs) {
        one0.push_back(log.generations.front().average_tree_size);
        onef.push_back(log.generations.back().average_tree_size);
    }
    const double grew = median(stdf) / median(std0);
    const double stayed = median(onef) / median(one0);
    Outcome out;
    out.pass = grew >= 3.0 && stayed <= 2.0 && desk_secs < 600.0;
    out.detail = "standard " + fmt1(grew) + "x (needs >= 3), onepoint " + fmt1(stayed) +
                 "x (needs <= 2), desk runs took " + fmt1(desk_secs) + " s (limit 600)";
    return out;
}

// Criterion 5: under one-point crossover the final population holds strictly
// fewer distinct tree shapes than generation 1, and every run ends at the
// pressure cap.
Outcome shape_freeze(const std::vector<RunLog>& onepoint_logs,
                     const std::vector<ShapeTrace>& traces) {
    int froze = 0, by_pressure = 0;
    size_t example_gen1 = 0, example_final = 0;
    for (size_t i = 0; i < onepoint_logs.size(); ++i) {
        const ShapeTrace& t = traces[i];
        if (t.have_generation1 && t.final_pop < t.generation1) {
            ++froze;
            example_gen1 = t.generation1;
            example_final = t.final_pop;
        }
        if (onepoint_logs[i].termination == TerminationReason::MaxSelectionPressure)
            ++by_pressure;
    }
    Outcome out;
    out.pass = froze == 5 && by_pressure == 5;
    out.detail = std::to_string(froze) + "/5 runs narrowed shapes (e.g. " +
                 std::to_string(example_gen1) + " -> " + std::to_string(example_final) +
                 "), " + std::to_string(by_pressure) + "/5 ended at the pressure cap";
    return out;
}

// Criterion 6: over 100 000 size-fair crossovers the inserted subtree never
// exceeds 2l+1 nodes and the mean size change stays within +-0.5, under
// 60 s.
Outcome sizefair_statistics() {
    const auto start = Clock::now();
    Rng rng(601);
    const PrimitiveSet prims = PrimitiveSet::arithmetic(10);
    const size_t trials = 100'000;
    size_t capped = 0;
    double delta_sum = 0;
    for (size_t i = 0; i < trials; ++i) {
        const ExpressionTree p1 = random_tree(rng, prims, 20, 49);
        const ExpressionTree p2 = random_tree(rng, prims, 20, 49);
        Rng probe = rng;
        const size_t cut = random_node_index(p1, probe, 0.9);
        const size_t removed = p1.subtree_size_at(cut);
        const ExpressionTree child = crossover_sizefair(p1, p2, rng);
        const size_t inserted = child.size() + removed - p1.size();
        if (inserted <= 2 * removed + 1) ++capped;
        delta_sum += static_cast<double>(child.size()) - static_cast<double>(p1.size());
    }
    const double mean_delta = delta_sum / static_cast<double>(trials);
    const double secs = seconds_since(start);
    Outcome out;
    out.pass = capped == trials && mean_delta >= -0.5 && mean_delta <= 0.5 &&
               secs < 60.0;
    out.detail = std::to_string(capped) + "/" + std::to_string(trials) +
                 " within 2l+1, mean size change " + fmt1(mean_delta) + " in " +
                 fmt1(secs) + " s (limit 60)";
    return out;
}

void oracle_region(const ExpressionTree& a, size_t ai, const ExpressionTree& b,
                   size_t bi, std::vector<std::array<size_t, 3>>& out) {
    const int arity_a = a[ai].sym.arity;
    const int arity_b = b[bi].sym.arity;
    const bool interior = arity_a == arity_b && arity_a >= 1;
    out.push_back({ai, bi, interior ? size_t{1} : size_t{0}});
    if (!interior) return;
    size_t ca = ai + 1, cb = bi + 1;
    for (int k = 0; k < arity_a; ++k) {
        oracle_region(a, ca, b, cb, out);
        ca += a[ca].length;
        cb += b[cb].length;
    }
}

// Criterion 7: the production common-region enumeration matches a
// brute-force recursive oracle on 1000 random pairs, exactly.
Outcome region_oracle() {
    Rng rng(701);
    const PrimitiveSet arith = PrimitiveSet::arithmetic(10);
    const PrimitiveSet rich = PrimitiveSet::extended(4);
    size_t matched = 0;
    const size_t trials = 1000;
    for (size_t i = 0; i < trials; ++i) {
        const PrimitiveSet& prims = i % 2 == 0 ? arith : rich;
        const ExpressionTree a = random_tree(rng, prims, 1, 30);
        const ExpressionTree b = random_tree(rng, prims, 1, 30);
        std::vector<std::array<size_t, 3>> expected;
        oracle_region(a, 0, b, 0, expected);
        const CommonRegion region = common_region(a, b);
        if (region.pairs.size() != expected.size()) continue;
        bool same = true;
        for (size_t p = 0; p < expected.size(); ++p) {
            const RegionPair& pair = region.pairs[p];
            if (pair.a_index != expected[p][0] || pair.b_index != expected[p][1] ||
                pair.interior != (expected[p][2] == 1)) {
                same = false;
                break;
            }
        }
        if (same) ++matched;
    }
    Outcome out;
    out.pass = matched == trials;
    out.detail = std::to_string(matched) + "/" + std::to_string(trials) +
                 " pairs matched the recursive oracle";
    return out;
}

// Criterion 8: an all-keep coin reproduces the first parent and an all-take
// coin reproduces the second, on 1000 random pairs.
Outcome uniform_extremes() {
    Rng rng(801);
    const PrimitiveSet prims = PrimitiveSet::arithmetic(10);
    size_t kept = 0, taken = 0;
    const size_t trials = 1000;
    for (size_t i = 0; i < trials; ++i) {
        const ExpressionTree p1 = random_tree(rng, prims, 1, 25);
        const ExpressionTree p2 = random_tree(rng, prims, 1, 25);
        const size_t pairs = common_region(p1, p2).pairs.size();
        if (crossover_uniform_decided(p1, p2, std::vector<bool>(pairs, false)) == p1)
            ++kept;
        if (crossover_uniform_decided(p1, p2, std::vector<bool>(pairs, true)) == p2)
            ++taken;
    }
    Outcome out;
    out.pass = kept == trials && taken == trials;
    out.detail = std::to_string(kept) + "/" + std::to_string(trials) +
                 " all-keep children equal p1, " + std::to_string(taken) + "/" +
                 std::to_string(trials) + " all-take equal p2";
    return out;
}

// Criterion 9: identical configs and seeds give byte-identical CSVs across
// two executions, including batches run serially versus in parallel.
Outcome determinism(std::vector<RunLog>& sink) {
    const fs::path root = "acceptance_determinism";
    fs::remove_all(root);
    fs::create_directories(root / "single_a");
    fs::create_directories(root / "single_b");

    RunConfig cfg;
    cfg.problem = ProblemKind::Poly10;
    cfg.population_size = 50;
    cfg.max_evaluations = 5000;
    cfg.crossover = CrossoverKind::Standard;
    cfg.seed = 9;
    cfg.resolve_defaults();
    cfg.validate();

    RunLog first = run(cfg);
    RunLog second = run(cfg);
    const std::string path_a = emit_logs(first, (root / "single_a").string());
    const std::string path_b = emit_logs(second, (root / "single_b").string());
    const bool single_same = slurp(path_a) == slurp(path_b);
    sink.push_back(std::move(first));
    sink.push_back(std::move(second));

    BatchSpec spec;
    spec.base = cfg;
    spec.kinds = {CrossoverKind::Standard, CrossoverKind::Mixed};
    spec.repetitions = 2;
    spec.base_seed = 40;
    spec.workers = 1;
    const BatchOutcome serial = run_batch(spec, (root / "batch_serial").string());
    spec.workers = 4;
    const BatchOutcome parallel = run_batch(spec, (root / "batch_parallel").string());

    bool batch_same = serial.runs.size() == parallel.runs.size() &&
                      slurp(serial.summary_path) == slurp(parallel.summary_path);
    size_t compared = 0;
    for (size_t i = 0; batch_same && i < serial.runs.size(); ++i) {
        batch_same = !serial.runs[i].failed && !parallel.runs[i].failed &&
                     slurp(serial.runs[i].csv_path) == slurp(parallel.runs[i].csv_path);
        ++compared;
    }
    fs::remove_all(root);

    Outcome out;
    out.pass = single_same && batch_same;
    out.detail = std::string("repeated run csv ") +
                 (single_same ? "identical" : "DIFFERS") + ", " +
                 std::to_string(compared) + " batch csvs plus summary " +
                 (batch_same ? "identical across 1 vs 4 workers" : "DIFFER");
    return out;
}

// Criterion 10: generated polynomial rows satisfy the target identity
// exactly; the time series stays finite, non-constant, inside (0,2) over
// 2000 samples; lag embedding yields the 928 x 9 training table.
Outcome benchmark_generators() {
    Rng rng(1001);
    const Dataset poly = gen_poly10(rng, 250);
    size_t exact = 0;
    for (size_t r = 0; r < poly.rows(); ++r) {
        const double* x = poly.row(r);
        const double y = x[0] * x[1] + x[2] * x[3] + x[4] * x[5] + x[0] * x[6] * x[8] +
                         x[2] * x[5] * x[9];
        if (y == x[10]) ++exact;
    }
    const bool poly_ok = poly.cols() == 11 && poly.target() == 10 && exact == 250;

    MackeyGlassParams series_params;
    series_params.count = 2000;
    const std::vector<double> series = gen_mackey_glass(series_params);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool finite = series.size() == 2000;
    for (const double v : series) {
        if (!std::isfinite(v)) finite = false;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const bool series_ok = finite && lo > 0.0 && hi < 2.0 && hi > lo;

    const std::vector<double> full = gen_mackey_glass();
    const Dataset table = lag_embed(full, mackey_glass_lags(), 928);
    bool embed_ok = table.rows() == 928 && table.cols() == 9 && table.target() == 8 &&
                    table.value(0, 8) == full[128];
    const std::vector<size_t>& lags = mackey_glass_lags();
    for (size_t r = 0; embed_ok && r < table.rows(); ++r) {
        for (size_t j = 0; j < lags.size(); ++j)
            if (table.value(r, j) != full[128 + r - lags[j]]) embed_ok = false;
        if (table.value(r, 8) != full[128 + r]) embed_ok = false;
    }

    Outcome out;
    out.pass = poly_ok && series_ok && embed_ok;
    out.detail = std::to_string(exact) + "/250 polynomial rows exact, series in [" +
                 fmt1(lo) + ", " + fmt1(hi) + "], embedded table " +
                 std::to_string(table.rows()) + " x " + std::to_string(table.cols()) +
                 (embed_ok ? " with exact lag cells" : " LAG MISMATCH");
    return out;
}

// Criterion 11: the mixed operator dispatches each concrete kind with
// frequency 0.2 +- 0.01 over 50 000 events.
Outcome mixed_dispatch() {
    Rng rng(1101);
    const PrimitiveSet prims = PrimitiveSet::arithmetic(10);
    const ExpressionTree p1 = ptc2(rng, 20, prims);
    const ExpressionTree p2 = ptc2(rng, 20, prims);
    const size_t trials = 50'000;
    std::array<uint64_t, 5> counts{};
    for (size_t i = 0; i < trials; ++i) {
        const CrossoverOutcome outcome = crossover(CrossoverKind::Mixed, p1, p2, rng);
        for (size_t k = 0; k < 5; ++k)
            if (kConcreteCrossovers[k] == outcome.used) ++counts[k];
    }
    double lo = 1.0, hi = 0.0;
    for (const uint64_t c : counts) {
        const double f = static_cast<double>(c) / static_cast<double>(trials);
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    Outcome out;
    out.pass = lo >= 0.19 && hi <= 0.21;
    out.detail = "dispatch frequencies in [" + std::to_string(lo) + ", " +
                 std::to_string(hi) + "], allowed [0.19, 0.21]";
    return out;
}

} // namespace

int main() {
    const auto start = Clock::now();
    std::vector<std::pair<std::string, Outcome>> results(11);

    auto guard = [&](size_t index, const std::string& name,
                     const std::function<Outcome()>& fn) {
        results[index].first = name;
        try {
            results[index].second = fn();
        } catch (const std::exception& e) {
            results[index].second = {false, std::string("exception: ") + e.what()};
        }
    };

    std::vector<RunLog> all_logs;
    std::vector<RunLog> standard_logs;
    std::vector<RunLog> onepoint_logs;
    std::vector<ShapeTrace> traces;
    double standard_secs = 0, onepoint_secs = 0;

    guard(0, "strict offspring acceptance", [&] { return strict_acceptance(all_logs); });
    guard(2, "quality trend on the polynomial", [&] {
        return quality_trend(standard_logs, standard_secs);
    });
    guard(4, "shape freeze under one-point", [&] {
        traces = run_onepoint_set(onepoint_logs, onepoint_secs);
        return shape_freeze(onepoint_logs, traces);
    });
    guard(3, "size growth contrast", [&] {
        return size_growth(standard_logs, onepoint_logs, standard_secs + onepoint_secs);
    });
    guard(5, "size-fair insertion statistics", [&] { return sizefair_statistics(); });
    guard(6, "common region oracle equivalence", [&] { return region_oracle(); });
    guard(7, "uniform crossover extremes", [&] { return uniform_extremes(); });
    guard(8, "byte-identical reruns", [&] { return determinism(all_logs); });
    guard(9, "benchmark generators", [&] { return benchmark_generators(); });
    guard(10, "mixed dispatch uniformity", [&] { return mixed_dispatch(); });

    for (const RunLog& log : standard_logs) all_logs.push_back(log);
    for (const RunLog& log : onepoint_logs) all_logs.push_back(log);
    guard(1, "selection pressure accounting", [&] {
        return pressure_accounting(all_logs);
    });

    int passed = 0;
    for (size_t i = 0; i < results.size(); ++i) {
        const Outcome& outcome = results[i].second;
        if (outcome.pass) ++passed;
        std::printf("[%2zu] %s  %-34s %s\n", i + 1, outcome.pass ? "PASS" : "FAIL",
                    results[i].first.c_str(), outcome.detail.c_str());
    }
    std::printf("%d/11 criteria passed in %s s\n", passed,
                fmt1(seconds_since(start)).c_str());
    return passed == 11 ? 0 : 1;
}
