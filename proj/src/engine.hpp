// SPDX-License-Identifier: MIT

#ifndef OSGP_ENGINE_HPP
#define OSGP_ENGINE_HPP

#include <array>
#include <functional>
#include <utility>

#include "config.hpp"
#include "genops.hpp"
#include "interp.hpp"
#include "problems.hpp"

namespace osgp {

struct Individual {
    ExpressionTree tree;
    Quality quality;
};

struct Population {
    std::vector<Individual> members;
    uint32_t generation = 0;

    // Best quality, ties broken by lowest index.
    size_t best_index() const;
};

struct OsParams {
    size_t population_size = 1000;
    double mutation_rate = 0.15;
    CrossoverKind crossover = CrossoverKind::Standard;
    double max_selection_pressure = 200.0;
    uint64_t max_evaluations = 1'000'000;
    size_t init_size_min = 3;
    size_t init_size_max = 50;

    static OsParams from(const RunConfig& cfg);
    void validate() const;
};

struct GenerationLog {
    uint32_t generation = 0;
    uint64_t cumulative_evaluations = 0;
    double best_quality = 0;
    double average_tree_size = 0;
    // Evaluations spent on this generation divided by the population size.
    double selection_pressure = 0;

    bool operator==(const GenerationLog&) const = default;
};

enum class TerminationReason { MaxEvaluations, MaxSelectionPressure };

std::string_view to_string(TerminationReason reason);

// One candidate-creation event, for external invariant auditing.
struct OffspringAudit {
    uint32_t generation = 0;
    double parent1_quality = 0;
    double parent2_quality = 0;
    double child_quality = 0;
    bool success = false;
    bool mutated = false;
    CrossoverKind used = CrossoverKind::Standard;
};

struct RunHooks {
    // After initialization and after every adopted generation.
    std::function<void(const Population&)> on_population;
    std::function<void(const GenerationLog&)> on_generation;
    std::function<void(const OffspringAudit&)> on_offspring;
};

struct RunLog {
    RunConfig config;
    std::vector<GenerationLog> generations;
    TerminationReason termination = TerminationReason::MaxEvaluations;
    std::string best_tree;
    double best_quality = Quality::worst_value();
    uint64_t total_evaluations = 0;
    double wall_seconds = 0;
    // Concrete operator counts over all crossover events, indexed like
    // kConcreteCrossovers; interesting for the mixed kind.
    std::array<uint64_t, 5> dispatch_counts{};
};

// Minimization-adapted proportional weights: w = (worst finite quality) - q
// for finite members, 0 for the rest; all-zero weights fall back to a
// uniform draw. Exactly one rng draw per selection.
class ProportionalSampler {
public:
    explicit ProportionalSampler(const Population& pop);
    size_t draw(Rng& rng) const;

private:
    std::vector<double> cumulative_;
    size_t count_ = 0;
    bool uniform_ = false;
};

size_t proportional_select(const Population& pop, Rng& rng);

// Gender-specific scheme: first parent fitness-proportional, second uniform.
std::pair<size_t, size_t> select_parents(const Population& pop, Rng& rng);

struct EvalContext {
    Evaluator& evaluator;
    const PrimitiveSet& prims;
    std::array<uint64_t, 5> dispatch_counts{};
};

struct OffspringResult {
    Individual child;
    bool success = false;
    OffspringAudit audit;
};

// Select parents, recombine, maybe mutate, evaluate once. Success iff the
// child is strictly better than the better parent.
OffspringResult try_create_offspring(const Population& pop, const OsParams& params,
                                     EvalContext& ctx, Rng& rng);

struct GenerationResult {
    Population next;
    GenerationLog log;
    // Evaluations spent on this attempt (also recoverable from the log's
    // selection pressure).
    uint64_t evaluations = 0;
    // Population was filled; `next` is the new generation. When false the
    // attempt was cut short and `next` echoes the input population, while
    // the log row still reports the evaluations spent on the attempt.
    bool adopted = false;
    // Filling stopped because the pressure cap was crossed mid-fill.
    bool pressure_exceeded = false;
    // Filling stopped because eval_budget ran out mid-fill.
    bool budget_exhausted = false;
};

// One offspring-selection generation: the best member is copied first
// (1-elitism, no evaluation charged), then candidates fill the remaining
// slots. cumulative_evaluations in the log is left for the caller.
GenerationResult run_generation(const Population& pop, const OsParams& params,
                                EvalContext& ctx, Rng& rng, uint64_t eval_budget,
                                const RunHooks* hooks = nullptr);

// Full run: dataset construction, PTC2 initialization (sizes uniform in the
// configured interval), generation loop, dual termination.
RunLog run(const RunConfig& cfg, const RunHooks* hooks = nullptr);

// Human-readable run report (termination, best tree and quality, totals).
std::string run_summary(const RunLog& log);

} // namespace osgp

#endif
