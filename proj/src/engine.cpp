// SPDX-License-Identifier: MIT

#include "engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dataset.hpp"

namespace osgp {

size_t Population::best_index() const {
    if (members.empty()) throw ValidationError("population is empty");
    size_t best = 0;
    for (size_t i = 1; i < members.size(); ++i)
        if (members[i].quality.better_than(members[best].quality)) best = i;
    return best;
}

OsParams OsParams::from(const RunConfig& cfg) {
    OsParams p;
    p.population_size = cfg.population_size;
    p.mutation_rate = cfg.mutation_rate;
    p.crossover = cfg.crossover;
    p.max_selection_pressure = cfg.max_selection_pressure;
    p.max_evaluations = cfg.max_evaluations;
    p.init_size_min = cfg.init_size_min;
    p.init_size_max = cfg.init_size_max;
    return p;
}

void OsParams::validate() const {
    if (population_size < 2) throw ValidationError("population_size: must be at least 2");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
        throw ValidationError("mutation_rate: must lie in [0, 1]");
    if (!(max_selection_pressure > 1.0))
        throw ValidationError("max_selection_pressure: must be greater than 1");
    if (max_evaluations < 1) throw ValidationError("max_evaluations: must be at least 1");
    if (init_size_min < 1 || init_size_min > init_size_max)
        throw ValidationError("init_size_min/init_size_max: need 1 <= min <= max");
}

std::string_view to_string(TerminationReason reason) {
    switch (reason) {
    case TerminationReason::MaxEvaluations: return "max_evaluations";
    case TerminationReason::MaxSelectionPressure: return "max_selection_pressure";
    }
    return "?";
}

ProportionalSampler::ProportionalSampler(const Population& pop) {
    count_ = pop.members.size();
    if (count_ == 0) throw ValidationError("population is empty");
    double worst_finite = -Quality::worst_value();
    bool any_finite = false;
    for (const Individual& m : pop.members) {
        if (m.quality.is_worst()) continue;
        any_finite = true;
        worst_finite = std::max(worst_finite, m.quality.value);
    }
    double total = 0;
    if (any_finite) {
        cumulative_.reserve(count_);
        for (const Individual& m : pop.members) {
            const double w = m.quality.is_worst() ? 0.0 : worst_finite - m.quality.value;
            total += w;
            cumulative_.push_back(total);
        }
    }
    if (!(total > 0.0)) {
        uniform_ = true;
        cumulative_.clear();
    }
}

size_t ProportionalSampler::draw(Rng& rng) const {
    if (uniform_) return static_cast<size_t>(rng.below(count_));
    const double u = rng.real() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto idx = static_cast<size_t>(it - cumulative_.begin());
    return std::min(idx, count_ - 1);
}

size_t proportional_select(const Population& pop, Rng& rng) {
    return ProportionalSampler(pop).draw(rng);
}

std::pair<size_t, size_t> select_parents(const Population& pop, Rng& rng) {
    if (pop.members.size() < 2)
        throw ValidationError("parent selection needs a population of at least 2");
    const size_t first = proportional_select(pop, rng);
    const size_t second = static_cast<size_t>(rng.below(pop.members.size()));
    return {first, second};
}

namespace {

OffspringResult create_offspring(const Population& pop, const OsParams& params,
                                 EvalContext& ctx, const ProportionalSampler& sampler,
                                 Rng& rng) {
    const size_t i1 = sampler.draw(rng);
    const size_t i2 = static_cast<size_t>(rng.below(pop.members.size()));
    const Individual& p1 = pop.members[i1];
    const Individual& p2 = pop.members[i2];

    CrossoverOutcome outcome = crossover(params.crossover, p1.tree, p2.tree, rng);
    for (size_t k = 0; k < 5; ++k)
        if (kConcreteCrossovers[k] == outcome.used) ++ctx.dispatch_counts[k];

    const bool mutate = rng.bernoulli(params.mutation_rate);
    ExpressionTree tree = mutate
        ? single_point_mutation(outcome.child, rng, ctx.prims).tree
        : std::move(outcome.child);

    const double better_parent = std::min(p1.quality.value, p2.quality.value);
    const Quality q = ctx.evaluator.quality_below(tree, better_parent);

    OffspringResult r;
    r.audit.generation = pop.generation + 1;
    r.audit.parent1_quality = p1.quality.value;
    r.audit.parent2_quality = p2.quality.value;
    r.audit.child_quality = q.value;
    r.audit.mutated = mutate;
    r.audit.used = outcome.used;
    r.success = q.value < better_parent;
    r.audit.success = r.success;
    r.child = Individual{std::move(tree), q};
    return r;
}

double average_tree_size(const Population& pop) {
    double sum = 0;
    for (const Individual& m : pop.members) sum += static_cast<double>(m.tree.size());
    return sum / static_cast<double>(pop.members.size());
}

GenerationLog population_stats(const Population& pop, uint32_t generation) {
    GenerationLog log;
    log.generation = generation;
    log.best_quality = pop.members[pop.best_index()].quality.value;
    log.average_tree_size = average_tree_size(pop);
    return log;
}

} // namespace

OffspringResult try_create_offspring(const Population& pop, const OsParams& params,
                                     EvalContext& ctx, Rng& rng) {
    if (pop.members.size() < 2)
        throw ValidationError("offspring creation needs a population of at least 2");
    const ProportionalSampler sampler(pop);
    return create_offspring(pop, params, ctx, sampler, rng);
}

GenerationResult run_generation(const Population& pop, const OsParams& params,
                                EvalContext& ctx, Rng& rng, uint64_t eval_budget,
                                const RunHooks* hooks) {
    const size_t pop_size = pop.members.size();
    if (pop_size < 2) throw ValidationError("population too small");
    const ProportionalSampler sampler(pop);

    Population next;
    next.members.reserve(pop_size);
    next.members.push_back(pop.members[pop.best_index()]);

    GenerationResult result;
    uint64_t evals = 0;
    while (next.members.size() < pop_size) {
        if (evals == eval_budget) {
            result.budget_exhausted = true;
            break;
        }
        OffspringResult r = create_offspring(pop, params, ctx, sampler, rng);
        ++evals;
        if (hooks && hooks->on_offspring) hooks->on_offspring(r.audit);
        if (r.success) next.members.push_back(std::move(r.child));
        if (next.members.size() < pop_size &&
            static_cast<double>(evals) / static_cast<double>(pop_size) >
                params.max_selection_pressure) {
            result.pressure_exceeded = true;
            break;
        }
    }

    result.adopted = next.members.size() == pop_size;
    if (result.adopted) {
        next.generation = pop.generation + 1;
        result.log = population_stats(next, next.generation);
        result.next = std::move(next);
    } else {
        // The aborted attempt is discarded; the log row reports the spent
        // evaluations against the retained population's stats.
        result.log = population_stats(pop, pop.generation + 1);
        result.next = pop;
    }
    result.evaluations = evals;
    result.log.selection_pressure =
        static_cast<double>(evals) / static_cast<double>(pop_size);
    return result;
}

RunLog run(const RunConfig& cfg, const RunHooks* hooks) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig resolved = cfg;
    resolved.resolve_defaults();
    resolved.validate();
    const OsParams params = OsParams::from(resolved);
    params.validate();

    Rng rng(resolved.seed);
    Problem problem = make_problem(resolved, rng);
    Evaluator evaluator(problem.dataset);
    EvalContext ctx{evaluator, problem.prims};

    RunLog log;
    log.config = resolved;

    Population pop;
    pop.members.reserve(params.population_size);
    for (size_t i = 0; i < params.population_size; ++i) {
        const auto target = static_cast<size_t>(rng.integer(
            static_cast<int64_t>(params.init_size_min),
            static_cast<int64_t>(params.init_size_max)));
        ExpressionTree tree = ptc2(rng, target, problem.prims);
        const Quality q = evaluator.quality(tree);
        pop.members.push_back(Individual{std::move(tree), q});
    }
    uint64_t cumulative = params.population_size;

    GenerationLog row = population_stats(pop, 0);
    row.cumulative_evaluations = cumulative;
    row.selection_pressure = 1.0;
    log.generations.push_back(row);
    if (hooks && hooks->on_population) hooks->on_population(pop);
    if (hooks && hooks->on_generation) hooks->on_generation(row);

    log.termination = TerminationReason::MaxEvaluations;
    while (cumulative < params.max_evaluations) {
        GenerationResult gen =
            run_generation(pop, params, ctx, rng, params.max_evaluations - cumulative, hooks);
        cumulative += gen.evaluations;
        gen.log.cumulative_evaluations = cumulative;
        log.generations.push_back(gen.log);
        if (hooks && hooks->on_generation) hooks->on_generation(gen.log);

        if (gen.adopted) {
            pop = std::move(gen.next);
            if (hooks && hooks->on_population) hooks->on_population(pop);
        }
        if (gen.pressure_exceeded ||
            (gen.adopted && gen.log.selection_pressure > params.max_selection_pressure)) {
            log.termination = TerminationReason::MaxSelectionPressure;
            break;
        }
        if (gen.budget_exhausted || cumulative >= params.max_evaluations) {
            log.termination = TerminationReason::MaxEvaluations;
            break;
        }
    }

    const size_t best = pop.best_index();
    log.best_tree = pop.members[best].tree.to_prefix_string();
    log.best_quality = pop.members[best].quality.value;
    log.total_evaluations = cumulative;
    log.dispatch_counts = ctx.dispatch_counts;
    log.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return log;
}

std::string run_summary(const RunLog& log) {
    std::string out;
    auto kv = [&out](std::string_view key, const std::string& value) {
        out += key;
        out += " = ";
        out += value;
        out += '\n';
    };
    kv("problem", std::string(to_string(log.config.problem)));
    kv("crossover", std::string(to_string(log.config.crossover)));
    kv("seed", std::to_string(log.config.seed));
    kv("termination", std::string(to_string(log.termination)));
    kv("generations", std::to_string(log.generations.empty()
                                         ? 0
                                         : log.generations.back().generation));
    kv("total_evaluations", std::to_string(log.total_evaluations));
    kv("final_best_quality", format_real(log.best_quality));
    kv("final_best_tree", log.best_tree);
    if (log.config.crossover == CrossoverKind::Mixed) {
        std::string counts;
        for (size_t k = 0; k < 5; ++k) {
            if (!counts.empty()) counts += ", ";
            counts += std::string(to_string(kConcreteCrossovers[k])) + ":" +
                      std::to_string(log.dispatch_counts[k]);
        }
        kv("crossover_dispatch", counts);
    }
    kv("wall_seconds", format_real(log.wall_seconds));
    return out;
}

} // namespace osgp
