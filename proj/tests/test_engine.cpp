// SPDX-License-Identifier: MIT

#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "engine.hpp"
#include "helpers.hpp"

using namespace osgp;
using test::C;
using test::F;
using test::X;

namespace {

Population make_population(std::vector<double> qualities) {
    Population pop;
    for (size_t i = 0; i < qualities.size(); ++i)
        pop.members.push_back({X(0), Quality{qualities[i]}});
    return pop;
}

RunConfig small_run_config(uint64_t seed, CrossoverKind kind = CrossoverKind::Standard,
                           uint64_t max_evaluations = 6000, size_t population = 60) {
    RunConfig cfg;
    cfg.problem = ProblemKind::Poly10;
    cfg.population_size = population;
    cfg.max_evaluations = max_evaluations;
    cfg.crossover = kind;
    cfg.seed = seed;
    cfg.resolve_defaults();
    cfg.validate();
    return cfg;
}

} // namespace

TEST_CASE("proportional selection weights minimize quality") {
    Rng rng(1);
    const int draws = 100000;

    SUBCASE("equal qualities fall back to a uniform draw") {
        const Population pop = make_population({0.5, 0.5, 0.5, 0.5});
        const ProportionalSampler sampler(pop);
        std::vector<int> counts(4, 0);
        for (int i = 0; i < draws; ++i) ++counts[sampler.draw(rng)];
        for (const int c : counts) {
            const double freq = static_cast<double>(c) / draws;
            CHECK(freq > 0.25 - 0.0041);
            CHECK(freq < 0.25 + 0.0041);
        }
    }

    SUBCASE("the only positive weight wins every draw") {
        const Population pop = make_population({0.0, 1.0});
        const ProportionalSampler sampler(pop);
        for (int i = 0; i < 1000; ++i) CHECK(sampler.draw(rng) == 0);
    }

    SUBCASE("weights follow worst-minus-quality") {
        const Population pop = make_population({0.0, 1.0, 2.0});
        const ProportionalSampler sampler(pop);
        std::vector<int> counts(3, 0);
        for (int i = 0; i < draws; ++i) ++counts[sampler.draw(rng)];
        CHECK(static_cast<double>(counts[0]) / draws == doctest::Approx(2.0 / 3).epsilon(0.02));
        CHECK(static_cast<double>(counts[1]) / draws == doctest::Approx(1.0 / 3).epsilon(0.02));
        CHECK(counts[2] == 0);
    }

    SUBCASE("sentinel members carry no weight") {
        const Population pop = make_population({0.0, 1.0, Quality::worst_value()});
        const ProportionalSampler sampler(pop);
        for (int i = 0; i < 1000; ++i) CHECK(sampler.draw(rng) == 0);
    }

    SUBCASE("an all-sentinel population draws uniformly") {
        const Population pop =
            make_population({Quality::worst_value(), Quality::worst_value()});
        const ProportionalSampler sampler(pop);
        int first = 0;
        for (int i = 0; i < draws; ++i)
            if (sampler.draw(rng) == 0) ++first;
        const double freq = static_cast<double>(first) / draws;
        CHECK(freq > 0.5 - 0.005);
        CHECK(freq < 0.5 + 0.005);
    }
}

TEST_CASE("parent selection pairs a proportional and a uniform draw") {
    Rng rng(2);

    SUBCASE("better-quality first parent is forced, second is free") {
        const Population pop = make_population({0.0, 1.0});
        int second_is_one = 0;
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const auto [a, b] = select_parents(pop, rng);
            CHECK(a == 0);
            if (b == 1) ++second_is_one;
        }
        const double freq = static_cast<double>(second_is_one) / draws;
        CHECK(freq > 0.5 - 0.005);
        CHECK(freq < 0.5 + 0.005);
    }

    SUBCASE("equal qualities reach all ordered pairs") {
        const Population pop = make_population({0.5, 0.5});
        std::map<std::pair<size_t, size_t>, int> seen;
        for (int i = 0; i < 1000; ++i) seen[select_parents(pop, rng)]++;
        CHECK(seen.size() == 4);
    }
}

TEST_CASE("population best index breaks ties toward the lowest index") {
    Population pop = make_population({1.0, 0.25, 0.25, 3.0});
    CHECK(pop.best_index() == 1);
    pop.members[3].quality = Quality{0.25};
    CHECK(pop.best_index() == 1);
    pop.members[0].quality = Quality{0.0};
    CHECK(pop.best_index() == 0);
}

TEST_CASE("offspring success demands strict improvement over the better parent") {
    const RunConfig cfg = small_run_config(5);
    size_t events = 0;
    size_t equal_quality_rejections = 0;
    RunHooks hooks;
    hooks.on_offspring = [&](const OffspringAudit& audit) {
        ++events;
        const double better = std::min(audit.parent1_quality, audit.parent2_quality);
        CHECK(audit.success == (audit.child_quality < better));
        if (audit.child_quality == better) {
            CHECK(!audit.success);
            ++equal_quality_rejections;
        }
    };
    const RunLog log = run(cfg, &hooks);
    CHECK(events == log.total_evaluations - cfg.population_size);
    CHECK(equal_quality_rejections > 0);
}

TEST_CASE("a stalled population aborts just above the pressure cap") {
    Rng data_rng(7);
    const Dataset ds = gen_poly10(data_rng, 20);
    Evaluator evaluator(ds);
    const PrimitiveSet prims = PrimitiveSet::arithmetic(10);
    EvalContext ctx{evaluator, prims, {}};

    OsParams params;
    params.population_size = 10;
    params.mutation_rate = 0.0;
    params.crossover = CrossoverKind::Standard;
    params.max_selection_pressure = 5.0;
    params.max_evaluations = 1'000'000;

    Population pop;
    pop.members.resize(params.population_size, {X(6), evaluator.quality(X(6))});

    Rng rng(3);
    const GenerationResult result =
        run_generation(pop, params, ctx, rng, params.max_evaluations);

    CHECK(!result.adopted);
    CHECK(result.pressure_exceeded);
    CHECK(!result.budget_exhausted);

    const uint64_t cap_evals =
        static_cast<uint64_t>(params.max_selection_pressure *
                              static_cast<double>(params.population_size));
    CHECK(result.evaluations == cap_evals + 1);
    CHECK(result.log.selection_pressure ==
          static_cast<double>(result.evaluations) /
              static_cast<double>(params.population_size));
    CHECK(result.log.selection_pressure > params.max_selection_pressure);
    CHECK(result.log.selection_pressure < params.max_selection_pressure + 0.2);
}

TEST_CASE("generation accounting matches the logged pressure exactly") {
    const RunConfig cfg = small_run_config(11, CrossoverKind::Mixed, 8000, 40);
    const RunLog log = run(cfg);
    REQUIRE(log.generations.size() >= 2);

    CHECK(log.generations[0].generation == 0);
    CHECK(log.generations[0].cumulative_evaluations == cfg.population_size);
    CHECK(log.generations[0].selection_pressure == 1.0);

    uint64_t cumulative = cfg.population_size;
    for (size_t i = 1; i < log.generations.size(); ++i) {
        const GenerationLog& row = log.generations[i];
        const uint64_t evals = row.cumulative_evaluations - cumulative;
        CHECK(row.selection_pressure * static_cast<double>(cfg.population_size) ==
              doctest::Approx(static_cast<double>(evals)).epsilon(1e-12));
        CHECK(row.cumulative_evaluations > cumulative);
        cumulative = row.cumulative_evaluations;
    }
    CHECK(cumulative == log.total_evaluations);
    CHECK(log.total_evaluations <= cfg.max_evaluations);
}

TEST_CASE("a budget of one population terminates after initialization") {
    RunConfig cfg = small_run_config(4);
    cfg.max_evaluations = cfg.population_size;
    const RunLog log = run(cfg);
    REQUIRE(log.generations.size() == 1);
    CHECK(log.generations[0].generation == 0);
    CHECK(log.total_evaluations == cfg.population_size);
    CHECK(log.termination == TerminationReason::MaxEvaluations);
    CHECK(!log.best_tree.empty());
}

TEST_CASE("identical seeds reproduce the run log bit for bit") {
    const RunConfig cfg = small_run_config(21, CrossoverKind::Mixed, 5000, 30);
    const RunLog a = run(cfg);
    const RunLog b = run(cfg);
    CHECK(a.generations == b.generations);
    CHECK(a.best_tree == b.best_tree);
    CHECK(a.best_quality == b.best_quality);
    CHECK(a.total_evaluations == b.total_evaluations);
    CHECK(a.termination == b.termination);
    CHECK(a.dispatch_counts == b.dispatch_counts);

    const RunConfig other = small_run_config(22, CrossoverKind::Mixed, 5000, 30);
    const RunLog c = run(other);
    CHECK(a.generations != c.generations);
}

TEST_CASE("elitism keeps the best quality non-increasing") {
    for (const CrossoverKind kind :
         {CrossoverKind::Standard, CrossoverKind::OnePoint, CrossoverKind::SizeFair}) {
        const RunConfig cfg = small_run_config(31, kind, 7000, 50);
        const RunLog log = run(cfg);
        for (size_t i = 1; i < log.generations.size(); ++i)
            CHECK(log.generations[i].best_quality <= log.generations[i - 1].best_quality);
        CHECK(log.best_quality == log.generations.back().best_quality);
    }
}

TEST_CASE("mixed runs record the dispatched operator counts") {
    const RunConfig cfg = small_run_config(41, CrossoverKind::Mixed, 6000, 40);
    const RunLog log = run(cfg);
    uint64_t total = 0;
    for (const uint64_t c : log.dispatch_counts) total += c;
    CHECK(total == log.total_evaluations - cfg.population_size);
    for (const uint64_t c : log.dispatch_counts) CHECK(c > 0);

    const RunConfig plain = small_run_config(41, CrossoverKind::OnePoint, 6000, 40);
    const RunLog plain_log = run(plain);
    uint64_t onepoint_total = 0;
    for (size_t k = 0; k < 5; ++k) {
        if (kConcreteCrossovers[k] == CrossoverKind::OnePoint)
            onepoint_total = plain_log.dispatch_counts[k];
        else
            CHECK(plain_log.dispatch_counts[k] == 0);
    }
    CHECK(onepoint_total == plain_log.total_evaluations - cfg.population_size);
}

TEST_CASE("run summary reports the outcome fields") {
    const RunConfig cfg = small_run_config(51);
    const RunLog log = run(cfg);
    const std::string summary = run_summary(log);
    CHECK(summary.find("problem = poly10") != std::string::npos);
    CHECK(summary.find("crossover = standard") != std::string::npos);
    CHECK(summary.find("seed = 51") != std::string::npos);
    CHECK(summary.find("termination = ") != std::string::npos);
    CHECK(summary.find("final_best_quality = ") != std::string::npos);
    CHECK(summary.find("final_best_tree = ") != std::string::npos);
    CHECK(summary.find("total_evaluations = ") != std::string::npos);
}

TEST_CASE("initial population sizes respect the configured interval") {
    RunConfig cfg = small_run_config(61);
    cfg.init_size_min = 4;
    cfg.init_size_max = 9;
    cfg.max_evaluations = cfg.population_size;

    std::vector<size_t> sizes;
    RunHooks hooks;
    hooks.on_population = [&](const Population& pop) {
        if (pop.generation != 0) return;
        for (const Individual& ind : pop.members) sizes.push_back(ind.tree.size());
    };
    (void)run(cfg, &hooks);
    REQUIRE(sizes.size() == cfg.population_size);
    for (const size_t s : sizes) {
        CHECK(s >= 4);
        CHECK(s <= 9 + 1);
    }
    CHECK(*std::min_element(sizes.begin(), sizes.end()) !=
          *std::max_element(sizes.begin(), sizes.end()));
}
