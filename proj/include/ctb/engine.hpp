#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "ctb/ascent.hpp"
#include "ctb/dual.hpp"
#include "ctb/preprocess.hpp"
#include "ctb/util.hpp"
#include "ctb/volume.hpp"

namespace ctb {

enum class multiplier_start
{
    half_weights,   // lambda0 = w/2 (rounded when the weights are integral)
    zero
};

struct engine_config
{
    double total_budget = 3600.0;
    double ascent_budget = 1800.0;
    double kstab_bound_budget = 1800.0;
    bool pairwise_probing = false;
    multiplier_start start = multiplier_start::half_weights;
    volume_config volume;
    std::ostream* trace = nullptr;
    bool keep_dual_trace = false;   // record every evaluated z(lambda) in the report
};

struct phase_stats
{
    double seconds = 0.0;
    long iterations = 0;
};

/// per-instance record mirroring one row of the result tables
struct bound_report
{
    std::string instance_name;
    int vertices = 0;
    int edges = 0;
    int conflicts = 0;
    bool integral_weights = false;

    bool infeasible = false;
    bool kstab_timeout = false;
    bool ascent_exhausted = false;   // ascent stopped at a local optimum, not on budget

    double kstab_bound = 0.0;
    double kstab_bound_time = 0.0;

    double best_dual = -lp::infinity;
    double best_dual_ceil = -lp::infinity;   // ceil(best_dual) when weights are integral

    phase_stats preprocess_phase;
    phase_stats kstab_phase;
    phase_stats ascent_phase;
    phase_stats volume_phase;
    double total_time = 0.0;

    reduction_log reductions;
    std::vector<double> dual_trace;     // every z(lambda) evaluated, in order
    std::vector<double> ascent_values;  // strictly increasing ascent trajectory
    engine_config config_echo;
    instance instance_reduced;          // what the dual phases actually ran on
};

struct kstab_bound_outcome
{
    double bound = -lp::infinity;
    bool timed_out = false;
    bool infeasible = false;
    double seconds = 0.0;
    long nodes = 0;
};

/***
 * The combinatorial bound from the stable-set relaxation: min w'y over
 * stable sets of cardinality |V|-1 in the conflict graph, costs = original
 * weights. This equals z(lambda = w) and is the first subproblem the full
 * pipeline solves; on timeout the oracle's lower bound is still valid.
 */
inline kstab_bound_outcome initial_kstab_bound(const dual_evaluator& eval, double budget)
{
    wall_timer timer;
    kstab_bound_outcome out;

    kstab_query query;
    query.k = eval.inst().k();
    query.costs = eval.inst().g.weights;
    query.budget_seconds = budget;
    kstab_result res = eval.oracle().solve(query);

    out.seconds = timer.elapsed();
    out.nodes = res.nodes;
    if (res.status == kstab_status::infeasible)
    {
        out.infeasible = true;
        return out;
    }
    out.timed_out = !res.optimal();
    out.bound = out.timed_out ? res.lower_bound : res.value;
    return out;
}

inline multipliers initial_multipliers(const instance& inst, multiplier_start start)
{
    const int m = inst.g.edge_count();
    multipliers lambda(m, 0.0);
    if (start == multiplier_start::half_weights)
        for (int e = 0; e < m; ++e)
            lambda[e] = inst.integral_weights ? std::round(inst.g.weights[e] / 2.0)
                                              : inst.g.weights[e] / 2.0;
    return lambda;
}

/***
 * Full bound pipeline: probing reductions, the combinatorial stable-set
 * bound, dual ascent, then the Volume phase warm-started with the ascent
 * multipliers. best_dual is the maximum over every dual value seen; when
 * the weights are integral its ceiling is also a valid bound.
 *
 * When the stable-set bound is not computed within its budget the engine
 * stops and reports the oracle's lower bound, flagged as a timeout.
 */
inline bound_report solve(const instance& original, const engine_config& config = {})
{
    wall_timer total_timer;
    bound_report report;
    report.instance_name = original.name;
    report.vertices = original.g.vertex_count;
    report.edges = original.g.edge_count();
    report.conflicts = static_cast<int>(original.conflicts.size());
    report.integral_weights = original.integral_weights;
    report.config_echo = config;

    auto finish = [&](bound_report& r) -> bound_report& {
        r.total_time = total_timer.elapsed();
        if (r.integral_weights && std::isfinite(r.best_dual))
            r.best_dual_ceil = std::ceil(r.best_dual - 1e-9);
        else
            r.best_dual_ceil = r.best_dual;
        return r;
    };

    auto remaining = [&]() { return config.total_budget - total_timer.elapsed(); };

    // ---- probing reductions
    {
        wall_timer phase;
        probe_result pr = probe(original, config.pairwise_probing);
        report.preprocess_phase.seconds = phase.elapsed();
        report.preprocess_phase.iterations = pr.log.rounds;
        report.reductions = pr.log;
        if (pr.log.infeasible)
        {
            report.infeasible = true;
            return finish(report);
        }
        report.instance_reduced = std::move(pr.reduced);
    }
    const instance& inst = report.instance_reduced;

    dual_evaluator eval(inst);
    if (config.keep_dual_trace)
        eval.record_values_into(&report.dual_trace);

    // ---- z(0): the plain MST bound, and an early infeasibility check
    {
        multipliers zero(inst.g.edge_count(), 0.0);
        auto point = eval.evaluate(zero, std::max(remaining(), 1.0));
        if (!point)
        {
            report.infeasible = true;
            return finish(report);
        }
        report.best_dual = std::max(report.best_dual, point->value);
    }

    // ---- combinatorial stable-set bound ( = z(w) )
    {
        double budget = std::min(config.kstab_bound_budget, std::max(remaining(), 0.0));
        kstab_bound_outcome kb = initial_kstab_bound(eval, budget);
        report.kstab_bound = kb.bound;
        report.kstab_bound_time = kb.seconds;
        report.kstab_phase.seconds = kb.seconds;
        report.kstab_phase.iterations = kb.nodes;
        if (kb.infeasible)
        {
            report.infeasible = true;
            return finish(report);
        }
        report.best_dual = std::max(report.best_dual, kb.bound);
        if (config.keep_dual_trace && std::isfinite(kb.bound))
            report.dual_trace.push_back(kb.bound);   // this is z(lambda = w)
        if (kb.timed_out)
        {
            report.kstab_timeout = true;   // matching the pipeline rule: no dual phase then
            return finish(report);
        }
    }

    // ---- dual ascent
    multipliers lambda = initial_multipliers(inst, config.start);
    {
        wall_timer phase;
        ascent_engine ascent(eval);
        double budget = std::min(config.ascent_budget, std::max(remaining(), 0.0));
        ascent_outcome out = ascent.run_ascent(lambda, budget, config.trace);
        report.ascent_phase.seconds = phase.elapsed();
        report.ascent_phase.iterations = out.steps;
        report.ascent_exhausted = out.stop == ascent_stop::no_direction
                                  || out.stop == ascent_stop::subgradients_match;
        for (const auto& point : out.trace)
        {
            report.ascent_values.push_back(point.value);
            report.best_dual = std::max(report.best_dual, point.value);
        }
        if (!out.trace.empty())
            lambda = out.lambda;
        if (!out.trace.empty() && out.trace.back().zero_subgradient())
            return finish(report);   // subproblem optima coincide: the dual is solved
    }

    // ---- Volume phase, warm-started with the ascent multipliers
    {
        wall_timer phase;
        volume_config vc = config.volume;
        vc.time_budget = std::min(vc.time_budget, std::max(remaining(), 0.0));
        vc.trace = config.trace;
        auto res = run_volume(eval, lambda, vc);
        report.volume_phase.seconds = phase.elapsed();
        if (!res)
        {
            report.infeasible = true;
            return finish(report);
        }
        report.volume_phase.iterations = res->state.iterations;
        report.best_dual = std::max(report.best_dual, res->best.value);
    }

    return finish(report);
}

} // namespace ctb
