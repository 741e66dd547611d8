#pragma once

#include <optional>
#include <ostream>

#include "ctb/dual.hpp"
#include "ctb/util.hpp"

namespace ctb {

/// single-coordinate multiplier update landing on a breakpoint of the dual function
struct ascent_step
{
    int edge = -1;
    int direction = 0;          // +1 when x_e = 0 < 1 = y_e, -1 when x_e = 1 > 0 = y_e
    double magnitude = 0.0;     // min of the two finite components
    double kstab_component = 0.0;   // restricted stable-set increment (may be +inf)
    double tree_component = 0.0;    // restricted tree increment (may be +inf)
};

enum class ascent_stop
{
    no_direction,    // no coordinate admits a positive step: dual-ascent local optimum
    subgradients_match,
    budget,
    inexact_oracle   // a probe or evaluation timed out; exactness is required here
};

struct ascent_outcome
{
    multipliers lambda;
    std::vector<dual_point> trace;   // strictly increasing values, first entry = start
    ascent_stop stop = ascent_stop::no_direction;
    long steps = 0;
    bool flagged_unbounded_coordinate = false;   // both restricted problems infeasible somewhere
};

/***
 * Dual ascent by maximal ascent directions: scan coordinates with x_e != y_e
 * in ascending edge index, probe the two restricted subproblems, and apply
 * the first positive step min(Delta, del) found. The tree component is
 * probed first and a zero short-circuits the (much dearer) stable-set probe.
 * An infeasible restricted problem contributes +inf and the finite component
 * alone sets the magnitude; a coordinate with both components infinite is
 * skipped and flagged.
 */
class ascent_engine
{
public:
    explicit ascent_engine(const dual_evaluator& eval) : eval_(&eval) {}

    /// restricted stable-set increment; nullopt = oracle timeout (abort)
    std::optional<double> delta_kstab(const dual_point& point, int e, int want,
                                      double budget) const
    {
        kstab_query query;
        query.k = eval_->inst().k();
        query.costs = point.lambda;
        query.budget_seconds = budget;
        if (want == 1)
            query.fixed_one.push_back(e);
        else
            query.fixed_zero.push_back(e);
        if (point.kstab.best_set)
            query.warm_start = *point.kstab.best_set;   // checked against fixings by the oracle
        kstab_result res = eval_->oracle().solve(query);
        if (res.status == kstab_status::infeasible)
            return lp::infinity;
        if (!res.optimal())
            return std::nullopt;
        return res.value - point.kstab.value;
    }

    /// restricted tree increment; +inf when want = 0 and e is a bridge
    double delta_tree(const dual_point& point, int e, int want) const
    {
        const graph& g = eval_->inst().g;
        std::vector<double> costs(g.edge_count());
        for (int i = 0; i < g.edge_count(); ++i)
            costs[i] = g.weights[i] - point.lambda[i];
        edge_fixing fixing = (want == 1) ? edge_fixing::with_in(e) : edge_fixing::with_out(e);
        auto tree = min_spanning_tree(g, costs, fixing);
        if (!tree)
            return lp::infinity;
        return tree->value - point.tree.value;
    }

    /***
     * First maximal ascent direction, or nothing when no coordinate yields a
     * positive step, or abort (nullopt inside outcome) on an oracle timeout.
     */
    struct direction_scan
    {
        std::optional<ascent_step> step;
        bool aborted = false;
        bool flagged_unbounded = false;
    };

    direction_scan find_ascent_direction(const dual_point& point, double budget) const
    {
        constexpr double step_tol = 1e-9;
        direction_scan scan;
        wall_timer timer;

        const int m = eval_->inst().g.edge_count();
        for (int e = 0; e < m; ++e)
        {
            if (point.subgradient[e] == 0)
                continue;
            const bool in_tree = point.tree.contains(e);   // x_e
            const int want_tree = in_tree ? 0 : 1;         // move x toward y
            const int want_kstab = in_tree ? 1 : 0;        // move y toward x

            double tree_inc = delta_tree(point, e, want_tree);
            if (tree_inc <= step_tol && std::isfinite(tree_inc))
                continue;   // min(Delta, del) cannot be positive; skip the kstab probe

            double remaining = budget - timer.elapsed();
            if (remaining <= 0)
            {
                scan.aborted = true;
                return scan;
            }
            std::optional<double> kstab_inc = delta_kstab(point, e, want_kstab, remaining);
            if (!kstab_inc)
            {
                scan.aborted = true;
                return scan;
            }

            if (!std::isfinite(tree_inc) && !std::isfinite(*kstab_inc))
            {
                scan.flagged_unbounded = true;   // dual unbounded along e only if infeasible
                continue;
            }
            double magnitude = std::min(tree_inc, *kstab_inc);
            if (magnitude > step_tol && std::isfinite(magnitude))
            {
                scan.step = ascent_step{e, in_tree ? -1 : +1, magnitude, *kstab_inc, tree_inc};
                return scan;
            }
        }
        return scan;
    }

    ascent_outcome run_ascent(const multipliers& lambda0, double time_budget,
                              std::ostream* trace_out = nullptr) const
    {
        wall_timer timer;
        ascent_outcome out;
        out.lambda = lambda0;

        auto start = eval_->evaluate(lambda0, probe_budget(time_budget, timer));
        if (!start)
            throw std::runtime_error("infeasible instance reached dual ascent");
        if (!start->exact)
        {
            out.stop = ascent_stop::inexact_oracle;
            return out;
        }
        out.trace.push_back(*start);

        while (true)
        {
            const dual_point& point = out.trace.back();
            if (point.zero_subgradient())
            {
                out.stop = ascent_stop::subgradients_match;
                break;
            }
            double remaining = time_budget - timer.elapsed();
            if (remaining <= 0)
            {
                out.stop = ascent_stop::budget;
                break;
            }

            direction_scan scan = find_ascent_direction(point, remaining);
            if (scan.flagged_unbounded)
                out.flagged_unbounded_coordinate = true;
            if (scan.aborted)
            {
                out.stop = ascent_stop::inexact_oracle;
                break;
            }
            if (!scan.step)
            {
                out.stop = ascent_stop::no_direction;
                break;
            }

            multipliers next = point.lambda;
            next[scan.step->edge] += scan.step->direction * scan.step->magnitude;

            std::vector<int> hint;
            if (point.kstab.best_set)
                hint = *point.kstab.best_set;
            auto next_point = eval_->evaluate(next, probe_budget(time_budget, timer), hint);
            if (!next_point)
                throw std::runtime_error("infeasible instance reached dual ascent");
            if (!next_point->exact)
            {
                out.stop = ascent_stop::inexact_oracle;
                break;
            }

            if (trace_out)
                *trace_out << "ascent step " << out.steps + 1 << ": edge " << scan.step->edge
                           << " dir " << scan.step->direction << " delta "
                           << scan.step->kstab_component << " del " << scan.step->tree_component
                           << " bound " << next_point->value << '\n';

            ++out.steps;
            out.trace.push_back(std::move(*next_point));
            out.lambda = next;
        }
        return out;
    }

private:
    static double probe_budget(double total, const wall_timer& timer)
    {
        return std::max(total - timer.elapsed(), 1.0);
    }

    const dual_evaluator* eval_;
};

} // namespace ctb
