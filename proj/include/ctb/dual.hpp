#pragma once

#include <optional>
#include <vector>

#include "ctb/graph.hpp"
#include "ctb/kstab.hpp"
#include "ctb/mst.hpp"

namespace ctb {

using multipliers = std::vector<double>;

/***
 * One evaluation of the decomposition dual function
 *     z(lambda) = min (w - lambda)'x over spanning trees
 *               + min lambda'y      over stable sets of cardinality |V|-1,
 * carrying both subproblem optima. When the stable-set oracle timed out the
 * point is inexact: value uses the oracle's lower bound and still
 * underestimates z(lambda), so it remains a valid bound on the optimum.
 */
struct dual_point
{
    multipliers lambda;
    tree_solution tree;
    kstab_result kstab;
    double value = 0.0;
    std::vector<int> subgradient;   // y - x, entries in {-1,0,+1}; empty if no y available
    bool exact = false;

    bool zero_subgradient() const
    {
        return !subgradient.empty()
               && std::all_of(subgradient.begin(), subgradient.end(),
                              [](int g) { return g == 0; });
    }
};

/// shared context for the many dual evaluations of one engine run
class dual_evaluator
{
public:
    explicit dual_evaluator(const instance& inst)
        : inst_(&inst), h_(build_conflict_graph(inst)), oracle_(h_)
    {
    }

    const instance& inst() const { return *inst_; }
    const conflict_graph& conflicts() const { return h_; }
    const kstab_oracle& oracle() const { return oracle_; }

    /// sink receiving every evaluated z(lambda); used for bound-validity audits
    void record_values_into(std::vector<double>* sink) { value_sink_ = sink; }

    /***
     * Evaluates z(lambda). Returns nothing when the stable-set subproblem is
     * infeasible, which proves the MSTCC instance itself has no solution.
     */
    std::optional<dual_point> evaluate(const multipliers& lambda,
                                       double kstab_budget = 1e18,
                                       const std::vector<int>& warm_hint = {}) const
    {
        const graph& g = inst_->g;
        const int m = g.edge_count();

        std::vector<double> tree_costs(m);
        for (int e = 0; e < m; ++e)
            tree_costs[e] = g.weights[e] - lambda[e];
        auto tree = min_spanning_tree(g, tree_costs);
        if (!tree)
            return std::nullopt;   // instance validation guarantees connectivity; defensive only

        kstab_query query;
        query.k = inst_->k();
        query.costs = lambda;
        query.budget_seconds = kstab_budget;
        query.warm_start = warm_hint;
        kstab_result ks = oracle_.solve(query);
        if (ks.status == kstab_status::infeasible)
            return std::nullopt;

        dual_point point;
        point.lambda = lambda;
        point.tree = std::move(*tree);
        point.exact = ks.optimal();
        point.value = point.tree.value + (point.exact ? ks.value : ks.lower_bound);
        if (ks.best_set)
        {
            point.subgradient.assign(m, 0);
            for (int e : *ks.best_set)
                point.subgradient[e] += 1;
            for (int e : point.tree.edge_set)
                point.subgradient[e] -= 1;
        }
        point.kstab = std::move(ks);

        if (value_sink_)
            value_sink_->push_back(point.value);
        return point;
    }

private:
    const instance* inst_;
    conflict_graph h_;
    kstab_oracle oracle_;
    std::vector<double>* value_sink_ = nullptr;
};

} // namespace ctb
