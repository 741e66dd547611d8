#pragma once

#include <optional>
#include <ostream>
#include <queue>
#include <span>

#include "ctb/cliques.hpp"
#include "ctb/graph.hpp"
#include "ctb/lp.hpp"
#include "ctb/oddcycle.hpp"
#include "ctb/util.hpp"

namespace ctb {

enum class kstab_status
{
    optimal,
    infeasible,
    time_limit
};

struct kstab_query
{
    int k = 0;
    std::vector<double> costs;            // one per vertex of H (the multipliers)
    std::vector<int> fixed_one;
    std::vector<int> fixed_zero;
    double budget_seconds = 1e18;         // wall clock
    std::vector<int> warm_start;          // optional incumbent hint (checked before use)
    int max_cut_rounds = 30;
    std::ostream* trace = nullptr;        // one line per node when set
};

struct kstab_result
{
    kstab_status status = kstab_status::infeasible;
    std::optional<std::vector<int>> best_set;   // sorted vertex indices
    double value = 0.0;                         // cost of best_set when present
    double lower_bound = 0.0;                   // valid bound on the true minimum, even on time_limit
    long nodes = 0;
    long cuts_added = 0;

    bool optimal() const { return status == kstab_status::optimal; }
};

/***
 * Greedy stable set of cardinality exactly k: scan vertices by ascending
 * cost, add one when it keeps the set stable and a clique-cover lookahead
 * still leaves enough selectable slots to reach k. Absence of a result is
 * not a proof of infeasibility.
 */
inline std::optional<std::vector<int>> greedy_kstab(const conflict_graph& h,
                                                    const kstab_query& query)
{
    const int n = h.vertex_count;
    if (query.k < 0 || query.k > n)
        return std::nullopt;

    std::vector<char> banned(n, 0);
    std::vector<char> chosen_mask(n, 0);
    std::vector<int> chosen;

    for (int v : query.fixed_zero)
        banned[v] = 1;
    for (int v : query.fixed_one)
    {
        if (banned[v] || chosen_mask[v])
            return std::nullopt;
        chosen.push_back(v);
        chosen_mask[v] = 1;
        for (int u : h.adj[v])
            banned[u] = 1;
    }
    for (int v : query.fixed_one)
        if (banned[v])
            return std::nullopt;   // fixed_one not stable

    std::vector<int> order;
    order.reserve(n);
    for (int v = 0; v < n; ++v)
        if (!banned[v] && !chosen_mask[v])
            order.push_back(v);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (query.costs[a] != query.costs[b])
            return query.costs[a] < query.costs[b];
        return a < b;
    });

    auto selectable_slots = [&](const std::vector<char>& blocked) {
        std::vector<int> candidates;
        for (int v = 0; v < n; ++v)
            if (!blocked[v] && !chosen_mask[v])
                candidates.push_back(v);
        return greedy_clique_cover_size(h, candidates);
    };

    for (int v : order)
    {
        if (static_cast<int>(chosen.size()) == query.k)
            break;
        if (banned[v])
            continue;

        // lookahead: adding v must keep k reachable
        std::vector<char> blocked = banned;
        blocked[v] = 1;
        for (int u : h.adj[v])
            blocked[u] = 1;
        int need = query.k - static_cast<int>(chosen.size()) - 1;
        if (selectable_slots(blocked) < need)
            continue;

        chosen.push_back(v);
        chosen_mask[v] = 1;
        banned[v] = 1;
        for (int u : h.adj[v])
            banned[u] = 1;
    }

    if (static_cast<int>(chosen.size()) != query.k)
        return std::nullopt;
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

/***
 * Exact minimization of cost'y over stable sets of cardinality exactly k,
 * by LP-based branch-and-bound on top of the bounded-variable simplex.
 *
 * The root relaxation carries the cardinality row, clique rows covering
 * every conflict (pairwise rows for conflicts in no enumerated clique), and
 * iterated rounds of odd-cycle cuts; cuts are generated only at the root and
 * inherited below. Branching picks the most fractional variable (ties to the
 * lowest index); the node pool is depth-first with best-bound tie-break.
 *
 * The oracle is bound to one conflict graph so the clique enumeration is
 * shared across the many calls an engine run makes.
 */
class kstab_oracle
{
public:
    explicit kstab_oracle(const conflict_graph& h, long clique_cap = 200000)
        : h_(&h), cliques_(enumerate_maximal_cliques(h, clique_cap))
    {
    }

    const clique_family& cliques() const { return cliques_; }

    kstab_result solve(const kstab_query& query) const
    {
        wall_timer timer;
        const conflict_graph& h = *h_;
        const int n = h.vertex_count;
        const int k = query.k;

        kstab_result result;
        result.lower_bound = -lp::infinity;

        if (k < 0 || k > n)
            return result;   // infeasible

        // ---- root fixings, with neighbor propagation of ones
        std::vector<signed char> state(n, -1);   // -1 free, 0 zero, 1 one
        for (int v : query.fixed_zero)
            state[v] = 0;
        for (int v : query.fixed_one)
        {
            if (state[v] == 0)
                return result;
            state[v] = 1;
        }
        for (int v : query.fixed_one)
            for (int u : h.adj[v])
            {
                if (state[u] == 1)
                    return result;   // fixed_one not stable
                state[u] = 0;
            }

        if (k == 0)
        {
            if (!query.fixed_one.empty())
                return result;
            result.status = kstab_status::optimal;
            result.best_set = std::vector<int>{};
            result.value = result.lower_bound = 0.0;
            return result;
        }

        // ---- incumbent from warm hint and greedy
        double incumbent_value = lp::infinity;
        std::optional<std::vector<int>> incumbent;
        auto offer_incumbent = [&](const std::vector<int>& set) {
            if (static_cast<int>(set.size()) != k)
                return;
            for (int v : set)
                if (state[v] == 0)
                    return;
            for (size_t i = 0; i < set.size(); ++i)
                for (size_t j = i + 1; j < set.size(); ++j)
                    if (h.adjacent(set[i], set[j]))
                        return;
            for (int v = 0; v < n; ++v)
                if (state[v] == 1
                    && !std::binary_search(set.begin(), set.end(), v))
                    return;
            double value = 0.0;
            for (int v : set)
                value += query.costs[v];
            if (value < incumbent_value)
            {
                incumbent_value = value;
                incumbent = set;
            }
        };
        if (!query.warm_start.empty())
        {
            std::vector<int> hint = query.warm_start;
            std::sort(hint.begin(), hint.end());
            offer_incumbent(hint);
        }
        if (auto greedy = greedy_kstab(h, query))
            offer_incumbent(*greedy);

        // ---- base LP
        lp::model base = lp::model::with_unit_box(n);
        base.objective = query.costs;
        {
            lp::row card;
            card.coef.assign(n, 1.0);
            card.rel = lp::relation::eq;
            card.rhs = k;
            base.rows.push_back(std::move(card));
        }
        append_stability_rows(base);

        auto solve_node_lp = [&](const std::vector<signed char>& node_state) {
            lp::model md = base;
            for (int v = 0; v < n; ++v)
            {
                if (node_state[v] == 0)
                    md.upper[v] = 0.0;
                else if (node_state[v] == 1)
                    md.lower[v] = 1.0;
            }
            return lp::solve_min(md);
        };

        // ---- root cut loop
        lp::outcome root = solve_node_lp(state);
        int cut_rounds = 0;
        while (root.st == lp::status::optimal && cut_rounds < query.max_cut_rounds)
        {
            auto cuts = separate_odd_cycles(h, root.primal);
            if (cuts.empty())
                break;
            for (const auto& cyc : cuts)
            {
                lp::row r;
                r.coef.assign(n, 0.0);
                for (int v : cyc.vertices)
                    r.coef[v] = 1.0;
                r.rel = lp::relation::le;
                r.rhs = (static_cast<double>(cyc.vertices.size()) - 1.0) / 2.0;
                base.rows.push_back(std::move(r));
                ++result.cuts_added;
            }
            ++cut_rounds;
            if (timer.elapsed() > query.budget_seconds)
                break;
            root = solve_node_lp(state);
        }

        if (root.st == lp::status::infeasible)
        {
            if (incumbent)
            {
                // LP tolerance artifact; the incumbent proves feasibility
                result.status = kstab_status::time_limit;
                result.best_set = incumbent;
                result.value = incumbent_value;
                result.lower_bound = -lp::infinity;
            }
            return result;
        }

        // ---- branch and bound
        struct node
        {
            std::vector<signed char> state;
            double bound;   // inherited valid lower bound for the subtree
            int depth;
            long id;
        };
        struct node_order
        {
            bool operator()(const node& a, const node& b) const
            {
                if (a.depth != b.depth)
                    return a.depth < b.depth;   // deeper first
                if (a.bound != b.bound)
                    return a.bound > b.bound;   // then lower bound first
                return a.id > b.id;
            }
        };
        std::priority_queue<node, std::vector<node>, node_order> pool;
        long next_id = 0;
        pool.push({state, root.value, 0, next_id++});

        bool timed_out = false;
        double open_floor = lp::infinity;   // recomputed on timeout from the remaining pool

        std::vector<int> scratch_candidates;
        scratch_candidates.reserve(n);

        while (!pool.empty())
        {
            if (timer.elapsed() > query.budget_seconds)
            {
                timed_out = true;
                break;
            }
            node nd = pool.top();
            pool.pop();
            ++result.nodes;

            if (nd.bound >= incumbent_value - 1e-9)
                continue;

            // combinatorial state of the node
            int ones = 0;
            double sum_one = 0.0;
            scratch_candidates.clear();
            for (int v = 0; v < n; ++v)
            {
                if (nd.state[v] == 1)
                {
                    ++ones;
                    sum_one += query.costs[v];
                }
                else if (nd.state[v] == -1)
                    scratch_candidates.push_back(v);
            }
            const int free_count = static_cast<int>(scratch_candidates.size());

            if (ones > k || ones + free_count < k)
                continue;
            if (ones == k)
            {
                std::vector<int> set;
                for (int v = 0; v < n; ++v)
                    if (nd.state[v] == 1)
                        set.push_back(v);
                offer_incumbent(set);
                continue;
            }

            // cheap selection bound ignoring stability
            {
                std::vector<double> free_costs;
                free_costs.reserve(free_count);
                for (int v : scratch_candidates)
                    free_costs.push_back(query.costs[v]);
                std::partial_sort(free_costs.begin(), free_costs.begin() + (k - ones),
                                  free_costs.end());
                double cheap = sum_one;
                for (int i = 0; i < k - ones; ++i)
                    cheap += free_costs[i];
                if (cheap >= incumbent_value - 1e-9)
                    continue;
            }

            // clique-cover slots
            if (ones + greedy_clique_cover_size(h, scratch_candidates) < k)
                continue;

            lp::outcome rel = solve_node_lp(nd.state);
            if (rel.st == lp::status::infeasible)
                continue;
            double bound = std::max(nd.bound, rel.value);
            if (bound >= incumbent_value - 1e-9)
                continue;

            if (query.trace)
                *query.trace << "node " << result.nodes << " depth " << nd.depth << " bound "
                             << rel.value << " incumbent "
                             << (incumbent ? std::to_string(incumbent_value) : "-") << '\n';

            // integral solution?
            int frac_var = -1;
            double frac_score = 1e9;
            for (int v : scratch_candidates)
            {
                double y = rel.primal[v];
                double dist = std::abs(y - 0.5);
                if (y > 1e-6 && y < 1.0 - 1e-6 && dist < frac_score - 1e-12)
                {
                    frac_score = dist;
                    frac_var = v;
                }
            }
            if (frac_var < 0)
            {
                std::vector<int> set;
                for (int v = 0; v < n; ++v)
                    if (nd.state[v] == 1 || (nd.state[v] == -1 && rel.primal[v] > 0.5))
                        set.push_back(v);
                offer_incumbent(set);
                continue;
            }

            // children: fixing to one removes the neighborhood
            node zero_child{nd.state, bound, nd.depth + 1, next_id++};
            zero_child.state[frac_var] = 0;

            node one_child{nd.state, bound, nd.depth + 1, next_id++};
            one_child.state[frac_var] = 1;
            bool one_ok = true;
            for (int u : h.adj[frac_var])
            {
                if (one_child.state[u] == 1)
                {
                    one_ok = false;
                    break;
                }
                one_child.state[u] = 0;
            }

            pool.push(std::move(zero_child));
            if (one_ok)
                pool.push(std::move(one_child));
        }

        if (timed_out)
        {
            while (!pool.empty())
            {
                open_floor = std::min(open_floor, pool.top().bound);
                pool.pop();
            }
            result.status = kstab_status::time_limit;
            result.best_set = incumbent;
            if (incumbent)
                result.value = incumbent_value;
            result.lower_bound =
                std::min(incumbent ? incumbent_value : lp::infinity, open_floor);
            return result;
        }

        if (!incumbent)
            return result;   // infeasible: the tree is exhausted without a k-stable set

        result.status = kstab_status::optimal;
        result.best_set = incumbent;
        result.value = incumbent_value;
        result.lower_bound = incumbent_value;
        return result;
    }

private:
    /// clique rows covering every conflict; pairwise rows for leftovers
    void append_stability_rows(lp::model& md) const
    {
        const conflict_graph& h = *h_;
        const int n = h.vertex_count;

        long usable = 0;
        for (const auto& q : cliques_.cliques)
            if (q.size() >= 2)
                ++usable;

        std::set<edge_pair> covered;
        const bool keep_all = !cliques_.truncated && usable <= std::max<long>(2000, 4L * n);

        for (const auto& q : cliques_.cliques)
        {
            if (q.size() < 2)
                continue;
            bool contributes = false;
            for (size_t i = 0; i < q.size(); ++i)
                for (size_t j = i + 1; j < q.size(); ++j)
                    if (covered.insert({q[i], q[j]}).second)
                        contributes = true;
            if (!keep_all && !contributes)
                continue;
            lp::row r;
            r.coef.assign(n, 0.0);
            for (int v : q)
                r.coef[v] = 1.0;
            r.rel = lp::relation::le;
            r.rhs = 1.0;
            md.rows.push_back(std::move(r));
        }

        for (int u = 0; u < n; ++u)
            for (int v : h.adj[u])
            {
                if (v <= u)
                    continue;
                if (covered.count({u, v}))
                    continue;
                lp::row r;
                r.coef.assign(n, 0.0);
                r.coef[u] = 1.0;
                r.coef[v] = 1.0;
                r.rel = lp::relation::le;
                r.rhs = 1.0;
                md.rows.push_back(std::move(r));
            }
    }

    const conflict_graph* h_;
    clique_family cliques_;
};

/// one-shot entry point; engines keep a kstab_oracle instead
inline kstab_result solve_kstab(const conflict_graph& h, const kstab_query& query)
{
    kstab_oracle oracle(h);
    return oracle.solve(query);
}

/// stability number alpha(H): largest k with a feasible kstab
inline int stability_number(const conflict_graph& h)
{
    kstab_oracle oracle(h);
    kstab_query query;
    query.costs.assign(h.vertex_count, 0.0);
    int alpha = 0;
    for (int k = 1; k <= h.vertex_count; ++k)
    {
        query.k = k;
        if (!oracle.solve(query).optimal())
            break;
        alpha = k;
    }
    return alpha;
}

} // namespace ctb
