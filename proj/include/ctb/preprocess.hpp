#pragma once

#include <set>
#include <vector>

#include "ctb/graph.hpp"

namespace ctb {

/// record of everything the probing pass changed, in ORIGINAL edge indices
struct reduction_log
{
    std::set<int> deleted_edges;
    std::set<int> mandatory_edges;
    std::set<edge_pair> implied_conflicts;
    bool infeasible = false;
    int rounds = 0;
    bool cap_reached = false;

    bool any_change() const
    {
        return infeasible || !deleted_edges.empty() || !mandatory_edges.empty()
               || !implied_conflicts.empty();
    }
};

struct probe_result
{
    instance reduced;                    // meaningful only when !log.infeasible
    std::vector<int> edge_map;           // reduced edge index -> original edge index
    reduction_log log;
};

namespace detail {

/// working copy the tests mutate; edges keep their original index
struct probe_state
{
    int n;
    std::vector<edge_pair> edges;        // endpoints per original index
    std::vector<char> alive;
    std::vector<std::set<int>> conflict_adj;
    std::set<int> mandatory;

    explicit probe_state(const instance& inst)
        : n(inst.g.vertex_count),
          edges(inst.g.edges),
          alive(inst.g.edge_count(), 1),
          conflict_adj(inst.g.edge_count())
    {
        for (const auto& [i, j] : inst.conflicts)
        {
            conflict_adj[i].insert(j);
            conflict_adj[j].insert(i);
        }
    }

    bool connected() const
    {
        union_find uf(n);
        for (size_t e = 0; e < edges.size(); ++e)
            if (alive[e])
                uf.unite(edges[e].first, edges[e].second);
        return uf.components() == 1;
    }

    void delete_edge(int e, reduction_log& log)
    {
        alive[e] = 0;
        log.deleted_edges.insert(e);
        for (int f : conflict_adj[e])
            conflict_adj[f].erase(e);
        conflict_adj[e].clear();
    }

    std::vector<int> bridges() const
    {
        // Tarjan lowlink over the alive subgraph
        std::vector<std::vector<std::pair<int, int>>> adj(n);   // (neighbor, edge)
        for (size_t e = 0; e < edges.size(); ++e)
            if (alive[e])
            {
                adj[edges[e].first].push_back({edges[e].second, static_cast<int>(e)});
                adj[edges[e].second].push_back({edges[e].first, static_cast<int>(e)});
            }

        std::vector<int> disc(n, -1), low(n, -1);
        std::vector<int> result;
        int timer = 0;

        // iterative dfs: (vertex, parent edge, child iterator index)
        std::vector<std::tuple<int, int, size_t>> stack;
        for (int root = 0; root < n; ++root)
        {
            if (disc[root] >= 0)
                continue;
            stack.push_back({root, -1, 0});
            disc[root] = low[root] = timer++;
            while (!stack.empty())
            {
                const int u = std::get<0>(stack.back());
                const int pedge = std::get<1>(stack.back());
                size_t child = std::get<2>(stack.back());
                if (child < adj[u].size())
                {
                    std::get<2>(stack.back()) = child + 1;
                    auto [v, e] = adj[u][child];
                    if (e == pedge)
                        continue;
                    if (disc[v] < 0)
                    {
                        disc[v] = low[v] = timer++;
                        stack.push_back({v, e, 0});
                    }
                    else
                        low[u] = std::min(low[u], disc[v]);
                }
                else
                {
                    stack.pop_back();
                    if (!stack.empty())
                    {
                        const int parent = std::get<0>(stack.back());
                        low[parent] = std::min(low[parent], low[u]);
                        if (low[u] > disc[parent])
                            result.push_back(pedge);
                    }
                }
            }
        }
        std::sort(result.begin(), result.end());
        return result;
    }

    /// components of (alive minus the conflicts of the seeds) with the seeds contracted
    bool connected_when_forced(const std::vector<int>& seeds) const
    {
        union_find uf(n);
        std::set<int> skip;
        for (int s : seeds)
            for (int f : conflict_adj[s])
                skip.insert(f);
        for (int s : seeds)
            uf.unite(edges[s].first, edges[s].second);
        for (size_t e = 0; e < edges.size(); ++e)
        {
            if (!alive[e] || skip.count(static_cast<int>(e)))
                continue;
            uf.unite(edges[e].first, edges[e].second);
        }
        return uf.components() == 1;
    }
};

} // namespace detail

/// T1: bridges are mandatory; edges conflicting with a mandatory edge go away
inline bool probe_mandatory_test(detail::probe_state& st, reduction_log& log)
{
    bool changed = false;
    for (int b : st.bridges())
    {
        if (!st.alive[b])
            continue;   // deleted earlier in this sweep as someone's conflict partner
        if (st.mandatory.insert(b).second)
        {
            changed = true;
            log.mandatory_edges.insert(b);
        }
        std::vector<int> victims(st.conflict_adj[b].begin(), st.conflict_adj[b].end());
        for (int f : victims)
        {
            if (st.mandatory.count(f))
            {
                log.infeasible = true;   // two mandatory edges in conflict
                return true;
            }
            st.delete_edge(f, log);
            changed = true;
        }
    }
    if (!st.connected())
        log.infeasible = true;
    return changed;
}

/// T2: delete e when forcing it in (and dropping its conflicts) disconnects the graph
inline bool probe_forced_exclusion_test(detail::probe_state& st, reduction_log& log)
{
    bool changed = false;
    for (size_t e = 0; e < st.edges.size(); ++e)
    {
        if (!st.alive[e] || st.conflict_adj[e].empty())
            continue;
        if (!st.connected_when_forced({static_cast<int>(e)}))
        {
            if (st.mandatory.count(static_cast<int>(e)))
            {
                log.infeasible = true;
                return true;
            }
            st.delete_edge(static_cast<int>(e), log);
            changed = true;
            if (!st.connected())
            {
                log.infeasible = true;
                return true;
            }
        }
    }
    return changed;
}

/// T3: add conflict {e,f} when forcing both in disconnects the graph
inline bool probe_pairwise_test(detail::probe_state& st, reduction_log& log,
                                const std::set<edge_pair>& original_conflicts)
{
    bool changed = false;
    const int m = static_cast<int>(st.edges.size());
    for (int e = 0; e < m; ++e)
    {
        if (!st.alive[e])
            continue;
        for (int f = e + 1; f < m; ++f)
        {
            if (!st.alive[f] || st.conflict_adj[e].count(f))
                continue;
            if (st.conflict_adj[e].empty() && st.conflict_adj[f].empty())
                continue;
            if (!st.connected_when_forced({e, f}))
            {
                st.conflict_adj[e].insert(f);
                st.conflict_adj[f].insert(e);
                if (!original_conflicts.count({e, f}))
                    log.implied_conflicts.insert({e, f});
                changed = true;
            }
        }
    }
    return changed;
}

/***
 * Probing reductions, run to a fixpoint (capped at 50 rounds):
 *   T1  bridges are mandatory, their conflict partners are deleted, and two
 *       mandatory edges in conflict prove infeasibility;
 *   T2  an edge whose forced inclusion (with its conflict partners removed)
 *       disconnects the graph is in no stable spanning tree and is deleted;
 *   T3  (optional) a non-conflicting pair whose joint inclusion disconnects
 *       the graph becomes an implied conflict.
 *
 * Every test preserves the set of stable spanning trees over the surviving
 * edges; mandatory edges appear in all of them.
 */
inline probe_result probe(const instance& inst, bool enable_pairwise = false)
{
    constexpr int round_cap = 50;

    detail::probe_state st(inst);
    probe_result out;
    std::set<edge_pair> original_conflicts(inst.conflicts.begin(), inst.conflicts.end());

    if (!st.connected())
    {
        out.log.infeasible = true;
        return out;
    }

    bool changed = true;
    while (changed && !out.log.infeasible)
    {
        if (out.log.rounds == round_cap)
        {
            out.log.cap_reached = true;
            break;
        }
        ++out.log.rounds;
        changed = false;
        changed |= probe_mandatory_test(st, out.log);
        if (out.log.infeasible)
            break;
        changed |= probe_forced_exclusion_test(st, out.log);
        if (out.log.infeasible)
            break;
        if (enable_pairwise)
            changed |= probe_pairwise_test(st, out.log, original_conflicts);
    }

    if (out.log.infeasible)
        return out;

    // emit the reduced instance with surviving edges re-indexed
    std::vector<int> new_index(inst.g.edge_count(), -1);
    std::vector<edge_pair> edges;
    std::vector<double> weights;
    for (int e = 0; e < inst.g.edge_count(); ++e)
    {
        if (!st.alive[e])
            continue;
        new_index[e] = static_cast<int>(edges.size());
        out.edge_map.push_back(e);
        edges.push_back(inst.g.edges[e]);
        weights.push_back(inst.g.weights[e]);
    }
    std::set<edge_pair> conflicts;
    for (int e = 0; e < inst.g.edge_count(); ++e)
    {
        if (!st.alive[e])
            continue;
        for (int f : st.conflict_adj[e])
            if (f > e)
                conflicts.insert({new_index[e], new_index[f]});
    }
    out.reduced = make_instance(inst.g.vertex_count, std::move(edges), std::move(weights),
                                {conflicts.begin(), conflicts.end()}, inst.name);
    return out;
}

} // namespace ctb
