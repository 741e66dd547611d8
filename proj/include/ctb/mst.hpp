#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ctb/graph.hpp"

namespace ctb {

/// per-edge fixings for a restricted spanning tree problem
struct edge_fixing
{
    std::vector<int> forced_in;    // contracted (pre-merged) before Kruskal runs
    std::vector<int> forced_out;   // skipped entirely

    static edge_fixing none() { return {}; }
    static edge_fixing with_in(int e) { return {{e}, {}}; }
    static edge_fixing with_out(int e) { return {{}, {e}}; }
};

struct tree_solution
{
    std::vector<int> edge_set;   // sorted edge indices, |V|-1 of them
    double value = 0.0;          // sum of the supplied costs over edge_set

    bool contains(int e) const
    {
        return std::binary_search(edge_set.begin(), edge_set.end(), e);
    }

    /// 0/1 incidence vector over all edges
    std::vector<double> incidence(int edge_count) const
    {
        std::vector<double> x(edge_count, 0.0);
        for (int e : edge_set)
            x[e] = 1.0;
        return x;
    }
};

inline double tree_value(const tree_solution& tree, std::span<const double> costs)
{
    double total = 0.0;
    for (int e : tree.edge_set)
        total += costs[e];
    return total;
}

/***
 * Minimum spanning tree by Kruskal with union-find, honoring fixings.
 *
 * Forced-in edges are pre-merged in the union-find (equivalent to contracting
 * them); the scan then skips intra-component edges, so at most one edge
 * survives between any pair of contracted super-vertices and the result is a
 * tree of the original graph. Ties are broken by lowest edge index, making
 * the returned edge set deterministic.
 *
 * Returns nothing when forced_in contains a cycle, the fixings contradict
 * each other, or the graph minus forced_out is disconnected.
 */
inline std::optional<tree_solution> min_spanning_tree(const graph& g,
                                                      std::span<const double> costs,
                                                      const edge_fixing& fixing = {})
{
    const int n = g.vertex_count;
    const int m = g.edge_count();

    std::vector<char> out_mask(m, 0);
    for (int e : fixing.forced_out)
        out_mask[e] = 1;

    union_find uf(n);
    tree_solution tree;
    tree.edge_set.reserve(n - 1);

    for (int e : fixing.forced_in)
    {
        if (out_mask[e])
            return std::nullopt;   // contradictory fixing
        const auto& [u, v] = g.edges[e];
        if (!uf.unite(u, v))
            return std::nullopt;   // forced_in contains a cycle
        tree.edge_set.push_back(e);
        tree.value += costs[e];
    }

    std::vector<int> order;
    order.reserve(m);
    for (int e = 0; e < m; ++e)
        if (!out_mask[e])
            order.push_back(e);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (costs[a] != costs[b])
            return costs[a] < costs[b];
        return a < b;
    });

    for (int e : order)
    {
        if (uf.components() == 1)
            break;
        const auto& [u, v] = g.edges[e];
        if (uf.unite(u, v))
        {
            tree.edge_set.push_back(e);
            tree.value += costs[e];
        }
    }

    if (uf.components() != 1)
        return std::nullopt;   // G minus forced_out is disconnected

    std::sort(tree.edge_set.begin(), tree.edge_set.end());
    return tree;
}

} // namespace ctb
