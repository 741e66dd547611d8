#pragma once

#include <vector>

#include "ctb/graph.hpp"

namespace ctb {

struct clique_family
{
    std::vector<std::vector<int>> cliques;   // each sorted ascending
    bool truncated = false;
};

namespace detail {

/// pivoting step of the enumeration: expand R against candidates P, excluded X
inline void expand_cliques(const conflict_graph& h,
                           std::vector<int>& r,
                           std::vector<int> p,
                           std::vector<int> x,
                           clique_family& out,
                           long cap)
{
    if (out.truncated)
        return;
    if (p.empty() && x.empty())
    {
        if (static_cast<long>(out.cliques.size()) >= cap)
        {
            out.truncated = true;
            return;
        }
        out.cliques.push_back(r);
        return;
    }

    // pivot u from P union X maximizing |P intersect N(u)|
    int pivot = -1, pivot_deg = -1;
    auto count_p_neighbors = [&](int u) {
        int c = 0;
        for (int v : p)
            if (h.adjacent(u, v))
                ++c;
        return c;
    };
    for (int u : p)
    {
        int c = count_p_neighbors(u);
        if (c > pivot_deg)
        {
            pivot_deg = c;
            pivot = u;
        }
    }
    for (int u : x)
    {
        int c = count_p_neighbors(u);
        if (c > pivot_deg)
        {
            pivot_deg = c;
            pivot = u;
        }
    }

    std::vector<int> branch;
    for (int v : p)
        if (pivot < 0 || !h.adjacent(pivot, v))
            branch.push_back(v);

    for (int v : branch)
    {
        std::vector<int> p_next, x_next;
        for (int w : p)
            if (h.adjacent(v, w))
                p_next.push_back(w);
        for (int w : x)
            if (h.adjacent(v, w))
                x_next.push_back(w);

        r.push_back(v);
        expand_cliques(h, r, std::move(p_next), std::move(x_next), out, cap);
        r.pop_back();
        if (out.truncated)
            return;

        p.erase(std::find(p.begin(), p.end(), v));
        x.push_back(v);
    }
}

} // namespace detail

/***
 * All maximal cliques of the conflict graph, by Bron-Kerbosch with pivoting.
 * Stops after `cap` cliques and sets the truncated flag; callers must then
 * fall back to pairwise rows for conflicts no enumerated clique covers.
 */
inline clique_family enumerate_maximal_cliques(const conflict_graph& h, long cap = 200000)
{
    clique_family out;
    std::vector<int> r;
    std::vector<int> p(h.vertex_count), x;
    std::iota(p.begin(), p.end(), 0);
    detail::expand_cliques(h, r, std::move(p), std::move(x), out, cap);
    for (auto& q : out.cliques)
        std::sort(q.begin(), q.end());
    return out;
}

/***
 * Greedy clique cover of the given candidate vertices. The number of cliques
 * bounds the stability number of the induced subgraph from above, which is
 * what the branch-and-cut needs to prove that too few selectable slots
 * remain. Candidates must be sorted ascending.
 */
inline int greedy_clique_cover_size(const conflict_graph& h, const std::vector<int>& candidates)
{
    std::vector<char> covered(h.vertex_count, 0);
    int cliques = 0;
    for (int v : candidates)
    {
        if (covered[v])
            continue;
        ++cliques;
        covered[v] = 1;
        std::vector<int> current{v};
        for (int u : candidates)
        {
            if (covered[u])
                continue;
            bool joins = true;
            for (int w : current)
                if (!h.adjacent(u, w))
                {
                    joins = false;
                    break;
                }
            if (joins)
            {
                covered[u] = 1;
                current.push_back(u);
            }
        }
    }
    return cliques;
}

} // namespace ctb
