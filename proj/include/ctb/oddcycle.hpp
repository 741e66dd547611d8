#pragma once

#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <span>
#include <vector>

#include "ctb/graph.hpp"

namespace ctb {

/// simple odd cycle in the conflict graph, as a vertex sequence
struct odd_cycle
{
    std::vector<int> vertices;

    double violation(std::span<const double> y) const
    {
        double sum = 0.0;
        for (int v : vertices)
            sum += y[v];
        return sum - (static_cast<double>(vertices.size()) - 1.0) / 2.0;
    }
};

namespace detail {

/// splits a closed walk at repeated vertices and keeps the simple odd pieces
inline void extract_simple_odd_cycles(std::vector<int> walk,
                                      std::vector<std::vector<int>>& out,
                                      int vertex_count)
{
    std::vector<std::vector<int>> stack{std::move(walk)};
    std::vector<int> seen_at(vertex_count, -1);

    while (!stack.empty())
    {
        std::vector<int> w = std::move(stack.back());
        stack.pop_back();
        if (w.size() < 3)
            continue;

        std::fill(seen_at.begin(), seen_at.end(), -1);
        int split_i = -1, split_j = -1;
        for (size_t p = 0; p < w.size(); ++p)
        {
            if (seen_at[w[p]] >= 0)
            {
                split_i = seen_at[w[p]];
                split_j = static_cast<int>(p);
                break;
            }
            seen_at[w[p]] = static_cast<int>(p);
        }

        if (split_i < 0)
        {
            if (w.size() % 2 == 1)
                out.push_back(std::move(w));
            continue;
        }

        std::vector<int> inner(w.begin() + split_i, w.begin() + split_j);
        w.erase(w.begin() + split_i, w.begin() + split_j);
        stack.push_back(std::move(inner));
        stack.push_back(std::move(w));
    }
}

} // namespace detail

/***
 * Separation of odd-cycle inequalities sum_{u in U} y_u <= (|U|-1)/2 over a
 * fractional point, via shortest paths in a two-layer auxiliary graph: each
 * conflict {u,v} contributes arcs between opposite layers with weight
 * max(0, 1 - y_u - y_v). A (v, layer 0) -> (v, layer 1) path of weight < 1
 * projects to a closed odd walk whose simple odd pieces are candidate cuts.
 *
 * Returns at most max_cuts violated cycles (violation > 1e-6): a most
 * violated one first, then only cycles whose normalized coefficient vectors
 * have inner product <= ortho_threshold with it.
 */
inline std::vector<odd_cycle> separate_odd_cycles(const conflict_graph& h,
                                                  std::span<const double> y,
                                                  int max_cuts = 32,
                                                  double ortho_threshold = 0.01)
{
    constexpr double violation_tol = 1e-6;
    const int n = h.vertex_count;

    std::set<std::vector<int>> dedupe;
    std::vector<odd_cycle> candidates;

    auto arc_weight = [&](int u, int v) { return std::max(0.0, 1.0 - y[u] - y[v]); };

    const int nn = 2 * n;   // node (u, side) encoded as 2u + side
    std::vector<double> dist(nn);
    std::vector<int> prev(nn);

    for (int source = 0; source < n; ++source)
    {
        if (h.degree(source) == 0)
            continue;

        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        std::fill(prev.begin(), prev.end(), -1);
        const int start = 2 * source;
        const int goal = 2 * source + 1;
        dist[start] = 0.0;

        using qitem = std::pair<double, int>;
        std::priority_queue<qitem, std::vector<qitem>, std::greater<>> queue;
        queue.push({0.0, start});

        while (!queue.empty())
        {
            auto [d, node] = queue.top();
            queue.pop();
            if (d > dist[node] + 1e-15)
                continue;
            if (node == goal)
                break;
            int u = node / 2;
            int side = node % 2;
            for (int v : h.adj[u])
            {
                int next = 2 * v + (1 - side);
                double nd = d + arc_weight(u, v);
                if (nd < dist[next] - 1e-15)
                {
                    dist[next] = nd;
                    prev[next] = node;
                    queue.push({nd, next});
                }
            }
        }

        if (!(dist[goal] < 1.0 - 1e-9))
            continue;

        // project the path to a closed walk in H (drop the repeated source)
        std::vector<int> walk;
        for (int node = goal; node >= 0; node = prev[node])
            walk.push_back(node / 2);
        walk.pop_back();   // first and last both map to the source vertex

        std::vector<std::vector<int>> simple;
        detail::extract_simple_odd_cycles(std::move(walk), simple, n);
        for (auto& cyc : simple)
        {
            odd_cycle candidate{std::move(cyc)};
            if (candidate.violation(y) <= violation_tol)
                continue;
            std::vector<int> key = candidate.vertices;
            std::sort(key.begin(), key.end());
            if (dedupe.insert(std::move(key)).second)
                candidates.push_back(std::move(candidate));
        }
    }

    if (candidates.empty())
        return {};

    auto most_violated = std::max_element(
        candidates.begin(), candidates.end(),
        [&](const odd_cycle& a, const odd_cycle& b) { return a.violation(y) < b.violation(y); });
    std::swap(*candidates.begin(), *most_violated);

    std::vector<odd_cycle> selected;
    selected.push_back(std::move(candidates.front()));

    std::vector<char> in_first(n, 0);
    for (int v : selected[0].vertices)
        in_first[v] = 1;
    const double norm_first = std::sqrt(static_cast<double>(selected[0].vertices.size()));

    std::sort(candidates.begin() + 1, candidates.end(),
              [&](const odd_cycle& a, const odd_cycle& b) { return a.violation(y) > b.violation(y); });

    for (size_t i = 1; i < candidates.size() && static_cast<int>(selected.size()) < max_cuts; ++i)
    {
        const auto& cand = candidates[i];
        int common = 0;
        for (int v : cand.vertices)
            common += in_first[v];
        double inner = common / (norm_first * std::sqrt(static_cast<double>(cand.vertices.size())));
        if (inner <= ortho_threshold)
            selected.push_back(cand);
    }
    return selected;
}

} // namespace ctb
