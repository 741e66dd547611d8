#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ctb {

using edge_pair = std::pair<int, int>;

/// disjoint-set forest with union by size and path halving
class union_find
{
public:
    explicit union_find(int n) : parent_(n), size_(n, 1), components_(n)
    {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int u)
    {
        while (parent_[u] != u)
        {
            parent_[u] = parent_[parent_[u]];
            u = parent_[u];
        }
        return u;
    }

    /// returns false if u and v were already joined
    bool unite(int u, int v)
    {
        int ru = find(u);
        int rv = find(v);
        if (ru == rv)
            return false;
        if (size_[ru] < size_[rv])
            std::swap(ru, rv);
        parent_[rv] = ru;
        size_[ru] += size_[rv];
        --components_;
        return true;
    }

    bool joined(int u, int v) { return find(u) == find(v); }

    int components() const { return components_; }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
    int components_;
};

/// undirected weighted graph; edge indices are stable for the lifetime of the object
struct graph
{
    int vertex_count = 0;
    std::vector<edge_pair> edges;    // endpoints, normalized u < v
    std::vector<double> weights;     // one per edge

    int edge_count() const { return static_cast<int>(edges.size()); }

    bool connected() const
    {
        if (vertex_count == 0)
            return false;
        union_find uf(vertex_count);
        for (const auto& [u, v] : edges)
            uf.unite(u, v);
        return uf.components() == 1;
    }
};

/// the problem statement: weighted graph plus conflicting edge pairs
struct instance
{
    graph g;
    std::vector<edge_pair> conflicts;   // edge-index pairs, normalized i < j, sorted
    std::string name;
    bool integral_weights = false;      // all weights integer-valued (enables ceil rounding of dual bounds)

    /// target cardinality of the stable-set subproblem
    int k() const { return g.vertex_count - 1; }
};

/// graph over the edge indices of the source graph; two edges adjacent iff they conflict
struct conflict_graph
{
    int vertex_count = 0;
    int edge_count = 0;
    std::vector<std::vector<int>> adj;   // sorted adjacency lists

    bool adjacent(int u, int v) const
    {
        const auto& a = adj[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    int degree(int u) const { return static_cast<int>(adj[u].size()); }
};

inline conflict_graph build_conflict_graph(const instance& inst)
{
    conflict_graph h;
    h.vertex_count = inst.g.edge_count();
    h.edge_count = static_cast<int>(inst.conflicts.size());
    h.adj.assign(h.vertex_count, {});
    for (const auto& [i, j] : inst.conflicts)
    {
        h.adj[i].push_back(j);
        h.adj[j].push_back(i);
    }
    for (auto& list : h.adj)
        std::sort(list.begin(), list.end());
    return h;
}

inline bool all_integral(const std::vector<double>& w)
{
    return std::all_of(w.begin(), w.end(),
                       [](double x) { return x == std::floor(x); });
}

/// structural checks shared by the parsers and by programmatic construction
inline void validate_instance(const instance& inst)
{
    const int n = inst.g.vertex_count;
    const int m = inst.g.edge_count();

    if (n <= 0)
        throw std::invalid_argument("instance has no vertices");
    if (static_cast<int>(inst.g.weights.size()) != m)
        throw std::invalid_argument("weight vector does not match edge count");

    std::vector<edge_pair> seen;
    seen.reserve(m);
    for (const auto& [u, v] : inst.g.edges)
    {
        if (u == v)
            throw std::invalid_argument("self-loop in edge list");
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw std::invalid_argument("edge endpoint out of range");
        seen.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::invalid_argument("duplicate edge");

    for (double w : inst.g.weights)
        if (!std::isfinite(w))
            throw std::invalid_argument("non-finite edge weight");

    std::vector<edge_pair> cseen;
    cseen.reserve(inst.conflicts.size());
    for (const auto& [i, j] : inst.conflicts)
    {
        if (i == j)
            throw std::invalid_argument("conflict references identical edges");
        if (i < 0 || j < 0 || i >= m || j >= m)
            throw std::invalid_argument("conflict references edge index out of range");
        cseen.emplace_back(std::min(i, j), std::max(i, j));
    }
    std::sort(cseen.begin(), cseen.end());
    if (std::adjacent_find(cseen.begin(), cseen.end()) != cseen.end())
        throw std::invalid_argument("duplicate conflict pair");

    if (!inst.g.connected())
        throw std::invalid_argument("graph is disconnected; no spanning tree exists");
}

/// builds a validated instance from raw pieces (normalizes edge/conflict order)
inline instance make_instance(int vertex_count,
                              std::vector<edge_pair> edges,
                              std::vector<double> weights,
                              std::vector<edge_pair> conflicts,
                              std::string name = {})
{
    instance inst;
    inst.g.vertex_count = vertex_count;
    inst.g.edges = std::move(edges);
    inst.g.weights = std::move(weights);
    for (auto& [u, v] : inst.g.edges)
        if (u > v)
            std::swap(u, v);
    for (auto& [i, j] : conflicts)
        if (i > j)
            std::swap(i, j);
    std::sort(conflicts.begin(), conflicts.end());
    inst.conflicts = std::move(conflicts);
    inst.name = std::move(name);
    validate_instance(inst);
    inst.integral_weights = all_integral(inst.g.weights);
    return inst;
}

} // namespace ctb
