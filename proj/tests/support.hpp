// Test-side helpers independent of the library's solution paths: brute-force
// LP vertex enumeration, random generators for graphs and instances. These
// are the oracles the exactness suites compare against.
#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "ctb/graph.hpp"
#include "ctb/lp.hpp"

namespace testsupport {

/// min over all vertices of the polyhedron (equalities always active);
/// nullopt when no feasible vertex exists, i.e. the LP is infeasible
inline std::optional<double> brute_force_lp_min(const ctb::lp::model& md)
{
    const int n = md.cols();
    const int eq_count = static_cast<int>(md.rows.size());

    // candidate active constraints: every row as equality, then bounds
    struct constraint
    {
        std::vector<double> a;
        double b;
        bool mandatory;
    };
    std::vector<constraint> cons;
    for (const auto& r : md.rows)
        cons.push_back({r.coef, r.rhs, r.rel == ctb::lp::relation::eq});
    for (int j = 0; j < n; ++j)
    {
        std::vector<double> a(n, 0.0);
        a[j] = 1.0;
        if (std::isfinite(md.lower[j]))
            cons.push_back({a, md.lower[j], false});
        if (std::isfinite(md.upper[j]))
            cons.push_back({a, md.upper[j], false});
    }
    (void)eq_count;

    std::vector<int> mandatory, optional_idx;
    for (size_t i = 0; i < cons.size(); ++i)
        (cons[i].mandatory ? mandatory : optional_idx).push_back(static_cast<int>(i));
    if (static_cast<int>(mandatory.size()) > n)
        return std::nullopt;   // overdetermined equality system handled below anyway

    std::optional<double> best;

    auto feasible = [&](const std::vector<double>& x) {
        for (int j = 0; j < n; ++j)
        {
            if (x[j] < md.lower[j] - 1e-7 || x[j] > md.upper[j] + 1e-7)
                return false;
        }
        for (const auto& r : md.rows)
        {
            double lhs = 0.0;
            for (int j = 0; j < n; ++j)
                lhs += r.coef[j] * x[j];
            if (r.rel == ctb::lp::relation::eq && std::abs(lhs - r.rhs) > 1e-7)
                return false;
            if (r.rel == ctb::lp::relation::le && lhs > r.rhs + 1e-7)
                return false;
        }
        return true;
    };

    auto try_system = [&](const std::vector<int>& active) {
        // solve the n x n system by Gaussian elimination
        std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
        for (int r = 0; r < n; ++r)
        {
            for (int j = 0; j < n; ++j)
                a[r][j] = cons[active[r]].a[j];
            a[r][n] = cons[active[r]].b;
        }
        for (int p = 0; p < n; ++p)
        {
            int piv = -1;
            double best_abs = 1e-9;
            for (int r = p; r < n; ++r)
                if (std::abs(a[r][p]) > best_abs)
                {
                    best_abs = std::abs(a[r][p]);
                    piv = r;
                }
            if (piv < 0)
                return;   // singular: not a vertex-defining system
            std::swap(a[p], a[piv]);
            for (int r = 0; r < n; ++r)
            {
                if (r == p)
                    continue;
                double f = a[r][p] / a[p][p];
                if (f == 0.0)
                    continue;
                for (int j = p; j <= n; ++j)
                    a[r][j] -= f * a[p][j];
            }
        }
        std::vector<double> x(n);
        for (int j = 0; j < n; ++j)
            x[j] = a[j][n] / a[j][j];
        if (!feasible(x))
            return;
        double value = 0.0;
        for (int j = 0; j < n; ++j)
            value += md.objective[j] * x[j];
        if (!best || value < *best)
            best = value;
    };

    const int need = n - static_cast<int>(mandatory.size());
    if (need < 0)
        return std::nullopt;
    std::vector<int> pick(need);
    std::function<void(int, int)> choose = [&](int start, int depth) {
        if (depth == need)
        {
            std::vector<int> active = mandatory;
            active.insert(active.end(), pick.begin(), pick.end());
            try_system(active);
            return;
        }
        for (int i = start; i < static_cast<int>(optional_idx.size()); ++i)
        {
            pick[depth] = optional_idx[i];
            choose(i + 1, depth + 1);
        }
    };
    choose(0, 0);
    return best;
}

inline ctb::conflict_graph random_conflict_graph(int n, double density, std::mt19937_64& rng)
{
    ctb::conflict_graph h;
    h.vertex_count = n;
    h.adj.assign(n, {});
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (std::uniform_real_distribution<>(0, 1)(rng) < density)
            {
                h.adj[u].push_back(v);
                h.adj[v].push_back(u);
                ++h.edge_count;
            }
    for (auto& a : h.adj)
        std::sort(a.begin(), a.end());
    return h;
}

/// connected weighted graph: random spanning tree plus extra random edges
inline ctb::instance random_connected_instance(int n, int extra_edges, int conflict_count,
                                               std::mt19937_64& rng, bool integer_weights = true)
{
    std::vector<ctb::edge_pair> edges;
    std::set<ctb::edge_pair> present;
    for (int v = 1; v < n; ++v)
    {
        int u = static_cast<int>(rng() % v);
        edges.push_back({u, v});
        present.insert({u, v});
    }
    long max_extra = static_cast<long>(n) * (n - 1) / 2 - (n - 1);
    extra_edges = static_cast<int>(std::min<long>(extra_edges, max_extra));
    while (extra_edges > 0)
    {
        int u = static_cast<int>(rng() % n);
        int v = static_cast<int>(rng() % n);
        if (u == v)
            continue;
        ctb::edge_pair e{std::min(u, v), std::max(u, v)};
        if (present.insert(e).second)
        {
            edges.push_back(e);
            --extra_edges;
        }
    }
    std::vector<double> weights;
    for (size_t i = 0; i < edges.size(); ++i)
        weights.push_back(integer_weights
                              ? static_cast<double>(1 + rng() % 20)
                              : std::uniform_real_distribution<>(0.5, 20.0)(rng));

    std::set<ctb::edge_pair> conflicts;
    const int m = static_cast<int>(edges.size());
    int attempts = 8 * conflict_count + 16;
    while (conflict_count > 0 && attempts-- > 0)
    {
        int i = static_cast<int>(rng() % m);
        int j = static_cast<int>(rng() % m);
        if (i == j)
            continue;
        if (conflicts.insert({std::min(i, j), std::max(i, j)}).second)
            --conflict_count;
    }
    return ctb::make_instance(n, std::move(edges), std::move(weights),
                              {conflicts.begin(), conflicts.end()}, "random");
}

} // namespace testsupport
