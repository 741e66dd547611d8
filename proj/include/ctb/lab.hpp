#pragma once

#include <functional>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>

#include "ctb/graph.hpp"
#include "ctb/kstab.hpp"
#include "ctb/lp.hpp"
#include "ctb/mst.hpp"

namespace ctb::lab {

enum class family_kind
{
    kstab_exact_k,
    kstab_at_least_k,
    kstab_at_most_k,
    spanning_tree,
    stable_spanning_tree
};

/// family of distinct 0/1 incidence vectors
struct incidence_family
{
    int dimension = 0;
    family_kind kind = family_kind::kstab_exact_k;
    std::vector<std::vector<char>> vectors;

    size_t size() const { return vectors.size(); }
    bool empty() const { return vectors.empty(); }
};

enum class cardinality_mode
{
    exact,
    at_least,
    at_most
};

namespace detail {

inline void enumerate_stable_sets_rec(const conflict_graph& h,
                                      int v,
                                      int chosen,
                                      int max_size,
                                      std::vector<char>& current,
                                      std::vector<int>& blocked,
                                      const std::function<void(const std::vector<char>&, int)>& emit)
{
    const int n = h.vertex_count;
    if (v == n)
    {
        emit(current, chosen);
        return;
    }

    // exclude v
    enumerate_stable_sets_rec(h, v + 1, chosen, max_size, current, blocked, emit);

    // include v
    if (chosen < max_size && blocked[v] == 0)
    {
        current[v] = 1;
        for (int u : h.adj[v])
            ++blocked[u];
        enumerate_stable_sets_rec(h, v + 1, chosen + 1, max_size, current, blocked, emit);
        for (int u : h.adj[v])
            --blocked[u];
        current[v] = 0;
    }
}

} // namespace detail

/// complete enumeration of stable sets in the requested cardinality class
inline incidence_family enumerate_kstabs(const conflict_graph& h,
                                         int k,
                                         cardinality_mode mode = cardinality_mode::exact)
{
    if (h.vertex_count > 24)
        throw std::invalid_argument("kstab enumeration guard: |V(H)| must be at most 24");

    incidence_family family;
    family.dimension = h.vertex_count;
    family.kind = mode == cardinality_mode::exact      ? family_kind::kstab_exact_k
                  : mode == cardinality_mode::at_least ? family_kind::kstab_at_least_k
                                                       : family_kind::kstab_at_most_k;

    const int max_size = (mode == cardinality_mode::at_most || mode == cardinality_mode::exact)
                             ? k
                             : h.vertex_count;
    std::vector<char> current(h.vertex_count, 0);
    std::vector<int> blocked(h.vertex_count, 0);
    detail::enumerate_stable_sets_rec(
        h, 0, 0, max_size, current, blocked,
        [&](const std::vector<char>& set, int size) {
            bool keep = (mode == cardinality_mode::exact && size == k)
                        || (mode == cardinality_mode::at_least && size >= k)
                        || (mode == cardinality_mode::at_most && size <= k);
            if (keep)
                family.vectors.push_back(set);
        });
    return family;
}

struct tree_enumeration
{
    incidence_family family;
    std::optional<double> opt_value;        // minimum weight, when any tree qualifies
    std::optional<std::vector<int>> opt_tree;
};

/***
 * All spanning trees by backtracking over the edge list with cycle pruning;
 * optionally filtered to the conflict-free ones. The optimum over the
 * enumerated family doubles as the exact MSTCC oracle on tiny instances.
 */
inline tree_enumeration enumerate_spanning_trees(const instance& inst, bool stable_only)
{
    if (inst.g.vertex_count > 9)
        throw std::invalid_argument("spanning tree enumeration guard: |V| must be at most 9");

    const int n = inst.g.vertex_count;
    const int m = inst.g.edge_count();
    const int need = n - 1;
    conflict_graph h = build_conflict_graph(inst);

    tree_enumeration out;
    out.family.dimension = m;
    out.family.kind = stable_only ? family_kind::stable_spanning_tree : family_kind::spanning_tree;

    std::vector<char> current(m, 0);
    std::vector<int> chosen_list;

    auto record = [&]() {
        out.family.vectors.push_back(current);
        double w = 0.0;
        for (int e : chosen_list)
            w += inst.g.weights[e];
        if (!out.opt_value || w < *out.opt_value)
        {
            out.opt_value = w;
            out.opt_tree = chosen_list;
        }
    };

    // recursion over edges, union-find copied on the include branch
    std::function<void(int, int, union_find)> rec = [&](int e, int chosen, union_find uf) {
        if (chosen == need)
        {
            record();
            return;
        }
        if (e == m || chosen + (m - e) < need)
            return;

        // include e when it joins components and respects conflicts
        bool conflict_free = true;
        if (stable_only)
            for (int f : h.adj[e])
                if (current[f])
                {
                    conflict_free = false;
                    break;
                }
        const auto& [u, v] = inst.g.edges[e];
        if (conflict_free && uf.find(u) != uf.find(v))
        {
            union_find uf2 = uf;
            uf2.unite(u, v);
            current[e] = 1;
            chosen_list.push_back(e);
            rec(e + 1, chosen + 1, std::move(uf2));
            chosen_list.pop_back();
            current[e] = 0;
        }

        rec(e + 1, chosen, std::move(uf));
    };
    rec(0, 0, union_find(n));

    if (out.opt_tree)
        std::sort(out.opt_tree->begin(), out.opt_tree->end());
    return out;
}

inline tree_enumeration enumerate_stable_spanning_trees(const instance& inst)
{
    return enumerate_spanning_trees(inst, true);
}

/***
 * Convex-hull membership as an elastic LP: convex weights over the family
 * must reproduce the point coordinate by coordinate, with the total absolute
 * deviation minimized. The point is declared inside when that total is at
 * most the tolerance.
 */
inline bool membership_in_hull(std::span<const double> point,
                               const incidence_family& family,
                               double tol = 1e-7)
{
    if (family.empty())
        return false;
    const int n = family.dimension;
    const int f = static_cast<int>(family.size());

    lp::model md;
    const int cols = f + 2 * n;   // weights, then deviation pairs per coordinate
    md.objective.assign(cols, 0.0);
    md.lower.assign(cols, 0.0);
    md.upper.assign(cols, 1.0);
    for (int r = 0; r < 2 * n; ++r)
    {
        md.objective[f + r] = 1.0;
        md.upper[f + r] = lp::infinity;
    }

    for (int r = 0; r < n; ++r)
    {
        lp::row row;
        row.coef.assign(cols, 0.0);
        for (int i = 0; i < f; ++i)
            row.coef[i] = family.vectors[i][r];
        row.coef[f + 2 * r] = 1.0;
        row.coef[f + 2 * r + 1] = -1.0;
        row.rel = lp::relation::eq;
        row.rhs = point[r];
        md.rows.push_back(std::move(row));
    }
    lp::row convexity;
    convexity.coef.assign(cols, 0.0);
    std::fill(convexity.coef.begin(), convexity.coef.begin() + f, 1.0);
    convexity.rel = lp::relation::eq;
    convexity.rhs = 1.0;
    md.rows.push_back(std::move(convexity));

    lp::outcome res = lp::solve_min(md);
    return res.st == lp::status::optimal && res.value <= tol;
}

/// affine rank of the family: rank of {chi - chi_0}
inline int polytope_dimension(const incidence_family& family)
{
    if (family.empty())
        throw std::invalid_argument("dimension of an empty family");
    const int n = family.dimension;

    std::vector<std::vector<double>> basis;   // reduced row-echelon rows
    std::vector<int> pivot_col;
    const auto& base = family.vectors[0];

    for (size_t idx = 1; idx < family.size(); ++idx)
    {
        std::vector<double> v(n);
        for (int r = 0; r < n; ++r)
            v[r] = static_cast<double>(family.vectors[idx][r]) - base[r];

        for (size_t b = 0; b < basis.size(); ++b)
        {
            double factor = v[pivot_col[b]];
            if (factor == 0.0)
                continue;
            for (int r = 0; r < n; ++r)
                v[r] -= factor * basis[b][r];
        }
        int pc = -1;
        double best = 1e-7;
        for (int r = 0; r < n; ++r)
            if (std::abs(v[r]) > best)
            {
                best = std::abs(v[r]);
                pc = r;
            }
        if (pc < 0)
            continue;
        double piv = v[pc];
        for (int r = 0; r < n; ++r)
            v[r] /= piv;
        basis.push_back(std::move(v));
        pivot_col.push_back(pc);
        if (static_cast<int>(basis.size()) == n)
            break;
    }
    return static_cast<int>(basis.size());
}

struct check_report
{
    std::string check;        // which property was exercised
    long instances = 0;       // points / identities tested
    long violations = 0;
    std::string witness;      // description of the first violation, if any
};

namespace detail {

inline std::vector<double> random_convex_combination(const incidence_family& family,
                                                     const std::vector<size_t>& member_pool,
                                                     std::mt19937_64& rng)
{
    std::uniform_int_distribution<size_t> pick(0, member_pool.size() - 1);
    int t = 2 + static_cast<int>(rng() % 4);
    std::vector<size_t> members(t);
    std::vector<double> weights(t);
    double total = 0.0;
    for (int i = 0; i < t; ++i)
    {
        members[i] = member_pool[pick(rng)];
        weights[i] = std::uniform_real_distribution<>(0.05, 1.0)(rng);
        total += weights[i];
    }
    std::vector<double> point(family.dimension, 0.0);
    for (int i = 0; i < t; ++i)
        for (int r = 0; r < family.dimension; ++r)
            point[r] += (weights[i] / total) * family.vectors[members[i]][r];
    return point;
}

} // namespace detail

/***
 * Sampling verification of the intersection identities between the hulls of
 * stable sets of cardinality >= k, <= k and exactly k:
 *
 *   - hull-intersection: a convex combination of >=k members that lies in
 *     the <=k hull must lie in the exact-k hull, and symmetrically;
 *   - cardinality-face: combinations of >=k members with coordinate sum k,
 *     built by LP over random objectives, must lie in the exact-k hull (and
 *     such a combination exists iff some exact-k stable set does);
 *   - extreme-point-intersection: the 0/1 members of both relaxed families
 *     are exactly the exact-k members (0/1 points of a polytope inside the
 *     unit cube are vertices, so this is the vertex-set identity).
 *
 * Half of the sampled combinations are drawn from the minimum-cardinality
 * members so the nontrivial branch of the first identity actually fires.
 */
inline std::vector<check_report> check_intersection_theorems(const conflict_graph& h,
                                                             int k,
                                                             int samples,
                                                             unsigned long seed)
{
    std::mt19937_64 rng(seed);

    incidence_family exact = enumerate_kstabs(h, k, cardinality_mode::exact);
    incidence_family up = enumerate_kstabs(h, k, cardinality_mode::at_least);
    incidence_family down = enumerate_kstabs(h, k, cardinality_mode::at_most);

    check_report inter{"hull-intersection", 0, 0, ""};
    check_report face{"cardinality-face", 0, 0, ""};
    check_report vertex{"extreme-point-intersection", 0, 0, ""};

    auto describe = [](std::span<const double> p) {
        std::string s = "(";
        char buf[32];
        for (size_t i = 0; i < p.size(); ++i)
        {
            std::snprintf(buf, sizeof buf, "%g", p[i]);
            s += buf;
            if (i + 1 < p.size())
                s += ",";
        }
        return s + ")";
    };

    // --- hull-intersection, sampled from both sides
    auto run_side = [&](const incidence_family& source, const incidence_family& other) {
        if (source.empty())
            return;
        std::vector<size_t> pool_all(source.size());
        std::iota(pool_all.begin(), pool_all.end(), 0);

        size_t min_card = h.vertex_count + 1;
        for (const auto& v : source.vectors)
            min_card = std::min(min_card, static_cast<size_t>(
                                              std::count(v.begin(), v.end(), char(1))));
        std::vector<size_t> pool_min;
        for (size_t i = 0; i < source.size(); ++i)
            if (static_cast<size_t>(std::count(source.vectors[i].begin(),
                                               source.vectors[i].end(), char(1)))
                == min_card)
                pool_min.push_back(i);

        for (int s = 0; s < samples; ++s)
        {
            const auto& pool = (s % 2 == 0 && !pool_min.empty()) ? pool_min : pool_all;
            std::vector<double> point = detail::random_convex_combination(source, pool, rng);
            ++inter.instances;
            if (membership_in_hull(point, other) && !membership_in_hull(point, exact))
            {
                ++inter.violations;
                if (inter.witness.empty())
                    inter.witness = describe(point);
            }
        }
    };
    run_side(up, down);
    run_side(down, up);

    // --- cardinality-face via LP over the >=k family
    if (!up.empty())
    {
        const int f = static_cast<int>(up.size());
        lp::model md = lp::model::with_unit_box(f);
        lp::row convexity;
        convexity.coef.assign(f, 1.0);
        convexity.rel = lp::relation::eq;
        convexity.rhs = 1.0;
        md.rows.push_back(convexity);
        lp::row card;
        card.coef.resize(f);
        for (int i = 0; i < f; ++i)
            card.coef[i] = static_cast<double>(
                std::count(up.vectors[i].begin(), up.vectors[i].end(), char(1)));
        card.rel = lp::relation::eq;
        card.rhs = k;
        md.rows.push_back(card);

        for (int s = 0; s < std::max(2, samples / 4); ++s)
        {
            for (int i = 0; i < f; ++i)
                md.objective[i] = std::uniform_real_distribution<>(-1.0, 1.0)(rng);
            lp::outcome res = lp::solve_min(md);
            ++face.instances;
            if (res.st != lp::status::optimal)
            {
                // no combination reaches sum k: legitimate only when no kstab exists
                if (!exact.empty())
                {
                    ++face.violations;
                    if (face.witness.empty())
                        face.witness = "face LP infeasible although exact-k sets exist";
                }
                continue;
            }
            std::vector<double> point(up.dimension, 0.0);
            for (int i = 0; i < f; ++i)
                if (res.primal[i] > 0.0)
                    for (int r = 0; r < up.dimension; ++r)
                        point[r] += res.primal[i] * up.vectors[i][r];
            if (!membership_in_hull(point, exact))
            {
                ++face.violations;
                if (face.witness.empty())
                    face.witness = describe(point);
            }
        }
    }
    else if (!exact.empty())
    {
        ++face.instances;
        ++face.violations;
        face.witness = "exact-k sets exist but the >=k family is empty";
    }

    // --- extreme-point identity as a set identity over 0/1 members
    {
        ++vertex.instances;
        std::set<std::vector<char>> up_set(up.vectors.begin(), up.vectors.end());
        std::set<std::vector<char>> down_set(down.vectors.begin(), down.vectors.end());
        std::set<std::vector<char>> exact_set(exact.vectors.begin(), exact.vectors.end());
        std::set<std::vector<char>> both;
        for (const auto& v : up_set)
            if (down_set.count(v))
                both.insert(v);
        if (both != exact_set)
        {
            ++vertex.violations;
            vertex.witness = "vertex sets differ";
        }
    }

    return {inter, face, vertex};
}

/***
 * Exact LD dual optimum on tiny instances: the minimum of w'x over the
 * intersection of the spanning tree hull and the exact-k stable set hull,
 * as one LP over convex multipliers of the two enumerated families.
 */
inline std::optional<double> ld_bound_oracle(const instance& inst)
{
    tree_enumeration trees = enumerate_spanning_trees(inst, false);
    conflict_graph h = build_conflict_graph(inst);
    incidence_family kstabs = enumerate_kstabs(h, inst.k(), cardinality_mode::exact);

    if (trees.family.empty() || kstabs.empty())
        return std::nullopt;

    const int m = inst.g.edge_count();
    const int ft = static_cast<int>(trees.family.size());
    const int fs = static_cast<int>(kstabs.size());

    lp::model md = lp::model::with_unit_box(ft + fs);
    for (int i = 0; i < ft; ++i)
    {
        double w = 0.0;
        for (int r = 0; r < m; ++r)
            w += inst.g.weights[r] * trees.family.vectors[i][r];
        md.objective[i] = w;
    }

    for (int r = 0; r < m; ++r)
    {
        lp::row row;
        row.coef.assign(ft + fs, 0.0);
        for (int i = 0; i < ft; ++i)
            row.coef[i] = trees.family.vectors[i][r];
        for (int j = 0; j < fs; ++j)
            row.coef[ft + j] = -static_cast<double>(kstabs.vectors[j][r]);
        row.rel = lp::relation::eq;
        row.rhs = 0.0;
        md.rows.push_back(std::move(row));
    }
    for (int part = 0; part < 2; ++part)
    {
        lp::row row;
        row.coef.assign(ft + fs, 0.0);
        for (int i = 0; i < (part == 0 ? ft : fs); ++i)
            row.coef[(part == 0 ? 0 : ft) + i] = 1.0;
        row.rel = lp::relation::eq;
        row.rhs = 1.0;
        md.rows.push_back(std::move(row));
    }

    lp::outcome res = lp::solve_min(md);
    if (res.st != lp::status::optimal)
        return std::nullopt;
    return res.value;
}

/***
 * Value of the continuous relaxation of the natural formulation with every
 * subtour elimination row materialized; tractable only on tiny instances.
 */
inline std::optional<double> natural_lp_value(const instance& inst)
{
    const int n = inst.g.vertex_count;
    const int m = inst.g.edge_count();
    if (n > 10)
        throw std::invalid_argument("natural LP guard: |V| must be at most 10");

    lp::model md = lp::model::with_unit_box(m);
    md.objective = inst.g.weights;

    lp::row card;
    card.coef.assign(m, 1.0);
    card.rel = lp::relation::eq;
    card.rhs = n - 1;
    md.rows.push_back(std::move(card));

    for (unsigned long mask = 1; mask + 1 < (1ul << n); ++mask)
    {
        int size = __builtin_popcountl(mask);
        if (size < 2)
            continue;
        lp::row row;
        row.coef.assign(m, 0.0);
        bool nonempty = false;
        for (int e = 0; e < m; ++e)
        {
            const auto& [u, v] = inst.g.edges[e];
            if ((mask >> u & 1) && (mask >> v & 1))
            {
                row.coef[e] = 1.0;
                nonempty = true;
            }
        }
        if (!nonempty)
            continue;
        row.rel = lp::relation::le;
        row.rhs = size - 1;
        md.rows.push_back(std::move(row));
    }

    for (const auto& [i, j] : inst.conflicts)
    {
        lp::row row;
        row.coef.assign(m, 0.0);
        row.coef[i] = 1.0;
        row.coef[j] = 1.0;
        row.rel = lp::relation::le;
        row.rhs = 1.0;
        md.rows.push_back(std::move(row));
    }

    lp::outcome res = lp::solve_min(md);
    if (res.st != lp::status::optimal)
        return std::nullopt;
    return res.value;
}

} // namespace ctb::lab
