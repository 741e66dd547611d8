#include <catch2/catch_amalgamated.hpp>

#include "ctb/lab.hpp"
#include "support.hpp"

using namespace ctb;
using namespace ctb::lab;

static conflict_graph from_edges(int n, const std::vector<edge_pair>& edges)
{
    conflict_graph h;
    h.vertex_count = n;
    h.edge_count = static_cast<int>(edges.size());
    h.adj.assign(n, {});
    for (const auto& [u, v] : edges)
    {
        h.adj[u].push_back(v);
        h.adj[v].push_back(u);
    }
    for (auto& a : h.adj)
        std::sort(a.begin(), a.end());
    return h;
}

static instance k4_toy(std::vector<edge_pair> conflicts = {})
{
    return make_instance(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
                         {1, 2, 3, 4, 5, 6}, std::move(conflicts));
}

TEST_CASE("kstab enumeration")
{
    SECTION("edgeless, exactly 2 of 4")
    {
        incidence_family fam = enumerate_kstabs(from_edges(4, {}), 2);
        REQUIRE(fam.size() == 6);   // C(4,2)
    }
    SECTION("triangle has no 2-stable set")
    {
        incidence_family fam =
            enumerate_kstabs(from_edges(3, {{0, 1}, {0, 2}, {1, 2}}), 2);
        REQUIRE(fam.empty());
    }
    SECTION("path, at most 2")
    {
        incidence_family fam = enumerate_kstabs(from_edges(3, {{0, 1}, {1, 2}}), 2,
                                                cardinality_mode::at_most);
        REQUIRE(fam.size() == 5);   // {}, {a}, {b}, {c}, {a,c}
    }
    SECTION("guard")
    {
        REQUIRE_THROWS_AS(enumerate_kstabs(from_edges(25, {}), 2), std::invalid_argument);
    }
}

TEST_CASE("spanning tree enumeration")
{
    SECTION("K4 has 16 spanning trees")
    {
        auto trees = enumerate_spanning_trees(k4_toy(), false);
        REQUIRE(trees.family.size() == 16);
        REQUIRE_THAT(*trees.opt_value, Catch::Matchers::WithinAbs(6.0, 1e-12));
    }
    SECTION("a conflict filters the family")
    {
        auto trees = enumerate_stable_spanning_trees(k4_toy({{0, 1}}));
        REQUIRE(trees.family.size() < 16);
        REQUIRE(trees.opt_value);
        REQUIRE(*trees.opt_value >= 6.0);
        // the optimum avoids using e0 and e1 together
        bool has_e0 = std::count(trees.opt_tree->begin(), trees.opt_tree->end(), 0) > 0;
        bool has_e1 = std::count(trees.opt_tree->begin(), trees.opt_tree->end(), 1) > 0;
        REQUIRE_FALSE((has_e0 && has_e1));
    }
    SECTION("all pairs conflicting on a triangle is infeasible")
    {
        instance tri = make_instance(3, {{0, 1}, {0, 2}, {1, 2}}, {1, 1, 1},
                                     {{0, 1}, {0, 2}, {1, 2}});
        auto trees = enumerate_stable_spanning_trees(tri);
        REQUIRE_FALSE(trees.opt_value);
    }
}

TEST_CASE("hull membership")
{
    incidence_family fam = enumerate_kstabs(from_edges(4, {}), 2);

    SECTION("members are inside")
    {
        std::vector<double> p(fam.vectors[0].begin(), fam.vectors[0].end());
        REQUIRE(membership_in_hull(p, fam));
    }
    SECTION("midpoints are inside")
    {
        std::vector<double> p(4);
        for (int r = 0; r < 4; ++r)
            p[r] = 0.5 * (fam.vectors[0][r] + fam.vectors[1][r]);
        REQUIRE(membership_in_hull(p, fam));
    }
    SECTION("a 0/1 point outside the family is outside the hull")
    {
        std::vector<double> p{1, 1, 1, 0};   // cardinality 3
        REQUIRE_FALSE(membership_in_hull(p, fam));
    }
    SECTION("clearly exterior point")
    {
        std::vector<double> p{0, 0, 0, 0};
        REQUIRE_FALSE(membership_in_hull(p, fam));
    }
}

TEST_CASE("polytope dimension")
{
    SECTION("edgeless n=4, k=2")
    {
        REQUIRE(polytope_dimension(enumerate_kstabs(from_edges(4, {}), 2)) == 3);
    }
    SECTION("single edge, k=1")
    {
        REQUIRE(polytope_dimension(enumerate_kstabs(from_edges(2, {{0, 1}}), 1)) == 1);
    }
    SECTION("triangle, k=1")
    {
        REQUIRE(polytope_dimension(enumerate_kstabs(from_edges(3, {{0, 1}, {0, 2}, {1, 2}}), 1))
                == 2);
    }
    SECTION("empty family throws")
    {
        incidence_family empty;
        REQUIRE_THROWS_AS(polytope_dimension(empty), std::invalid_argument);
    }
}

TEST_CASE("intersection checks on named graphs")
{
    for (auto [h, k] : {std::pair{from_edges(3, {{0, 1}, {1, 2}}), 2},
                        std::pair{from_edges(4, {}), 2},
                        std::pair{from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}), 2}})
    {
        for (const auto& rep : check_intersection_theorems(h, k, 60, 17))
        {
            INFO(rep.check << " witness: " << rep.witness);
            REQUIRE(rep.violations == 0);
        }
    }
}

TEST_CASE("ld bound oracle")
{
    SECTION("no conflicts collapses to the MST value")
    {
        auto zeta = ld_bound_oracle(k4_toy());
        REQUIRE(zeta);
        REQUIRE_THAT(*zeta, Catch::Matchers::WithinAbs(6.0, 1e-7));
    }
    SECTION("K4 toy with one conflict sits between MST and OPT")
    {
        instance inst = k4_toy({{0, 1}});
        auto zeta = ld_bound_oracle(inst);
        auto trees = enumerate_stable_spanning_trees(inst);
        REQUIRE(zeta);
        REQUIRE(*zeta >= 6.0 - 1e-9);
        REQUIRE(*zeta <= *trees.opt_value + 1e-9);
    }
    SECTION("empty intersection is reported")
    {
        instance tri = make_instance(3, {{0, 1}, {0, 2}, {1, 2}}, {1, 1, 1},
                                     {{0, 1}, {0, 2}, {1, 2}});
        REQUIRE_FALSE(ld_bound_oracle(tri));
    }
}

TEST_CASE("ld bound dominates the natural LP relaxation")
{
    std::mt19937_64 rng(606);
    int compared = 0;
    for (int trial = 0; trial < 25; ++trial)
    {
        int n = 4 + static_cast<int>(rng() % 3);   // 4..6
        instance inst = testsupport::random_connected_instance(
            n, static_cast<int>(rng() % 4), 2 + static_cast<int>(rng() % 4), rng);
        auto zeta = ld_bound_oracle(inst);
        if (!zeta)
            continue;
        auto lp_value = natural_lp_value(inst);
        REQUIRE(lp_value);
        REQUIRE(*zeta >= *lp_value - 1e-6);
        ++compared;
    }
    REQUIRE(compared > 5);
}
