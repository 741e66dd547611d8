#include <catch2/catch_amalgamated.hpp>

#include "ctb/lp.hpp"
#include "support.hpp"

using namespace ctb;

TEST_CASE("simple bounded minimization")
{
    lp::model md = lp::model::with_unit_box(2);
    md.objective = {-1, -1};
    md.rows.push_back({{1, 1}, lp::relation::le, 1});
    lp::outcome res = lp::solve_min(md);
    REQUIRE(res.st == lp::status::optimal);
    REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(-1.0, 1e-9));
    REQUIRE_THAT(res.primal[0] + res.primal[1], Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("cardinality-plus-stability toy model")
{
    lp::model md = lp::model::with_unit_box(3);
    md.objective = {1, 5, 2};
    md.rows.push_back({{1, 1, 1}, lp::relation::eq, 2});
    md.rows.push_back({{1, 1, 0}, lp::relation::le, 1});
    md.rows.push_back({{0, 1, 1}, lp::relation::le, 1});
    lp::outcome res = lp::solve_min(md);
    REQUIRE(res.st == lp::status::optimal);
    REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(3.0, 1e-9));
    REQUIRE_THAT(res.primal[0], Catch::Matchers::WithinAbs(1.0, 1e-8));
    REQUIRE_THAT(res.primal[1], Catch::Matchers::WithinAbs(0.0, 1e-8));
    REQUIRE_THAT(res.primal[2], Catch::Matchers::WithinAbs(1.0, 1e-8));
}

TEST_CASE("infeasibility is a status")
{
    lp::model md = lp::model::with_unit_box(1);
    md.upper[0] = 3;
    md.rows.push_back({{1}, lp::relation::eq, 2});
    md.rows.push_back({{1}, lp::relation::le, 1});
    REQUIRE(lp::solve_min(md).st == lp::status::infeasible);
}

TEST_CASE("unbounded detection")
{
    lp::model md;
    md.objective = {-1};
    md.lower = {0};
    md.upper = {lp::infinity};
    md.rows.push_back({{-1}, lp::relation::le, 0});
    REQUIRE(lp::solve_min(md).st == lp::status::unbounded);
}

TEST_CASE("resolve_with_rows")
{
    lp::model md = lp::model::with_unit_box(2);
    md.objective = {-1, -1};
    md.rows.push_back({{1, 1}, lp::relation::le, 1});
    lp::outcome base = lp::solve_min(md);

    SECTION("non-binding row leaves the value unchanged")
    {
        lp::row extra{{1, 0}, lp::relation::le, 5};
        lp::outcome res = lp::resolve_with_rows(md, std::span<const lp::row>(&extra, 1));
        REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(base.value, 1e-9));
    }
    SECTION("duplicate row is a no-op on the value")
    {
        lp::row dup = md.rows[0];
        lp::outcome res = lp::resolve_with_rows(md, std::span<const lp::row>(&dup, 1));
        REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(base.value, 1e-9));
    }
    SECTION("violated odd-cycle row on the fractional C5 relaxation")
    {
        // max sum y (as min of the negation) over the edge relaxation of C5
        lp::model c5 = lp::model::with_unit_box(5);
        c5.objective.assign(5, -1.0);
        for (int i = 0; i < 5; ++i)
        {
            lp::row r;
            r.coef.assign(5, 0.0);
            r.coef[i] = 1.0;
            r.coef[(i + 1) % 5] = 1.0;
            r.rel = lp::relation::le;
            r.rhs = 1.0;
            c5.rows.push_back(std::move(r));
        }
        lp::outcome frac = lp::solve_min(c5);
        REQUIRE_THAT(frac.value, Catch::Matchers::WithinAbs(-2.5, 1e-9));   // y = 1/2 everywhere

        lp::row cut;
        cut.coef.assign(5, 1.0);
        cut.rel = lp::relation::le;
        cut.rhs = 2.0;
        lp::outcome strengthened = lp::resolve_with_rows(c5, std::span<const lp::row>(&cut, 1));
        // oracle: fresh solve of the extended model
        lp::model extended = c5;
        extended.rows.push_back(cut);
        lp::outcome fresh = lp::solve_min(extended);
        REQUIRE_THAT(strengthened.value, Catch::Matchers::WithinAbs(fresh.value, 1e-9));
        REQUIRE_THAT(strengthened.value, Catch::Matchers::WithinAbs(-2.0, 1e-9));
    }
}

TEST_CASE("degenerate models terminate")
{
    // many redundant rows forcing degenerate pivots
    lp::model md = lp::model::with_unit_box(4);
    md.objective = {1, 1, 1, 1};
    for (int i = 0; i < 4; ++i)
    {
        lp::row r;
        r.coef.assign(4, 0.0);
        r.coef[i] = 1.0;
        r.rel = lp::relation::le;
        r.rhs = 0.0;
        md.rows.push_back(r);
        md.rows.push_back(r);
    }
    lp::row sum{{1, 1, 1, 1}, lp::relation::eq, 0.0};
    md.rows.push_back(sum);
    lp::outcome res = lp::solve_min(md);
    REQUIRE(res.st == lp::status::optimal);
    REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(0.0, 1e-9));
}

TEST_CASE("random models match vertex enumeration")
{
    std::mt19937_64 rng(4242);
    int solved = 0;
    for (int trial = 0; trial < 250; ++trial)
    {
        int n = 2 + static_cast<int>(rng() % 5);           // 2..6 variables
        int rows = 1 + static_cast<int>(rng() % 6);        // 1..6 rows
        lp::model md = lp::model::with_unit_box(n);
        for (int j = 0; j < n; ++j)
            md.objective[j] = std::uniform_real_distribution<>(-5, 5)(rng);
        for (int i = 0; i < rows; ++i)
        {
            lp::row r;
            r.coef.resize(n);
            for (int j = 0; j < n; ++j)
                r.coef[j] = std::uniform_real_distribution<>(-3, 3)(rng);
            r.rel = (rng() % 4 == 0) ? lp::relation::eq : lp::relation::le;
            r.rhs = std::uniform_real_distribution<>(-2, 4)(rng);
            md.rows.push_back(std::move(r));
        }

        auto brute = testsupport::brute_force_lp_min(md);
        lp::outcome res = lp::solve_min(md);
        if (brute)
        {
            ++solved;
            REQUIRE(res.st == lp::status::optimal);
            REQUIRE_THAT(res.value, Catch::Matchers::WithinAbs(*brute, 1e-7));
        }
        else
            REQUIRE(res.st == lp::status::infeasible);
    }
    REQUIRE(solved > 50);   // the generator must exercise the optimal path
}
