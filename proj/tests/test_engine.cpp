#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <functional>

#include "ctb/engine.hpp"
#include "ctb/io.hpp"
#include "ctb/lab.hpp"
#include "ctb/report.hpp"
#include "support.hpp"

using namespace ctb;

static instance k4_toy(std::vector<edge_pair> conflicts = {})
{
    return make_instance(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
                         {1, 2, 3, 4, 5, 6}, std::move(conflicts), "k4toy");
}

static engine_config quick_config()
{
    engine_config cfg;
    cfg.total_budget = 10.0;
    cfg.ascent_budget = 5.0;
    cfg.kstab_bound_budget = 5.0;
    cfg.volume.max_iters = 250;
    cfg.keep_dual_trace = true;
    return cfg;
}

TEST_CASE("evaluate_dual")
{
    SECTION("no conflicts at lambda = 0 gives the MST value")
    {
        instance inst = k4_toy();
        dual_evaluator eval(inst);
        auto point = eval.evaluate(multipliers(6, 0.0));
        REQUIRE(point);
        REQUIRE_THAT(point->value, Catch::Matchers::WithinAbs(6.0, 1e-9));
        REQUIRE(point->exact);
    }
    SECTION("one conflict at lambda = 0 still sees the unconstrained MST")
    {
        instance inst = k4_toy({{0, 1}});
        dual_evaluator eval(inst);
        auto point = eval.evaluate(multipliers(6, 0.0));
        REQUIRE(point);
        REQUIRE_THAT(point->value, Catch::Matchers::WithinAbs(6.0, 1e-9));
        for (int g : point->subgradient)
            REQUIRE((g >= -1 && g <= 1));
    }
    SECTION("all-conflicting triangle is infeasible")
    {
        instance tri = make_instance(3, {{0, 1}, {0, 2}, {1, 2}}, {1, 1, 1},
                                     {{0, 1}, {0, 2}, {1, 2}});
        dual_evaluator eval(tri);
        REQUIRE_FALSE(eval.evaluate(multipliers(3, 0.0)));
    }
    SECTION("value identity")
    {
        instance inst = k4_toy({{0, 1}});
        dual_evaluator eval(inst);
        multipliers lambda{0.5, -1.0, 2.0, 0.0, 1.5, -0.5};
        auto point = eval.evaluate(lambda);
        REQUIRE(point);
        double recomputed = 0.0;
        for (int e : point->tree.edge_set)
            recomputed += inst.g.weights[e] - lambda[e];
        for (int e : *point->kstab.best_set)
            recomputed += lambda[e];
        REQUIRE_THAT(point->value, Catch::Matchers::WithinAbs(recomputed, 1e-9));
    }
}

TEST_CASE("initial kstab bound")
{
    SECTION("no conflicts: sum of the |V|-1 smallest weights")
    {
        instance inst = k4_toy();
        dual_evaluator eval(inst);
        kstab_bound_outcome kb = initial_kstab_bound(eval, 5.0);
        REQUIRE_FALSE(kb.infeasible);
        REQUIRE_THAT(kb.bound, Catch::Matchers::WithinAbs(6.0, 1e-9));   // 1+2+3
    }
    SECTION("bound is below the exhaustive optimum")
    {
        std::mt19937_64 rng(99);
        for (int trial = 0; trial < 15; ++trial)
        {
            instance inst = testsupport::random_connected_instance(
                5, static_cast<int>(rng() % 4), 2 + static_cast<int>(rng() % 4), rng);
            auto brute = lab::enumerate_stable_spanning_trees(inst);
            dual_evaluator eval(inst);
            kstab_bound_outcome kb = initial_kstab_bound(eval, 5.0);
            if (brute.opt_value)
            {
                REQUIRE_FALSE(kb.infeasible);
                REQUIRE(kb.bound <= *brute.opt_value + 1e-9);
            }
        }
    }
}

TEST_CASE("solve on the K4 toy")
{
    instance inst = k4_toy({{0, 1}});
    auto brute = lab::enumerate_stable_spanning_trees(inst);
    auto zeta = lab::ld_bound_oracle(inst);

    bound_report rep = solve(inst, quick_config());
    REQUIRE_FALSE(rep.infeasible);
    REQUIRE(rep.best_dual >= rep.kstab_bound - 1e-9);
    REQUIRE(rep.best_dual <= *zeta + 1e-6);
    for (double z : rep.dual_trace)
        REQUIRE(z <= *brute.opt_value + 1e-6);
    for (size_t i = 1; i < rep.ascent_values.size(); ++i)
        REQUIRE(rep.ascent_values[i] > rep.ascent_values[i - 1]);
    REQUIRE(rep.integral_weights);
    REQUIRE(rep.best_dual_ceil == std::ceil(rep.best_dual - 1e-9));
}

TEST_CASE("engine status paths")
{
    SECTION("infeasible triangle")
    {
        instance tri = make_instance(3, {{0, 1}, {0, 2}, {1, 2}}, {1, 1, 1},
                                     {{0, 1}, {0, 2}, {1, 2}});
        bound_report rep = solve(tri, quick_config());
        REQUIRE(rep.infeasible);
    }
    SECTION("no conflicts: the MST bound appears immediately")
    {
        bound_report rep = solve(k4_toy(), quick_config());
        REQUIRE_FALSE(rep.infeasible);
        REQUIRE_THAT(rep.best_dual, Catch::Matchers::WithinAbs(6.0, 1e-9));
        REQUIRE(!rep.dual_trace.empty());
        REQUIRE_THAT(rep.dual_trace.front(), Catch::Matchers::WithinAbs(6.0, 1e-9));
    }
    SECTION("zero total budget still reports the warm bounds without error")
    {
        engine_config cfg = quick_config();
        cfg.total_budget = 0.0;
        bound_report rep = solve(k4_toy({{0, 1}}), cfg);
        REQUIRE_FALSE(rep.infeasible);
        REQUIRE(std::isfinite(rep.best_dual));
    }
    SECTION("strict half-weight and zero starts are both valid")
    {
        for (auto start : {multiplier_start::half_weights, multiplier_start::zero})
        {
            engine_config cfg = quick_config();
            cfg.start = start;
            bound_report rep = solve(k4_toy({{0, 1}}), cfg);
            auto brute = lab::enumerate_stable_spanning_trees(k4_toy({{0, 1}}));
            REQUIRE(rep.best_dual <= *brute.opt_value + 1e-6);
        }
    }
}

TEST_CASE("report serialization")
{
    bound_report rep = solve(k4_toy({{0, 1}}), quick_config());
    nlohmann::json j = to_json(rep);

    SECTION("required fields are present")
    {
        for (const char* key : {"instance", "status", "kstab", "ld", "phases", "reductions",
                                "budgets", "volume_config", "ascent_trace"})
            REQUIRE(j.contains(key));
        REQUIRE(j["instance"]["name"].is_string());
        REQUIRE(j["ld"]["best_dual"].is_number());
        REQUIRE(j["status"]["infeasible"].is_boolean());
    }
    SECTION("table row formatting")
    {
        std::string row = table_row(rep, 8.0);
        REQUIRE(row.find("k4toy") == 0);
        std::string header = table_header();
        REQUIRE(header.find("KSTAB") != std::string::npos);
        REQUIRE(header.find("% from OPT") != std::string::npos);
    }
    SECTION("csv row has the declared column count")
    {
        std::string header = csv_header();
        std::string row = csv_row(rep, std::nullopt);
        auto count_commas = [](const std::string& s) {
            return std::count(s.begin(), s.end(), ',');
        };
        REQUIRE(count_commas(header) == count_commas(row));
    }
}

TEST_CASE("report schema file matches emitted reports")
{
    // minimal structural validation against the shipped schema: every
    // required property exists and has the declared primitive type
    std::ifstream schema_file("schema/bound_report.schema.json");
    REQUIRE(schema_file.good());
    nlohmann::json schema = nlohmann::json::parse(schema_file);

    bound_report rep = solve(k4_toy({{0, 1}}), quick_config());
    nlohmann::json doc = to_json(rep);

    std::function<void(const nlohmann::json&, const nlohmann::json&)> check =
        [&](const nlohmann::json& node_schema, const nlohmann::json& node) {
            if (!node_schema.contains("type"))
                return;
            std::string type = node_schema["type"];
            if (type == "object")
            {
                REQUIRE(node.is_object());
                if (node_schema.contains("required"))
                    for (const auto& req : node_schema["required"])
                        REQUIRE(node.contains(req.get<std::string>()));
                if (node_schema.contains("properties"))
                    for (auto& [key, sub] : node_schema["properties"].items())
                        if (node.contains(key))
                            check(sub, node[key]);
            }
            else if (type == "array")
            {
                REQUIRE(node.is_array());
                if (node_schema.contains("items"))
                    for (const auto& item : node)
                        check(node_schema["items"], item);
            }
            else if (type == "number")
                REQUIRE(node.is_number());
            else if (type == "integer")
                REQUIRE(node.is_number_integer());
            else if (type == "string")
                REQUIRE(node.is_string());
            else if (type == "boolean")
                REQUIRE(node.is_boolean());
        };
    check(schema, doc);
}
