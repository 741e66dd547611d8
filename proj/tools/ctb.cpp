// ctb: dual bounds for minimum spanning trees under conflict constraints.
//
// Subcommands: solve (full pipeline), kstab-bound, ascent-only, lab
// (polytope verification suites), brute (exhaustive optimum on tiny
// instances), batch (a directory of instances).

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ctb/engine.hpp"
#include "ctb/io.hpp"
#include "ctb/lab.hpp"
#include "ctb/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_infeasible = 2;
constexpr int exit_violation = 3;

struct cli_options
{
    std::string format = "auto";
    double budget = 3600.0;
    double ascent_budget = 1800.0;
    double kstab_budget = 1800.0;
    bool pairwise_probe = false;
    bool emit_json = false;
    bool emit_csv = false;
    std::string opt_file;
    unsigned long seed = 1;
    bool trace = false;
    std::string lambda0 = "half";
    double f_init = 0.1;
    double alpha_init = 0.1;
    double target_slack = 0.05;
    long max_iters = 1000000;
};

ctb::instance_format parse_format(const std::string& name)
{
    if (name == "canonical")
        return ctb::instance_format::canonical;
    if (name == "zhang")
        return ctb::instance_format::zhang;
    if (name == "carrabs")
        return ctb::instance_format::carrabs;
    return ctb::instance_format::auto_detect;
}

ctb::engine_config make_engine_config(const cli_options& opt)
{
    ctb::engine_config cfg;
    cfg.total_budget = opt.budget;
    cfg.ascent_budget = std::min(opt.ascent_budget, opt.budget);
    cfg.kstab_bound_budget = std::min(opt.kstab_budget, opt.budget);
    cfg.pairwise_probing = opt.pairwise_probe;
    cfg.start = opt.lambda0 == "zero" ? ctb::multiplier_start::zero
                                      : ctb::multiplier_start::half_weights;
    cfg.volume.f_init = opt.f_init;
    cfg.volume.alpha_init = opt.alpha_init;
    cfg.volume.target_slack = opt.target_slack;
    cfg.volume.max_iters = opt.max_iters;
    cfg.volume.time_budget = opt.budget;
    if (opt.trace)
        cfg.trace = &std::cerr;
    return cfg;
}

std::map<std::string, double> load_opt_file(const std::string& path)
{
    std::map<std::string, double> opt;
    if (path.empty())
        return opt;
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open optima file: " + path);
    std::string id;
    double value;
    while (in >> id >> value)
        opt[id] = value;
    return opt;
}

std::optional<double> known_opt(const std::map<std::string, double>& table,
                                const std::string& name)
{
    auto it = table.find(name);
    if (it == table.end())
        return std::nullopt;
    return it->second;
}

int run_solve(const std::string& path, const cli_options& opt, bool volume_phase)
{
    ctb::instance inst = ctb::load_instance_file(path, parse_format(opt.format));
    ctb::engine_config cfg = make_engine_config(opt);
    if (!volume_phase)
        cfg.volume.max_iters = 0;
    ctb::bound_report report = ctb::solve(inst, cfg);

    auto opt_table = load_opt_file(opt.opt_file);
    if (opt.emit_json)
        std::cout << ctb::to_json(report).dump(2) << '\n';
    else if (opt.emit_csv)
        std::cout << ctb::csv_header() << '\n'
                  << ctb::csv_row(report, known_opt(opt_table, report.instance_name)) << '\n';
    else
        std::cout << ctb::table_header() << '\n'
                  << ctb::table_row(report, known_opt(opt_table, report.instance_name)) << '\n';
    return report.infeasible ? exit_infeasible : exit_ok;
}

int run_kstab_bound(const std::string& path, const cli_options& opt)
{
    ctb::instance inst = ctb::load_instance_file(path, parse_format(opt.format));
    ctb::probe_result pr = ctb::probe(inst, opt.pairwise_probe);
    if (pr.log.infeasible)
    {
        std::cout << inst.name << "  infeasible (detected in preprocessing)\n";
        return exit_infeasible;
    }
    ctb::dual_evaluator eval(pr.reduced);
    ctb::kstab_bound_outcome kb = ctb::initial_kstab_bound(eval, opt.kstab_budget);
    if (kb.infeasible)
    {
        std::cout << inst.name << "  infeasible (no stable set of cardinality |V|-1)\n";
        return exit_infeasible;
    }
    if (opt.emit_json)
    {
        json j = {{"instance", inst.name},
                  {"kstab_bound", kb.bound},
                  {"time", kb.seconds},
                  {"timed_out", kb.timed_out},
                  {"nodes", kb.nodes}};
        std::cout << j.dump(2) << '\n';
    }
    else
        std::cout << inst.name << "  kstab bound " << ctb::format_bound(kb.bound)
                  << (kb.timed_out ? " (time limit, bound only)" : "") << "  [" << kb.seconds
                  << " s]\n";
    return exit_ok;
}

int run_brute(const std::string& path, const cli_options& opt)
{
    ctb::instance inst = ctb::load_instance_file(path, parse_format(opt.format));
    if (inst.g.vertex_count > 9)
    {
        std::cerr << "brute: |V| = " << inst.g.vertex_count << " exceeds the guard (9)\n";
        return exit_violation;
    }
    auto trees = ctb::lab::enumerate_stable_spanning_trees(inst);
    if (!trees.opt_value)
    {
        std::cout << inst.name << "  infeasible (no stable spanning tree)\n";
        return exit_infeasible;
    }
    if (opt.emit_json)
    {
        json j = {{"instance", inst.name},
                  {"stable_spanning_trees", trees.family.size()},
                  {"opt", *trees.opt_value},
                  {"opt_tree", *trees.opt_tree}};
        std::cout << j.dump(2) << '\n';
    }
    else
        std::cout << inst.name << "  OPT " << ctb::format_bound(*trees.opt_value) << "  ("
                  << trees.family.size() << " stable spanning trees)\n";
    return exit_ok;
}

/// every labeled graph on n vertices, as an edge mask callback
template <typename F>
void for_each_graph(int n, F&& fn)
{
    std::vector<ctb::edge_pair> all;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            all.push_back({u, v});
    for (unsigned long mask = 0; mask < (1ul << all.size()); ++mask)
    {
        ctb::conflict_graph h;
        h.vertex_count = n;
        h.adj.assign(n, {});
        for (size_t b = 0; b < all.size(); ++b)
            if (mask >> b & 1)
            {
                h.adj[all[b].first].push_back(all[b].second);
                h.adj[all[b].second].push_back(all[b].first);
                ++h.edge_count;
            }
        for (auto& a : h.adj)
            std::sort(a.begin(), a.end());
        fn(h);
    }
}

ctb::conflict_graph random_graph(int n, double density, std::mt19937_64& rng)
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

int run_lab(int max_n, int random_count, int samples, const cli_options& opt)
{
    std::map<std::string, ctb::lab::check_report> totals;
    ctb::lab::check_report dimension{"dimension-bounds", 0, 0, ""};

    auto process = [&](const ctb::conflict_graph& h, unsigned long seed) {
        ctb::lab::incidence_family all_stable =
            ctb::lab::enumerate_kstabs(h, h.vertex_count, ctb::lab::cardinality_mode::at_most);
        int alpha = 0;
        for (const auto& v : all_stable.vectors)
            alpha = std::max(alpha, static_cast<int>(std::count(v.begin(), v.end(), char(1))));

        for (int k = 1; k <= std::max(alpha, 1); ++k)
        {
            for (auto& rep : ctb::lab::check_intersection_theorems(h, k, samples, seed + k))
            {
                auto& t = totals.emplace(rep.check, ctb::lab::check_report{rep.check, 0, 0, ""})
                              .first->second;
                t.instances += rep.instances;
                t.violations += rep.violations;
                if (t.witness.empty())
                    t.witness = rep.witness;
            }
            if (alpha >= k + 1)
            {
                auto exact = ctb::lab::enumerate_kstabs(h, k, ctb::lab::cardinality_mode::exact);
                int dim = ctb::lab::polytope_dimension(exact);
                ++dimension.instances;
                if (dim < alpha - 1 || dim > h.vertex_count - 1)
                {
                    ++dimension.violations;
                    if (dimension.witness.empty())
                        dimension.witness =
                            "dim " + std::to_string(dim) + " outside [alpha-1, n-1] for n="
                            + std::to_string(h.vertex_count) + " k=" + std::to_string(k);
                }
            }
        }
    };

    for (int n = 1; n <= max_n; ++n)
        for_each_graph(n, [&](const ctb::conflict_graph& h) { process(h, opt.seed); });

    std::mt19937_64 rng(opt.seed);
    for (int i = 0; i < random_count; ++i)
    {
        int n = 6 + static_cast<int>(rng() % 3);
        double density = 0.1 + 0.1 * static_cast<double>(rng() % 7);
        process(random_graph(n, density, rng), rng());
    }

    json out = json::array();
    long total_violations = dimension.violations;
    for (const auto& [name, rep] : totals)
    {
        out.push_back({{"check", rep.check},
                       {"instances", rep.instances},
                       {"violations", rep.violations},
                       {"witness", rep.witness}});
        total_violations += rep.violations;
    }
    out.push_back({{"check", dimension.check},
                   {"instances", dimension.instances},
                   {"violations", dimension.violations},
                   {"witness", dimension.witness}});
    std::cout << out.dump(2) << '\n';
    return total_violations == 0 ? exit_ok : exit_violation;
}

int run_batch(const std::string& dir, const cli_options& opt)
{
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
    {
        if (!entry.is_regular_file())
            continue;
        std::string ext = entry.path().extension().string();
        if (ext == ".ccmst" || ext == ".txt" || ext == ".gcc" || ext == ".cms")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
    {
        std::cerr << "batch: no instance files in " << dir << '\n';
        return exit_usage;
    }

    int workers = 1;
    if (const char* env = std::getenv("CTB_THREADS"))
        workers = std::max(1, std::atoi(env));
    workers = std::min<int>(workers, static_cast<int>(files.size()));

    auto opt_table = load_opt_file(opt.opt_file);
    std::vector<ctb::bound_report> reports(files.size());
    std::atomic<size_t> next{0};
    std::mutex log_mutex;

    auto work = [&]() {
        for (size_t i = next.fetch_add(1); i < files.size(); i = next.fetch_add(1))
        {
            try
            {
                ctb::instance inst =
                    ctb::load_instance_file(files[i].string(), parse_format(opt.format));
                reports[i] = ctb::solve(inst, make_engine_config(opt));
            }
            catch (const std::exception& err)
            {
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << files[i].string() << ": " << err.what() << '\n';
                reports[i].instance_name = files[i].stem().string();
                reports[i].infeasible = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();

    if (opt.emit_json)
    {
        json arr = json::array();
        for (const auto& r : reports)
            arr.push_back(ctb::to_json(r));
        std::cout << arr.dump(2) << '\n';
    }
    else if (opt.emit_csv)
    {
        std::cout << ctb::csv_header() << '\n';
        for (const auto& r : reports)
            std::cout << ctb::csv_row(r, known_opt(opt_table, r.instance_name)) << '\n';
    }
    else
    {
        std::cout << ctb::table_header() << '\n';
        for (const auto& r : reports)
            std::cout << ctb::table_row(r, known_opt(opt_table, r.instance_name)) << '\n';
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"dual bounds for minimum spanning trees under conflict constraints"};
    app.require_subcommand(1);

    cli_options opt;
    std::string path;

    auto add_common = [&](CLI::App* cmd, bool wants_path = true) {
        if (wants_path)
            cmd->add_option("instance", path, "instance file")->required();
        cmd->add_option("--format", opt.format, "canonical|zhang|carrabs|auto")
            ->default_val("auto");
        cmd->add_option("--budget", opt.budget, "total wall-clock budget in seconds");
        cmd->add_option("--ascent-budget", opt.ascent_budget, "dual-ascent budget in seconds");
        cmd->add_option("--kstab-budget", opt.kstab_budget,
                        "budget for the initial stable-set bound");
        cmd->add_flag("--pairwise-probe", opt.pairwise_probe,
                      "enable the quadratic pairwise probing test");
        cmd->add_flag("--json", opt.emit_json, "emit JSON instead of a table");
        cmd->add_flag("--csv", opt.emit_csv, "emit CSV instead of a table");
        cmd->add_option("--opt-file", opt.opt_file, "file of 'id value' known optima");
        cmd->add_option("--seed", opt.seed, "random seed");
        cmd->add_flag("--trace", opt.trace, "per-iteration trace on stderr");
        cmd->add_option("--lambda0", opt.lambda0, "initial multipliers: half|zero")
            ->default_val("half");
        cmd->add_option("--f-init", opt.f_init, "volume step factor");
        cmd->add_option("--alpha-init", opt.alpha_init, "volume primal-average weight");
        cmd->add_option("--target-slack", opt.target_slack, "volume target slack");
        cmd->add_option("--max-iters", opt.max_iters, "volume iteration cap");
    };

    CLI::App* solve_cmd = app.add_subcommand("solve", "full bound pipeline on one instance");
    add_common(solve_cmd);

    CLI::App* kstab_cmd =
        app.add_subcommand("kstab-bound", "combinatorial stable-set bound only");
    add_common(kstab_cmd);

    CLI::App* ascent_cmd = app.add_subcommand("ascent-only", "pipeline without the Volume phase");
    add_common(ascent_cmd);

    CLI::App* brute_cmd = app.add_subcommand("brute", "exhaustive optimum on a tiny instance");
    add_common(brute_cmd);

    int lab_max_n = 5, lab_random = 0, lab_samples = 20;
    CLI::App* lab_cmd = app.add_subcommand("lab", "polytope verification suites");
    lab_cmd->add_option("--max-n", lab_max_n, "exhaustive corpus: all graphs up to this size");
    lab_cmd->add_option("--random", lab_random, "additional random graphs on 6-8 vertices");
    lab_cmd->add_option("--samples", lab_samples, "sampled points per graph and k");
    lab_cmd->add_option("--seed", opt.seed, "random seed");

    std::string batch_dir;
    CLI::App* batch_cmd = app.add_subcommand("batch", "run a directory of instances");
    batch_cmd->add_option("dir", batch_dir, "directory of instance files")->required();
    add_common(batch_cmd, false);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (solve_cmd->parsed())
            return run_solve(path, opt, true);
        if (kstab_cmd->parsed())
            return run_kstab_bound(path, opt);
        if (ascent_cmd->parsed())
            return run_solve(path, opt, false);
        if (brute_cmd->parsed())
            return run_brute(path, opt);
        if (lab_cmd->parsed())
            return run_lab(lab_max_n, lab_random, lab_samples, opt);
        if (batch_cmd->parsed())
            return run_batch(batch_dir, opt);
    }
    catch (const ctb::parse_error& err)
    {
        std::cerr << "parse error: " << err.what() << '\n';
        return exit_usage;
    }
    catch (const std::exception& err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return exit_usage;
    }
    return exit_usage;
}
