#pragma once

#include <cstdio>
#include <optional>
#include <string>

#include <json.hpp>

#include "ctb/engine.hpp"

namespace ctb {

inline nlohmann::json to_json(const reduction_log& log)
{
    nlohmann::json j;
    j["deleted_edges"] = log.deleted_edges;
    j["mandatory_edges"] = log.mandatory_edges;
    auto pairs = nlohmann::json::array();
    for (const auto& [a, b] : log.implied_conflicts)
        pairs.push_back({a, b});
    j["implied_conflicts"] = pairs;
    j["infeasible"] = log.infeasible;
    j["rounds"] = log.rounds;
    j["cap_reached"] = log.cap_reached;
    return j;
}

inline nlohmann::json to_json(const phase_stats& p)
{
    return {{"seconds", p.seconds}, {"iterations", p.iterations}};
}

inline nlohmann::json to_json(const bound_report& r)
{
    const auto& vc = r.config_echo.volume;
    nlohmann::json j;
    j["instance"] = {{"name", r.instance_name},
                     {"vertices", r.vertices},
                     {"edges", r.edges},
                     {"conflicts", r.conflicts},
                     {"integral_weights", r.integral_weights}};
    j["status"] = {{"infeasible", r.infeasible},
                   {"kstab_timeout", r.kstab_timeout},
                   {"ascent_exhausted", r.ascent_exhausted}};
    j["kstab"] = {{"bound", r.kstab_bound}, {"time", r.kstab_bound_time}};
    j["ld"] = {{"best_dual", r.best_dual},
               {"best_dual_ceil", r.best_dual_ceil},
               {"total_time", r.total_time}};
    j["phases"] = {{"preprocess", to_json(r.preprocess_phase)},
                   {"kstab_bound", to_json(r.kstab_phase)},
                   {"ascent", to_json(r.ascent_phase)},
                   {"volume", to_json(r.volume_phase)}};
    j["reductions"] = to_json(r.reductions);
    j["budgets"] = {{"total", r.config_echo.total_budget},
                    {"ascent", r.config_echo.ascent_budget},
                    {"kstab_bound", r.config_echo.kstab_bound_budget}};
    j["volume_config"] = {{"f_init", vc.f_init},
                          {"f_min", vc.f_min},
                          {"f_max", vc.f_max},
                          {"alpha_init", vc.alpha_init},
                          {"alpha_min", vc.alpha_min},
                          {"red_limit", vc.red_limit},
                          {"green_factor", vc.green_factor},
                          {"target_slack", vc.target_slack},
                          {"max_iters", vc.max_iters}};
    j["ascent_trace"] = r.ascent_values;
    if (!r.dual_trace.empty())
        j["dual_trace"] = r.dual_trace;
    return j;
}

/// table header matching the benchmark result layout
inline std::string table_header()
{
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-24s %10s %12s %9s %12s %9s %12s", "ID", "OPT", "KSTAB",
                  "time(s)", "LD", "time(s)", "% from OPT");
    return buf;
}

inline std::string format_bound(double v)
{
    if (!std::isfinite(v))
        return "-";
    char buf[32];
    if (v == std::floor(v) && std::abs(v) < 1e15)
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    else
        std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string table_row(const bound_report& r, std::optional<double> opt)
{
    char buf[200];
    if (r.infeasible)
    {
        std::snprintf(buf, sizeof buf, "%-24s %10s  infeasible", r.instance_name.c_str(),
                      opt ? format_bound(*opt).c_str() : "-");
        return buf;
    }
    std::string gap = "-";
    double ld = r.integral_weights ? r.best_dual_ceil : r.best_dual;
    if (opt && std::isfinite(ld) && *opt != 0.0)
    {
        char g[32];
        std::snprintf(g, sizeof g, "%.1f", 100.0 * (*opt - ld) / *opt);
        gap = g;
    }
    std::snprintf(buf, sizeof buf, "%-24s %10s %12s %9.1f %12s %9.1f %12s",
                  r.instance_name.c_str(), opt ? format_bound(*opt).c_str() : "-",
                  format_bound(r.kstab_bound).c_str(), r.kstab_bound_time,
                  r.kstab_timeout ? "-" : format_bound(ld).c_str(), r.total_time, gap.c_str());
    return buf;
}

inline std::string csv_header()
{
    return "id,opt,kstab_bound,kstab_time,ld_bound,ld_bound_ceil,total_time,pct_from_opt,"
           "infeasible,kstab_timeout";
}

inline std::string csv_row(const bound_report& r, std::optional<double> opt)
{
    char buf[300];
    double ld = r.integral_weights ? r.best_dual_ceil : r.best_dual;
    std::string gap;
    if (opt && std::isfinite(ld) && *opt != 0.0 && !r.infeasible)
    {
        char g[32];
        std::snprintf(g, sizeof g, "%.2f", 100.0 * (*opt - ld) / *opt);
        gap = g;
    }
    std::snprintf(buf, sizeof buf, "%s,%s,%s,%.2f,%s,%s,%.2f,%s,%d,%d",
                  r.instance_name.c_str(), opt ? format_bound(*opt).c_str() : "",
                  format_bound(r.kstab_bound).c_str(), r.kstab_bound_time,
                  format_bound(r.best_dual).c_str(), format_bound(r.best_dual_ceil).c_str(),
                  r.total_time, gap.c_str(), r.infeasible ? 1 : 0, r.kstab_timeout ? 1 : 0);
    return buf;
}

} // namespace ctb
