#pragma once

#include <cmath>
#include <ostream>

#include "ctb/dual.hpp"
#include "ctb/util.hpp"

namespace ctb {

struct volume_config
{
    double f_init = 0.1;         // step factor
    double f_min = 1e-8;
    double f_max = 2.0;
    double alpha_init = 0.1;     // primal-average weight
    double alpha_min = 1e-5;
    int red_limit = 20;          // consecutive red iterations before f is halved
    double green_factor = 1.1;
    double target_slack = 0.05;  // target UB = best*(1+slack) + 1
    long max_iters = 1000000;
    double time_budget = 1e18;
    double kstab_budget_floor = 5.0;   // per-iteration oracle budget floor
    std::ostream* trace = nullptr;
};

enum class iteration_color
{
    green,
    yellow,
    red
};

/// classification of one trial point against the stable center
inline iteration_color color_iteration(double z_trial, double z_center,
                                       std::span<const int> g_trial,
                                       std::span<const double> g_center)
{
    if (z_trial <= z_center)
        return iteration_color::red;
    double dot = 0.0;
    for (size_t i = 0; i < g_trial.size(); ++i)
        dot += g_trial[i] * g_center[i];
    return dot > 0.0 ? iteration_color::green : iteration_color::yellow;
}

struct volume_state
{
    multipliers lambda_bar;          // stable center
    double z_bar = 0.0;              // value at the center
    std::vector<double> x_bar;       // convex-combination primal estimates
    std::vector<double> y_bar;
    double f = 0.0;
    double alpha = 0.0;
    int consecutive_red = 0;
    long iterations = 0;
    dual_point best;
};

struct volume_result
{
    dual_point best;
    volume_state state;
};

/***
 * Volume-style subgradient phase. Trial multipliers move from the stable
 * center along the averaged subgradient g_bar = y_bar - x_bar with step
 * s = f (target - z_bar) / ||g_bar||^2; green and yellow iterations move the
 * center, red ones only count toward halving f. Primal averages mix each
 * trial solution in with weight alpha, which decays by half every 100
 * iterations. Stops on the time budget, the iteration cap, a vanishing
 * averaged subgradient, or f below its floor.
 *
 * Inexact (timed-out) oracle evaluations still drive steps -- their value
 * underestimates z and stays a valid bound -- but only the maximum-value
 * point ever becomes `best`.
 *
 * Returns nothing when an evaluation proves the instance infeasible.
 */
inline std::optional<volume_result> run_volume(const dual_evaluator& eval,
                                               const multipliers& lambda_start,
                                               const volume_config& config,
                                               const dual_point* start_point = nullptr)
{
    wall_timer timer;
    const int m = eval.inst().g.edge_count();

    std::optional<dual_point> start;
    if (start_point)
        start = *start_point;
    else
        start = eval.evaluate(lambda_start, std::max(config.time_budget, 1.0));
    if (!start)
        return std::nullopt;

    volume_state st;
    st.lambda_bar = lambda_start;
    st.z_bar = start->value;
    st.x_bar = start->tree.incidence(m);
    st.y_bar.assign(m, 0.0);
    if (start->kstab.best_set)
        for (int e : *start->kstab.best_set)
            st.y_bar[e] = 1.0;
    st.f = config.f_init;
    st.alpha = config.alpha_init;
    st.best = *start;

    auto target_value = [&](double best_value) {
        // keeps the target strictly above any reachable z, also for negative bounds
        return std::max(best_value * (1.0 + config.target_slack) + 1.0, best_value + 1.0);
    };

    std::vector<double> g_bar(m);
    while (st.iterations < config.max_iters && timer.elapsed() < config.time_budget
           && st.f >= config.f_min)
    {
        double norm2 = 0.0;
        for (int e = 0; e < m; ++e)
        {
            g_bar[e] = st.y_bar[e] - st.x_bar[e];
            norm2 += g_bar[e] * g_bar[e];
        }
        if (std::sqrt(norm2) < 1e-7)
            break;

        double step = st.f * (target_value(st.best.value) - st.z_bar) / std::max(norm2, 1e-14);
        multipliers lambda_trial = st.lambda_bar;
        for (int e = 0; e < m; ++e)
            lambda_trial[e] += step * g_bar[e];

        double oracle_budget =
            std::max((config.time_budget - timer.elapsed()) / 50.0, config.kstab_budget_floor);
        std::vector<int> hint;
        if (st.best.kstab.best_set)
            hint = *st.best.kstab.best_set;
        auto trial = eval.evaluate(lambda_trial, oracle_budget, hint);
        if (!trial)
            return std::nullopt;   // instance infeasible

        ++st.iterations;

        if (trial->value > st.best.value)
            st.best = *trial;

        if (trial->subgradient.empty())
        {
            // timed out without an incumbent: no step information at all
            if (++st.consecutive_red >= config.red_limit)
            {
                st.f /= 2.0;
                st.consecutive_red = 0;
            }
        }
        else
        {
            iteration_color color =
                color_iteration(trial->value, st.z_bar, trial->subgradient, g_bar);

            for (int e = 0; e < m; ++e)
            {
                double x_t = trial->tree.contains(e) ? 1.0 : 0.0;
                double y_t = trial->subgradient[e] + x_t;
                st.x_bar[e] = st.alpha * x_t + (1.0 - st.alpha) * st.x_bar[e];
                st.y_bar[e] = st.alpha * y_t + (1.0 - st.alpha) * st.y_bar[e];
            }

            switch (color)
            {
            case iteration_color::green:
                st.f = std::min(st.f * config.green_factor, config.f_max);
                [[fallthrough]];
            case iteration_color::yellow:
                st.lambda_bar = lambda_trial;
                st.z_bar = trial->value;
                st.consecutive_red = 0;
                break;
            case iteration_color::red:
                if (++st.consecutive_red >= config.red_limit)
                {
                    st.f /= 2.0;
                    st.consecutive_red = 0;
                }
                break;
            }

            if (config.trace)
                *config.trace << "vol " << st.iterations << " color "
                              << (color == iteration_color::green    ? "G"
                                  : color == iteration_color::yellow ? "Y"
                                                                     : "R")
                              << " f " << st.f << " alpha " << st.alpha << " z " << trial->value
                              << " zbar " << st.z_bar << " best " << st.best.value << '\n';
        }

        if (st.iterations % 100 == 0)
            st.alpha = std::max(st.alpha / 2.0, config.alpha_min);
    }

    volume_result result{st.best, std::move(st)};
    return result;
}

} // namespace ctb
