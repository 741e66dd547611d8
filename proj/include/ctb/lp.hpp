#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace ctb::lp {

constexpr double infinity = std::numeric_limits<double>::infinity();

enum class relation
{
    eq,
    le
};

struct row
{
    std::vector<double> coef;
    relation rel = relation::le;
    double rhs = 0.0;
};

/// minimization model with bounded variables; bounds default to [0,1]
struct model
{
    std::vector<double> objective;
    std::vector<row> rows;
    std::vector<double> lower;
    std::vector<double> upper;

    int cols() const { return static_cast<int>(objective.size()); }

    static model with_unit_box(int n)
    {
        model md;
        md.objective.assign(n, 0.0);
        md.lower.assign(n, 0.0);
        md.upper.assign(n, 1.0);
        return md;
    }
};

enum class status
{
    optimal,
    infeasible,
    unbounded
};

struct outcome
{
    status st = status::infeasible;
    double value = 0.0;
    std::vector<double> primal;
};

namespace detail {

/***
 * Primal simplex over the computational form
 *     min c'x   s.t.  A x = b,  lo <= x <= hi,
 * where inequality rows of the source model carry a slack column.
 *
 * The basis inverse is kept explicitly (dense) and refactorized at a fixed
 * pivot interval. Pricing is Dantzig; after 3*(rows+cols) pivots without
 * objective progress the solver switches to Bland's rule, which cannot
 * cycle. Two phases, both through the same kernel: phase 1 minimizes the
 * total infeasibility carried by one artificial column per row.
 */
class simplex
{
public:
    static constexpr double feas_tol = 1e-9;
    static constexpr double dual_tol = 1e-9;
    static constexpr double pivot_tol = 1e-10;

    explicit simplex(const model& md)
    {
        nrows_ = static_cast<int>(md.rows.size());
        nstruct_ = md.cols();

        int nslack = 0;
        for (const auto& r : md.rows)
            if (r.rel == relation::le)
                ++nslack;
        ntotal_ = nstruct_ + nslack + nrows_;   // structurals, slacks, artificials

        cols_.assign(static_cast<size_t>(ntotal_) * nrows_, 0.0);
        lo_.assign(ntotal_, 0.0);
        hi_.assign(ntotal_, 0.0);
        cost_.assign(ntotal_, 0.0);
        rhs_.assign(nrows_, 0.0);

        for (int j = 0; j < nstruct_; ++j)
        {
            lo_[j] = md.lower[j];
            hi_[j] = md.upper[j];
            cost_[j] = md.objective[j];
        }
        int slack = nstruct_;
        for (int i = 0; i < nrows_; ++i)
        {
            const auto& r = md.rows[i];
            for (int j = 0; j < nstruct_ && j < static_cast<int>(r.coef.size()); ++j)
                col(j)[i] = r.coef[j];
            rhs_[i] = r.rhs;
            if (r.rel == relation::le)
            {
                col(slack)[i] = 1.0;
                lo_[slack] = 0.0;
                hi_[slack] = infinity;
                ++slack;
            }
        }
        art0_ = slack;
        for (int i = 0; i < nrows_; ++i)
            col(art0_ + i)[i] = 1.0;
    }

    outcome run()
    {
        outcome result;
        if (!phase1())
        {
            result.st = status::infeasible;
            return result;
        }
        bool bounded = phase2();
        result.primal.assign(value_.begin(), value_.begin() + nstruct_);
        if (!bounded)
        {
            result.st = status::unbounded;
            result.value = -infinity;
            return result;
        }
        result.st = status::optimal;
        result.value = 0.0;
        for (int j = 0; j < nstruct_; ++j)
            result.value += cost_[j] * result.primal[j];
        return result;
    }

private:
    enum class loc : char
    {
        basic,
        at_lower,
        at_upper,
        free_zero
    };

    double* col(int j) { return cols_.data() + static_cast<size_t>(j) * nrows_; }
    const double* col(int j) const { return cols_.data() + static_cast<size_t>(j) * nrows_; }

    bool phase1()
    {
        value_.assign(ntotal_, 0.0);
        where_.assign(ntotal_, loc::at_lower);
        basis_.resize(nrows_);

        // nonbasic structurals and slacks rest at a finite bound
        for (int j = 0; j < art0_; ++j)
        {
            if (std::isfinite(lo_[j]))
            {
                where_[j] = loc::at_lower;
                value_[j] = lo_[j];
            }
            else if (std::isfinite(hi_[j]))
            {
                where_[j] = loc::at_upper;
                value_[j] = hi_[j];
            }
            else
            {
                where_[j] = loc::free_zero;
                value_[j] = 0.0;
            }
        }

        // artificial columns absorb the residual and form the identity basis
        std::vector<double> residual = rhs_;
        for (int j = 0; j < art0_; ++j)
        {
            if (value_[j] == 0.0)
                continue;
            const double* a = col(j);
            for (int i = 0; i < nrows_; ++i)
                residual[i] -= a[i] * value_[j];
        }

        std::vector<double> phase1_cost(ntotal_, 0.0);
        for (int i = 0; i < nrows_; ++i)
        {
            int a = art0_ + i;
            basis_[i] = a;
            where_[a] = loc::basic;
            value_[a] = residual[i];
            if (residual[i] >= 0.0)
            {
                lo_[a] = 0.0;
                hi_[a] = infinity;
                phase1_cost[a] = 1.0;
            }
            else
            {
                lo_[a] = -infinity;
                hi_[a] = 0.0;
                phase1_cost[a] = -1.0;
            }
        }

        binv_.assign(static_cast<size_t>(nrows_) * nrows_, 0.0);
        for (int i = 0; i < nrows_; ++i)
            binv_[static_cast<size_t>(i) * nrows_ + i] = 1.0;

        active_cost_ = &phase1_cost;
        if (!iterate())
            throw std::runtime_error("phase-1 LP reported unbounded");   // cost is bounded below by 0

        double infeas = 0.0;
        for (int i = 0; i < nrows_; ++i)
            if (basis_[i] >= art0_)
                infeas += std::abs(value_[basis_[i]]);
        if (infeas > 1e-7)
            return false;

        // pin artificials so phase 2 cannot move them
        for (int i = 0; i < nrows_; ++i)
        {
            int a = art0_ + i;
            lo_[a] = hi_[a] = 0.0;
            if (where_[a] != loc::basic)
            {
                where_[a] = loc::at_lower;
                value_[a] = 0.0;
            }
            else
            {
                value_[a] = 0.0;   // basic at (numerical) zero: harmless, bounds pin it
            }
        }
        return true;
    }

    bool phase2()
    {
        active_cost_ = &cost_;
        return iterate();
    }

    /// returns false on unboundedness
    bool iterate()
    {
        const std::vector<double>& c = *active_cost_;
        const int stall_limit = 3 * (nrows_ + ntotal_);
        int stall = 0;
        bool bland = false;
        double last_obj = current_objective();
        int since_refactor = 0;
        const long hard_cap = 2000L * (nrows_ + ntotal_) + 20000;

        for (long iter = 0; iter < hard_cap; ++iter)
        {
            // duals y = cB' * Binv
            std::vector<double> y(nrows_, 0.0);
            for (int i = 0; i < nrows_; ++i)
            {
                double cb = c[basis_[i]];
                if (cb != 0.0)
                {
                    const double* row_i = binv_.data() + static_cast<size_t>(i) * nrows_;
                    for (int k = 0; k < nrows_; ++k)
                        y[k] += cb * row_i[k];
                }
            }

            // pricing
            int entering = -1;
            bool from_lower = true;
            double best_score = dual_tol;
            for (int j = 0; j < ntotal_; ++j)
            {
                if (where_[j] == loc::basic || lo_[j] == hi_[j])
                    continue;
                const double* a = col(j);
                double d = c[j];
                for (int i = 0; i < nrows_; ++i)
                    d -= y[i] * a[i];

                bool eligible = false;
                bool lower_side = true;
                if (where_[j] == loc::at_lower || where_[j] == loc::free_zero)
                {
                    if (d < -dual_tol)
                    {
                        eligible = true;
                        lower_side = true;
                    }
                }
                if (!eligible && (where_[j] == loc::at_upper || where_[j] == loc::free_zero))
                {
                    if (d > dual_tol)
                    {
                        eligible = true;
                        lower_side = false;
                    }
                }
                if (!eligible)
                    continue;

                if (bland)
                {
                    entering = j;
                    from_lower = lower_side;
                    break;
                }
                if (std::abs(d) > best_score)
                {
                    best_score = std::abs(d);
                    entering = j;
                    from_lower = lower_side;
                }
            }

            if (entering < 0)
                return true;   // optimal

            // direction w = Binv * A_j ; basic values move by -t*w (entering up)
            std::vector<double> w(nrows_, 0.0);
            {
                const double* a = col(entering);
                for (int k = 0; k < nrows_; ++k)
                {
                    if (a[k] == 0.0)
                        continue;
                    for (int i = 0; i < nrows_; ++i)
                        w[i] += binv_[static_cast<size_t>(i) * nrows_ + k] * a[k];
                }
            }
            const double dir = from_lower ? 1.0 : -1.0;

            double t_max = hi_[entering] - lo_[entering];   // bound flip distance (may be inf)
            int leave_row = -1;
            double t_best = t_max;
            for (int i = 0; i < nrows_; ++i)
            {
                double wi = dir * w[i];   // value of basic i moves by -t*wi
                int b = basis_[i];
                double t;
                if (wi > pivot_tol)
                {
                    if (!std::isfinite(lo_[b]))
                        continue;
                    t = (value_[b] - lo_[b]) / wi;
                }
                else if (wi < -pivot_tol)
                {
                    if (!std::isfinite(hi_[b]))
                        continue;
                    t = (hi_[b] - value_[b]) / (-wi);
                }
                else
                    continue;
                if (t < -feas_tol)
                    t = 0.0;
                if (t < t_best - 1e-12
                    || (t < t_best + 1e-12 && leave_row >= 0
                        && (bland ? basis_[i] < basis_[leave_row]
                                  : std::abs(w[i]) > std::abs(w[leave_row]))))
                {
                    t_best = t;
                    leave_row = i;
                }
            }

            if (!std::isfinite(t_best))
                return false;   // unbounded ray
            if (t_best < 0.0)
                t_best = 0.0;

            // apply step
            for (int i = 0; i < nrows_; ++i)
                value_[basis_[i]] -= t_best * dir * w[i];
            value_[entering] += t_best * dir;

            if (leave_row < 0)
            {
                // bound flip, basis unchanged
                where_[entering] = from_lower ? loc::at_upper : loc::at_lower;
                value_[entering] = from_lower ? hi_[entering] : lo_[entering];
            }
            else
            {
                int leaving = basis_[leave_row];
                double wl = w[leave_row];
                if (std::abs(wl) <= pivot_tol)
                    throw std::runtime_error("simplex pivot element vanished");

                // Binv row update (Gauss-Jordan elimination on the pivot row)
                double* prow = binv_.data() + static_cast<size_t>(leave_row) * nrows_;
                for (int k = 0; k < nrows_; ++k)
                    prow[k] /= wl;
                for (int i = 0; i < nrows_; ++i)
                {
                    if (i == leave_row || w[i] == 0.0)
                        continue;
                    double* r = binv_.data() + static_cast<size_t>(i) * nrows_;
                    double f = w[i];
                    for (int k = 0; k < nrows_; ++k)
                        r[k] -= f * prow[k];
                }

                basis_[leave_row] = entering;
                where_[entering] = loc::basic;
                double wl_dir = dir * wl;
                where_[leaving] = (wl_dir > 0.0) ? loc::at_lower : loc::at_upper;
                value_[leaving] = (wl_dir > 0.0) ? lo_[leaving] : hi_[leaving];

                if (++since_refactor >= 128)
                {
                    refactorize();
                    since_refactor = 0;
                }
            }

            // stall bookkeeping drives the Bland's-rule fallback
            double obj = current_objective();
            if (obj < last_obj - 1e-12)
            {
                stall = 0;
                bland = false;
                last_obj = obj;
            }
            else if (++stall >= stall_limit)
                bland = true;
        }
        throw std::runtime_error("simplex iteration cap exceeded");
    }

    double current_objective() const
    {
        const std::vector<double>& c = *active_cost_;
        double obj = 0.0;
        for (int j = 0; j < ntotal_; ++j)
            obj += c[j] * value_[j];
        return obj;
    }

    /// rebuild the basis inverse from scratch and recompute basic values
    void refactorize()
    {
        const int m = nrows_;
        std::vector<double> work(static_cast<size_t>(m) * 2 * m, 0.0);
        for (int i = 0; i < m; ++i)
        {
            const double* a = col(basis_[i]);
            for (int r = 0; r < m; ++r)
                work[static_cast<size_t>(r) * 2 * m + i] = a[r];
            work[static_cast<size_t>(i) * 2 * m + m + i] = 1.0;
        }
        for (int p = 0; p < m; ++p)
        {
            int best = p;
            for (int r = p + 1; r < m; ++r)
                if (std::abs(work[static_cast<size_t>(r) * 2 * m + p])
                    > std::abs(work[static_cast<size_t>(best) * 2 * m + p]))
                    best = r;
            if (std::abs(work[static_cast<size_t>(best) * 2 * m + p]) < 1e-12)
                throw std::runtime_error("singular basis during refactorization");
            if (best != p)
                for (int k = 0; k < 2 * m; ++k)
                    std::swap(work[static_cast<size_t>(p) * 2 * m + k],
                              work[static_cast<size_t>(best) * 2 * m + k]);
            double piv = work[static_cast<size_t>(p) * 2 * m + p];
            for (int k = 0; k < 2 * m; ++k)
                work[static_cast<size_t>(p) * 2 * m + k] /= piv;
            for (int r = 0; r < m; ++r)
            {
                if (r == p)
                    continue;
                double f = work[static_cast<size_t>(r) * 2 * m + p];
                if (f == 0.0)
                    continue;
                for (int k = 0; k < 2 * m; ++k)
                    work[static_cast<size_t>(r) * 2 * m + k]
                        -= f * work[static_cast<size_t>(p) * 2 * m + k];
            }
        }
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < m; ++k)
                binv_[static_cast<size_t>(i) * m + k] = work[static_cast<size_t>(i) * 2 * m + m + k];

        // xB = Binv (b - sum over nonbasic of A_j x_j)
        std::vector<double> resid = rhs_;
        for (int j = 0; j < ntotal_; ++j)
        {
            if (where_[j] == loc::basic || value_[j] == 0.0)
                continue;
            const double* a = col(j);
            for (int i = 0; i < m; ++i)
                resid[i] -= a[i] * value_[j];
        }
        for (int i = 0; i < m; ++i)
        {
            double xb = 0.0;
            const double* r = binv_.data() + static_cast<size_t>(i) * m;
            for (int k = 0; k < m; ++k)
                xb += r[k] * resid[k];
            value_[basis_[i]] = xb;
        }
    }

    int nrows_ = 0;
    int nstruct_ = 0;
    int ntotal_ = 0;
    int art0_ = 0;
    std::vector<double> cols_;      // column-major constraint matrix
    std::vector<double> lo_, hi_;
    std::vector<double> cost_;
    std::vector<double> rhs_;
    std::vector<double> binv_;
    std::vector<double> value_;
    std::vector<int> basis_;
    std::vector<loc> where_;
    const std::vector<double>* active_cost_ = nullptr;
};

} // namespace detail

inline outcome solve_min(const model& md)
{
    if (md.rows.empty())
    {
        // pure bound problem
        outcome res;
        res.primal.resize(md.cols());
        res.value = 0.0;
        for (int j = 0; j < md.cols(); ++j)
        {
            double c = md.objective[j];
            double x;
            if (c > 0.0)
                x = md.lower[j];
            else if (c < 0.0)
                x = md.upper[j];
            else
                x = std::isfinite(md.lower[j]) ? md.lower[j] : 0.0;
            if (!std::isfinite(x))
            {
                res.st = status::unbounded;
                res.value = -infinity;
                return res;
            }
            res.primal[j] = x;
            res.value += c * x;
        }
        res.st = status::optimal;
        return res;
    }
    detail::simplex solver(md);
    return solver.run();
}

/// re-optimization entry point for cut loops; equivalent to a fresh solve of the extended model
inline outcome resolve_with_rows(const model& md, std::span<const row> new_rows)
{
    model extended = md;
    extended.rows.insert(extended.rows.end(), new_rows.begin(), new_rows.end());
    return solve_min(extended);
}

} // namespace ctb::lp
