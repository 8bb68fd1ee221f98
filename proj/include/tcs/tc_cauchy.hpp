#pragma once

// The discrete transport-collapse operator T(dt) on a spatial grid and the
// iterated scheme S_n(t) for Cauchy problems.
//
// Homogeneous path: for every lambda-cell j the exact mass field
// m_ij = integral of chi(., u_i) over the cell is translated by the
// cell-midpoint speed f'(lambda_j) dt with the exact conservative remap, then
// the rows are summed (the transported kinetic density is collapsed). This
// keeps the operator conservative, monotone and TVD to machine precision.
//
// Heterogeneous path: the lambda-cell edges are backtraced along the
// characteristics; the image intervals (made non-overlapping by a running
// max) receive the kinetic mass of the state read at the midpoint
// characteristic's foot. The kinetic density is represented relative to the
// grid's lower edge (the shifted function sgn_+(u - lambda)): with the
// baseline at a flux zero the transported density needs no gauge source
// (div_x f(., a) = 0), which is what makes x-dependent fluxes with
// x-dependent f(., 0) transport correctly. First order in dlambda; mass
// drift is O(dt dlambda).
//
// A step is a pure function old-state -> new-state. Per-cell outputs are
// independent; within a cell the lambda-sum runs in fixed ascending order.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tcs/characteristics.hpp"
#include "tcs/flux_model.hpp"
#include "tcs/grid.hpp"
#include "tcs/kinetic.hpp"

namespace tcs {

struct SupportOverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemeConfig {
    int steps = 1;                 // n of S_n
    int m_lambda = 2;              // lambda-cell count M
    BacktraceConfig backtrace{};
    Closure closure = Closure::zero; // compact_support (zero) or periodic
    bool alpha_interpolation = true;

    void validate() const {
        if (steps < 1) throw std::invalid_argument("SchemeConfig: steps must be >= 1");
        if (m_lambda < 2) throw std::invalid_argument("SchemeConfig: M must be >= 2");
    }
};

namespace detail {

// Nonzero data within `reach` cells of a non-periodic edge means the compact
// support assumption is about to be violated by this step.
inline void check_support_1d(const std::vector<double>& u, int reach) {
    const int n = static_cast<int>(u.size());
    reach = std::min(reach, n);
    for (int i = 0; i < reach; ++i)
        if (u[static_cast<std::size_t>(i)] != 0.0 ||
            u[static_cast<std::size_t>(n - 1 - i)] != 0.0)
            throw SupportOverflowError(
                "compact support touches the domain edge; enlarge the domain padding");
}

inline void check_support_2d(const std::vector<double>& u, int nx, int ny, int reach) {
    auto at = [&](int i, int j) { return u[static_cast<std::size_t>(j) * nx + i]; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const bool band = i < reach || i >= nx - reach || j < reach || j >= ny - reach;
            if (band && at(i, j) != 0.0)
                throw SupportOverflowError(
                    "compact support touches the domain edge; enlarge the domain padding");
        }
}

} // namespace detail

// One transport-collapse step for a (t,x)-independent flux.
inline GridSolution tc_step_homogeneous(const GridSolution& state, const FluxModel& model,
                                        double dt, const LambdaGrid& lg,
                                        Closure closure = Closure::zero) {
    if (model.heterogeneous)
        throw std::invalid_argument("tc_step_homogeneous: model is heterogeneous");
    if (dt < 0.0) throw std::invalid_argument("tc_step_homogeneous: dt must be >= 0");

    const SpatialGrid& g = state.grid;
    GridSolution out(g, state.time + dt);

    double max_shift = 0.0;
    std::vector<Vec2> shifts(static_cast<std::size_t>(lg.m));
    for (int j = 0; j < lg.m; ++j) {
        const Vec2 fp = eval_flux_deriv(model, state.time, Vec2{0.0, 0.0}, lg.mid(j));
        shifts[static_cast<std::size_t>(j)] = {fp[0] * dt, fp[1] * dt};
        max_shift = std::max(max_shift, std::abs(fp[0] * dt) / g.dx(0));
        if (g.dim == 2) max_shift = std::max(max_shift, std::abs(fp[1] * dt) / g.dx(1));
    }
    if (closure == Closure::zero) {
        const int reach = static_cast<int>(std::ceil(max_shift)) + 1;
        if (g.dim == 1)
            detail::check_support_1d(state.values, reach);
        else
            detail::check_support_2d(state.values, g.n[0], g.n[1], reach);
    }

    const std::size_t cells = state.values.size();
    std::vector<double> row(cells), moved(cells);
    for (int j = 0; j < lg.m; ++j) {
        const double e0 = lg.edge(j), e1 = lg.edge(j + 1);
        for (std::size_t i = 0; i < cells; ++i)
            row[i] = chi_cell_mass(e0, e1, state.values[i]);
        const Vec2 s = shifts[static_cast<std::size_t>(j)];
        if (g.dim == 1) {
            remap_translate(row, s[0] / g.dx(0), closure, moved);
        } else {
            std::vector<double> tmp(cells);
            for (int jy = 0; jy < g.n[1]; ++jy) {
                std::vector<double> line(row.begin() + static_cast<long>(jy) * g.n[0],
                                         row.begin() + static_cast<long>(jy + 1) * g.n[0]);
                std::vector<double> lout;
                remap_translate(line, s[0] / g.dx(0), closure, lout);
                std::copy(lout.begin(), lout.end(), tmp.begin() + static_cast<long>(jy) * g.n[0]);
            }
            for (int ix = 0; ix < g.n[0]; ++ix) {
                std::vector<double> col(static_cast<std::size_t>(g.n[1]));
                for (int jy = 0; jy < g.n[1]; ++jy)
                    col[static_cast<std::size_t>(jy)] = tmp[static_cast<std::size_t>(jy) * g.n[0] + ix];
                std::vector<double> cout_;
                remap_translate(col, s[1] / g.dx(1), closure, cout_);
                for (int jy = 0; jy < g.n[1]; ++jy)
                    moved[static_cast<std::size_t>(jy) * g.n[0] + ix] = cout_[static_cast<std::size_t>(jy)];
            }
        }
        for (std::size_t i = 0; i < cells; ++i) out.values[i] += moved[i];
    }
    return out;
}

// One transport-collapse step along backtraced characteristics.
inline GridSolution tc_step_heterogeneous(const GridSolution& state, const FluxModel& model,
                                          double t_start, double dt, const LambdaGrid& lg,
                                          const BacktraceConfig& bt,
                                          Closure closure = Closure::zero) {
    if (dt < 0.0) throw std::invalid_argument("tc_step_heterogeneous: dt must be >= 0");
    const SpatialGrid& g = state.grid;
    GridSolution out(g, t_start + dt);
    const double t_head = t_start + dt;

    if (closure == Closure::zero) {
        const double fine_dx = g.dim == 2 ? std::min(g.dx(0), g.dx(1)) : g.dx(0);
        const int reach =
            static_cast<int>(std::ceil(model.speed_bound * dt / fine_dx)) + 1;
        if (g.dim == 1)
            detail::check_support_1d(state.values, reach);
        else
            detail::check_support_2d(state.values, g.n[0], g.n[1], reach);
    }

    std::vector<CharacteristicEndpoint> feet(static_cast<std::size_t>(lg.m) + 1);
    const int ny = g.dim == 2 ? g.n[1] : 1;
    for (int jy = 0; jy < ny; ++jy) {
        for (int ix = 0; ix < g.n[0]; ++ix) {
            const Vec2 xc{g.center(0, ix), g.dim == 2 ? g.center(1, jy) : 0.0};
            for (int e = 0; e <= lg.m; ++e)
                feet[static_cast<std::size_t>(e)] =
                    backtrace_heterogeneous(model, t_head, xc, lg.edge(e), dt, bt);
            // u = lo + integral over the lambda-grid of 1_{lambda0(lambda) <=
            // ubar(x0(lambda))}, the shifted kinetic density transported along
            // the characteristics. Per cell, lambda0 is linearized between the
            // backtraced edges, so the cell's occupied fraction is a clamp;
            // the rule is monotone in the state and exact for cells mapped
            // entirely above or below ubar, fold or no fold. lambda = lo and
            // lambda = hi are invariant lines of flux-zero models (the RK4
            // stage values of dlambda/dt vanish there identically), which
            // pins the outer bounds u in [lo, hi] exactly.
            double acc = lg.lo;
            for (int j = 0; j < lg.m; ++j) {
                const auto& f0 = feet[static_cast<std::size_t>(j)];
                const auto& f1 = feet[static_cast<std::size_t>(j) + 1];
                // the cell-midpoint characteristic's foot, to O(dlambda^2)
                const double x0 = 0.5 * (f0.x[0] + f1.x[0]);
                const double ubar =
                    g.dim == 1
                        ? window_average(state.values, g, x0, closure)
                        : window_average_2d(state.values, g, x0,
                                            0.5 * (f0.x[1] + f1.x[1]), closure);
                const double elo = std::min(f0.lambda, f1.lambda);
                const double w = std::abs(f1.lambda - f0.lambda);
                const double frac =
                    w > 0.0 ? std::clamp((ubar - elo) / w, 0.0, 1.0) : (ubar >= elo ? 1.0 : 0.0);
                acc += lg.dlam() * frac;
            }
            out.values[static_cast<std::size_t>(g.index(ix, jy))] = acc;
        }
    }
    return out;
}

inline GridSolution tc_step(const GridSolution& state, const FluxModel& model,
                            double t_start, double dt, const LambdaGrid& lg,
                            const SchemeConfig& cfg) {
    return model.heterogeneous
               ? tc_step_heterogeneous(state, model, t_start, dt, lg, cfg.backtrace, cfg.closure)
               : tc_step_homogeneous(state, model, dt, lg, cfg.closure);
}

struct SchemeSeries {
    std::vector<double> times;        // 0, dt, ..., n dt
    std::vector<GridSolution> states; // iterates of T(dt)
    double dt = 0.0;
};

// Query-time state: the (1-alpha)/alpha convex combination of the bracketing
// iterates of eq-style S_n time reporting.
inline GridSolution snapshot_at(const SchemeSeries& series, double t, bool alpha_interp = true) {
    if (series.states.empty()) throw std::invalid_argument("snapshot_at: empty series");
    const double t0 = series.times.front();
    const double span = series.times.back() - t0;
    if (t < t0 - 1e-12 || t > series.times.back() + 1e-12 * std::max(1.0, span))
        throw std::invalid_argument("snapshot_at: query time outside the series");
    const double pos = (t - t0) / series.dt;
    int k = static_cast<int>(std::floor(pos));
    k = std::clamp(k, 0, static_cast<int>(series.states.size()) - 1);
    double alpha = pos - k;
    if (k + 1 >= static_cast<int>(series.states.size())) {
        k = static_cast<int>(series.states.size()) - 1;
        alpha = 0.0;
    }
    if (!alpha_interp || alpha == 0.0) {
        GridSolution s = series.states[static_cast<std::size_t>(k)];
        s.time = t;
        return s;
    }
    GridSolution s = series.states[static_cast<std::size_t>(k)];
    const GridSolution& next = series.states[static_cast<std::size_t>(k) + 1];
    for (std::size_t i = 0; i < s.values.size(); ++i)
        s.values[i] = (1.0 - alpha) * s.values[i] + alpha * next.values[i];
    s.time = t;
    return s;
}

// Applies T(t_final / n) n times, recording every iterate.
inline SchemeSeries run_scheme(const GridSolution& u0, const FluxModel& model,
                               double t_final, const SchemeConfig& cfg) {
    cfg.validate();
    if (!(t_final > 0.0)) throw std::invalid_argument("run_scheme: t_final must be > 0");
    for (double v : u0.values)
        if (v < model.a - 1e-12 || v > model.b + 1e-12)
            throw std::invalid_argument("run_scheme: initial data outside [a, b]");

    const LambdaGrid lg = lambda_grid_for_range(model.a, model.b, cfg.m_lambda);
    const double dt = t_final / cfg.steps;

    SchemeSeries series;
    series.dt = dt;
    series.times.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    series.states.reserve(static_cast<std::size_t>(cfg.steps) + 1);
    series.times.push_back(u0.time);
    series.states.push_back(u0);
    GridSolution state = u0;
    for (int k = 0; k < cfg.steps; ++k) {
        state = tc_step(state, model, u0.time + k * dt, dt, lg, cfg);
        series.times.push_back(u0.time + (k + 1) * dt);
        series.states.push_back(state);
    }
    return series;
}

struct ConvergenceRow {
    int n_cells = 0;
    int m_lambda = 0;
    int steps = 0;
    double l1_error = 0.0;
    double ratio = 0.0; // previous error / this error (0 on the first row)
};

struct ConvergenceLevel {
    int n_cells;
    int m_lambda;
    int steps;
};

// L1-error ladder against an exact solution evaluated at t_final.
template <class InitFn, class ExactFn>
std::vector<ConvergenceRow> convergence_study(const FluxModel& model, double x_lo,
                                              double x_hi, double t_final,
                                              const std::vector<ConvergenceLevel>& levels,
                                              InitFn&& init, ExactFn&& exact,
                                              const SchemeConfig& base_cfg) {
    std::vector<ConvergenceRow> rows;
    for (const auto& lvl : levels) {
        SpatialGrid g = SpatialGrid::line(x_lo, x_hi, lvl.n_cells);
        GridSolution u0 = sample_cells(g, 0.0, [&](double x, double) { return init(x); });
        SchemeConfig cfg = base_cfg;
        cfg.m_lambda = lvl.m_lambda;
        cfg.steps = lvl.steps;
        const SchemeSeries series = run_scheme(u0, model, t_final, cfg);
        const GridSolution& uh = series.states.back();
        GridSolution ue = sample_cells(g, t_final, [&](double x, double) { return exact(t_final, x); });
        ConvergenceRow row;
        row.n_cells = lvl.n_cells;
        row.m_lambda = lvl.m_lambda;
        row.steps = lvl.steps;
        row.l1_error = l1_distance(uh, ue);
        row.ratio = rows.empty() || row.l1_error == 0.0 ? 0.0 : rows.back().l1_error / row.l1_error;
        rows.push_back(row);
    }
    return rows;
}

} // namespace tcs
