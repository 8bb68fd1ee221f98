#pragma once

// Initial-boundary value scheme on a 1D interval: extend the boundary data
// into a collar along the normals (constant extension in 1D), apply the
// transport-collapse operator over the substep, restrict to the interior.
// Boundary data are sampled at the substep's start time and held constant
// during the substep. Heterogeneous fluxes are allowed (the paper's own
// numerical examples use one) but the combination is experimental; see README.
//
// Steps are pure functions; same concurrency contract as tc_cauchy.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcs/tc_cauchy.hpp"

namespace tcs {

// Boundary trace waveforms: constant, step(t0), ramp(t0, t1).
struct Waveform {
    enum class Kind { constant, step, ramp };
    Kind kind = Kind::constant;
    double t0 = 0.0, t1 = 0.0;
    double v0 = 0.0, v1 = 0.0;

    static Waveform constant(double v) { return {Kind::constant, 0.0, 0.0, v, v}; }
    static Waveform step(double t0, double before, double after) {
        return {Kind::step, t0, t0, before, after};
    }
    static Waveform ramp(double t0, double t1, double before, double after) {
        if (!(t1 > t0)) throw std::invalid_argument("Waveform::ramp: need t1 > t0");
        return {Kind::ramp, t0, t1, before, after};
    }

    double operator()(double t) const {
        switch (kind) {
            case Kind::constant: return v0;
            case Kind::step: return t < t0 ? v0 : v1;
            case Kind::ramp:
                if (t <= t0) return v0;
                if (t >= t1) return v1;
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
        return v0;
    }

    double min_value() const { return std::min(v0, v1); }
    double max_value() const { return std::max(v0, v1); }
};

struct BoundaryData {
    Waveform left = Waveform::constant(0.0);
    Waveform right = Waveform::constant(0.0);
};

struct DomainSpec {
    double x_l = 0.0;
    double x_r = 1.0;
    int n_interior = 4;
    double sigma = 0.1; // collar width

    DomainSpec() = default;
    DomainSpec(double xl, double xr, int n, double sig)
        : x_l(xl), x_r(xr), n_interior(n), sigma(sig) {
        if (!(x_r > x_l) || n_interior < 4 || !(sigma > 0.0))
            throw std::invalid_argument("DomainSpec: need x_r > x_l, N >= 4, sigma > 0");
    }

    double dx() const { return (x_r - x_l) / n_interior; }
    int collar_cells() const {
        return static_cast<int>(std::ceil(sigma / dx() - 1e-9));
    }
    SpatialGrid interior_grid() const { return SpatialGrid::line(x_l, x_r, n_interior); }
    SpatialGrid extended_grid() const {
        const int ns = collar_cells();
        return SpatialGrid::line(x_l - ns * dx(), x_r + ns * dx(), n_interior + 2 * ns);
    }
};

// Extension of u along the normals: interior copied, each collar filled with
// that side's boundary trace at time t.
inline GridSolution extend_with_boundary(const GridSolution& u, const BoundaryData& bdata,
                                         double t, const DomainSpec& dom) {
    if (u.grid.dim != 1 || u.grid.n[0] != dom.n_interior)
        throw std::invalid_argument("extend_with_boundary: state does not match the domain");
    const int ns = dom.collar_cells();
    GridSolution ext(dom.extended_grid(), u.time);
    const double ul = bdata.left(t);
    const double ur = bdata.right(t);
    for (int i = 0; i < ns; ++i) ext.values[static_cast<std::size_t>(i)] = ul;
    for (int i = 0; i < dom.n_interior; ++i)
        ext.values[static_cast<std::size_t>(ns + i)] = u.values[static_cast<std::size_t>(i)];
    for (int i = 0; i < ns; ++i)
        ext.values[static_cast<std::size_t>(ns + dom.n_interior + i)] = ur;
    return ext;
}

// Extend at time t, transport-collapse over dt, restrict to the interior.
// Lookups beyond the collar clamp to the collar value, which equals what any
// larger collar would contain; the interior result is sigma-independent.
inline GridSolution ibvp_step(const GridSolution& state, const FluxModel& model,
                              const BoundaryData& bdata, double t, double dt,
                              const LambdaGrid& lg, const BacktraceConfig& bt,
                              const DomainSpec& dom) {
    if (dt < 0.0) throw std::invalid_argument("ibvp_step: dt must be >= 0");
    if (dt * model.speed_bound > dom.sigma + 1e-12)
        throw std::invalid_argument(
            "ibvp_step: substep violates dt * L <= sigma; enlarge sigma or the step count");
    const GridSolution ext = extend_with_boundary(state, bdata, t, dom);
    const GridSolution stepped =
        model.heterogeneous
            ? tc_step_heterogeneous(ext, model, t, dt, lg, bt, Closure::clamp)
            : tc_step_homogeneous(ext, model, dt, lg, Closure::clamp);
    GridSolution out(dom.interior_grid(), t + dt);
    const int ns = dom.collar_cells();
    for (int i = 0; i < dom.n_interior; ++i)
        out.values[static_cast<std::size_t>(i)] =
            stepped.values[static_cast<std::size_t>(ns + i)];
    return out;
}

// Value bounds of the problem data (initial condition plus boundary traces).
inline std::pair<double, double> ibvp_data_bounds(const GridSolution& u0,
                                                  const BoundaryData& bdata) {
    double lo = min_value(u0), hi = max_value(u0);
    lo = std::min({lo, bdata.left.min_value(), bdata.right.min_value()});
    hi = std::max({hi, bdata.left.max_value(), bdata.right.max_value()});
    return {lo, hi};
}

// n substeps of ibvp_step. The lambda-grid spans the declared flux-zero range
// when the model has one (so runs over the same model share a discretization),
// otherwise the data bounds; either way it is widened to contain 0. The series
// holds every interior iterate.
inline SchemeSeries run_ibvp(const GridSolution& u0, const FluxModel& model,
                             const BoundaryData& bdata, double t_final, int steps,
                             int m_lambda, const DomainSpec& dom,
                             const BacktraceConfig& bt) {
    if (!(t_final > 0.0) || steps < 1 || m_lambda < 2)
        throw std::invalid_argument("run_ibvp: need t_final > 0, n >= 1, M >= 2");
    if (u0.grid.dim != 1 || u0.grid.n[0] != dom.n_interior)
        throw std::invalid_argument("run_ibvp: initial state does not match the domain");
    const auto [lo, hi] = ibvp_data_bounds(u0, bdata);
    double glo = lo, ghi = hi;
    if (model.flux_zero_bounds) {
        if (lo < model.a - 1e-12 || hi > model.b + 1e-12)
            throw std::invalid_argument("run_ibvp: data outside the model's [a, b]");
        glo = model.a;
        ghi = model.b;
    }
    const LambdaGrid lg = lambda_grid_for_range(glo, ghi, m_lambda);
    const double dt = t_final / steps;

    SchemeSeries series;
    series.dt = dt;
    series.times.push_back(u0.time);
    series.states.push_back(u0);
    GridSolution state = u0;
    for (int k = 0; k < steps; ++k) {
        const double t = u0.time + k * dt;
        state = ibvp_step(state, model, bdata, t, dt, lg, bt, dom);
        series.times.push_back(u0.time + (k + 1) * dt);
        series.states.push_back(state);
    }
    return series;
}

enum class SideClass { strict_inflow, strict_outflow, mixed };

inline const char* side_class_name(SideClass c) {
    switch (c) {
        case SideClass::strict_inflow: return "strict_inflow";
        case SideClass::strict_outflow: return "strict_outflow";
        case SideClass::mixed: return "not_applicable";
    }
    return "?";
}

struct InflowTraceReport {
    SideClass left = SideClass::mixed;
    SideClass right = SideClass::mixed;
    double max_deviation = 0.0; // over strict-inflow sides and t >= t_min
};

namespace detail {

inline SideClass classify_side(const FluxModel& m, double x_b, double nu, double lam_lo,
                               double lam_hi) {
    bool all_in = true, all_out = true;
    for (int i = 0; i <= 100; ++i) {
        const double lam = lam_lo + i * (lam_hi - lam_lo) / 100.0;
        const double s = eval_flux_deriv(m, 0.0, Vec2{x_b, 0.0}, lam)[0] * nu;
        if (!(s < 0.0)) all_in = false;
        if (!(s > 0.0)) all_out = false;
    }
    if (all_in) return SideClass::strict_inflow;
    if (all_out) return SideClass::strict_outflow;
    return SideClass::mixed;
}

} // namespace detail

// On strict-inflow sides the trace of the entropy solution equals u_B; the
// first interior cell is the discrete proxy. Expected O(dx + dlambda + dt).
inline InflowTraceReport inflow_trace_check(const SchemeSeries& series, const FluxModel& model,
                                            const BoundaryData& bdata, const DomainSpec& dom,
                                            double t_min = 0.0) {
    InflowTraceReport rep;
    const auto& u0 = series.states.front();
    const auto [lo, hi] = ibvp_data_bounds(u0, bdata);
    rep.left = detail::classify_side(model, dom.x_l, -1.0, lo, hi);
    rep.right = detail::classify_side(model, dom.x_r, +1.0, lo, hi);
    for (std::size_t s = 0; s < series.states.size(); ++s) {
        const double t = series.times[s];
        if (t < t_min) continue;
        const auto& u = series.states[s];
        if (rep.left == SideClass::strict_inflow)
            rep.max_deviation =
                std::max(rep.max_deviation, std::abs(u.values.front() - bdata.left(t)));
        if (rep.right == SideClass::strict_inflow)
            rep.max_deviation =
                std::max(rep.max_deviation, std::abs(u.values.back() - bdata.right(t)));
    }
    return rep;
}

} // namespace tcs
