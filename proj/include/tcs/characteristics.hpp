#pragma once

// Kinetic characteristics: the system  x' = f'_lambda,  lambda' = -div_x f
// integrated backward from the head (t, x, lambda) over a time increment.
// Homogeneous fluxes use the exact translation fast path. Stateless given
// (model, config); batch calls may run concurrently.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tcs/flux_model.hpp"

namespace tcs {

struct CharacteristicEndpoint {
    Vec2 x{0.0, 0.0};
    double lambda = 0.0;
};

struct BacktraceConfig {
    int substeps = 8;
    double h_max = std::numeric_limits<double>::infinity();

    int steps_for(double dt) const {
        int n = substeps < 1 ? 1 : substeps;
        if (std::isfinite(h_max) && h_max > 0.0 && dt > n * h_max)
            n = static_cast<int>(std::ceil(dt / h_max));
        return n;
    }
};

struct RegionExitError : std::runtime_error {
    double exit_time;
    explicit RegionExitError(double t)
        : std::runtime_error("characteristic left the model's defined region"),
          exit_time(t) {}
};

// Exact endpoint for (t,x)-independent fluxes: (x - f'(lambda) dt, lambda).
inline CharacteristicEndpoint backtrace_homogeneous(const FluxModel& m, const Vec2& x,
                                                    double lambda, double dt) {
    if (dt < 0.0) throw std::invalid_argument("backtrace: dt must be >= 0");
    const Vec2 fp = eval_flux_deriv(m, 0.0, x, lambda);
    CharacteristicEndpoint e;
    e.x = {x[0] - fp[0] * dt, x[1] - fp[1] * dt};
    e.lambda = lambda;
    return e;
}

inline CharacteristicEndpoint backtrace_homogeneous(const FluxModel& m, double x,
                                                    double lambda, double dt) {
    return backtrace_homogeneous(m, Vec2{x, 0.0}, lambda, dt);
}

namespace detail {

struct CharState {
    Vec2 x;
    double lam;
};

// direction = -1: backward in time from head t0 (s runs 0..dt, time t0 - s).
// direction = +1: forward from t0.
inline CharState rk4_integrate(const FluxModel& m, double t0, CharState y, double dt,
                               int nsteps, int direction) {
    const double h = dt / nsteps;
    auto rhs = [&](double s, const CharState& st) {
        const double t = t0 + direction * s;
        const Vec2 fp = eval_flux_deriv(m, t, st.x, st.lam);
        const double dv = eval_div_x_flux(m, t, st.x, st.lam);
        CharState d;
        d.x = {direction * fp[0], direction * fp[1]};
        d.lam = direction * (-dv);
        return d;
    };
    auto axpy = [](const CharState& y0, double a, const CharState& k) {
        CharState r;
        r.x = {y0.x[0] + a * k.x[0], y0.x[1] + a * k.x[1]};
        r.lam = y0.lam + a * k.lam;
        return r;
    };
    double s = 0.0;
    for (int i = 0; i < nsteps; ++i) {
        const CharState k1 = rhs(s, y);
        const CharState k2 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, k1));
        const CharState k3 = rhs(s + 0.5 * h, axpy(y, 0.5 * h, k2));
        const CharState k4 = rhs(s + h, axpy(y, h, k3));
        y.x[0] += (h / 6.0) * (k1.x[0] + 2.0 * k2.x[0] + 2.0 * k3.x[0] + k4.x[0]);
        y.x[1] += (h / 6.0) * (k1.x[1] + 2.0 * k2.x[1] + 2.0 * k3.x[1] + k4.x[1]);
        y.lam += (h / 6.0) * (k1.lam + 2.0 * k2.lam + 2.0 * k3.lam + k4.lam);
        s += h;
        if (m.region && !m.region->contains(y.x))
            throw RegionExitError(t0 + direction * s);
        if (!std::isfinite(y.x[0]) || !std::isfinite(y.lam) ||
            (m.dim == 2 && !std::isfinite(y.x[1])))
            throw std::runtime_error(
                "characteristic integration diverged; increase backtrace substeps");
    }
    return y;
}

} // namespace detail

// Backward RK4 solve of the characteristic system from (t, x, lambda) over dt
// (to time t - dt). For homogeneous models this reproduces the fast path.
inline CharacteristicEndpoint backtrace_heterogeneous(const FluxModel& m, double t,
                                                      const Vec2& x, double lambda,
                                                      double dt,
                                                      const BacktraceConfig& cfg) {
    if (dt < 0.0) throw std::invalid_argument("backtrace: dt must be >= 0");
    if (dt == 0.0) return CharacteristicEndpoint{x, lambda};
    detail::CharState y{x, lambda};
    y = detail::rk4_integrate(m, t, y, dt, cfg.steps_for(dt), -1);
    return CharacteristicEndpoint{y.x, y.lam};
}

inline CharacteristicEndpoint backtrace_heterogeneous(const FluxModel& m, double t,
                                                      double x, double lambda, double dt,
                                                      const BacktraceConfig& cfg) {
    return backtrace_heterogeneous(m, t, Vec2{x, 0.0}, lambda, dt, cfg);
}

// Forward companion (consistency checks): from (t0, x0, lambda0) to t0 + dt.
inline CharacteristicEndpoint integrate_forward(const FluxModel& m, double t0,
                                                const Vec2& x0, double lambda0, double dt,
                                                const BacktraceConfig& cfg) {
    if (dt < 0.0) throw std::invalid_argument("integrate_forward: dt must be >= 0");
    if (dt == 0.0) return CharacteristicEndpoint{x0, lambda0};
    detail::CharState y{x0, lambda0};
    y = detail::rk4_integrate(m, t0, y, dt, cfg.steps_for(dt), +1);
    return CharacteristicEndpoint{y.x, y.lam};
}

struct CharacteristicSample {
    double t;
    Vec2 x;
    double lambda;
    double dt;
};

// Max over samples of |det d(x0,lambda0)/d(x,lambda) - 1|, the Jacobian
// estimated by forward differences of the backtrace map. The exact value is 1
// because the kinetic field is divergence-free in (x, lambda).
inline double jacobian_defect(const FluxModel& m,
                              const std::vector<CharacteristicSample>& samples,
                              const BacktraceConfig& cfg) {
    if (samples.empty())
        throw std::invalid_argument("jacobian_defect: samples must be nonempty");
    double worst = 0.0;
    for (const auto& s : samples) {
        // snap the perturbed coordinates so the step sizes are exactly
        // representable; the quotient floor is then set by the map's own
        // output rounding (~eps/p)
        const double xp0 = s.x[0] + 1e-5 * m.x_scale;
        const double lp0 = s.lambda + 1e-5 * (m.b - m.a);
        const double px = xp0 - s.x[0];
        const double pl = lp0 - s.lambda;
        const auto base = backtrace_heterogeneous(m, s.t, s.x, s.lambda, s.dt, cfg);
        if (m.dim == 1) {
            const auto ex = backtrace_heterogeneous(m, s.t, Vec2{xp0, 0.0}, s.lambda, s.dt, cfg);
            const auto el = backtrace_heterogeneous(m, s.t, s.x, lp0, s.dt, cfg);
            const double a00 = (ex.x[0] - base.x[0]) / px;
            const double a01 = (el.x[0] - base.x[0]) / pl;
            const double a10 = (ex.lambda - base.lambda) / px;
            const double a11 = (el.lambda - base.lambda) / pl;
            worst = std::max(worst, std::abs(a00 * a11 - a01 * a10 - 1.0));
        } else {
            const auto ex = backtrace_heterogeneous(m, s.t, Vec2{xp0, s.x[1]}, s.lambda, s.dt, cfg);
            const auto ey = backtrace_heterogeneous(m, s.t, Vec2{s.x[0], s.x[1] + px}, s.lambda, s.dt, cfg);
            const auto el = backtrace_heterogeneous(m, s.t, s.x, lp0, s.dt, cfg);
            const double j[3][3] = {
                {(ex.x[0] - base.x[0]) / px, (ey.x[0] - base.x[0]) / px, (el.x[0] - base.x[0]) / pl},
                {(ex.x[1] - base.x[1]) / px, (ey.x[1] - base.x[1]) / px, (el.x[1] - base.x[1]) / pl},
                {(ex.lambda - base.lambda) / px, (ey.lambda - base.lambda) / px, (el.lambda - base.lambda) / pl}};
            const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                               j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                               j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
            worst = std::max(worst, std::abs(det - 1.0));
        }
    }
    return worst;
}

struct ContinuityModuli {
    double ratio_x = 0.0;      // max |x0(x+dx) - x0(x)| / |dx|
    double ratio_lambda = 0.0; // max |lambda0(x+dx) - lambda0(x)| / |dx|
    double bound_x = 0.0;      // 1 + dt sup ||grad_x f'_lambda||
    double bound_lambda = 0.0; // dt sup ||grad_x div_x f||
};

// Empirical Prop.-2 moduli over probe pairs (x, x + dx) at fixed (t, lambda).
inline ContinuityModuli continuity_moduli(const FluxModel& m, double t, double lambda,
                                          double dt,
                                          const std::vector<std::pair<double, double>>& probes,
                                          const BacktraceConfig& cfg) {
    ContinuityModuli out;
    out.bound_x = 1.0 + dt * m.sup_grad_fprime;
    out.bound_lambda = dt * m.c2;
    for (const auto& [x, dx] : probes) {
        const auto e0 = backtrace_heterogeneous(m, t, Vec2{x, 0.0}, lambda, dt, cfg);
        const auto e1 = backtrace_heterogeneous(m, t, Vec2{x + dx, 0.0}, lambda, dt, cfg);
        out.ratio_x = std::max(out.ratio_x, std::abs(e1.x[0] - e0.x[0]) / std::abs(dx));
        out.ratio_lambda =
            std::max(out.ratio_lambda, std::abs(e1.lambda - e0.lambda) / std::abs(dx));
    }
    return out;
}

} // namespace tcs
