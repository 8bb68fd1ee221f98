#pragma once

// Independent ground truths used to check the transport-collapse scheme:
// exact Riemann solutions for Burgers, exact linear advection, and a
// first-order Godunov finite-volume solver for convex/concave fluxes.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tcs/flux_model.hpp"
#include "tcs/grid.hpp"

namespace tcs {

// Entropy solution of Burgers' equation with Riemann data (u_l | u_r) at x=0:
// shock of speed (u_l+u_r)/2 for u_l > u_r, rarefaction fan otherwise.
inline double burgers_riemann_exact(double u_l, double u_r, double t, double x) {
    if (!(t > 0.0)) throw std::invalid_argument("burgers_riemann_exact: t must be > 0");
    if (u_l > u_r) {
        const double s = 0.5 * (u_l + u_r);
        return x < s * t ? u_l : u_r;
    }
    const double xi = x / t;
    if (xi <= u_l) return u_l;
    if (xi >= u_r) return u_r;
    return xi;
}

inline double advection_exact(const std::function<double(double)>& u0, double c,
                              double t, double x) {
    return u0(x - c * t);
}

struct UnsupportedFluxError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

enum class Convexity { convex, concave };

inline Convexity detect_convexity(const FluxModel& m) {
    const int samples = 257;
    double prev = eval_flux_deriv(m, 0.0, 0.0, m.a)[0];
    bool nondec = true, noninc = true;
    for (int i = 1; i < samples; ++i) {
        const double lam = m.a + i * (m.b - m.a) / (samples - 1);
        const double fp = eval_flux_deriv(m, 0.0, 0.0, lam)[0];
        const double tol = 1e-12 * (1.0 + std::abs(fp));
        if (fp < prev - tol) nondec = false;
        if (fp > prev + tol) noninc = false;
        prev = fp;
    }
    if (nondec) return Convexity::convex;
    if (noninc) return Convexity::concave;
    throw UnsupportedFluxError("godunov_solve: flux is neither convex nor concave on [a,b]");
}

// Zero of the monotone f' on [lo, hi] by bisection.
inline double fprime_root(const FluxModel& m, double lo, double hi) {
    double flo = eval_flux_deriv(m, 0.0, 0.0, lo)[0];
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval_flux_deriv(m, 0.0, 0.0, mid)[0];
        if ((fm >= 0.0) == (flo >= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double godunov_flux(const FluxModel& m, Convexity cvx, double ul, double ur) {
    auto f = [&](double v) { return eval_flux(m, 0.0, 0.0, v)[0]; };
    auto fp = [&](double v) { return eval_flux_deriv(m, 0.0, 0.0, v)[0]; };
    if (cvx == Convexity::convex) {
        if (ul <= ur) {
            if (fp(ul) >= 0.0) return f(ul);
            if (fp(ur) <= 0.0) return f(ur);
            return f(fprime_root(m, ul, ur));
        }
        return std::max(f(ul), f(ur));
    }
    // concave: minimum over [ul,ur] sits at an endpoint, maximum over
    // [ur,ul] at the critical point when f' changes sign inside
    if (ul <= ur) return std::min(f(ul), f(ur));
    if (fp(ur) <= 0.0) return f(ur);
    if (fp(ul) >= 0.0) return f(ul);
    return f(fprime_root(m, ur, ul));
}

} // namespace detail

// First-order Godunov update on a 1D grid with zero-gradient ghost cells.
// CFL violations are handled internally by sub-stepping.
inline GridSolution godunov_solve(const FluxModel& m, const GridSolution& u0,
                                  double t_final, double cfl = 0.9) {
    if (m.dim != 1 || u0.grid.dim != 1)
        throw std::invalid_argument("godunov_solve: 1D only");
    if (m.heterogeneous)
        throw UnsupportedFluxError("godunov_solve: homogeneous fluxes only");
    if (!(cfl > 0.0 && cfl <= 0.9))
        throw std::invalid_argument("godunov_solve: cfl must be in (0, 0.9]");
    const auto cvx = detail::detect_convexity(m);

    const int n = u0.grid.n[0];
    const double dx = u0.grid.dx();
    const double L = std::max(m.speed_bound, 1e-300);
    GridSolution u = u0;
    std::vector<double> flux(static_cast<std::size_t>(n) + 1);

    double t = u0.time;
    const double t_end = u0.time + t_final;
    while (t < t_end - 1e-15 * std::max(1.0, t_end)) {
        const double dt = std::min(cfl * dx / L, t_end - t);
        for (int i = 0; i <= n; ++i) {
            const double ul = u.values[static_cast<std::size_t>(std::max(i - 1, 0))];
            const double ur = u.values[static_cast<std::size_t>(std::min(i, n - 1))];
            flux[static_cast<std::size_t>(i)] = detail::godunov_flux(m, cvx, ul, ur);
        }
        for (int i = 0; i < n; ++i)
            u.values[static_cast<std::size_t>(i)] -=
                dt / dx * (flux[static_cast<std::size_t>(i) + 1] - flux[static_cast<std::size_t>(i)]);
        t += dt;
    }
    u.time = t_end;
    return u;
}

} // namespace tcs
