#pragma once

// Flux models f(t, x, lambda): evaluators, derivative fallbacks, admissible
// bounds and the sampled/analytic constants used by the property checks.
// Evaluators are pure functions of their arguments; a constructed model is
// immutable and may be shared across threads.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcs/grid.hpp"

namespace tcs {

struct InputDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// C1 monotone regularization of the Heaviside function: piecewise-cubic
// smoothstep on [-eps, eps], H(0) = 1/2.
struct HeavisideReg {
    double eps = 1e-4;

    explicit HeavisideReg(double e = 1e-4) : eps(e) {
        if (!(eps > 0.0)) throw std::invalid_argument("HeavisideReg: eps must be > 0");
    }

    double value(double x) const {
        if (x <= -eps) return 0.0;
        if (x >= eps) return 1.0;
        const double t = (x + eps) / (2.0 * eps);
        return t * t * (3.0 - 2.0 * t);
    }
    double deriv(double x) const {
        if (x <= -eps || x >= eps) return 0.0;
        const double t = (x + eps) / (2.0 * eps);
        return 6.0 * t * (1.0 - t) / (2.0 * eps);
    }
    double deriv2(double x) const {
        if (x <= -eps || x >= eps) return 0.0;
        const double t = (x + eps) / (2.0 * eps);
        return (6.0 - 12.0 * t) / (4.0 * eps * eps);
    }
    double antideriv(double x) const { // integral of H from 0 to x
        if (x >= eps) return 0.8125 * eps + (x - eps);
        if (x <= -eps) return -0.1875 * eps;
        const double t = (x + eps) / (2.0 * eps);
        return 2.0 * eps * (t * t * t * (1.0 - 0.5 * t) - 0.09375);
    }
};

// Optional rectangular region of definition (used by the region-exit error
// path of the characteristic tracer). Built-in models are global.
struct RegionBox {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{0.0, 0.0};
    int dim = 1;

    bool contains(const Vec2& x) const {
        for (int a = 0; a < dim; ++a)
            if (x[a] < lo[a] || x[a] > hi[a]) return false;
        return true;
    }
};

struct FluxModel {
    std::string name;
    int dim = 1;
    bool heterogeneous = false;
    // When true, f(t,x,a) = f(t,x,b) = 0 and [a,b] enjoys the Cauchy maximum
    // principle; otherwise a,b are data bounds.
    bool flux_zero_bounds = false;
    double a = 0.0;
    double b = 1.0;

    double speed_bound = 0.0;      // L = sup |f'_lambda|
    double c1 = 0.0;               // 4 sup ||grad_x f||        (Prop. 3.d)
    double c2 = 0.0;               // sup ||grad_x div_x f||    (Prop. 3.d)
    double sup_grad_fprime = 0.0;  // sup ||grad_x f'_lambda||  (Prop. 2)
    double sup_div = 0.0;          // sup |div_x f|

    double x_scale = 1.0;          // step scale for finite-difference fallbacks

    std::function<Vec2(double, const Vec2&, double)> flux;            // required
    std::function<Vec2(double, const Vec2&, double)> flux_lambda;     // optional
    std::function<double(double, const Vec2&, double)> div_x;         // optional
    std::function<Mat2(double, const Vec2&, double)> grad_x_flux_lambda; // optional
    std::function<double(double, const Vec2&, double)> grad_x_div;    // optional (1D: d/dx div_x f)
    // optional 1D x-antiderivative int_0^x f(t,s,lambda) ds; lets the
    // verifier integrate div_x f exactly across unresolved transition layers
    std::function<double(double, double, double)> flux_x_antideriv;

    std::optional<RegionBox> region;
    std::vector<double> x_probe_points; // extra x samples for constant estimation
};

namespace detail {

inline void check_finite(double t, const Vec2& x, double lam, int dim) {
    bool ok = std::isfinite(t) && std::isfinite(lam) && std::isfinite(x[0]);
    if (dim == 2) ok = ok && std::isfinite(x[1]);
    if (!ok) throw InputDomainError("flux evaluation: non-finite input");
}

} // namespace detail

inline Vec2 eval_flux(const FluxModel& m, double t, const Vec2& x, double lam) {
    detail::check_finite(t, x, lam, m.dim);
    return m.flux(t, x, lam);
}

inline Vec2 eval_flux(const FluxModel& m, double t, double x, double lam) {
    return eval_flux(m, t, Vec2{x, 0.0}, lam);
}

// f'_lambda; central finite difference with h = 1e-6 (b-a) when no analytic
// derivative is registered.
inline Vec2 eval_flux_deriv(const FluxModel& m, double t, const Vec2& x, double lam) {
    detail::check_finite(t, x, lam, m.dim);
    if (m.flux_lambda) return m.flux_lambda(t, x, lam);
    const double h = 1e-6 * (m.b - m.a);
    const Vec2 fp = m.flux(t, x, lam + h);
    const Vec2 fm = m.flux(t, x, lam - h);
    return {(fp[0] - fm[0]) / (2.0 * h), (fp[1] - fm[1]) / (2.0 * h)};
}

inline Vec2 eval_flux_deriv(const FluxModel& m, double t, double x, double lam) {
    return eval_flux_deriv(m, t, Vec2{x, 0.0}, lam);
}

// div_x f; exactly zero for homogeneous models.
inline double eval_div_x_flux(const FluxModel& m, double t, const Vec2& x, double lam) {
    detail::check_finite(t, x, lam, m.dim);
    if (!m.heterogeneous) return 0.0;
    if (m.div_x) return m.div_x(t, x, lam);
    const double h = 1e-6 * m.x_scale;
    double acc = 0.0;
    for (int axis = 0; axis < m.dim; ++axis) {
        Vec2 xp = x, xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        acc += (m.flux(t, xp, lam)[axis] - m.flux(t, xm, lam)[axis]) / (2.0 * h);
    }
    return acc;
}

inline double eval_div_x_flux(const FluxModel& m, double t, double x, double lam) {
    return eval_div_x_flux(m, t, Vec2{x, 0.0}, lam);
}

inline Mat2 eval_grad_x_flux_deriv(const FluxModel& m, double t, const Vec2& x, double lam) {
    detail::check_finite(t, x, lam, m.dim);
    if (!m.heterogeneous) return Mat2{{{0.0, 0.0}, {0.0, 0.0}}};
    if (m.grad_x_flux_lambda) return m.grad_x_flux_lambda(t, x, lam);
    const double h = 1e-6 * m.x_scale;
    Mat2 g{{{0.0, 0.0}, {0.0, 0.0}}};
    for (int axis = 0; axis < m.dim; ++axis) {
        Vec2 xp = x, xm = x;
        xp[axis] += h;
        xm[axis] -= h;
        const Vec2 fp = eval_flux_deriv(m, t, xp, lam);
        const Vec2 fm = eval_flux_deriv(m, t, xm, lam);
        for (int comp = 0; comp < m.dim; ++comp)
            g[comp][axis] = (fp[comp] - fm[comp]) / (2.0 * h);
    }
    return g;
}

// Estimates L, C1, C2 and the Prop.-2 sup-norms on a (t, x, lambda) lattice,
// augmented with any model-declared probe points. Used for custom models;
// built-ins carry exact analytic values.
inline void sample_constants(FluxModel& m, double t_hi, double x_lo, double x_hi,
                             int lattice = 64) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(lattice) + m.x_probe_points.size());
    for (int i = 0; i < lattice; ++i)
        xs.push_back(x_lo + (i + 0.5) * (x_hi - x_lo) / lattice);
    xs.insert(xs.end(), m.x_probe_points.begin(), m.x_probe_points.end());

    const double hx = 1e-6 * m.x_scale;
    double L = 0.0, gradf = 0.0, gradfp = 0.0, graddiv = 0.0, supdiv = 0.0;
    for (int it = 0; it < lattice; ++it) {
        const double t = t_hi * (it + 0.5) / lattice;
        for (double x : xs) {
            for (int il = 0; il < lattice; ++il) {
                const double lam = m.a + (il + 0.5) * (m.b - m.a) / lattice;
                const Vec2 xv{x, 0.0};
                L = std::max(L, std::abs(eval_flux_deriv(m, t, xv, lam)[0]));
                if (!m.heterogeneous) continue;
                const Vec2 xp{x + hx, 0.0}, xm{x - hx, 0.0};
                gradf = std::max(gradf, std::abs((m.flux(t, xp, lam)[0] - m.flux(t, xm, lam)[0]) / (2.0 * hx)));
                gradfp = std::max(gradfp, std::abs((eval_flux_deriv(m, t, xp, lam)[0] - eval_flux_deriv(m, t, xm, lam)[0]) / (2.0 * hx)));
                graddiv = std::max(graddiv, std::abs((eval_div_x_flux(m, t, xp, lam) - eval_div_x_flux(m, t, xm, lam)) / (2.0 * hx)));
                supdiv = std::max(supdiv, std::abs(eval_div_x_flux(m, t, xv, lam)));
            }
        }
        if (!m.heterogeneous) break; // time-independent sups for homogeneous f
    }
    m.speed_bound = L;
    m.c1 = 4.0 * gradf;
    m.c2 = graddiv;
    m.sup_grad_fprime = gradfp;
    m.sup_div = supdiv;
}

// ---------------------------------------------------------------------------
// Built-in models
// ---------------------------------------------------------------------------

inline FluxModel make_burgers(double data_lo = 0.0, double data_hi = 1.0) {
    FluxModel m;
    m.name = "burgers";
    m.a = data_lo;
    m.b = data_hi;
    m.speed_bound = std::max(std::abs(data_lo), std::abs(data_hi));
    m.flux = [](double, const Vec2&, double lam) { return Vec2{0.5 * lam * lam, 0.0}; };
    m.flux_lambda = [](double, const Vec2&, double lam) { return Vec2{lam, 0.0}; };
    return m;
}

inline FluxModel make_advection(double c, double data_lo = 0.0, double data_hi = 1.0) {
    FluxModel m;
    m.name = "advection";
    m.a = data_lo;
    m.b = data_hi;
    m.speed_bound = std::abs(c);
    m.flux = [c](double, const Vec2&, double lam) { return Vec2{c * lam, 0.0}; };
    m.flux_lambda = [c](double, const Vec2&, double) { return Vec2{c, 0.0}; };
    return m;
}

// LWR-type concave flux f = lambda (1 - lambda); flux zeros at 0 and 1.
inline FluxModel make_concave_traffic() {
    FluxModel m;
    m.name = "concave_traffic";
    m.flux_zero_bounds = true;
    m.a = 0.0;
    m.b = 1.0;
    m.speed_bound = 1.0;
    m.flux = [](double, const Vec2&, double lam) { return Vec2{lam * (1.0 - lam), 0.0}; };
    m.flux_lambda = [](double, const Vec2&, double lam) { return Vec2{1.0 - 2.0 * lam, 0.0}; };
    return m;
}

// The heterogeneous flux of the paper's numerical section:
//   f(x, u) = (1 - u^2) [H_eps(x) + 4 H_eps(-x)],
// flux zeros at u = -1 and u = 1. Constants are the exact sups of the
// corresponding derivatives over x in [-1, 1], lambda in [-1, 1].
inline FluxModel make_paper_ibvp(double eps = 1e-4) {
    const HeavisideReg H(eps);
    FluxModel m;
    m.name = "paper_ibvp";
    m.heterogeneous = true;
    m.flux_zero_bounds = true;
    m.a = -1.0;
    m.b = 1.0;
    m.x_scale = 2.0;

    auto g = [H](double x) { return H.value(x) + 4.0 * H.value(-x); };
    auto gp = [H](double x) { return H.deriv(x) - 4.0 * H.deriv(-x); };
    auto gpp = [H](double x) { return H.deriv2(x) + 4.0 * H.deriv2(-x); };

    m.flux = [g](double, const Vec2& x, double lam) {
        return Vec2{(1.0 - lam * lam) * g(x[0]), 0.0};
    };
    m.flux_lambda = [g](double, const Vec2& x, double lam) {
        return Vec2{-2.0 * lam * g(x[0]), 0.0};
    };
    m.div_x = [gp](double, const Vec2& x, double lam) {
        return (1.0 - lam * lam) * gp(x[0]);
    };
    m.grad_x_flux_lambda = [gp](double, const Vec2& x, double lam) {
        Mat2 out{{{0.0, 0.0}, {0.0, 0.0}}};
        out[0][0] = -2.0 * lam * gp(x[0]);
        return out;
    };
    m.grad_x_div = [gpp](double, const Vec2& x, double lam) {
        return (1.0 - lam * lam) * gpp(x[0]);
    };
    m.flux_x_antideriv = [H](double, double x, double lam) {
        return (1.0 - lam * lam) * (H.antideriv(x) - 4.0 * H.antideriv(-x));
    };

    const double hp0 = H.deriv(0.0);       // 3 / (4 eps)
    const double hpp_max = 1.5 / (eps * eps);
    m.speed_bound = 2.0 * 4.0;             // |f'| = 2 |lambda| g <= 8
    m.sup_div = 3.0 * hp0;                 // |g'| = 3 H'(x) peaks at x = 0
    m.sup_grad_fprime = 2.0 * 3.0 * hp0;
    m.c1 = 4.0 * 3.0 * hp0;
    m.c2 = 3.0 * hpp_max;                  // |g''| <= 3 max|H''|
    m.x_probe_points = {-eps, -0.5 * eps, 0.0, 0.5 * eps, eps};
    return m;
}

// Smooth heterogeneous variant used by tests (same family, wide transition).
inline FluxModel make_paper_ibvp_smooth(double eps) { return make_paper_ibvp(eps); }

struct UnknownFluxError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline FluxModel builtin(const std::string& name, double param = 0.0) {
    if (name == "burgers") return make_burgers();
    if (name == "advection") return make_advection(param == 0.0 ? 1.0 : param);
    if (name == "concave_traffic") return make_concave_traffic();
    if (name == "paper_ibvp") return make_paper_ibvp(param == 0.0 ? 1e-4 : param);
    throw UnknownFluxError("unknown flux model: " + name);
}

} // namespace tcs
