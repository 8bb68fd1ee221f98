#pragma once

// Uniform cell-centered grids and piecewise-constant cell data (1D/2D),
// plus the exact conservative remap used by the transport step.
//
// Everything here is a plain value type; all functions are pure and safe to
// call concurrently.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcs {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

enum class Closure { zero, periodic, clamp };

struct SpatialGrid {
    int dim = 1;
    Vec2 lo{0.0, 0.0};
    Vec2 hi{1.0, 0.0};
    std::array<int, 2> n{0, 1};

    static SpatialGrid line(double x_lo, double x_hi, int cells) {
        if (cells < 4 || !(x_hi > x_lo))
            throw std::invalid_argument("SpatialGrid: need x_hi > x_lo and N >= 4");
        SpatialGrid g;
        g.dim = 1;
        g.lo = {x_lo, 0.0};
        g.hi = {x_hi, 0.0};
        g.n = {cells, 1};
        return g;
    }

    static SpatialGrid square(double x_lo, double x_hi, double y_lo, double y_hi,
                              int nx, int ny) {
        if (nx < 4 || ny < 4 || !(x_hi > x_lo) || !(y_hi > y_lo))
            throw std::invalid_argument("SpatialGrid: need positive extents and N >= 4");
        SpatialGrid g;
        g.dim = 2;
        g.lo = {x_lo, y_lo};
        g.hi = {x_hi, y_hi};
        g.n = {nx, ny};
        return g;
    }

    double dx(int axis = 0) const { return (hi[axis] - lo[axis]) / n[axis]; }
    int total_cells() const { return dim == 2 ? n[0] * n[1] : n[0]; }
    double center(int axis, int i) const { return lo[axis] + (i + 0.5) * dx(axis); }
    double cell_volume() const { return dim == 2 ? dx(0) * dx(1) : dx(0); }
    int index(int i, int j = 0) const { return j * n[0] + i; }

    bool same_layout(const SpatialGrid& o) const {
        return dim == o.dim && lo == o.lo && hi == o.hi && n == o.n;
    }
};

// Cell-averaged solution at one time stamp.
struct GridSolution {
    SpatialGrid grid;
    double time = 0.0;
    std::vector<double> values;

    GridSolution() = default;
    GridSolution(SpatialGrid g, double t, double fill = 0.0)
        : grid(g), time(t), values(static_cast<std::size_t>(g.total_cells()), fill) {}
};

template <class F>
GridSolution sample_cells(const SpatialGrid& g, double t, F&& f) {
    GridSolution s(g, t);
    if (g.dim == 1) {
        for (int i = 0; i < g.n[0]; ++i) s.values[i] = f(g.center(0, i), 0.0);
    } else {
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                s.values[g.index(i, j)] = f(g.center(0, i), g.center(1, j));
    }
    return s;
}

inline double cell_mass(const GridSolution& s) {
    double acc = 0.0;
    for (double v : s.values) acc += v;
    return acc * s.grid.cell_volume();
}

inline double l1_norm(const GridSolution& s) {
    double acc = 0.0;
    for (double v : s.values) acc += std::abs(v);
    return acc * s.grid.cell_volume();
}

inline double l1_distance(const GridSolution& u, const GridSolution& v) {
    if (!u.grid.same_layout(v.grid))
        throw std::invalid_argument("l1_distance: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        acc += std::abs(u.values[i] - v.values[i]);
    return acc * u.grid.cell_volume();
}

inline double linf_distance(const GridSolution& u, const GridSolution& v) {
    if (!u.grid.same_layout(v.grid))
        throw std::invalid_argument("linf_distance: grid mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
        m = std::max(m, std::abs(u.values[i] - v.values[i]));
    return m;
}

inline double min_value(const GridSolution& s) {
    return *std::min_element(s.values.begin(), s.values.end());
}

inline double max_value(const GridSolution& s) {
    return *std::max_element(s.values.begin(), s.values.end());
}

// Total variation of a 1D piecewise-constant field.
inline double total_variation(const std::vector<double>& v, bool periodic = false) {
    double tv = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
    if (periodic && v.size() > 1) tv += std::abs(v.front() - v.back());
    return tv;
}

inline double total_variation(const GridSolution& s, bool periodic = false) {
    if (s.grid.dim != 1)
        throw std::invalid_argument("total_variation: 1D only");
    return total_variation(s.values, periodic);
}

namespace detail {

inline double fetch(const std::vector<double>& v, long idx, int n, Closure c) {
    if (idx >= 0 && idx < n) return v[static_cast<std::size_t>(idx)];
    switch (c) {
        case Closure::zero: return 0.0;
        case Closure::periodic: {
            long m = idx % n;
            if (m < 0) m += n;
            return v[static_cast<std::size_t>(m)];
        }
        case Closure::clamp: return v[static_cast<std::size_t>(std::clamp<long>(idx, 0, n - 1))];
    }
    return 0.0;
}

} // namespace detail

// Exact cell average of the translated piecewise-constant field:
// out[i] = mean of src over [center_i - shift ± dx/2], with shift given in
// cell units. A translation remap is the convex combination of two integer
// shifts, so it is conservative and monotone.
inline void remap_translate(const std::vector<double>& src, double shift_cells,
                            Closure closure, std::vector<double>& out) {
    const int n = static_cast<int>(src.size());
    out.resize(src.size());
    const double p0 = -shift_cells;
    const double q0 = std::floor(p0);
    const double theta = p0 - q0;
    const long q = static_cast<long>(q0);
    for (int i = 0; i < n; ++i) {
        const double a = detail::fetch(src, i + q, n, closure);
        const double b = detail::fetch(src, i + q + 1, n, closure);
        out[i] = (1.0 - theta) * a + theta * b;
    }
}

// Mean of the piecewise-constant field over a cell-wide window centered at x.
inline double window_average(const std::vector<double>& v, const SpatialGrid& g,
                             double x, Closure closure, int axis = 0) {
    const int n = g.n[axis];
    const double p = (x - g.lo[axis]) / g.dx(axis) - 0.5;
    const double q0 = std::floor(p);
    const double theta = p - q0;
    const long q = static_cast<long>(q0);
    const double a = detail::fetch(v, q, n, closure);
    const double b = detail::fetch(v, q + 1, n, closure);
    return (1.0 - theta) * a + theta * b;
}

// 2D window average over a dx-by-dy window centered at (x, y); tensor-product
// weights, consistent with two successive 1D remaps.
inline double window_average_2d(const std::vector<double>& v, const SpatialGrid& g,
                                double x, double y, Closure closure) {
    const int nx = g.n[0], ny = g.n[1];
    const double px = (x - g.lo[0]) / g.dx(0) - 0.5;
    const double py = (y - g.lo[1]) / g.dx(1) - 0.5;
    const double qx0 = std::floor(px), qy0 = std::floor(py);
    const double tx = px - qx0, ty = py - qy0;
    const long qx = static_cast<long>(qx0), qy = static_cast<long>(qy0);

    auto cell = [&](long i, long j) -> double {
        double iv;
        if (closure == Closure::periodic) {
            long mi = i % nx; if (mi < 0) mi += nx;
            long mj = j % ny; if (mj < 0) mj += ny;
            return v[static_cast<std::size_t>(mj * nx + mi)];
        }
        if (i < 0 || i >= nx || j < 0 || j >= ny) {
            if (closure == Closure::zero) return 0.0;
            i = std::clamp<long>(i, 0, nx - 1);
            j = std::clamp<long>(j, 0, ny - 1);
        }
        iv = v[static_cast<std::size_t>(j * nx + i)];
        return iv;
    };

    return (1.0 - tx) * (1.0 - ty) * cell(qx, qy) + tx * (1.0 - ty) * cell(qx + 1, qy) +
           (1.0 - tx) * ty * cell(qx, qy + 1) + tx * ty * cell(qx + 1, qy + 1);
}

} // namespace tcs
