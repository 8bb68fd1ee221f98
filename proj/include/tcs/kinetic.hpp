#pragma once

// The kinetic function chi(lambda, u), uniform lambda-grids, exact per-cell
// masses, and the lift/collapse pair. Masses are exact integrals of chi, so
// collapse(lift(u)) == u and the discrete transport operator built on them is
// conservative. All value types, reentrant.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tcs {

// chi(lambda, u) = 1 on 0 <= lambda <= u, -1 on u <= lambda <= 0, 0 otherwise.
// Closed intervals; at lambda == u the value follows the sign of u.
inline int chi(double lambda, double u) {
    if (u > 0.0 && lambda >= 0.0 && lambda <= u) return 1;
    if (u < 0.0 && lambda >= u && lambda <= 0.0) return -1;
    return 0;
}

// Exact integral of chi(., u) over [lo, hi].
inline double chi_cell_mass(double lo, double hi, double u) {
    if (u >= 0.0) {
        return std::max(0.0, std::min(u, hi) - std::max(0.0, lo));
    }
    return -std::max(0.0, std::min(0.0, hi) - std::max(u, lo));
}

struct LambdaGrid {
    double lo = 0.0;
    double hi = 1.0;
    int m = 2;

    LambdaGrid() = default;
    LambdaGrid(double lo_, double hi_, int m_) : lo(lo_), hi(hi_), m(m_) {
        if (m < 2 || !(hi > lo))
            throw std::invalid_argument("LambdaGrid: need hi > lo and M >= 2");
    }

    double dlam() const { return (hi - lo) / m; }
    double edge(int j) const { return lo + j * dlam(); }
    double mid(int j) const { return lo + (j + 0.5) * dlam(); }
};

// Grid spanning the value range [lo, hi], widened to contain 0 so that the
// lift/collapse identity is exact.
inline LambdaGrid lambda_grid_for_range(double lo, double hi, int m) {
    return LambdaGrid(std::min(lo, 0.0), std::max(hi, 0.0), m);
}

// Per-cell signed masses of chi(., u) on a lambda-grid.
struct KineticProfile {
    LambdaGrid grid;
    std::vector<double> masses;
};

inline KineticProfile lift(double u, const LambdaGrid& g) {
    if (u < g.lo || u > g.hi)
        throw std::out_of_range("lift: u outside the lambda-grid range");
    KineticProfile p;
    p.grid = g;
    p.masses.resize(static_cast<std::size_t>(g.m));
    for (int j = 0; j < g.m; ++j)
        p.masses[static_cast<std::size_t>(j)] = chi_cell_mass(g.edge(j), g.edge(j + 1), u);
    return p;
}

// Fixed ascending summation order: bit-reproducible regardless of any outer
// parallel schedule.
inline double collapse(const KineticProfile& p) {
    double acc = 0.0;
    for (double mj : p.masses) acc += mj;
    return acc;
}

} // namespace tcs
