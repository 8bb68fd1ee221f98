#pragma once

// Builds models, initial states and runs from a RunConfig. Shared by the CLI
// and the test suites so presets behave identically everywhere.

#include <fstream>
#include <functional>
#include <sstream>

#include "tcs/config.hpp"
#include "tcs/flux_model.hpp"
#include "tcs/tc_cauchy.hpp"
#include "tcs/tc_ibvp.hpp"

namespace tcs {

// Expands [a,b] of data-bounded models to cover the initial/boundary data and
// refreshes the speed bound over the widened range. Flux-zero models keep
// their declared range.
inline void fit_data_range(FluxModel& m, double lo, double hi) {
    if (m.flux_zero_bounds) {
        if (lo < m.a - 1e-12 || hi > m.b + 1e-12)
            throw std::invalid_argument("data outside the model's flux-zero range [a,b]");
        return;
    }
    m.a = std::min(m.a, lo);
    m.b = std::max(m.b, hi);
    double L = 0.0;
    for (int i = 0; i <= 256; ++i) {
        const double lam = m.a + (m.b - m.a) * i / 256.0;
        L = std::max(L, std::abs(eval_flux_deriv(m, 0.0, Vec2{0.0, 0.0}, lam)[0]));
    }
    m.speed_bound = L;
}

inline std::function<double(double)> build_profile(const InitialSpec& init) {
    auto param = [&](std::size_t i, double fallback) {
        return i < init.params.size() ? init.params[i] : fallback;
    };
    if (init.profile == "constant") {
        const double v = param(0, 0.0);
        return [v](double) { return v; };
    }
    if (init.profile == "riemann") {
        const double ul = param(0, 1.0), ur = param(1, 0.0), x0 = param(2, 0.0);
        return [=](double x) { return x < x0 ? ul : ur; };
    }
    if (init.profile == "heaviside_reg") {
        const HeavisideReg H(param(0, 1e-4));
        return [H](double x) { return H.value(x); };
    }
    if (init.profile == "heaviside_reg_neg") {
        const HeavisideReg H(param(0, 1e-4));
        return [H](double x) { return H.value(-x); };
    }
    throw ConfigError("unknown initial profile: " + init.profile);
}

inline std::vector<double> load_initial_csv(const std::string& path, int n_cells) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open initial-condition CSV: " + path);
    std::vector<double> vals;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.find_first_not_of("0123456789+-.eE, \t") != std::string::npos) {
            first = false;
            continue; // header row
        }
        first = false;
        std::stringstream ss(line);
        std::string tok, last;
        while (std::getline(ss, tok, ',')) last = tok;
        vals.push_back(std::strtod(last.c_str(), nullptr));
    }
    if (static_cast<int>(vals.size()) != n_cells)
        throw ConfigError("initial CSV has " + std::to_string(vals.size()) +
                          " rows; expected one u per cell (" + std::to_string(n_cells) + ")");
    return vals;
}

struct ProblemRun {
    RunConfig cfg;
    FluxModel model;
    GridSolution u0;
    BoundaryData bdata;   // ibvp only
    DomainSpec dom;       // ibvp only
    SchemeSeries series;
    double data_lo = 0.0; // bounds of initial + boundary data
    double data_hi = 0.0;
};

inline ProblemRun run_problem(const RunConfig& rc) {
    ProblemRun pr;
    pr.cfg = rc;
    pr.model = builtin(rc.flux_name, rc.flux_param);

    const SpatialGrid grid = SpatialGrid::line(rc.x_lo, rc.x_hi, rc.n_cells);
    if (rc.initial.profile == "csv" || !rc.initial.csv_path.empty()) {
        pr.u0 = GridSolution(grid, 0.0);
        pr.u0.values = load_initial_csv(rc.initial.csv_path, rc.n_cells);
    } else {
        auto profile = build_profile(rc.initial);
        pr.u0 = sample_cells(grid, 0.0, [&](double x, double) { return profile(x); });
    }

    BacktraceConfig bt;
    bt.substeps = rc.backtrace_substeps;
    if (rc.backtrace_hmax > 0.0) bt.h_max = rc.backtrace_hmax;

    if (rc.kind == "cauchy") {
        pr.data_lo = min_value(pr.u0);
        pr.data_hi = max_value(pr.u0);
        fit_data_range(pr.model, pr.data_lo, pr.data_hi);
        SchemeConfig sc;
        sc.steps = rc.steps;
        sc.m_lambda = rc.m_lambda;
        sc.backtrace = bt;
        sc.closure = rc.closure == "periodic"
                         ? Closure::periodic
                         : (rc.closure == "constant_extension" ? Closure::clamp
                                                               : Closure::zero);
        sc.alpha_interpolation = rc.alpha_interpolation;
        pr.series = run_scheme(pr.u0, pr.model, rc.t_final, sc);
        return pr;
    }

    // ibvp
    pr.bdata.left = rc.boundary_left;
    pr.bdata.right = rc.boundary_right;
    const auto [lo, hi] = ibvp_data_bounds(pr.u0, pr.bdata);
    pr.data_lo = lo;
    pr.data_hi = hi;
    fit_data_range(pr.model, lo, hi);
    const double dt = rc.t_final / rc.steps;
    const double dx = grid.dx();
    double sigma = rc.sigma;
    if (sigma <= 0.0) sigma = pr.model.speed_bound * dt + 2.0 * dx;
    pr.dom = DomainSpec(rc.x_lo, rc.x_hi, rc.n_cells, sigma);
    pr.series = run_ibvp(pr.u0, pr.model, pr.bdata, rc.t_final, rc.steps, rc.m_lambda,
                         pr.dom, bt);
    return pr;
}

} // namespace tcs
