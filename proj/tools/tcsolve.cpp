// tcsolve: configuration-driven driver for transport-collapse experiments.
//
//   tcsolve run|verify|compare|convergence --config <path> [--out <dir>]
//           [--seed <int>] [--plot-data]
//
// Exit codes: 0 success, 1 check failure, 2 configuration error, 3 runtime
// error.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tcs/io.hpp"
#include "tcs/oracles.hpp"
#include "tcs/runner.hpp"
#include "tcs/tolerances.hpp"
#include "tcs/verify.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    bool plot_data = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tcs::ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

tcs::RunConfig load_config(const CliOptions& cli) {
    tcs::RunConfig rc = tcs::load_run_config_file(cli.config_path);
    if (!cli.out_dir.empty()) rc.out_dir = cli.out_dir;
    if (cli.seed >= 0) rc.seed = static_cast<std::uint64_t>(cli.seed);
    return rc;
}

std::string snapshot_name(double t) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "snapshot_t%.6f.csv", t);
    return buf;
}

// Exact reference when the problem has one (Riemann Burgers, advection).
std::function<double(double, double)> exact_solution(const tcs::ProblemRun& pr) {
    const auto& rc = pr.cfg;
    if (rc.kind != "cauchy") return {};
    if (rc.flux_name == "burgers" && rc.initial.profile == "riemann") {
        const double ul = rc.initial.params.size() > 0 ? rc.initial.params[0] : 1.0;
        const double ur = rc.initial.params.size() > 1 ? rc.initial.params[1] : 0.0;
        const double x0 = rc.initial.params.size() > 2 ? rc.initial.params[2] : 0.0;
        return [=](double t, double x) {
            return tcs::burgers_riemann_exact(ul, ur, t, x - x0);
        };
    }
    if (rc.flux_name == "advection") {
        const double c = rc.flux_param == 0.0 ? 1.0 : rc.flux_param;
        auto profile = tcs::build_profile(rc.initial);
        return [=](double t, double x) { return profile(x - c * t); };
    }
    return {};
}

int cmd_run(const CliOptions& cli) {
    const auto wall0 = std::chrono::steady_clock::now();
    const tcs::RunConfig rc = load_config(cli);
    const tcs::ProblemRun pr = tcs::run_problem(rc);

    tcs::Manifest manifest;
    manifest.config_echo = read_file(cli.config_path);
    const std::filesystem::path dir(rc.out_dir);

    std::vector<double> snaps = rc.snapshot_times;
    if (snaps.empty()) snaps.push_back(rc.t_final);
    for (double t : snaps) {
        const tcs::GridSolution s =
            tcs::snapshot_at(pr.series, t, rc.alpha_interpolation);
        const std::string csv = tcs::snapshot_csv(s);
        const std::string name = snapshot_name(t);
        tcs::write_text_file(dir / name, csv);
        manifest.add(name, csv);
        if (cli.plot_data) {
            const std::string dat = tcs::snapshot_dat(s);
            const std::string dname = name.substr(0, name.size() - 4) + ".dat";
            tcs::write_text_file(dir / dname, dat);
            manifest.add(dname, dat);
        }
    }
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    tcs::write_text_file(dir / "manifest.txt", manifest.render());
    std::cout << "run " << rc.problem_name << ": " << snaps.size()
              << " snapshot(s) written to " << rc.out_dir << "\n";
    return 0;
}

int cmd_verify(const CliOptions& cli) {
    const auto wall0 = std::chrono::steady_clock::now();
    const tcs::RunConfig rc = load_config(cli);
    if (rc.verify_suites.empty()) {
        std::cout << "verify: empty suite list, nothing to do\n";
        return 0;
    }
    const tcs::ProblemRun pr = tcs::run_problem(rc);
    const double dx = pr.u0.grid.dx();
    const double dlam = (pr.model.b - pr.model.a) / rc.m_lambda;
    const double dt = rc.t_final / rc.steps;
    const auto ks = tcs::kruzhkov_k_grid(pr.data_lo, pr.data_hi, rc.k_points);

    tcs::Manifest manifest;
    manifest.config_echo = read_file(cli.config_path);
    const std::filesystem::path dir(rc.out_dir);

    bool all_pass = true;
    std::string summary;
    auto emit = [&](const tcs::EntropyReport& rep) {
        const std::string csv = tcs::report_csv(rep);
        const std::string name = "report_" + rep.check + ".csv";
        tcs::write_text_file(dir / name, csv);
        manifest.add(name, csv);
        summary += tcs::report_summary(rep) + "\n";
        if (!rep.pass()) {
            all_pass = false;
            std::cout << "FAIL " << rep.check << ": min residual "
                      << tcs::format_double(rep.min_residual()) << " < -tol "
                      << tcs::format_double(rep.tol) << "\n";
        } else {
            std::cout << "pass " << rep.check << "\n";
        }
    };

    for (const std::string& suite : rc.verify_suites) {
        if (suite == "kruzhkov") {
            if (rc.kind != "cauchy")
                throw tcs::ConfigError("kruzhkov suite needs a cauchy run");
            // hat radii reach span/3 past the centers; a quarter-span inset
            // keeps every support inside the domain
            const double span = rc.x_hi - rc.x_lo;
            const auto bank = tcs::TestFunctionBank::build(
                rc.t_final, rc.x_lo + 0.25 * span, rc.x_hi - 0.25 * span);
            emit(tcs::kruzhkov_residual(
                pr.series, pr.model, bank, ks,
                tcs::residual_tolerance(tcs::k_kruzhkov_tol_c, dx, dlam, dt)));
        } else if (suite == "def3" || suite == "def1" || suite == "kinetic") {
            if (rc.kind != "ibvp")
                throw tcs::ConfigError(suite + " suite needs an ibvp run");
            const auto bank = tcs::TestFunctionBank::build(rc.t_final, rc.x_lo, rc.x_hi);
            if (suite == "def3")
                emit(tcs::boundary_def3_residual(
                    pr.series, pr.model, pr.bdata, bank, ks, pr.data_lo, pr.data_hi,
                    tcs::residual_tolerance(tcs::k_def3_tol_c, dx, dlam, dt)));
            else if (suite == "def1")
                emit(tcs::otto_def1_residual(
                    pr.series, pr.model, pr.bdata, bank, ks, pr.model.speed_bound,
                    tcs::residual_tolerance(tcs::k_def1_tol_c, dx, dlam, dt)));
            else
                emit(tcs::kinetic_residual(
                    pr.series, pr.model, pr.bdata, bank,
                    tcs::rho_bank(pr.data_lo, pr.data_hi), pr.data_lo, pr.data_hi,
                    tcs::residual_tolerance(tcs::k_kinetic_tol_c, dx, dlam, dt)));
        } else if (suite == "properties") {
            tcs::PropertySuiteOptions opt;
            opt.seed = rc.seed;
            opt.backtrace_substeps = std::max(rc.backtrace_substeps, 16);
            const tcs::PropertySuite suite_res =
                tcs::operator_property_suite(pr.model, opt);
            std::string txt;
            for (const auto& c : suite_res.checks) {
                txt += c.name + ": worst " + tcs::format_double(c.worst) + " bound " +
                       tcs::format_double(c.bound) + (c.pass ? " pass" : " FAIL") + "\n";
                std::cout << (c.pass ? "pass " : "FAIL ") << c.name << "\n";
                if (!c.pass) all_pass = false;
            }
            tcs::write_text_file(dir / "report_properties.txt", txt);
            manifest.add("report_properties.txt", txt);
            summary += txt + "\n";
        } else {
            throw tcs::ConfigError("unknown verify suite: " + suite);
        }
    }
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    tcs::write_text_file(dir / "summary.txt", summary);
    tcs::write_text_file(dir / "manifest.txt", manifest.render());
    return all_pass ? 0 : 1;
}

int cmd_compare(const CliOptions& cli) {
    const auto wall0 = std::chrono::steady_clock::now();
    const tcs::RunConfig rc = load_config(cli);
    if (rc.kind != "cauchy") throw tcs::ConfigError("compare needs a cauchy run");
    const tcs::ProblemRun pr = tcs::run_problem(rc);
    const tcs::GridSolution tc_final = pr.series.states.back();

    std::string csv = "pair,l1,linf\n";
    auto add_row = [&](const std::string& name, const tcs::GridSolution& a,
                       const tcs::GridSolution& b) {
        csv += name + "," + tcs::format_double(tcs::l1_distance(a, b)) + "," +
               tcs::format_double(tcs::linf_distance(a, b)) + "\n";
    };

    tcs::GridSolution godunov;
    bool have_godunov = false;
    if (!pr.model.heterogeneous) {
        try {
            godunov = tcs::godunov_solve(pr.model, pr.u0, rc.t_final);
            have_godunov = true;
        } catch (const tcs::UnsupportedFluxError&) {
        }
    }
    const auto exact = exact_solution(pr);
    tcs::GridSolution exact_grid;
    if (exact)
        exact_grid = tcs::sample_cells(pr.u0.grid, rc.t_final,
                                       [&](double x, double) { return exact(rc.t_final, x); });

    if (have_godunov) add_row("tc_vs_godunov", tc_final, godunov);
    if (exact) add_row("tc_vs_exact", tc_final, exact_grid);
    if (have_godunov && exact) add_row("godunov_vs_exact", godunov, exact_grid);
    add_row("tc_vs_tc", tc_final, tc_final);

    tcs::Manifest manifest;
    manifest.config_echo = read_file(cli.config_path);
    manifest.add("comparison.csv", csv);
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    const std::filesystem::path dir(rc.out_dir);
    tcs::write_text_file(dir / "comparison.csv", csv);
    tcs::write_text_file(dir / "manifest.txt", manifest.render());
    std::cout << csv;
    return 0;
}

int cmd_convergence(const CliOptions& cli) {
    const auto wall0 = std::chrono::steady_clock::now();
    const tcs::RunConfig rc = load_config(cli);
    if (rc.kind != "cauchy") throw tcs::ConfigError("convergence needs a cauchy run");
    tcs::ProblemRun probe;
    probe.cfg = rc; // for exact_solution lookup only
    const auto exact = exact_solution(probe);
    if (!exact)
        throw tcs::ConfigError(
            "convergence needs an exact reference (burgers riemann or advection)");

    tcs::FluxModel model = tcs::builtin(rc.flux_name, rc.flux_param);
    auto profile = tcs::build_profile(rc.initial);
    {
        const auto grid = tcs::SpatialGrid::line(rc.x_lo, rc.x_hi, rc.n_cells);
        auto u0 = tcs::sample_cells(grid, 0.0, [&](double x, double) { return profile(x); });
        tcs::fit_data_range(model, tcs::min_value(u0), tcs::max_value(u0));
    }

    std::vector<tcs::ConvergenceLevel> levels;
    for (int l = 0, n = rc.n_cells, m = rc.m_lambda, s = rc.steps; l < 3;
         ++l, n *= 2, m *= 2, s *= 2)
        levels.push_back({n, m, s});

    tcs::SchemeConfig sc;
    sc.closure = rc.closure == "periodic"
                     ? tcs::Closure::periodic
                     : (rc.closure == "constant_extension" ? tcs::Closure::clamp
                                                           : tcs::Closure::zero);
    const auto rows = tcs::convergence_study(
        model, rc.x_lo, rc.x_hi, rc.t_final, levels, [&](double x) { return profile(x); },
        [&](double t, double x) { return exact(t, x); }, sc);

    std::string csv = "n,m,steps,l1_error,ratio\n";
    for (const auto& r : rows)
        csv += std::to_string(r.n_cells) + "," + std::to_string(r.m_lambda) + "," +
               std::to_string(r.steps) + "," + tcs::format_double(r.l1_error) + "," +
               tcs::format_double(r.ratio) + "\n";
    std::cout << csv;

    tcs::Manifest manifest;
    manifest.config_echo = read_file(cli.config_path);
    manifest.add("convergence.csv", csv);
    manifest.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    const std::filesystem::path dir(rc.out_dir);
    tcs::write_text_file(dir / "convergence.csv", csv);
    tcs::write_text_file(dir / "manifest.txt", manifest.render());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"transport-collapse solver and verification driver"};
    app.require_subcommand(1);

    CliOptions cli;
    std::string command;
    for (const char* name : {"run", "verify", "compare", "convergence"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", cli.config_path, "flat config file")->required();
        sub->add_option("--out", cli.out_dir, "output directory override");
        sub->add_option("--seed", cli.seed, "seed override for randomized suites");
        sub->add_flag("--plot-data", cli.plot_data, "also emit gnuplot .dat files");
        sub->callback([&cli, &command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (command == "run") return cmd_run(cli);
        if (command == "verify") return cmd_verify(cli);
        if (command == "compare") return cmd_compare(cli);
        if (command == "convergence") return cmd_convergence(cli);
        std::cerr << "unknown command\n";
        return 2;
    } catch (const tcs::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}
