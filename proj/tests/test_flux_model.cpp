#include <catch_amalgamated.hpp>

#include "tcs/flux_model.hpp"
#include "tcs/random.hpp"

#include <cmath>

using namespace tcs;

TEST_CASE("heaviside regularization shape") {
    const HeavisideReg H(1e-4);
    CHECK(H.value(-1.0) == 0.0);
    CHECK(H.value(1.0) == 1.0);
    CHECK(H.value(0.0) == Catch::Approx(0.5));
    double prev = -1.0;
    for (int i = 0; i <= 100; ++i) {
        const double x = -2e-4 + 4e-4 * i / 100.0;
        const double v = H.value(x);
        REQUIRE(v >= prev - 1e-15);
        prev = v;
    }
    CHECK(H.deriv(0.0) == Catch::Approx(3.0 / (4.0 * 1e-4)));
    CHECK(H.deriv(2e-4) == 0.0);
    CHECK_THROWS_AS(HeavisideReg(0.0), std::invalid_argument);
}

TEST_CASE("flux evaluation examples") {
    const FluxModel burgers = builtin("burgers");
    CHECK(eval_flux(burgers, 0.0, 0.0, 2.0)[0] == Catch::Approx(2.0));

    const FluxModel paper = builtin("paper_ibvp", 1e-4);
    // H_eps(1) = 1, H_eps(-1) = 0: f(1, u) = (1-u)(u+1)
    CHECK(eval_flux(paper, 0.0, 1.0, 1.0)[0] == Catch::Approx(0.0).margin(1e-15));
    // f(-1, 0.5) = 4 (1 - 0.25) = 3
    CHECK(eval_flux(paper, 0.0, -1.0, 0.5)[0] == Catch::Approx(3.0));

    CHECK_THROWS_AS(
        eval_flux(burgers, 0.0, std::numeric_limits<double>::quiet_NaN(), 0.5),
        InputDomainError);
    CHECK_THROWS_AS(eval_flux(burgers, 0.0, 0.0, std::numeric_limits<double>::infinity()),
                    InputDomainError);
}

TEST_CASE("flux derivative examples") {
    const FluxModel burgers = builtin("burgers");
    CHECK(eval_flux_deriv(burgers, 0.0, 0.0, 2.0)[0] == Catch::Approx(2.0));

    const FluxModel paper = builtin("paper_ibvp", 1e-4);
    CHECK(eval_flux_deriv(paper, 0.0, 1.0, 0.0)[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(eval_flux_deriv(paper, 0.0, -1.0, 0.5)[0] == Catch::Approx(-4.0));
}

TEST_CASE("flux divergence examples") {
    const FluxModel burgers = builtin("burgers");
    CHECK(eval_div_x_flux(burgers, 0.3, 0.7, 0.2) == 0.0); // exactly

    const FluxModel adv = builtin("advection", 1.0);
    CHECK(eval_div_x_flux(adv, 0.0, 0.5, 0.3) == 0.0);
    CHECK(eval_flux_deriv(adv, 0.0, 0.4, 0.9)[0] == Catch::Approx(1.0));

    const double eps = 1e-4;
    const FluxModel paper = builtin("paper_ibvp", eps);
    const HeavisideReg H(eps);
    // d/dx [H(x) + 4 H(-x)] (1 - 0) at x = 0 is -3 H'(0)
    CHECK(eval_div_x_flux(paper, 0.0, 0.0, 0.0) == Catch::Approx(-3.0 * H.deriv(0.0)));
}

TEST_CASE("builtin construction") {
    CHECK_THROWS_AS(builtin("no_such_flux"), UnknownFluxError);
    const FluxModel paper = builtin("paper_ibvp", 1e-4);
    CHECK(paper.heterogeneous);
    CHECK(paper.flux_zero_bounds);
    CHECK(paper.a == -1.0);
    CHECK(paper.b == 1.0);
    const FluxModel burgers = builtin("burgers");
    CHECK_FALSE(burgers.heterogeneous);
    CHECK(burgers.speed_bound == Catch::Approx(1.0));
}

// FD cross-check of the registered analytic derivatives. The x-derivatives of
// the eps = 1e-4 paper flux are sampled outside the transition layer (the
// 1e-6 FD step cannot resolve it); the layer itself is covered by the
// eps = 0.1 variant where the step is fine relative to the width.
TEST_CASE("analytic derivatives agree with finite differences") {
    Rng rng(17);
    struct Probe {
        FluxModel m;
        double x_lo, x_hi;
    };
    std::vector<Probe> probes;
    probes.push_back({builtin("burgers"), -1.0, 1.0});
    probes.push_back({builtin("advection", 1.5), -1.0, 1.0});
    probes.push_back({builtin("concave_traffic"), -1.0, 1.0});
    probes.push_back({builtin("paper_ibvp", 1e-4), 0.01, 1.0});
    probes.push_back({builtin("paper_ibvp", 0.1), -0.5, 0.5});

    for (const auto& probe : probes) {
        const FluxModel& m = probe.m;
        const double h_lam = 1e-6 * (m.b - m.a);
        const double h_x = 1e-6 * m.x_scale;
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 1.0);
            const double x = rng.uniform(probe.x_lo, probe.x_hi);
            const double lam = rng.uniform(m.a, m.b);
            const Vec2 xv{x, 0.0};

            const double an = eval_flux_deriv(m, t, xv, lam)[0];
            const double fd = (m.flux(t, xv, lam + h_lam)[0] - m.flux(t, xv, lam - h_lam)[0]) /
                              (2.0 * h_lam);
            REQUIRE(std::abs(an - fd) <= 1e-6 * (1.0 + std::abs(an)));

            const double divan = eval_div_x_flux(m, t, xv, lam);
            const double divfd =
                (m.flux(t, Vec2{x + h_x, 0.0}, lam)[0] - m.flux(t, Vec2{x - h_x, 0.0}, lam)[0]) /
                (2.0 * h_x);
            REQUIRE(std::abs(divan - divfd) <= 1e-6 * (1.0 + std::abs(divan)));
        }
    }
}

TEST_CASE("flux zeros hold for max-principle models") {
    Rng rng(19);
    for (const FluxModel& m : {builtin("concave_traffic"), builtin("paper_ibvp", 1e-4)}) {
        for (int i = 0; i < 1000; ++i) {
            const double t = rng.uniform(0.0, 1.0);
            const double x = rng.uniform(-1.0, 1.0);
            REQUIRE(std::abs(eval_flux(m, t, x, m.a)[0]) <= 1e-12);
            REQUIRE(std::abs(eval_flux(m, t, x, m.b)[0]) <= 1e-12);
        }
    }
}

TEST_CASE("speed bound dominates sampled |f'|") {
    Rng rng(23);
    for (const FluxModel& m :
         {builtin("burgers"), builtin("advection", 2.0), builtin("concave_traffic"),
          builtin("paper_ibvp", 1e-4)}) {
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double t = rng.uniform(0.0, 1.0);
            const double x = rng.uniform(-1.0, 1.0);
            const double lam = rng.uniform(m.a, m.b);
            worst = std::max(worst, std::abs(eval_flux_deriv(m, t, x, lam)[0]));
        }
        REQUIRE(worst <= m.speed_bound * (1.0 + 1e-12));
    }
}

TEST_CASE("sampled constants fall back for custom models") {
    FluxModel m;
    m.name = "custom_variable_advection";
    m.heterogeneous = true;
    m.a = 0.0;
    m.b = 1.0;
    m.x_scale = 2.0;
    m.flux = [](double, const Vec2& x, double lam) {
        return Vec2{std::sin(x[0]) * lam, 0.0};
    };
    sample_constants(m, 1.0, -1.0, 1.0, 32);
    CHECK(m.speed_bound == Catch::Approx(std::sin(1.0)).epsilon(0.05));
    CHECK(m.sup_div == Catch::Approx(std::cos(0.0)).epsilon(0.05));
    CHECK(m.c1 > 0.0);
}
