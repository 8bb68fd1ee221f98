#pragma once

// Residual tolerances for the verification suites: tol = C (dx + dlam + dt).
// The coefficients are pinned from refinement calibration on the benchmark
// problems (worst violations shrink at least linearly under simultaneous
// N, M, n doubling; see tests/test_verify.cpp).

namespace tcs {

inline constexpr double k_kruzhkov_tol_c = 0.2; // shock violations measure ~0.11x
inline constexpr double k_def3_tol_c = 1.0;     // advection 0.18x, paper fig1 0.43x
inline constexpr double k_def1_tol_c = 1.0;
inline constexpr double k_kinetic_tol_c = 0.5;  // paper runs ~0.3x

inline double residual_tolerance(double c, double dx, double dlam, double dt) {
    return c * (dx + dlam + dt);
}

} // namespace tcs
