#pragma once

// Test-only reference integrators and root-finding oracles, kept independent
// of the library's scheme kernels.

#include <cmath>
#include <functional>

#include "sdg/ivp.hpp"
#include "sdg/types.hpp"

namespace sdg_test {

using State = sdg::StateVec<double>;

/// Classic 4th-order Runge-Kutta over a uniform grid.
inline State rk4_integrate(const sdg::IvpProblem<double>& p, int n_steps) {
    const double dt = p.t_end / n_steps;
    State u = p.initial_value;
    for (int i = 0; i < n_steps; ++i) {
        const double t = i * dt;
        const State k1 = p.rhs(t, u);
        const State k2 = p.rhs(t + 0.5 * dt, State(u + 0.5 * dt * k1));
        const State k3 = p.rhs(t + 0.5 * dt, State(u + 0.5 * dt * k2));
        const State k4 = p.rhs(t + dt, State(u + dt * k3));
        u += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}

/// Third-order SSP Runge-Kutta (Shu-Osher), returning the full endpoint state.
inline State ssprk3_integrate(const sdg::IvpProblem<double>& p, int n_steps) {
    const double dt = p.t_end / n_steps;
    State u = p.initial_value;
    for (int i = 0; i < n_steps; ++i) {
        const double t = i * dt;
        const State u1 = u + dt * p.rhs(t, u);
        const State u2 = 0.75 * u + 0.25 * (u1 + dt * p.rhs(t + dt, u1));
        u = (1.0 / 3.0) * u + (2.0 / 3.0) * (u2 + dt * p.rhs(t + 0.5 * dt, u2));
    }
    return u;
}

/// Stability polynomial of classic RK3/RK4 at z = lambda * dt.
inline sdg::Complex rk3_growth(sdg::Complex z) {
    return 1.0 + z + z * z / 2.0 + z * z * z / 6.0;
}
inline sdg::Complex rk4_growth(sdg::Complex z) {
    return 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
}

/// Bisection to 1e-13 for a scalar root in [a, b] with a sign change.
inline double bisect(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a);
    for (int i = 0; i < 200 && b - a > 1e-13; ++i) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm > 0.0) == (fa > 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace sdg_test
