#pragma once

#include <cmath>
#include <stdexcept>

#include "sdg/ivp.hpp"
#include "sdg/types.hpp"

namespace sdg {

/// Dahlquist test problem u' = lambda u, u(0) = 1, with exact solution
/// exp(lambda t). Carries the all-stiff splitting f_N = 0, f_S = lambda u.
template <class Scalar = double>
IvpProblem<Scalar> make_dahlquist(Scalar lambda, double t_end = 1.0) {
    using State = StateVec<Scalar>;
    using Matrix = DenseMat<Scalar>;
    IvpProblem<Scalar> p;
    p.dimension = 1;
    p.t_end = t_end;
    p.initial_value = State::Constant(1, Scalar(1.0));
    p.rhs = [lambda](double, const State& u) -> State { return lambda * u; };
    p.rhs_nonstiff = [](double, const State& u) -> State { return State::Zero(u.size()); };
    p.rhs_stiff = p.rhs;
    p.jacobian = [lambda](double, const State&) -> Matrix {
        return Matrix::Constant(1, 1, lambda);
    };
    p.exact = [lambda](double t) -> State {
        return State::Constant(1, std::exp(lambda * Scalar(t)));
    };
    return p;
}

/// Van der Pol oscillator u' = v, v' = (-u + (1 - u^2) v) / eps with the
/// initial values (2, -0.6666654321121172) on the slow manifold. The stiff
/// 1/eps term is the implicitly treated part of the splitting.
inline IvpProblem<double> make_vanderpol(double eps, double t_end = 0.5) {
    using State = StateVec<double>;
    using Matrix = DenseMat<double>;
    if (!(eps > 0.0)) throw std::invalid_argument("make_vanderpol: eps must be positive");
    IvpProblem<double> p;
    p.dimension = 2;
    p.t_end = t_end;
    p.initial_value = State(2);
    p.initial_value << 2.0, -0.6666654321121172;
    p.rhs = [eps](double, const State& y) -> State {
        State f(2);
        f[0] = y[1];
        f[1] = (-y[0] + (1.0 - y[0] * y[0]) * y[1]) / eps;
        return f;
    };
    p.rhs_nonstiff = [](double, const State& y) -> State {
        State f(2);
        f[0] = y[1];
        f[1] = 0.0;
        return f;
    };
    p.rhs_stiff = [eps](double, const State& y) -> State {
        State f(2);
        f[0] = 0.0;
        f[1] = (-y[0] + (1.0 - y[0] * y[0]) * y[1]) / eps;
        return f;
    };
    p.jacobian = [eps](double, const State& y) -> Matrix {
        Matrix J(2, 2);
        J(0, 0) = 0.0;
        J(0, 1) = 1.0;
        J(1, 0) = (-1.0 - 2.0 * y[0] * y[1]) / eps;
        J(1, 1) = (1.0 - y[0] * y[0]) / eps;
        return J;
    };
    return p;
}

/// Non-Lipschitz benchmark y' = ln(3) (y - floor(y) - 3/2), y(0) = 0. The
/// exact solution y(t) = -floor(t) + (1 - 3^(t - floor(t))) / 2 decreases by
/// one unit per time unit, crossing its discontinuities at the integers.
inline IvpProblem<double> make_bad_example(double t_end = 2.0) {
    using State = StateVec<double>;
    IvpProblem<double> p;
    p.dimension = 1;
    p.t_end = t_end;
    p.initial_value = State::Zero(1);
    const double ln3 = std::log(3.0);
    p.rhs = [ln3](double, const State& y) -> State {
        return State::Constant(1, ln3 * (y[0] - std::floor(y[0]) - 1.5));
    };
    p.exact = [](double t) -> State {
        const double ft = std::floor(t);
        return State::Constant(1, -ft + 0.5 * (1.0 - std::pow(3.0, t - ft)));
    };
    return p;
}

/// First-order upwind semi-discretization of u_t + u_x = 0 on [0, 1] with
/// periodic boundaries and u(x, 0) = sin(2 pi x); one state entry per cell.
inline IvpProblem<double> make_advection(int n_cells, double t_end = 1.0) {
    using State = StateVec<double>;
    using Matrix = DenseMat<double>;
    if (n_cells < 8) throw std::invalid_argument("make_advection: need n_cells >= 8");
    IvpProblem<double> p;
    p.dimension = n_cells;
    p.t_end = t_end;
    const double dx = 1.0 / n_cells;
    p.initial_value = State(n_cells);
    for (int i = 0; i < n_cells; ++i)
        p.initial_value[i] = std::sin(2.0 * std::acos(-1.0) * i * dx);
    p.rhs = [n_cells, dx](double, const State& u) -> State {
        State f(n_cells);
        for (int i = 0; i < n_cells; ++i)
            f[i] = -(u[i] - u[(i + n_cells - 1) % n_cells]) / dx;
        return f;
    };
    Matrix J = Matrix::Zero(n_cells, n_cells);
    for (int i = 0; i < n_cells; ++i) {
        J(i, i) = -1.0 / dx;
        J(i, (i + n_cells - 1) % n_cells) = 1.0 / dx;
    }
    p.jacobian = [J](double, const State&) -> Matrix { return J; };
    return p;
}

}  // namespace sdg
