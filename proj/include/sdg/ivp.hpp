#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "sdg/types.hpp"

namespace sdg {

/// An initial value problem u' = f(t, u), u(0) = u0 on [0, T], optionally with
/// a non-stiff/stiff splitting f = f_N + f_S and an analytic Jacobian.
/// Problems are immutable descriptions; the callables must be reentrant.
template <class Scalar>
struct IvpProblem {
    using State = StateVec<Scalar>;
    using Matrix = DenseMat<Scalar>;
    using RhsFn = std::function<State(double, const State&)>;
    using JacFn = std::function<Matrix(double, const State&)>;

    int dimension = 1;
    RhsFn rhs;
    RhsFn rhs_nonstiff;  ///< f_N; set together with rhs_stiff
    RhsFn rhs_stiff;     ///< f_S
    JacFn jacobian;      ///< optional Jacobian of the full rhs
    State initial_value;
    double t_end = 1.0;
    std::function<State(double)> exact;  ///< optional closed-form solution

    bool has_split() const { return static_cast<bool>(rhs_nonstiff) && static_cast<bool>(rhs_stiff); }
    bool has_jacobian() const { return static_cast<bool>(jacobian); }
    bool has_exact() const { return static_cast<bool>(exact); }
};

/// Forward-difference Jacobian of an arbitrary rhs-like callable.
/// A step h_fd > 0 is used verbatim; h_fd == 0 selects the componentwise
/// default sqrt(eps) * (1 + |u_i|).
template <class Scalar, class Fn>
DenseMat<Scalar> fd_jacobian(const Fn& f, double t, const StateVec<Scalar>& u, double h_fd = 0.0) {
    const Eigen::Index d = u.size();
    const StateVec<Scalar> f0 = f(t, u);
    DenseMat<Scalar> J(f0.size(), d);
    const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
    StateVec<Scalar> up = u;
    for (Eigen::Index i = 0; i < d; ++i) {
        const double h = h_fd > 0.0 ? h_fd : sqrt_eps * (1.0 + magnitude(u[i]));
        up[i] = u[i] + Scalar(h);
        J.col(i) = (f(t, up) - f0) / Scalar(h);
        up[i] = u[i];
    }
    return J;
}

/// Jacobian of problem.rhs at (t, u): the analytic one when supplied,
/// otherwise forward differences.
template <class Scalar>
DenseMat<Scalar> numerical_jacobian(const IvpProblem<Scalar>& problem, double t,
                                    const StateVec<Scalar>& u, double h_fd = 0.0) {
    if (problem.has_jacobian()) return problem.jacobian(t, u);
    return fd_jacobian(problem.rhs, t, u, h_fd);
}

}  // namespace sdg
