#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "sdg/ivp.hpp"
#include "sdg/operators.hpp"
#include "sdg/schemes.hpp"
#include "sdg/types.hpp"

namespace sdg {

/// Residual of the quadrature-reduced nodal DG system,
/// r = L U + (dt/2) Fw(U) + B, evaluated with fresh rhs values.
template <class Scalar>
Nodal<Scalar> dg_residual(const OperatorSet& ops, const IvpProblem<Scalar>& problem,
                          const Nodal<Scalar>& U, const StateVec<Scalar>& u_n, double t_n,
                          double dt) {
    const int n = ops.size();
    const double scale = 0.5 * dt;
    Nodal<Scalar> r = nodal_matvec(ops.L, U);
    for (int i = 0; i < n; ++i) {
        const double t_i = node_time(ops, t_n, dt, i);
        r[i] += Scalar(scale * ops.nodes.weights[i]) * problem.rhs(t_i, U[i]) +
                ops.boundary[i] * u_n;
    }
    return r;
}

template <class Scalar>
struct DgSolution {
    Nodal<Scalar> U;
    int newton_iterations = 0;
};

/// Solve the fully implicit nodal system L U + (dt/2) Fw(U) + B = 0 with a
/// stacked Newton iteration, started from the implicit Euler-march predictor.
template <class Scalar>
DgSolution<Scalar> dg_step_newton(const IvpProblem<Scalar>& problem, int p,
                                  const StateVec<Scalar>& u_n, double t_n, double dt,
                                  const NewtonOptions& newton = {}) {
    using Matrix = DenseMat<Scalar>;
    const OperatorSet& ops = operators(p);
    const int n = ops.size();
    const Eigen::Index d = u_n.size();
    const double scale = 0.5 * dt;

    SchemeConfig predictor_cfg;
    predictor_cfg.variant = Variant::ImSDG;
    predictor_cfg.degree = p;
    predictor_cfg.newton = newton;
    SweepState<Scalar> s;
    s.inflow = u_n;
    s.t_start = t_n;
    s.dt = dt;
    init_predictor(problem, predictor_cfg, ops, s);

    DgSolution<Scalar> out;
    out.U = s.U;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    int polish = 0;
    for (int it = 0; it <= newton.max_iter; ++it) {
        const Nodal<Scalar> r = dg_residual(ops, problem, out.U, u_n, t_n, dt);
        const double res = norm_inf(r);
        if (!std::isfinite(res)) throw NewtonFailure(res, t_n);
        if (res <= 4.0 * eps * (1.0 + norm_inf(out.U))) return out;
        if (res <= newton.tol && polish >= 3) return out;
        if (it == newton.max_iter) {
            if (res <= newton.tol) return out;
            throw NewtonFailure(res, t_n);
        }
        if (res <= newton.tol) ++polish;

        Matrix J = Matrix::Zero(n * d, n * d);
        StateVec<Scalar> rhs_flat(n * d);
        for (int i = 0; i < n; ++i) {
            const double t_i = node_time(ops, t_n, dt, i);
            const Matrix Jf = numerical_jacobian(problem, t_i, out.U[i]);
            for (int j = 0; j < n; ++j) {
                J.block(i * d, j * d, d, d) =
                    ops.L(i, j) * Matrix::Identity(d, d) +
                    (i == j ? Matrix(Scalar(scale * ops.nodes.weights[i]) * Jf)
                            : Matrix(Matrix::Zero(d, d)));
            }
            rhs_flat.segment(i * d, d) = r[i];
        }
        const StateVec<Scalar> delta = J.partialPivLu().solve(rhs_flat);
        for (int i = 0; i < n; ++i) out.U[i] -= delta.segment(i * d, d);
        ++out.newton_iterations;
    }
    throw NewtonFailure(0.0, t_n);
}

/// Nodal DG solution of the scalar linear problem u' = lambda u on one
/// interval: a single dense solve of (L + (lambda dt/2) M) U = -B.
template <class Scalar>
std::vector<Scalar> dg_solve_linear(const OperatorSet& ops, Scalar lambda, Scalar u_n, double dt) {
    using Matrix = DenseMat<Scalar>;
    using Vector = StateVec<Scalar>;
    const int n = ops.size();
    Matrix A = ops.L.cast<Scalar>() + Scalar(0.5 * dt) * lambda * ops.M.cast<Scalar>();
    Vector b = -u_n * ops.boundary.cast<Scalar>();
    Vector U = A.partialPivLu().solve(b);
    if (!all_finite(StateVec<Scalar>(U)))
        throw std::runtime_error("dg_solve_linear: singular nodal system");
    return std::vector<Scalar>(U.data(), U.data() + n);
}

/// Amplification factor of the converged DG method itself: the endpoint value
/// of the one-step solve of u' = lambda u, u(0) = 1, dt = 1.
inline Complex dg_amplification(int p, Complex lambda, double dt = 1.0) {
    const auto U = dg_solve_linear<Complex>(operators(p), lambda, Complex(1.0), dt);
    return U.back();
}

}  // namespace sdg
