#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sdg/ivp.hpp"
#include "sdg/operators.hpp"
#include "sdg/types.hpp"

namespace sdg {

enum class Variant { ExDG, ExSDG, ImSDG, SISDG, ImSDGTheta };
enum class InitMode { EulerMarch, Constant };

struct NewtonOptions {
    double tol = 1e-12;  ///< absolute tolerance on the node residual norm
    int max_iter = 25;
};

struct SchemeConfig {
    Variant variant = Variant::ImSDG;
    int degree = 3;      ///< polynomial degree p
    int iterations = 6;  ///< sweep count K
    double theta = 1.0;  ///< final-sweep damping, ImSDGTheta only
    InitMode init = InitMode::EulerMarch;
    NewtonOptions newton;
};

/// Nodal state of one interval [t_n, t_n + dt]: the inflow value u_h(t_n^-),
/// the current iterate U, the cached rhs values F (kept coherent with U by
/// every sweep), and an optional FAS correction tau (empty means zero).
template <class Scalar>
struct SweepState {
    StateVec<Scalar> inflow;
    Nodal<Scalar> U;
    Nodal<Scalar> F;
    Nodal<Scalar> tau;
    double t_start = 0.0;
    double dt = 0.0;
};

/// Physical time of reference node m on [t_start, t_start + dt].
inline double node_time(const OperatorSet& ops, double t_start, double dt, int m) {
    return t_start + 0.5 * (ops.nodes.nodes[m] + 1.0) * dt;
}

/// Solve u = c + coeff * f(t, u) by Newton's method. An empty `jac` selects
/// forward-difference Jacobians of f; linear problems converge in one step.
template <class Scalar>
StateVec<Scalar> node_solve(const StateVec<Scalar>& c, double coeff,
                            const typename IvpProblem<Scalar>::RhsFn& f,
                            const typename IvpProblem<Scalar>::JacFn& jac,
                            double t, const NewtonOptions& newton) {
    using Matrix = DenseMat<Scalar>;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    StateVec<Scalar> u = c;
    double res = 0.0;
    int polish = 0;
    for (int it = 0; it <= newton.max_iter; ++it) {
        const StateVec<Scalar> r = u - c - Scalar(coeff) * f(t, u);
        res = norm_inf(r);
        if (!std::isfinite(res)) throw NewtonFailure(res, t);
        // Accept at the roundoff floor; once below newton.tol, take a couple
        // of polishing iterations so the tolerance does not set the error.
        if (res <= 4.0 * eps * (1.0 + norm_inf(u))) return u;
        if (res <= newton.tol && polish >= 3) return u;
        if (it == newton.max_iter) break;
        if (res <= newton.tol) ++polish;
        const Matrix J = jac ? jac(t, u) : fd_jacobian<Scalar>(f, t, u);
        Matrix A = -Scalar(coeff) * J;
        A += Matrix::Identity(u.size(), u.size());
        u -= A.partialPivLu().solve(r).eval();
        if (!all_finite(u)) throw NewtonFailure(norm_inf(u), t);
    }
    if (res <= newton.tol) return u;
    throw NewtonFailure(res, t);
}

namespace detail {

template <class Scalar>
void refresh_rhs(SweepState<Scalar>& s, const OperatorSet& ops, const IvpProblem<Scalar>& problem) {
    for (int m = 0; m < ops.size(); ++m)
        s.F[m] = problem.rhs(node_time(ops, s.t_start, s.dt, m), s.U[m]);
}

/// Quadrature sums q_i = sum_j Ltilde_{ij} w_j F_j of the previous iterate.
template <class Scalar>
Nodal<Scalar> quadrature_terms(const OperatorSet& ops, const Nodal<Scalar>& F) {
    Nodal<Scalar> fw(F.size());
    for (std::size_t j = 0; j < F.size(); ++j) fw[j] = ops.nodes.weights[j] * F[j];
    return nodal_matvec(ops.Ltilde, fw);
}

/// FAS contribution at node 0 (+tau_0) and node m+1 (+tau_{m+1} - tau_m),
/// the update-form distribution of LDelta * tau.
template <class Scalar>
StateVec<Scalar> tau_term(const SweepState<Scalar>& s, int m) {
    if (s.tau.empty()) return StateVec<Scalar>::Zero(s.inflow.size());
    if (m == 0) return s.tau[0];
    return s.tau[m] - s.tau[m - 1];
}

}  // namespace detail

/// Fill the initial iterate U^0 and its rhs cache.
template <class Scalar>
void init_predictor(const IvpProblem<Scalar>& problem, const SchemeConfig& config,
                    const OperatorSet& ops, SweepState<Scalar>& s) {
    const int n = ops.size();
    s.U.assign(n, StateVec<Scalar>());
    s.F.assign(n, StateVec<Scalar>());

    if (config.init == InitMode::Constant) {
        for (int m = 0; m < n; ++m) s.U[m] = s.inflow;
        detail::refresh_rhs(s, ops, problem);
        return;
    }

    // Euler marching t_n -> t_{n,0} -> ... -> t_{n,p}; explicit for the
    // explicit schemes, implicit for ImSDG, and IMEX for SISDG so that the
    // implicit solves only ever involve f_S.
    const bool implicit = config.variant == Variant::ImSDG || config.variant == Variant::ImSDGTheta;
    const bool imex = config.variant == Variant::SISDG;
    StateVec<Scalar> u = s.inflow;
    double t_prev = s.t_start;
    for (int m = 0; m < n; ++m) {
        const double t_next = node_time(ops, s.t_start, s.dt, m);
        const double h = t_next - t_prev;
        try {
            if (implicit) {
                u = node_solve<Scalar>(u, h, problem.rhs, problem.jacobian, t_next, config.newton);
            } else if (imex) {
                const StateVec<Scalar> c = u + Scalar(h) * problem.rhs_nonstiff(t_prev, u);
                u = node_solve<Scalar>(c, h, problem.rhs_stiff, {}, t_next, config.newton);
            } else {
                u = u + Scalar(h) * problem.rhs(t_prev, u);
            }
        } catch (const NewtonFailure& e) {
            throw e.with_node(m);
        }
        s.U[m] = u;
        t_prev = t_next;
    }
    detail::refresh_rhs(s, ops, problem);
}

/// Naive fixed-point iteration U^{k+1} = -(dt/2) Linv Fw(U^k) - Linv B + tau.
template <class Scalar>
void exdg_sweep(SweepState<Scalar>& s, const OperatorSet& ops, const IvpProblem<Scalar>& problem) {
    const int n = ops.size();
    const double scale = 0.5 * s.dt;
    Nodal<Scalar> fw(n);
    for (int j = 0; j < n; ++j) fw[j] = ops.nodes.weights[j] * s.F[j];
    const Nodal<Scalar> lf = nodal_matvec(ops.Linv, fw);
    for (int m = 0; m < n; ++m) {
        StateVec<Scalar> u = -Scalar(scale) * lf[m];
        for (int j = 0; j < n; ++j)
            u -= ops.Linv(m, j) * (ops.boundary[j] * s.inflow);
        if (!s.tau.empty()) u += s.tau[m];
        s.U[m] = u;
    }
    detail::refresh_rhs(s, ops, problem);
}

/// Explicit SDG sweep. The correction difference at node m+1 deliberately
/// uses weight w_m and the node-m values.
template <class Scalar>
void exsdg_sweep(SweepState<Scalar>& s, const OperatorSet& ops, const IvpProblem<Scalar>& problem) {
    const int n = ops.size();
    const double scale = 0.5 * s.dt;
    const Nodal<Scalar> q = detail::quadrature_terms(ops, s.F);
    const Nodal<Scalar> F_old = s.F;

    s.U[0] = s.inflow + Scalar(scale) * q[0] + detail::tau_term(s, 0);
    s.F[0] = problem.rhs(node_time(ops, s.t_start, s.dt, 0), s.U[0]);
    for (int m = 0; m + 1 < n; ++m) {
        s.U[m + 1] = s.U[m] + Scalar(scale * ops.nodes.weights[m]) * (s.F[m] - F_old[m]) +
                     Scalar(scale) * q[m + 1] + detail::tau_term(s, m + 1);
        s.F[m + 1] = problem.rhs(node_time(ops, s.t_start, s.dt, m + 1), s.U[m + 1]);
    }
}

/// Implicit SDG sweep; each node solves u = c + (dt/2) w_m f(t_m, u).
template <class Scalar>
void imsdg_sweep(SweepState<Scalar>& s, const OperatorSet& ops, const IvpProblem<Scalar>& problem,
                 const NewtonOptions& newton, double theta = 1.0) {
    const int n = ops.size();
    const double scale = 0.5 * s.dt;
    const Nodal<Scalar> q = detail::quadrature_terms(ops, s.F);
    const Nodal<Scalar> F_old = s.F;

    for (int m = 0; m < n; ++m) {
        const double coeff = theta * scale * ops.nodes.weights[m];
        StateVec<Scalar> c = (m == 0 ? s.inflow : s.U[m - 1]) - Scalar(coeff) * F_old[m] +
                             Scalar(scale) * q[m] + detail::tau_term(s, m);
        const double t_m = node_time(ops, s.t_start, s.dt, m);
        try {
            s.U[m] = node_solve<Scalar>(c, coeff, problem.rhs, problem.jacobian, t_m, newton);
        } catch (const NewtonFailure& e) {
            throw e.with_node(m);
        }
        s.F[m] = problem.rhs(t_m, s.U[m]);
    }
}

/// Final theta-damped implicit sweep of the ImSDG theta-scheme.
template <class Scalar>
void theta_sweep(SweepState<Scalar>& s, const OperatorSet& ops, const IvpProblem<Scalar>& problem,
                 const NewtonOptions& newton, double theta) {
    imsdg_sweep(s, ops, problem, newton, theta);
}

/// Semi-implicit SDG sweep: the quadrature sum uses the full f while the
/// corrections split into an explicit f_N part (weight w_m, node m) and an
/// implicit f_S part (weight w_{m+1}, node m+1).
template <class Scalar>
void sisdg_sweep(SweepState<Scalar>& s, const OperatorSet& ops, const IvpProblem<Scalar>& problem,
                 const NewtonOptions& newton) {
    if (!problem.has_split()) throw MissingSplit();
    const int n = ops.size();
    const double scale = 0.5 * s.dt;
    const Nodal<Scalar> q = detail::quadrature_terms(ops, s.F);
    const Nodal<Scalar> U_old = s.U;

    for (int m = 0; m < n; ++m) {
        const double t_m = node_time(ops, s.t_start, s.dt, m);
        const double coeff = scale * ops.nodes.weights[m];
        StateVec<Scalar> c;
        if (m == 0) {
            c = s.inflow;
        } else {
            const double t_prev = node_time(ops, s.t_start, s.dt, m - 1);
            const double w_prev = scale * ops.nodes.weights[m - 1];
            c = s.U[m - 1] + Scalar(w_prev) * (problem.rhs_nonstiff(t_prev, s.U[m - 1]) -
                                               problem.rhs_nonstiff(t_prev, U_old[m - 1]));
        }
        c += Scalar(scale) * q[m] + detail::tau_term(s, m) -
             Scalar(coeff) * problem.rhs_stiff(t_m, U_old[m]);
        try {
            s.U[m] = node_solve<Scalar>(c, coeff, problem.rhs_stiff, {}, t_m, newton);
        } catch (const NewtonFailure& e) {
            throw e.with_node(m);
        }
        s.F[m] = problem.rhs(t_m, s.U[m]);
    }
}

/// One sweep of the configured variant; `k` is the sweep index within the step.
template <class Scalar>
void apply_sweep(SweepState<Scalar>& s, const OperatorSet& ops, const IvpProblem<Scalar>& problem,
                 const SchemeConfig& config, int k) {
    switch (config.variant) {
        case Variant::ExDG: exdg_sweep(s, ops, problem); break;
        case Variant::ExSDG: exsdg_sweep(s, ops, problem); break;
        case Variant::ImSDG: imsdg_sweep(s, ops, problem, config.newton); break;
        case Variant::SISDG: sisdg_sweep(s, ops, problem, config.newton); break;
        case Variant::ImSDGTheta:
            if (k + 1 == config.iterations)
                theta_sweep(s, ops, problem, config.newton, config.theta);
            else
                imsdg_sweep(s, ops, problem, config.newton);
            break;
    }
}

/// Run one time step: predictor plus K sweeps. Returns the endpoint value
/// u_{n+1} = U[p] together with the full nodal state.
template <class Scalar>
std::pair<StateVec<Scalar>, SweepState<Scalar>> step(const IvpProblem<Scalar>& problem,
                                                     const SchemeConfig& config,
                                                     const StateVec<Scalar>& u_n, double t_n,
                                                     double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    if (config.iterations < 0) throw std::invalid_argument("step: K must be nonnegative");
    if (config.variant == Variant::SISDG && !problem.has_split()) throw MissingSplit();
    if (config.variant == Variant::ImSDGTheta && !(config.theta > 0.0 && config.theta <= 1.0))
        throw std::invalid_argument("step: theta must lie in (0, 1]");

    const OperatorSet& ops = operators(config.degree);
    SweepState<Scalar> s;
    s.inflow = u_n;
    s.t_start = t_n;
    s.dt = dt;
    try {
        init_predictor(problem, config, ops, s);
        for (int k = 0; k < config.iterations; ++k) {
            try {
                apply_sweep(s, ops, problem, config, k);
            } catch (const NewtonFailure& e) {
                throw e.with_iteration(k);
            }
        }
    } catch (const NewtonFailure& e) {
        throw e.with_time(t_n);
    }
    return {s.U.back(), s};
}

template <class Scalar>
struct Trajectory {
    std::vector<double> times;           ///< n_steps + 1 entries including t = 0
    std::vector<StateVec<Scalar>> states;
    std::vector<SweepState<Scalar>> nodal;  ///< per-step nodal history when requested
};

/// Uniform-grid driver: dt = T / n_steps, each endpoint feeds the next inflow.
template <class Scalar>
Trajectory<Scalar> integrate(const IvpProblem<Scalar>& problem, const SchemeConfig& config,
                             int n_steps, bool keep_nodal = false) {
    if (n_steps < 1) throw std::invalid_argument("integrate: n_steps must be >= 1");
    const double dt = problem.t_end / n_steps;
    Trajectory<Scalar> out;
    out.times.reserve(n_steps + 1);
    out.states.reserve(n_steps + 1);
    out.times.push_back(0.0);
    out.states.push_back(problem.initial_value);
    StateVec<Scalar> u = problem.initial_value;
    for (int i = 0; i < n_steps; ++i) {
        try {
            auto [endpoint, state] = step(problem, config, u, i * dt, dt);
            u = endpoint;
            if (keep_nodal) out.nodal.push_back(std::move(state));
        } catch (const NewtonFailure& e) {
            throw e.with_step(i);
        }
        out.times.push_back((i + 1) * dt);
        out.states.push_back(u);
    }
    return out;
}

}  // namespace sdg
