#pragma once

#include <stdexcept>
#include <vector>

#include "sdg/operators.hpp"
#include "sdg/schemes.hpp"
#include "sdg/types.hpp"

namespace sdg {

/// Degree hierarchy for FAS p-multilevel cycles. Level 0 is the finest;
/// transfer operators are Lagrange interpolation between the node sets on
/// the reference interval.
struct LevelHierarchy {
    std::vector<int> degrees;                 ///< strictly decreasing
    std::vector<const OperatorSet*> ops;      ///< one table per level
    std::vector<Mat> restriction;             ///< [l]: level l -> l+1
    std::vector<Mat> prolongation;            ///< [l]: level l+1 -> l

    int levels() const { return static_cast<int>(degrees.size()); }
};

/// Interpolation matrix carrying nodal values from `src` onto `dst` nodes:
/// entry (a, b) = l_b^src(t_a^dst).
inline Mat transfer_matrix(const NodeSet& dst, const NodeSet& src) {
    Mat T(dst.size(), src.size());
    for (int a = 0; a < dst.size(); ++a)
        for (int b = 0; b < src.size(); ++b)
            T(a, b) = lagrange_eval(src, b, dst.nodes[a]);
    return T;
}

inline LevelHierarchy build_hierarchy(const std::vector<int>& degrees) {
    if (degrees.empty()) throw std::invalid_argument("build_hierarchy: empty degree list");
    for (std::size_t l = 0; l + 1 < degrees.size(); ++l)
        if (degrees[l + 1] >= degrees[l])
            throw std::invalid_argument("build_hierarchy: degrees must be strictly decreasing");
    if (degrees.back() < 0) throw std::invalid_argument("build_hierarchy: degrees must be >= 0");

    LevelHierarchy h;
    h.degrees = degrees;
    for (int p : degrees) h.ops.push_back(&operators(p));
    for (std::size_t l = 0; l + 1 < degrees.size(); ++l) {
        h.restriction.push_back(transfer_matrix(h.ops[l + 1]->nodes, h.ops[l]->nodes));
        h.prolongation.push_back(transfer_matrix(h.ops[l]->nodes, h.ops[l + 1]->nodes));
    }
    return h;
}

/// FAS correction for the coarse level:
/// tau_c = (dt/2) (Linv_c Fw_c(R U_f) - R Linv_f Fw_f(U_f)) + R tau_f.
/// Operator-level form; U_f must carry a coherent rhs cache F_f.
template <class Scalar>
Nodal<Scalar> fas_tau(const OperatorSet& fine, const OperatorSet& coarse, const Mat& restrict_map,
                      const IvpProblem<Scalar>& problem, const Nodal<Scalar>& U_fine,
                      const Nodal<Scalar>& F_fine, const Nodal<Scalar>& tau_fine, double t_start,
                      double dt) {
    const double scale = 0.5 * dt;

    Nodal<Scalar> fw_f(F_fine.size());
    for (std::size_t j = 0; j < F_fine.size(); ++j)
        fw_f[j] = fine.nodes.weights[j] * F_fine[j];
    const Nodal<Scalar> fine_term = nodal_matvec(restrict_map, nodal_matvec(fine.Linv, fw_f));

    const Nodal<Scalar> U_c = nodal_matvec(restrict_map, U_fine);
    Nodal<Scalar> fw_c(U_c.size());
    for (int m = 0; m < coarse.size(); ++m)
        fw_c[m] = coarse.nodes.weights[m] *
                  problem.rhs(node_time(coarse, t_start, dt, m), U_c[m]);
    const Nodal<Scalar> coarse_term = nodal_matvec(coarse.Linv, fw_c);

    Nodal<Scalar> tau(U_c.size());
    for (std::size_t m = 0; m < tau.size(); ++m)
        tau[m] = Scalar(scale) * (coarse_term[m] - fine_term[m]);
    if (!tau_fine.empty()) {
        const Nodal<Scalar> carried = nodal_matvec(restrict_map, tau_fine);
        for (std::size_t m = 0; m < tau.size(); ++m) tau[m] += carried[m];
    }
    return tau;
}

/// Hierarchy convenience overload; `coarse_level` indexes the receiving level.
template <class Scalar>
Nodal<Scalar> fas_tau(const LevelHierarchy& h, int coarse_level, const IvpProblem<Scalar>& problem,
                      const Nodal<Scalar>& U_fine, const Nodal<Scalar>& F_fine,
                      const Nodal<Scalar>& tau_fine, double t_start, double dt) {
    return fas_tau(*h.ops[coarse_level - 1], *h.ops[coarse_level],
                   h.restriction[coarse_level - 1], problem, U_fine, F_fine, tau_fine, t_start,
                   dt);
}

/// One multilevel V-cycle: fine sweep, FAS-corrected sweeps down the
/// hierarchy, then coarse-level corrections interpolated back up with a sweep
/// per intermediate level and a final fine-level correction.
template <class Scalar>
void ml_cycle(const LevelHierarchy& h, const IvpProblem<Scalar>& problem,
              const SchemeConfig& config, SweepState<Scalar>& fine) {
    const int L = h.levels();

    auto sweep_at = [&](int level, SweepState<Scalar>& s) {
        SchemeConfig cfg = config;
        cfg.degree = h.degrees[level];
        try {
            apply_sweep(s, *h.ops[level], problem, cfg, /*k=*/0);
        } catch (const NewtonFailure& e) {
            throw e.with_level(level);
        }
    };

    sweep_at(0, fine);
    if (L == 1) return;

    std::vector<SweepState<Scalar>> states(L);
    std::vector<Nodal<Scalar>> restricted(L);  // pre-sweep restricted iterates
    states[0] = fine;

    for (int l = 0; l + 1 < L; ++l) {
        SweepState<Scalar>& c = states[l + 1];
        c.inflow = fine.inflow;
        c.t_start = fine.t_start;
        c.dt = fine.dt;
        c.U = nodal_matvec(h.restriction[l], states[l].U);
        c.F.resize(c.U.size());
        for (int m = 0; m < h.ops[l + 1]->size(); ++m)
            c.F[m] = problem.rhs(node_time(*h.ops[l + 1], c.t_start, c.dt, m), c.U[m]);
        c.tau = fas_tau(h, l + 1, problem, states[l].U, states[l].F, states[l].tau,
                        c.t_start, c.dt);
        restricted[l + 1] = c.U;
        sweep_at(l + 1, c);
    }

    for (int l = L - 2; l >= 1; --l) {
        SweepState<Scalar>& s = states[l];
        const Nodal<Scalar>& below = states[l + 1].U;
        for (std::size_t m = 0; m < s.U.size(); ++m) {
            StateVec<Scalar> corr = StateVec<Scalar>::Zero(s.inflow.size());
            for (std::size_t j = 0; j < below.size(); ++j)
                corr += h.prolongation[l](m, j) * (below[j] - restricted[l + 1][j]);
            s.U[m] += corr;
        }
        for (int m = 0; m < h.ops[l]->size(); ++m)
            s.F[m] = problem.rhs(node_time(*h.ops[l], s.t_start, s.dt, m), s.U[m]);
        sweep_at(l, s);
    }

    const Nodal<Scalar>& below = states[1].U;
    for (std::size_t m = 0; m < fine.U.size(); ++m) {
        StateVec<Scalar> corr = StateVec<Scalar>::Zero(fine.inflow.size());
        for (std::size_t j = 0; j < below.size(); ++j)
            corr += h.prolongation[0](m, j) * (below[j] - restricted[1][j]);
        fine.U[m] += corr;
    }
    for (int m = 0; m < h.ops[0]->size(); ++m)
        fine.F[m] = problem.rhs(node_time(*h.ops[0], fine.t_start, fine.dt, m), fine.U[m]);
}

}  // namespace sdg
