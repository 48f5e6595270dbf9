#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "sdg/radau.hpp"
#include "sdg/types.hpp"

namespace sdg {

/// The dense collocation operators of a degree-p right Gauss-Radau rule.
/// All matrices are fixed by p alone; instances are immutable once built and
/// safe to share between threads.
struct OperatorSet {
    NodeSet nodes;
    Mat L;        ///< L_{ij} = w_j l_i'(t_j) - delta_{ip} delta_{jp}
    Mat M;        ///< diagonal quadrature mass matrix, M = diag(w)
    Mat Linv;     ///< dense inverse of L
    Mat LDelta;   ///< lower bidiagonal surrogate: -1 diagonal, +1 subdiagonal
    Mat Ltilde;   ///< LDelta * Linv, assembled from differenced rows of Linv
    Vec boundary; ///< b_j = l_j(-1)

    int degree() const { return nodes.degree; }
    int size() const { return nodes.size(); }
};

inline OperatorSet build_operators(const NodeSet& ns) {
    const int n = ns.size();
    const int p = ns.degree;
    OperatorSet ops;
    ops.nodes = ns;

    // Differentiation matrix D(a, b) = l_b'(t_a).
    Mat D(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            D(a, b) = lagrange_deriv(ns, b, ns.nodes[a]);

    ops.L = Mat::Zero(n, n);
    ops.M = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        ops.M(i, i) = ns.weights[i];
        for (int j = 0; j < n; ++j)
            ops.L(i, j) = ns.weights[j] * D(j, i) - ((i == p && j == p) ? 1.0 : 0.0);
    }

    Eigen::PartialPivLU<Mat> lu(ops.L);
    ops.Linv = lu.inverse();
    const double residual = (ops.L * ops.Linv - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (!(residual <= 1e-12))
        throw std::runtime_error("build_operators: L is numerically singular");

    ops.LDelta = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        ops.LDelta(i, i) = -1.0;
        if (i > 0) ops.LDelta(i, i - 1) = 1.0;
    }

    ops.Ltilde = Mat::Zero(n, n);
    ops.Ltilde.row(0) = -ops.Linv.row(0);
    for (int m = 0; m + 1 < n; ++m)
        ops.Ltilde.row(m + 1) = ops.Linv.row(m) - ops.Linv.row(m + 1);

    ops.boundary = Vec(n);
    for (int j = 0; j < n; ++j)
        ops.boundary[j] = lagrange_eval(ns, j, -1.0);

    return ops;
}

/// Per-degree operator cache; each table is computed once and then shared.
inline const OperatorSet& operators(int p) {
    static std::map<int, std::unique_ptr<const OperatorSet>> cache;
    static std::mutex guard;
    std::lock_guard<std::mutex> lock(guard);
    auto it = cache.find(p);
    if (it == cache.end()) {
        auto ops = std::make_unique<const OperatorSet>(build_operators(radau_nodes(p)));
        it = cache.emplace(p, std::move(ops)).first;
    }
    return *it->second;
}

}  // namespace sdg
