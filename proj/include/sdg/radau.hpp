#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sdg {

/// Right Gauss-Radau quadrature rule on [-1, 1]: p+1 nodes with the right
/// endpoint +1 included, exact for all polynomials of degree <= 2p.
struct NodeSet {
    int degree = 0;                ///< polynomial degree p
    std::vector<double> nodes;     ///< p+1 nodes, strictly increasing, last == +1
    std::vector<double> weights;   ///< p+1 positive weights, sum == 2

    int size() const { return degree + 1; }
};

namespace detail {

/// Legendre P_n(x) and its derivative by the three-term recurrence.
inline std::pair<double, double> legendre(int n, double x) {
    if (n == 0) return {1.0, 0.0};
    double pm1 = 1.0, p = x;
    for (int k = 1; k < n; ++k) {
        const double pp1 = ((2 * k + 1) * x * p - k * pm1) / (k + 1);
        pm1 = p;
        p = pp1;
    }
    double dp;
    if (std::abs(x) < 1.0) {
        dp = n * (x * p - pm1) / (x * x - 1.0);
    } else {
        dp = 0.5 * n * (n + 1) * std::pow(x, n - 1);
    }
    return {p, dp};
}

/// Value and derivative of Q(x) = P_n(x) + P_{n-1}(x), whose roots are the
/// n-point left Gauss-Radau nodes (one of them is x = -1).
inline std::pair<double, double> radau_poly(int n, double x) {
    const auto [pn, dpn] = legendre(n, x);
    const auto [pm, dpm] = legendre(n - 1, x);
    return {pn + pm, dpn + dpm};
}

/// Safeguarded Newton iteration for a simple root of radau_poly inside (a, b).
inline double polish_radau_root(int n, double a, double b, double fa) {
    double x = 0.5 * (a + b);
    for (int it = 0; it < 100; ++it) {
        const auto [f, df] = radau_poly(n, x);
        if (f == 0.0) return x;
        if ((f > 0.0) == (fa > 0.0)) a = x; else b = x;
        double xn = x - f / df;
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
        if (std::abs(xn - x) <= 1e-16 * std::max(1.0, std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

}  // namespace detail

/// Build the degree-p right Gauss-Radau rule. Left-Radau points are located as
/// the roots of P_{p+1} + P_p (bracketed scan plus Newton polishing), weighted
/// with the classical Radau formula, then mirrored t -> -t onto the right rule.
inline NodeSet radau_nodes(int p) {
    if (p < 0 || p > 30)
        throw std::invalid_argument("radau_nodes: degree must satisfy 0 <= p <= 30");

    NodeSet ns;
    ns.degree = p;
    const int n = p + 1;
    if (p == 0) {
        ns.nodes = {1.0};
        ns.weights = {2.0};
        return ns;
    }

    // Interior left-Radau nodes: scan in theta = acos(x) to resolve the
    // endpoint clustering, excluding the known root at x = -1.
    std::vector<double> left;
    const int samples = 64 * n;
    const double pi = std::acos(-1.0);
    double x_prev = std::cos(pi * (1.0 - 0.5 / samples));
    double f_prev = detail::radau_poly(n, x_prev).first;
    for (int k = 2; k <= 2 * samples; ++k) {
        const double x = std::cos(pi * (1.0 - 0.5 * k / samples));
        const double f = detail::radau_poly(n, x).first;
        if ((f_prev < 0.0) != (f < 0.0))
            left.push_back(detail::polish_radau_root(n, x_prev, x, f_prev));
        x_prev = x;
        f_prev = f;
    }
    if (static_cast<int>(left.size()) != n - 1)
        throw std::runtime_error("radau_nodes: root bracketing failed");

    // Left-rule weights: w(-1) = 2/n^2 and w(x) = (1 - x) / (n^2 P_{n-1}(x)^2);
    // mirroring x -> -x carries each weight along with its node.
    ns.nodes.resize(n);
    ns.weights.resize(n);
    for (int i = 0; i < n - 1; ++i) {
        const double x = left[n - 2 - i];
        const double pm = detail::legendre(n - 1, x).first;
        ns.nodes[i] = -x;
        ns.weights[i] = (1.0 - x) / (n * n * pm * pm);
    }
    ns.nodes[n - 1] = 1.0;
    ns.weights[n - 1] = 2.0 / (n * n);

    for (int i = 0; i < n; ++i) {
        if (!(ns.weights[i] > 0.0))
            throw std::runtime_error("radau_nodes: nonpositive weight");
        if (i > 0 && !(ns.nodes[i] > ns.nodes[i - 1]))
            throw std::runtime_error("radau_nodes: nodes not increasing");
    }
    return ns;
}

/// Barycentric weights 1 / prod_{m != j} (t_j - t_m).
inline std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> lam(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < n; ++m)
            if (m != j) lam[j] *= nodes[j] - nodes[m];
        lam[j] = 1.0 / lam[j];
    }
    return lam;
}

/// Lagrange basis value l_j(t), exact Kronecker delta at the nodes.
inline double lagrange_eval(const NodeSet& ns, int j, double t) {
    const auto& x = ns.nodes;
    const int n = ns.size();
    for (int m = 0; m < n; ++m)
        if (t == x[m]) return m == j ? 1.0 : 0.0;
    const auto lam = barycentric_weights(x);
    double num = lam[j] / (t - x[j]);
    double den = 0.0;
    for (int m = 0; m < n; ++m) den += lam[m] / (t - x[m]);
    return num / den;
}

/// Lagrange basis derivative l_j'(t).
inline double lagrange_deriv(const NodeSet& ns, int j, double t) {
    const auto& x = ns.nodes;
    const int n = ns.size();
    const auto lam = barycentric_weights(x);
    for (int a = 0; a < n; ++a) {
        if (t != x[a]) continue;
        if (a != j) return (lam[j] / lam[a]) / (x[a] - x[j]);
        // diagonal entry from the zero row sum of the differentiation matrix
        double s = 0.0;
        for (int b = 0; b < n; ++b)
            if (b != a) s += (lam[b] / lam[a]) / (x[a] - x[b]);
        return -s;
    }
    // off the grid: logarithmic derivative of the node product
    double s = 0.0;
    for (int m = 0; m < n; ++m)
        if (m != j) s += 1.0 / (t - x[m]);
    return lagrange_eval(ns, j, t) * s;
}

}  // namespace sdg
