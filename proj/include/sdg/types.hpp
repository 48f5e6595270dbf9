#pragma once

#include <complex>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sdg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// State of an IVP: a length-d vector over a real or complex scalar field.
template <class Scalar>
using StateVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A vector of nodal states (one state per collocation node).
template <class Scalar>
using Nodal = std::vector<StateVec<Scalar>>;

template <class Scalar>
struct scalar_traits {
    static constexpr bool is_complex = false;
    using real_type = Scalar;
};

template <class T>
struct scalar_traits<std::complex<T>> {
    static constexpr bool is_complex = true;
    using real_type = T;
};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Complex& x) { return std::abs(x); }

template <class Scalar>
double norm_inf(const StateVec<Scalar>& v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, magnitude(v[i]));
    return m;
}

template <class Scalar>
double norm_inf(const Nodal<Scalar>& v) {
    double m = 0.0;
    for (const auto& s : v) m = std::max(m, norm_inf(s));
    return m;
}

template <class Scalar>
bool all_finite(const StateVec<Scalar>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (!std::isfinite(magnitude(v[i]))) return false;
    return true;
}

template <class Scalar>
Nodal<Scalar> nodal_zero(int count, Eigen::Index dim) {
    return Nodal<Scalar>(static_cast<std::size_t>(count), StateVec<Scalar>::Zero(dim));
}

/// y_i = sum_j A(i,j) x_j with a real coefficient matrix acting across nodes.
template <class Scalar>
Nodal<Scalar> nodal_matvec(const Mat& A, const Nodal<Scalar>& x) {
    const Eigen::Index dim = x.empty() ? 0 : x.front().size();
    Nodal<Scalar> y(static_cast<std::size_t>(A.rows()), StateVec<Scalar>::Zero(dim));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            y[static_cast<std::size_t>(i)] += A(i, j) * x[static_cast<std::size_t>(j)];
    return y;
}

/// Raised when an implicit node (or full DG) solve fails to converge.
/// Context fields are filled in as the failure propagates outward.
struct NewtonFailure : std::runtime_error {
    double residual = 0.0;
    double time = 0.0;   ///< left endpoint t_n of the failing interval
    int node = -1;       ///< collocation node index
    int iteration = -1;  ///< sweep index k
    int step = -1;       ///< time step index
    int level = -1;      ///< multilevel index, if applicable

    NewtonFailure(double residual_, double time_, int node_ = -1, int iteration_ = -1,
                  int step_ = -1, int level_ = -1)
        : std::runtime_error(format(residual_, time_, node_, iteration_, step_, level_)),
          residual(residual_), time(time_), node(node_), iteration(iteration_),
          step(step_), level(level_) {}

    NewtonFailure with_node(int m) const { return merged(residual, time, m, iteration, step, level); }
    NewtonFailure with_iteration(int k) const { return merged(residual, time, node, k, step, level); }
    NewtonFailure with_time(double t) const { return merged(residual, t, node, iteration, step, level); }
    NewtonFailure with_step(int s) const { return merged(residual, time, node, iteration, s, level); }
    NewtonFailure with_level(int l) const { return merged(residual, time, node, iteration, step, l); }

  private:
    static NewtonFailure merged(double r, double t, int n, int k, int s, int l) {
        return NewtonFailure(r, t, n, k, s, l);
    }
    static std::string format(double r, double t, int n, int k, int s, int l) {
        std::ostringstream os;
        os << "Newton solve failed (residual " << r << ") at t_n=" << t;
        if (s >= 0) os << ", step " << s;
        if (k >= 0) os << ", sweep " << k;
        if (n >= 0) os << ", node " << n;
        if (l >= 0) os << ", level " << l;
        return os.str();
    }
};

/// Raised when a semi-implicit scheme is requested for a problem without a splitting.
struct MissingSplit : std::invalid_argument {
    MissingSplit() : std::invalid_argument("semi-implicit scheme requires a stiff/non-stiff splitting") {}
};

}  // namespace sdg
