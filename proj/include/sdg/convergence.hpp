#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdg/parallel.hpp"
#include "sdg/problems.hpp"
#include "sdg/schemes.hpp"
#include "sdg/types.hpp"

namespace sdg {

/// Endpoint reference for error measurement: the state at t_end.
struct Reference {
    StateVec<double> endpoint;
    std::string description;
};

inline Reference exact_reference(const IvpProblem<double>& problem) {
    if (!problem.has_exact())
        throw std::invalid_argument("exact_reference: problem has no closed-form solution");
    return {problem.exact(problem.t_end), "analytic solution"};
}

/// Fine-grid numeric reference computed with a high-order implicit run.
inline Reference numeric_reference(const IvpProblem<double>& problem, int degree = 9,
                                   double dt = 1e-4) {
    SchemeConfig cfg;
    cfg.variant = Variant::ImSDG;
    cfg.degree = degree;
    cfg.iterations = 2 * degree;
    const int n = std::max(1, static_cast<int>(std::llround(problem.t_end / dt)));
    const auto traj = integrate(problem, cfg, n);
    std::ostringstream os;
    os << "numeric reference (ImSDG p=" << degree << ", K=" << cfg.iterations << ", dt=" << problem.t_end / n << ")";
    return {traj.states.back(), os.str()};
}

struct ConvergenceRow {
    double dt = 0.0;
    std::vector<double> error;  ///< per-component endpoint error at t_end
    std::vector<double> order;  ///< observed order vs previous row; NaN when undefined
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::string reference;
};

/// Integrate the problem at each dt (strictly decreasing list), measure the
/// per-component endpoint error against the reference, and fill observed
/// orders between consecutive rows. Rows are independent and can run on
/// several worker threads.
inline ConvergenceTable run_convergence(const IvpProblem<double>& problem,
                                        const SchemeConfig& config,
                                        const std::vector<double>& dt_list, const Reference& ref,
                                        unsigned jobs = 1) {
    if (dt_list.empty()) throw std::invalid_argument("run_convergence: empty dt list");
    for (std::size_t i = 0; i + 1 < dt_list.size(); ++i)
        if (!(dt_list[i + 1] < dt_list[i]))
            throw std::invalid_argument("run_convergence: dt list must be strictly decreasing");

    ConvergenceTable table;
    table.reference = ref.description;
    table.rows.resize(dt_list.size());
    parallel_for(dt_list.size(), jobs, [&](std::size_t r) {
        ConvergenceRow& row = table.rows[r];
        row.dt = dt_list[r];
        const int n = std::max(1, static_cast<int>(std::llround(problem.t_end / row.dt)));
        const auto traj = integrate(problem, config, n);
        const StateVec<double>& u = traj.states.back();
        row.error.resize(u.size());
        for (Eigen::Index i = 0; i < u.size(); ++i)
            row.error[i] = std::abs(u[i] - ref.endpoint[i]);
    });

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        auto& row = table.rows[r];
        row.order.assign(row.error.size(), nan);
        if (r == 0) continue;
        const auto& prev = table.rows[r - 1];
        const double h_ratio = prev.dt / row.dt;
        for (std::size_t i = 0; i < row.error.size(); ++i)
            if (prev.error[i] > 0.0 && row.error[i] > 0.0)
                row.order[i] = std::log(prev.error[i] / row.error[i]) / std::log(h_ratio);
    }
    return table;
}

}  // namespace sdg
