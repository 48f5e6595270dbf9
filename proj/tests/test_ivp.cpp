#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "sdg/ivp.hpp"
#include "sdg/problems.hpp"

using State = sdg::StateVec<double>;
using Matrix = sdg::DenseMat<double>;

TEST_CASE("numerical jacobian of a linear problem", "[ivp]") {
    const auto p = sdg::make_dahlquist<double>(-3.0);
    State u = State::Constant(1, 0.7);

    SECTION("analytic jacobian is preferred when present") {
        const Matrix J = sdg::numerical_jacobian(p, 0.0, u);
        CHECK(J(0, 0) == -3.0);
    }
    SECTION("finite differences recover the coefficient") {
        auto stripped = p;
        stripped.jacobian = nullptr;
        const Matrix J = sdg::numerical_jacobian(stripped, 0.0, u);
        CHECK_THAT(J(0, 0), Catch::Matchers::WithinAbs(-3.0, 1e-7));
    }
}

TEST_CASE("constant right-hand side has a vanishing jacobian", "[ivp]") {
    sdg::IvpProblem<double> p;
    p.dimension = 3;
    p.rhs = [](double, const State& u) { return State::Constant(u.size(), 4.2); };
    const State u = State::Random(3);
    const Matrix J = sdg::numerical_jacobian(p, 0.0, u);
    CHECK(J.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("van der Pol finite differences match the analytic jacobian", "[ivp]") {
    const double eps = 0.1;
    const auto p = sdg::make_vanderpol(eps);
    State u(2);
    u << 2.0, -2.0 / 3.0;

    auto stripped = p;
    stripped.jacobian = nullptr;
    const Matrix J_fd = sdg::numerical_jacobian(stripped, 0.0, u);

    Matrix J_ref(2, 2);
    J_ref << 0.0, 1.0, (-1.0 - 2.0 * u[0] * u[1]) / eps, (1.0 - u[0] * u[0]) / eps;
    CHECK((J_fd - J_ref).cwiseAbs().maxCoeff() <= 1e-6);

    const Matrix J = sdg::numerical_jacobian(p, 0.0, u);
    CHECK((J - J_ref).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("jacobian accuracy bound on smooth problems", "[ivp]") {
    const auto p = sdg::make_vanderpol(0.1);
    auto stripped = p;
    stripped.jacobian = nullptr;
    std::mt19937 rng(91);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        State u(2);
        u << dist(rng), dist(rng);
        const Matrix J_fd = sdg::numerical_jacobian(stripped, 0.0, u);
        const Matrix J = p.jacobian(0.0, u);
        const double scale = 1.0 + J.cwiseAbs().maxCoeff();
        CHECK((J_fd - J).cwiseAbs().maxCoeff() <= 1e-5 * scale);
    }
}

TEST_CASE("splitting recomposes the right-hand side", "[ivp]") {
    const auto p = sdg::make_vanderpol(0.05);
    REQUIRE(p.has_split());
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        State u(2);
        u << dist(rng), dist(rng);
        const double t = dist(rng);
        const State sum = p.rhs_nonstiff(t, u) + p.rhs_stiff(t, u);
        const State f = p.rhs(t, u);
        CHECK(sdg::norm_inf(State(sum - f)) <= 1e-12 * (1.0 + sdg::norm_inf(f)));
    }
}

TEST_CASE("infinity norm behaves like a norm", "[ivp]") {
    CHECK(sdg::norm_inf(State(State::Zero(4))) == 0.0);
    State u(3);
    u << -0.5, 2.25, -0.1;
    CHECK(sdg::norm_inf(u) == 2.25);
    sdg::StateVec<sdg::Complex> v(2);
    v << sdg::Complex(3.0, 4.0), sdg::Complex(0.0, 1.0);
    CHECK_THAT(sdg::norm_inf(v), Catch::Matchers::WithinAbs(5.0, 1e-15));
}
