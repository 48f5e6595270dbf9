#include <catch2/catch_amalgamated.hpp>

#include "sdg/operators.hpp"

using sdg::Mat;
using sdg::OperatorSet;
using sdg::Vec;
using sdg::operators;

TEST_CASE("single-node operator set", "[operators]") {
    const OperatorSet& ops = operators(0);
    CHECK(ops.L(0, 0) == -1.0);
    CHECK(ops.Linv(0, 0) == -1.0);
    CHECK(ops.Ltilde(0, 0) == 1.0);
    CHECK(ops.boundary[0] == 1.0);
    CHECK(ops.M(0, 0) == 2.0);
}

TEST_CASE("degree-one operators match the hand-computed tables", "[operators]") {
    const OperatorSet& ops = operators(1);
    const double L_ref[2][2] = {{-9.0 / 8.0, -3.0 / 8.0}, {9.0 / 8.0, -5.0 / 8.0}};
    const double Linv_ref[2][2] = {{-5.0 / 9.0, 1.0 / 3.0}, {-1.0, -1.0}};
    const double Lt_ref[2][2] = {{5.0 / 9.0, -1.0 / 3.0}, {4.0 / 9.0, 4.0 / 3.0}};
    const double b_ref[2] = {1.5, -0.5};
    for (int i = 0; i < 2; ++i) {
        CHECK_THAT(ops.boundary[i], Catch::Matchers::WithinAbs(b_ref[i], 1e-13));
        for (int j = 0; j < 2; ++j) {
            CHECK_THAT(ops.L(i, j), Catch::Matchers::WithinAbs(L_ref[i][j], 1e-13));
            CHECK_THAT(ops.Linv(i, j), Catch::Matchers::WithinAbs(Linv_ref[i][j], 1e-13));
            CHECK_THAT(ops.Ltilde(i, j), Catch::Matchers::WithinAbs(Lt_ref[i][j], 1e-13));
        }
    }
}

TEST_CASE("operator identities hold for all supported degrees", "[operators]") {
    for (int p = 0; p <= 9; ++p) {
        const OperatorSet& ops = operators(p);
        const int n = ops.size();
        INFO("p=" << p);

        // L * 1 = -boundary
        const Vec row_sums = ops.L * Vec::Ones(n);
        CHECK((row_sums + ops.boundary).cwiseAbs().maxCoeff() <= 1e-12);

        // Ltilde * boundary = e_0
        Vec e0 = Vec::Zero(n);
        e0[0] = 1.0;
        CHECK((ops.Ltilde * ops.boundary - e0).cwiseAbs().maxCoeff() <= 1e-12);

        // -Linv * boundary = 1 (DG solution of u' = 0 is constant)
        CHECK((-ops.Linv * ops.boundary - Vec::Ones(n)).cwiseAbs().maxCoeff() <= 1e-12);

        // inverse quality
        CHECK((ops.L * ops.Linv - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);

        // LDelta structure is exact
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double want = i == j ? -1.0 : (j == i - 1 ? 1.0 : 0.0);
                CHECK(ops.LDelta(i, j) == want);
            }

        // M is the diagonal weight matrix
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(ops.M(i, j) == (i == j ? ops.nodes.weights[i] : 0.0));

        // Ltilde agrees with LDelta * Linv
        CHECK((ops.Ltilde - ops.LDelta * ops.Linv).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("entries follow the quadrature assembly formula", "[operators]") {
    const OperatorSet& ops = operators(3);
    const auto& ns = ops.nodes;
    for (int i = 0; i < ns.size(); ++i)
        for (int j = 0; j < ns.size(); ++j) {
            const double expect = ns.weights[j] * sdg::lagrange_deriv(ns, i, ns.nodes[j]) -
                                  ((i == 3 && j == 3) ? 1.0 : 0.0);
            CHECK_THAT(ops.L(i, j), Catch::Matchers::WithinAbs(expect, 1e-13));
        }
}
