#include "doctest.h"
#include "telecert/steering.hpp"
#include "test_util.hpp"

using namespace telecert;

TEST_CASE("deterministic strategies enumerate outcome tables") {
    CHECK(deterministic_strategies(1).size() == 2);
    CHECK(deterministic_strategies(2).size() == 4);
    const auto s3 = deterministic_strategies(3);
    REQUIRE(s3.size() == 8);
    for (int xi = 0; xi < 8; ++xi)
        for (int k = 0; k < 3; ++k) CHECK(s3[xi][k] == outcome_sign(xi, k));
    // Each table appears exactly once.
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) CHECK(s3[i] != s3[j]);
    CHECK_THROWS_AS(deterministic_strategies(0), std::invalid_argument);
}

TEST_CASE("steerable weight landmark values") {
    CHECK(steerable_weight(assemblage(werner(0.6))).steerable_weight <= 1e-7);
    CHECK(steerable_weight(assemblage(werner(0.0))).steerable_weight ==
          doctest::Approx(1.0).epsilon(1e-4));

    const ComplexMatrix product = kron(projector(ket_plus()), projector(ket_right()));
    CHECK(steerable_weight(assemblage(product)).steerable_weight <= 1e-7);
}

TEST_CASE("steerable weight is within [0,1] and monotone in noise") {
    double prev = 1.1;
    for (int i = 0; i <= 100; ++i) {
        const auto res = steerable_weight(assemblage(werner(i * 0.01)));
        CHECK(res.steerable_weight >= 0.0);
        CHECK(res.steerable_weight <= 1.0);
        CHECK(res.steerable_weight <= prev + 1e-7);
        prev = res.steerable_weight;
    }
}

TEST_CASE("LHS witness re-verifies against the assemblage") {
    const auto asm_w = assemblage(werner(0.55));
    const auto res = steerable_weight(asm_w);
    CHECK(res.steerable_weight <= 1e-7);
    const auto strategies = deterministic_strategies(3);
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 2; ++a) {
            ComplexMatrix lhs(2, 2);
            for (int l = 0; l < 8; ++l)
                if (strategies[l][k] == (a == 0 ? +1 : -1)) lhs += res.lhs_witness[l];
            CHECK(min_eigenvalue(asm_w.members[k][a].hermitized() - lhs) >= -1e-8);
        }
    // The unsteerable part carries the full weight here.
    double total = 0.0;
    for (const auto& s : res.lhs_witness) total += s.trace().real();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("signalling assemblages are rejected") {
    Assemblage bad = assemblage(werner(0.2));
    bad.members[1][0] = bad.members[1][0] * Complex(1.5);
    CHECK_THROWS_AS(steerable_weight(bad), std::invalid_argument);
}

TEST_CASE("steering and the fidelity criterion agree on the Werner family") {
    const double f_ct = classical_bound().f_ct;
    const double p_star = 1.0 - 1.0 / std::sqrt(3.0);
    for (double p : {0.0, 0.2, 0.35, 0.41, 0.44, 0.6, 0.9}) {
        if (std::abs(p - p_star) <= 0.002) continue;
        const bool fid = state_fidelity(werner(p), bell_phi_plus()) > f_ct + 1e-6;
        const bool steer = steerable_weight(assemblage(werner(p))).steerable_weight > 1e-6;
        CHECK(fid == steer);
    }
}
