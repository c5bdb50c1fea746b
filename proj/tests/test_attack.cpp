#include "doctest.h"
#include "oracles.hpp"
#include "qbsc/attack.hpp"

using namespace qbsc;

TEST_CASE("attack constants") {
    CHECK(kDefaultGamma == doctest::Approx(5.2877).epsilon(1e-4));
    CHECK(kImpossibilityConstant == doctest::Approx(7.6096).epsilon(1e-4));
    CHECK(kImpossibilityConstant == doctest::Approx(kDefaultGamma + std::log2(5.0)));
}

TEST_CASE("superposition state purifies the hashed ensemble") {
    ProtocolInstance inst(2, identity_hadamard_set(2));
    Ensemble hashed = hashed_ensemble(honest_ensemble(inst), HashFunction(2, 1, 3));
    for (std::uint32_t y = 0; y < 2; ++y) {
        StateVector psi = attack_superposition_state(inst, HashFunction(2, 1, 3), y);
        CHECK(psi.amps.norm() == doctest::Approx(1.0));
        DensityMatrix bob = reduced_density(psi, {2});
        CHECK(trace_distance(bob.mat, hashed.states[y]) < 1e-12);
        // the honest purification reveals some x in g^{-1}(y) with certainty
        CHECK(simulate_reveal(inst, HashFunction(2, 1, 3), y, psi) == doctest::Approx(1.0));
    }
}

TEST_CASE("uhlmann move attains the fidelity of Bob's reductions") {
    ProtocolInstance inst(2, identity_hadamard_set(2));
    HashFunction g(2, 1, 2);
    StateVector psi0 = attack_superposition_state(inst, g, 0);
    StateVector psi1 = attack_superposition_state(inst, g, 1);
    Eigen::Index d_local = inst.dim() * inst.basis_count(), d_rest = inst.dim();
    Mat m0 = detail::attack_state_matrix(psi0, d_local, d_rest);
    Mat m1 = detail::attack_state_matrix(psi1, d_local, d_rest);
    detail::MovedState ms = detail::uhlmann_move(m1, m0);

    DensityMatrix s0 = reduced_density(psi0, {2}), s1 = reduced_density(psi1, {2});
    double f = fidelity(s0.mat, s1.mat);
    CHECK(ms.overlap == doctest::Approx(f).epsilon(1e-8));
    // the reported overlap really is <target|moved>
    Complex inner = (m1.conjugate().cwiseProduct(ms.matrix)).sum();
    CHECK(std::abs(inner) == doctest::Approx(ms.overlap).epsilon(1e-8));
    // the move is norm-preserving
    CHECK(ms.matrix.norm() == doctest::Approx(1.0));
}

TEST_CASE("orthogonal single-basis instance: rotation cannot help") {
    // With U = {1} the hashed blocks are perfectly distinguishable, so the
    // cross-label success collapses to the fidelity, which is zero.
    ProtocolInstance inst(2, UnitarySet({Mat::Identity(4, 4)}, "identity"));
    AliceAttackReport rep = alice_attack(inst, 0.0, 1.0);  // m = 1, s = 1
    CHECK(rep.m == 1);
    CHECK(rep.per_y_success(rep.y0) == doctest::Approx(1.0));
    for (Eigen::Index y = 0; y < rep.per_y_success.size(); ++y)
        if (y != Eigen::Index(rep.y0)) {
            CHECK(rep.per_y_overlap(y) < 1e-9);
            CHECK(rep.per_y_success(y) < 1e-9);
            CHECK(rep.per_y_delta(y) == doctest::Approx(1.0));
        }
    CHECK(rep.total_success == doctest::Approx(1.0));
}

TEST_CASE("epsilon and the lower bound follow the m - b mechanics") {
    ProtocolInstance inst(2, identity_hadamard_set(2));
    for (double b : {0.0, 0.5, 1.0}) {
        for (double gamma : {1.0, 1.7}) {
            AliceAttackReport rep = alice_attack(inst, b, gamma);
            int m = std::min(int(std::ceil(b + gamma)), 2);
            CHECK(rep.m == m);
            CHECK(rep.epsilon == doctest::Approx(0.5 * std::pow(2.0, -0.5 * (m - b))));
            double bound = std::pow(2.0, 2.0 - m) * (1.0 - 2.0 * std::sqrt(2.0 * rep.epsilon));
            CHECK(rep.analytic_lower_bound == doctest::Approx(bound));
            CHECK(rep.implied_a == doctest::Approx(std::log2(rep.total_success)));
        }
    }
}

TEST_CASE("per-string successes add up to the per-label totals") {
    ProtocolInstance inst(3, identity_hadamard_set(3));
    AliceAttackReport rep = alice_attack(inst, 0.0, 2.0);  // m = 2, two labels
    for (Eigen::Index y = 0; y < rep.per_y_success.size(); ++y) {
        double acc = 0.0;
        for (std::uint32_t x : rep.g.preimage(std::uint32_t(y))) acc += rep.per_string_success(x);
        CHECK(acc == doctest::Approx(rep.per_y_success(y)).epsilon(1e-10));
    }
}

TEST_CASE("default gamma at desk scale is flagged vacuous, not refused") {
    for (int n : {6, 8}) {
        ProtocolInstance inst(n, identity_hadamard_set(n));
        AliceAttackReport rep = alice_attack(inst, 0.5 * n);
        CHECK(rep.vacuous);
        CHECK(rep.m_requested > n);
        CHECK(rep.m == n);
        CHECK(rep.analytic_lower_bound <= 1.0);
        // m = n leaves a single label; the honest run alone succeeds
        CHECK(rep.total_success == doctest::Approx(1.0));
    }
}

TEST_CASE("attack soundness in a regime where the bound has content") {
    // Many Haar bases push the leakage low enough that m = ceil(b + gamma)
    // fits below n with two labels left over.
    int n = 6;
    ProtocolInstance inst(n, haar_set(64, 128, 20260826), "haar-128");
    Ensemble ens = honest_ensemble(inst);
    double b = xi(ens);
    CHECK(b < 0.7);  // the regime this test depends on

    AliceAttackReport rep = alice_attack(inst, b, 4.3);
    REQUIRE(rep.m == 5);
    REQUIRE_FALSE(rep.vacuous);
    CHECK(rep.analytic_lower_bound > 0.0);
    CHECK(rep.total_success >= rep.analytic_lower_bound);
    CHECK(rep.implied_a >= std::log2(rep.analytic_lower_bound));
    for (Eigen::Index y = 0; y < rep.per_y_success.size(); ++y) {
        CHECK(rep.per_y_success(y) >= rep.per_y_lemma3_bound(y) - 1e-9);
        CHECK(rep.per_y_success(y) <= 1.0 + 1e-9);
    }
    CHECK(rep.per_y_success(rep.y0) == doctest::Approx(1.0));
}

TEST_CASE("attack reports are deterministic") {
    ProtocolInstance inst(3, haar_set(8, 4, 7), "haar-4");
    AliceAttackReport a = alice_attack(inst, 0.5, 2.0);
    AliceAttackReport b = alice_attack(inst, 0.5, 2.0);
    CHECK(a.g.key == b.g.key);
    CHECK(a.y0 == b.y0);
    CHECK(a.total_success == b.total_success);
    CHECK((a.per_y_success - b.per_y_success).norm() == 0.0);
}

TEST_CASE("attack rejects non-power dimensions") {
    ProtocolInstance f3(1, fourier_pair_set(3), "fourier-3");
    CHECK_THROWS_AS(alice_attack(f3, 0.0, 1.0), std::invalid_argument);
}
