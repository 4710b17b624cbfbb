// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "test_helpers.hpp"
#include "vqelab/ansatz.hpp"
#include "vqelab/state_vector.hpp"

using namespace vqelab;
using Catch::Matchers::WithinAbs;

TEST_CASE("init_zero_state prepares |0...0>") {
    const StateVector one = init_zero_state(1);
    REQUIRE(one.amplitudes.size() == 2);
    CHECK_THAT(std::abs(one.amplitudes[0] - complex_t{1, 0}), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(one.amplitudes[1]), WithinAbs(0.0, 1e-15));

    const StateVector two = init_zero_state(2);
    REQUIRE(two.amplitudes.size() == 4);
    CHECK(two.amplitudes[0] == complex_t{1, 0});

    const StateVector four = init_zero_state(4);
    REQUIRE(four.amplitudes.size() == 16);
    CHECK(four.amplitudes[0] == complex_t{1, 0});

    CHECK_THROWS_AS(init_zero_state(0), std::invalid_argument);
    CHECK_THROWS_AS(init_zero_state(25), std::invalid_argument);
}

TEST_CASE("apply_ry matches the rotation matrix") {
    SECTION("RY(0) is the identity") {
        StateVector state = testutil::random_state(3, RngStream(11));
        const StateVector before = state;
        apply_ry(state, 1, 0.0);
        for (std::size_t i = 0; i < state.dimension(); ++i) {
            CHECK_THAT(std::abs(state.amplitudes[i] - before.amplitudes[i]), WithinAbs(0.0, 1e-15));
        }
    }
    SECTION("RY(pi) flips |0> to |1>") {
        StateVector state = init_zero_state(1);
        apply_ry(state, 0, std::numbers::pi);
        CHECK_THAT(std::abs(state.amplitudes[0]), WithinAbs(0.0, 1e-15));
        CHECK_THAT(std::abs(state.amplitudes[1] - complex_t{1, 0}), WithinAbs(0.0, 1e-15));
    }
    SECTION("RY(pi/2) makes the equal superposition") {
        StateVector state = init_zero_state(1);
        apply_ry(state, 0, std::numbers::pi / 2);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        CHECK_THAT(std::real(state.amplitudes[0]), WithinAbs(inv_sqrt2, 1e-15));
        CHECK_THAT(std::real(state.amplitudes[1]), WithinAbs(inv_sqrt2, 1e-15));
    }
    SECTION("index errors") {
        StateVector state = init_zero_state(2);
        CHECK_THROWS_AS(apply_ry(state, 2, 0.1), std::out_of_range);
        CHECK_THROWS_AS(apply_ry(state, -1, 0.1), std::out_of_range);
    }
}

TEST_CASE("apply_cnot flips the target when the control is set") {
    SECTION("control clear: |00> unchanged") {
        StateVector state = init_zero_state(2);
        apply_cnot(state, 0, 1);
        CHECK(state.amplitudes[0] == complex_t{1, 0});
    }
    SECTION("control set: |q1 q0> = |01> maps to |11>") {
        StateVector state = init_zero_state(2);
        state.amplitudes[0] = 0.0;
        state.amplitudes[1] = 1.0; // qubit 0 set
        apply_cnot(state, 0, 1);
        CHECK_THAT(std::abs(state.amplitudes[3] - complex_t{1, 0}), WithinAbs(0.0, 1e-15));
        CHECK_THAT(std::abs(state.amplitudes[1]), WithinAbs(0.0, 1e-15));
    }
    SECTION("involution") {
        StateVector state = testutil::random_state(3, RngStream(5));
        const StateVector before = state;
        apply_cnot(state, 2, 0);
        apply_cnot(state, 2, 0);
        for (std::size_t i = 0; i < state.dimension(); ++i) {
            CHECK_THAT(std::abs(state.amplitudes[i] - before.amplitudes[i]), WithinAbs(0.0, 1e-15));
        }
    }
    SECTION("index errors") {
        StateVector state = init_zero_state(2);
        CHECK_THROWS_AS(apply_cnot(state, 0, 0), std::out_of_range);
        CHECK_THROWS_AS(apply_cnot(state, 0, 2), std::out_of_range);
    }
}

TEST_CASE("gates preserve norm, act linearly and preserve inner products") {
    RngStream rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        RngStream trial_rng = rng.child(trial);
        StateVector a = testutil::random_state(4, trial_rng.child(0));
        StateVector b = testutil::random_state(4, trial_rng.child(1));
        const complex_t overlap_before = inner_product(a, b);

        const complex_t alpha{trial_rng.uniform01(), trial_rng.uniform01()};
        const complex_t beta{trial_rng.uniform01(), -trial_rng.uniform01()};
        StateVector combo = a;
        for (std::size_t i = 0; i < combo.dimension(); ++i) {
            combo.amplitudes[i] = alpha * a.amplitudes[i] + beta * b.amplitudes[i];
        }

        // random little circuit
        const int q1 = static_cast<int>(trial_rng.next_u64() % 4);
        const int q2 = (q1 + 1 + static_cast<int>(trial_rng.next_u64() % 3)) % 4;
        const double angle = 6.28 * trial_rng.uniform01();
        auto circuit = [&](StateVector& s) {
            apply_ry(s, q1, angle);
            apply_cnot(s, q1, q2);
            apply_ry(s, q2, -0.7 * angle);
        };
        circuit(a);
        circuit(b);
        circuit(combo);

        CHECK_THAT(a.norm_sq(), WithinAbs(1.0, 1e-12));
        CHECK_THAT(std::abs(inner_product(a, b) - overlap_before), WithinAbs(0.0, 1e-12));
        for (std::size_t i = 0; i < combo.dimension(); ++i) {
            const complex_t expected = alpha * a.amplitudes[i] + beta * b.amplitudes[i];
            CHECK_THAT(std::abs(combo.amplitudes[i] - expected), WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("prepare_ansatz_state") {
    SECTION("all-zero parameters give |0...0>") {
        const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
        const std::vector<double> params(16, 0.0);
        const StateVector state = prepare_ansatz_state(layout, params);
        CHECK_THAT(std::abs(state.amplitudes[0] - complex_t{1, 0}), WithinAbs(0.0, 1e-12));
    }
    SECTION("single qubit, single layer, pi") {
        const AnsatzLayout layout = AnsatzLayout::linear_entangler(1, 1);
        const StateVector state = prepare_ansatz_state(layout, std::vector<double>{std::numbers::pi});
        CHECK_THAT(std::abs(state.amplitudes[1] - complex_t{1, 0}), WithinAbs(0.0, 1e-12));
    }
    SECTION("random parameters stay normalized") {
        const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
        const auto params = testutil::random_angles(16, RngStream(3));
        CHECK_THAT(prepare_ansatz_state(layout, params).norm_sq(), WithinAbs(1.0, 1e-12));
    }
    SECTION("parameter count mismatch") {
        const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
        CHECK_THROWS_AS(prepare_ansatz_state(layout, std::vector<double>(15, 0.0)),
                        std::invalid_argument);
    }
}

TEST_CASE("ansatz state matches the dense matrix oracle") {
    const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
    for (int trial = 0; trial < 5; ++trial) {
        const auto params = testutil::random_angles(16, RngStream(40).child(trial));
        const StateVector state = prepare_ansatz_state(layout, params);
        const auto reference = testutil::dense_ansatz_state(layout, params);
        for (std::size_t i = 0; i < state.dimension(); ++i) {
            CHECK_THAT(std::abs(state.amplitudes[i] - reference[i]), WithinAbs(0.0, 1e-10));
        }
    }
}

TEST_CASE("ansatz layout validation") {
    AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 2);
    CHECK(layout.parameter_count() == 8);
    layout.entangler.emplace_back(1, 1);
    CHECK_THROWS_AS(layout.validate(), std::invalid_argument);
    layout.entangler.back() = {1, 4};
    CHECK_THROWS_AS(layout.validate(), std::invalid_argument);
}
