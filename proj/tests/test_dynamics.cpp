// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "test_helpers.hpp"
#include "vqelab/landscape.hpp"
#include "vqelab/optimizer.hpp"

using namespace vqelab;
using Catch::Matchers::WithinAbs;

namespace {

Hamiltonian single_z() {
    Hamiltonian ham;
    ham.name = "z";
    ObservableGroup g;
    g.basis = Pauli::Z;
    g.strings.push_back(PauliString::from_letters(1.0, "Z"));
    ham.groups.push_back(g);
    return ham;
}

} // namespace

TEST_CASE("gd_step follows the exact gradient") {
    SECTION("fixed point at zero gradient") {
        const QuadraticLandscape flat({1.0, 2.0}, 0.0);
        const std::vector<double> origin{0.0, 0.0};
        const auto next = gd_step(flat, origin, 0.1);
        CHECK(next == origin);
    }
    SECTION("cosine loss at pi/2 moves uphill in theta") {
        const AnsatzLayout layout = AnsatzLayout::linear_entangler(1, 1);
        const Hamiltonian ham = single_z();
        const VqeLandscape landscape(layout, ham);
        const auto next = gd_step(landscape, std::vector<double>{std::numbers::pi / 2}, 0.1);
        CHECK_THAT(next[0], WithinAbs(std::numbers::pi / 2 + 0.1, 1e-12));
    }
    SECTION("closed-form contraction on the quadratic loss") {
        const double lambda = 0.8, eta = 0.3, theta0 = 1.7;
        const QuadraticLandscape quad({lambda}, 0.0);
        std::vector<double> theta{theta0};
        for (int k = 1; k <= 50; ++k) {
            theta = gd_step(quad, theta, eta);
            CHECK_THAT(theta[0], WithinAbs(theta0 * std::pow(1.0 - eta * lambda, k), 1e-12));
        }
    }
}

TEST_CASE("sgd_step is unbiased with variance eta^2 C") {
    const AnsatzLayout layout = AnsatzLayout::linear_entangler(1, 1);
    const Hamiltonian ham = single_z();
    const VqeLandscape landscape(layout, ham);
    const std::vector<double> theta{0.9};
    const double eta = 0.2;
    const long n_shots = 10;

    const double drift = theta[0] - eta * landscape.gradient(theta)[0];
    const double c = landscape.noise_diagonal(theta, n_shots)[0];

    const int reps = 10000;
    RngStream rng(2718);
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double next = sgd_step(landscape, theta, eta, n_shots, rng.child(r))[0];
        sum += next;
        sum_sq += next * next;
    }
    const double mean = sum / reps;
    const double var = sum_sq / reps - mean * mean;
    CHECK(std::abs(mean - drift) < 5.0 * eta * std::sqrt(c / reps));
    CHECK(std::abs(var - eta * eta * c) < 0.10 * eta * eta * c);
}

TEST_CASE("sgd mean path reproduces the gd step") {
    const AnsatzLayout layout = AnsatzLayout::linear_entangler(1, 1);
    const Hamiltonian ham = single_z();
    const VqeLandscape landscape(layout, ham);
    const std::vector<double> theta{2.1};
    const double eta = 0.05;
    const auto gd = gd_step(landscape, theta, eta);

    const int reps = 10000;
    RngStream rng(333);
    double sum = 0.0;
    for (int r = 0; r < reps; ++r) {
        sum += sgd_step(landscape, theta, eta, 25, rng.child(r))[0];
    }
    const double c = landscape.noise_diagonal(theta, 25)[0];
    CHECK(std::abs(sum / reps - gd[0]) < 5.0 * eta * std::sqrt(c / reps));
}

TEST_CASE("sde_step: zero diffusion reduces to the Euler step") {
    const QuadraticLandscape quad({0.5, 1.5}, 0.0);
    const std::vector<double> theta{1.0, -2.0};
    const auto next = sde_step(quad, theta, 0.01, 0.1, 1, RngStream(5));
    CHECK_THAT(next[0], WithinAbs(1.0 - 0.01 * 0.5 * 1.0, 1e-15));
    CHECK_THAT(next[1], WithinAbs(-2.0 + 0.01 * 1.5 * 2.0, 1e-15));
}

TEST_CASE("sde_step drift and diffusion moments") {
    const double lambda = 1.0, c = 2.0, eta = 0.1, dt = 0.02;
    const QuadraticLandscape quad({lambda}, c);
    const std::vector<double> theta{0.7};
    const int reps = 10000;
    RngStream rng(777);
    double sum = 0.0, sum_sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const double d = sde_step(quad, theta, dt, eta, 1, rng.child(r))[0] - theta[0];
        sum += d;
        sum_sq += d * d;
    }
    const double mean = sum / reps;
    const double var = sum_sq / reps - mean * mean;
    const double expected_var = eta * c * dt;
    CHECK(std::abs(mean - (-lambda * theta[0] * dt)) < 5.0 * std::sqrt(expected_var / reps));
    CHECK(std::abs(var - expected_var) < 0.10 * expected_var);
}

TEST_CASE("run_trajectory bookkeeping and determinism") {
    const Hamiltonian ring = heisenberg_preset(4, 1.0, 1.0, 1.0, true);
    const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
    const VqeLandscape landscape(layout, ring);
    const auto init = testutil::random_angles(16, RngStream(60));

    OptimizerConfig config;
    config.kind = OptimizerKind::sgd;
    config.learning_rate = 0.05;
    config.shots_per_group = 20;
    config.max_steps = 40;
    config.record_stride = 4;
    config.seed = 99;

    const Trajectory a = run_trajectory(landscape, init, config);
    const Trajectory b = run_trajectory(landscape, init, config);

    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].step == b.records[i].step);
        CHECK(a.records[i].loss == b.records[i].loss); // bit-identical
        CHECK(a.records[i].time == static_cast<double>(a.records[i].step) * config.learning_rate);
    }
    CHECK(a.final_params == b.final_params);

    // records at 0, stride, ..., final step
    CHECK(a.records.front().step == 0);
    CHECK(a.records.back().step == config.max_steps);
}

TEST_CASE("sde trajectory time uses the integrator step") {
    const QuadraticLandscape quad({1.0}, 0.5);
    OptimizerConfig config;
    config.kind = OptimizerKind::sde;
    config.learning_rate = 0.1;
    config.sde_time_step = 0.02;
    config.shots_per_group = 1;
    config.max_steps = 25;
    config.record_stride = 5;
    config.seed = 4;
    const Trajectory traj = run_trajectory(quad, {1.0}, config);
    for (const auto& rec : traj.records) {
        CHECK(rec.time == static_cast<double>(rec.step) * 0.02);
    }
}

TEST_CASE("config validation rejects bad settings") {
    OptimizerConfig config;
    config.learning_rate = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.learning_rate = 0.05;
    config.kind = OptimizerKind::sde;
    config.sde_time_step = 0.06; // above eta
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config.sde_time_step = 0.05;
    CHECK_NOTHROW(config.validate());
    config.kind = OptimizerKind::sgd;
    config.shots_per_group = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("diverging parameters abort with a diagnostic") {
    const QuadraticLandscape quad({1.0}, 0.0);
    OptimizerConfig config;
    config.kind = OptimizerKind::gd;
    config.learning_rate = 3.0; // |1 - eta*lambda| = 2, diverges
    config.max_steps = 10000;
    config.record_stride = 1000;
    CHECK_THROWS_AS(run_trajectory(quad, {1.0}, config), std::runtime_error);
}

TEST_CASE("Ornstein-Uhlenbeck stationary statistics") {
    const double lambda = 1.0, c = 1.0, eta = 0.1;
    const QuadraticLandscape quad({lambda}, c);
    const long steps = 1000000;
    const long burn_in = 10000;

    SECTION("sgd variance matches eta c / (lambda (2 - eta lambda))") {
        RngStream rng(31415);
        std::vector<double> theta{0.0};
        double sum_sq = 0.0;
        for (long k = 1; k <= steps; ++k) {
            theta = sgd_step(quad, theta, eta, 1, rng.child(k));
            if (k > burn_in) sum_sq += theta[0] * theta[0];
        }
        const double measured = sum_sq / static_cast<double>(steps - burn_in);
        const double expected = eta * c / (lambda * (2.0 - eta * lambda));
        CHECK(std::abs(measured - expected) < 0.05 * expected);
    }
    SECTION("sde variance approaches eta c / (2 lambda) as dt -> 0") {
        const double dt = 0.002;
        RngStream rng(92653);
        std::vector<double> theta{0.0};
        double sum_sq = 0.0;
        for (long k = 1; k <= steps; ++k) {
            theta = sde_step(quad, theta, dt, eta, 1, rng.child(k));
            if (k > burn_in) sum_sq += theta[0] * theta[0];
        }
        const double measured = sum_sq / static_cast<double>(steps - burn_in);
        const double expected = eta * c / (2.0 * lambda);
        CHECK(std::abs(measured - expected) < 0.05 * expected);
    }
}
