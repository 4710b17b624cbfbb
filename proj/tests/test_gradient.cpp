// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "test_helpers.hpp"
#include "vqelab/gradient.hpp"

using namespace vqelab;
using Catch::Matchers::WithinAbs;

namespace {

// Single qubit, single RY layer, H = Z: L(theta) = cos(theta).
struct CosineCase {
    AnsatzLayout layout = AnsatzLayout::linear_entangler(1, 1);
    Hamiltonian ham;

    CosineCase() {
        ObservableGroup g;
        g.basis = Pauli::Z;
        g.strings.push_back(PauliString::from_letters(1.0, "Z"));
        ham.name = "z";
        ham.groups.push_back(g);
    }
};

} // namespace

TEST_CASE("parameter-shift gradient is exact on the cosine loss") {
    const CosineCase c;
    const std::vector<double> theta{std::numbers::pi / 2};
    CHECK_THAT(exact_gradient(c.layout, theta, c.ham).values[0], WithinAbs(-1.0, 1e-12));

    // stationary at the minimum theta = pi
    const std::vector<double> min_theta{std::numbers::pi};
    CHECK_THAT(exact_gradient(c.layout, min_theta, c.ham).values[0], WithinAbs(0.0, 1e-12));
}

TEST_CASE("finite differences approach the gradient as epsilon shrinks") {
    const CosineCase c;
    const std::vector<double> theta{std::numbers::pi / 2};
    const double fd = finite_difference_gradient(c.layout, theta, c.ham, 1e-5).values[0];
    CHECK_THAT(fd, WithinAbs(-1.0, 1e-9));

    // at epsilon = pi/2 the finite-difference numerator equals the shift rule's;
    // the estimators differ only by the 1/(2 eps) vs 1/2 denominator
    const double fd_halfpi =
        finite_difference_gradient(c.layout, theta, c.ham, std::numbers::pi / 2).values[0];
    const double ps = exact_gradient(c.layout, theta, c.ham).values[0];
    CHECK_THAT(fd_halfpi * (std::numbers::pi / 2), WithinAbs(ps, 1e-12));

    // O(eps^2) bias: for L = cos, FD error is sin(theta) * eps^2 / 6 + O(eps^4)
    const double theta0 = 0.7;
    const double eps = 0.1;
    const double fd_biased =
        finite_difference_gradient(c.layout, std::vector<double>{theta0}, c.ham, eps).values[0];
    const double err = fd_biased - (-std::sin(theta0));
    CHECK_THAT(err, WithinAbs(std::sin(theta0) * eps * eps / 6.0, 1e-4));

    CHECK_THROWS_AS(finite_difference_gradient(c.layout, theta, c.ham, 0.0),
                    std::invalid_argument);
}

TEST_CASE("parameter shift matches the finite-difference oracle on the ring") {
    const Hamiltonian ring = heisenberg_preset(4, 1.0, 1.0, 1.0, true);
    const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
    RngStream rng(1001);
    for (int trial = 0; trial < 10; ++trial) {
        const auto theta = testutil::random_angles(16, rng.child(trial));
        const auto ps = exact_gradient(layout, theta, ring).values;
        const auto fd = finite_difference_gradient(layout, theta, ring, 1e-5).values;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            CHECK_THAT(ps[i], WithinAbs(fd[i], 1e-7));
        }
    }
}

TEST_CASE("noise covariance in closed form on the cosine loss") {
    const CosineCase c;

    // theta = 0: Var(Z) = 1 at both shifted points; C = 1/(2 N_s)
    const std::vector<double> zero{0.0};
    CHECK_THAT(exact_noise_covariance(c.layout, zero, c.ham, 1).diagonal[0],
               WithinAbs(0.5, 1e-12));
    CHECK_THAT(exact_noise_covariance(c.layout, zero, c.ham, 10).diagonal[0],
               WithinAbs(0.05, 1e-12));

    // noise survives at the minimum theta = pi
    const std::vector<double> min_theta{std::numbers::pi};
    CHECK_THAT(exact_noise_covariance(c.layout, min_theta, c.ham, 4).diagonal[0],
               WithinAbs(1.0 / 8.0, 1e-12));

    // exact 1/N_s scaling
    const Hamiltonian ring = heisenberg_preset(4, 1.0, 1.0, 1.0, true);
    const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
    const auto theta = testutil::random_angles(16, RngStream(8));
    const auto c1 = exact_noise_covariance(layout, theta, ring, 25).diagonal;
    const auto c2 = exact_noise_covariance(layout, theta, ring, 50).diagonal;
    for (std::size_t i = 0; i < c1.size(); ++i) CHECK(c2[i] == 0.5 * c1[i]);
}

TEST_CASE("second moment trace identity") {
    const CosineCase c;
    // theta = pi/2: both shifted points are Z eigenstates (Var = 0), grad = -1
    const std::vector<double> theta{std::numbers::pi / 2};
    CHECK_THAT(second_moment_trace(c.layout, theta, c.ham, 1), WithinAbs(1.0, 1e-12));

    // at a critical point the gradient term vanishes: Tr C~ = Tr C
    const std::vector<double> zero{0.0};
    const double trace_c = exact_noise_covariance(c.layout, zero, c.ham, 3).trace();
    CHECK_THAT(second_moment_trace(c.layout, zero, c.ham, 3), WithinAbs(trace_c, 1e-12));
}

TEST_CASE("sampled gradient statistics at a random 16-parameter point") {
    const Hamiltonian ring = heisenberg_preset(4, 1.0, 1.0, 1.0, true);
    const AnsatzLayout layout = AnsatzLayout::linear_entangler(4, 4);
    const auto theta = testutil::random_angles(16, RngStream(2024));
    const auto exact = exact_gradient(layout, theta, ring).values;

    const long n_shots = 10;
    const int reps = 10000;
    const std::size_t p = 16;
    std::vector<double> sum(p, 0.0);
    std::vector<double> sum_sq(p, 0.0);
    std::vector<double> sum_cross(p * p, 0.0);
    double sum_norm_sq = 0.0;
    RngStream rng(4096);
    for (int r = 0; r < reps; ++r) {
        const auto g = sampled_gradient(layout, theta, ring, n_shots, rng.child(r)).values;
        for (std::size_t i = 0; i < p; ++i) {
            sum[i] += g[i];
            sum_sq[i] += g[i] * g[i];
            sum_norm_sq += g[i] * g[i];
            for (std::size_t j = i + 1; j < p; ++j) sum_cross[i * p + j] += g[i] * g[j];
        }
    }

    const auto predicted = exact_noise_covariance(layout, theta, ring, n_shots).diagonal;
    std::vector<double> mean(p), var(p);
    for (std::size_t i = 0; i < p; ++i) {
        mean[i] = sum[i] / reps;
        var[i] = sum_sq[i] / reps - mean[i] * mean[i];
    }

    // unbiased componentwise within 5 standard errors
    for (std::size_t i = 0; i < p; ++i) {
        const double se = std::sqrt(predicted[i] / reps);
        CHECK(std::abs(mean[i] - exact[i]) < 5.0 * se);
    }
    // per-component variance matches the closed form within 10%
    for (std::size_t i = 0; i < p; ++i) {
        CHECK(std::abs(var[i] - predicted[i]) < 0.10 * predicted[i]);
    }
    // off-diagonal correlations consistent with zero
    const double limit = 4.0 / std::sqrt(static_cast<double>(reps));
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i + 1; j < p; ++j) {
            const double cov = sum_cross[i * p + j] / reps - mean[i] * mean[j];
            const double rho = cov / std::sqrt(var[i] * var[j]);
            CHECK(std::abs(rho) < limit);
        }
    }
    // Monte Carlo E[g.g] against Tr C + |grad|^2
    const double trace_second = second_moment_trace(layout, theta, ring, n_shots);
    const double mc = sum_norm_sq / reps;
    const double tolerance = 3.0 * trace_second * 4.0 / std::sqrt(static_cast<double>(reps));
    CHECK(std::abs(mc - trace_second) < tolerance);
}

TEST_CASE("sampled gradient error shrinks with the shot budget") {
    const CosineCase c;
    const std::vector<double> theta{1.1};
    RngStream rng(512);
    double err_small = 0.0, err_large = 0.0;
    for (int r = 0; r < 200; ++r) {
        const double g_small =
            sampled_gradient(c.layout, theta, c.ham, 10, rng.child(0, r)).values[0];
        const double g_large =
            sampled_gradient(c.layout, theta, c.ham, 1000, rng.child(1, r)).values[0];
        err_small += (g_small + std::sin(1.1)) * (g_small + std::sin(1.1));
        err_large += (g_large + std::sin(1.1)) * (g_large + std::sin(1.1));
    }
    CHECK(err_large < err_small / 10.0); // variance scales as 1/N_s

    CHECK_THROWS_AS(sampled_gradient(c.layout, theta, c.ham, 0, RngStream(0)),
                    std::invalid_argument);
}
