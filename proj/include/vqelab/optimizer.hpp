// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqelab/landscape.hpp"
#include "vqelab/rng.hpp"

namespace vqelab {

enum class OptimizerKind { gd, sgd, sde };

inline const char* optimizer_kind_name(OptimizerKind k) {
    switch (k) {
        case OptimizerKind::gd: return "gd";
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::sde: return "sde";
    }
    return "?";
}

struct OptimizerConfig {
    OptimizerKind kind = OptimizerKind::gd;
    double learning_rate = 0.05;  // eta; also the time unit t = k * eta
    long shots_per_group = 100;   // N_s (sgd/sde)
    double sde_time_step = 0.01;  // sde integrator step, <= eta
    long max_steps = 1000;
    long record_stride = 1;
    std::uint64_t seed = 0;

    double time_step() const {
        return kind == OptimizerKind::sde ? sde_time_step : learning_rate;
    }

    void validate() const {
        if (!(learning_rate > 0.0)) throw std::invalid_argument("OptimizerConfig: eta must be > 0");
        if (max_steps < 1) throw std::invalid_argument("OptimizerConfig: max_steps must be >= 1");
        if (record_stride < 1) throw std::invalid_argument("OptimizerConfig: record_stride must be >= 1");
        if (kind != OptimizerKind::gd && shots_per_group < 1) {
            throw std::invalid_argument("OptimizerConfig: shots_per_group must be >= 1");
        }
        if (kind == OptimizerKind::sde) {
            if (!(sde_time_step > 0.0)) {
                throw std::invalid_argument("OptimizerConfig: sde time step must be > 0");
            }
            if (sde_time_step > learning_rate + 1e-15) {
                throw std::invalid_argument("OptimizerConfig: sde time step must not exceed eta");
            }
        }
    }
};

struct TrajectoryRecord {
    long step = 0;
    double time = 0.0;
    double loss = 0.0; // exact loss, independent of the noisy estimator
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    std::vector<double> final_params;
    OptimizerConfig config;
    long steps_taken = 0;
    long clamped_noise_entries = 0; // sde diagnostic, see sde_step
};

/// theta' = theta - eta * grad L(theta), exact gradient.
template <Landscape L>
std::vector<double> gd_step(const L& landscape, std::span<const double> theta, double eta) {
    const std::vector<double> g = landscape.gradient(theta);
    std::vector<double> next(theta.begin(), theta.end());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] -= eta * g[i];
    return next;
}

/// theta' = theta - eta * g_hat(theta), one fresh sampled gradient.
template <Landscape L>
std::vector<double> sgd_step(const L& landscape, std::span<const double> theta, double eta,
                             long shots_per_group, RngStream rng) {
    const std::vector<double> g = landscape.sampled_gradient(theta, shots_per_group, rng);
    std::vector<double> next(theta.begin(), theta.end());
    for (std::size_t i = 0; i < next.size(); ++i) next[i] -= eta * g[i];
    return next;
}

/// Euler-Maruyama step of d theta = -grad L dt + sqrt(eta C(theta)) dW.
/// C is the diagonal covariance of the shot-noise gradient estimator,
/// evaluated at the pre-step point (Ito). Entries that come out negative
/// from roundoff are clamped to zero and counted.
template <Landscape L>
std::vector<double> sde_step(const L& landscape, std::span<const double> theta, double dt,
                             double eta, long shots_per_group, RngStream rng,
                             long* clamp_counter = nullptr) {
    const GradientNoise gn = landscape.gradient_and_noise(theta, shots_per_group);
    const double sqrt_dt = std::sqrt(dt);
    std::vector<double> next(theta.begin(), theta.end());
    for (std::size_t i = 0; i < next.size(); ++i) {
        double c = gn.covariance_diagonal[i];
        if (c < 0.0) {
            c = 0.0;
            if (clamp_counter) ++*clamp_counter;
        }
        next[i] += -gn.gradient[i] * dt + std::sqrt(eta * c) * sqrt_dt * rng.normal();
    }
    return next;
}

namespace detail {

inline void check_finite(std::span<const double> theta, long step) {
    for (double x : theta) {
        if (!std::isfinite(x)) {
            throw std::runtime_error("run_trajectory: non-finite parameter at step " +
                                     std::to_string(step));
        }
    }
}

} // namespace detail

/// Iterate the configured stepper, recording the exact loss at step 0, every
/// record_stride-th step, and the final step. Noise per step k comes from the
/// substream seed->child(k), so a trajectory is a pure function of
/// (initial_params, config).
template <Landscape L>
Trajectory run_trajectory(const L& landscape, std::vector<double> initial_params,
                          const OptimizerConfig& config) {
    config.validate();
    if (initial_params.size() != landscape.dimension()) {
        throw std::invalid_argument("run_trajectory: parameter count mismatch");
    }
    detail::check_finite(initial_params, 0);

    const RngStream root(config.seed);
    const double dt = config.time_step();

    Trajectory traj;
    traj.config = config;
    traj.records.push_back({0, 0.0, landscape.loss(initial_params)});

    std::vector<double> theta = std::move(initial_params);
    long step = 0;
    while (step < config.max_steps) {
        ++step;
        switch (config.kind) {
            case OptimizerKind::gd:
                theta = gd_step(landscape, theta, config.learning_rate);
                break;
            case OptimizerKind::sgd:
                theta = sgd_step(landscape, theta, config.learning_rate, config.shots_per_group,
                                 root.child(step));
                break;
            case OptimizerKind::sde:
                theta = sde_step(landscape, theta, config.sde_time_step, config.learning_rate,
                                 config.shots_per_group, root.child(step),
                                 &traj.clamped_noise_entries);
                break;
        }
        detail::check_finite(theta, step);
        if (step % config.record_stride == 0 || step == config.max_steps) {
            traj.records.push_back({step, static_cast<double>(step) * dt, landscape.loss(theta)});
        }
    }
    traj.steps_taken = step;
    traj.final_params = std::move(theta);
    return traj;
}

} // namespace vqelab
