// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/landscape.hpp"
#include "vqelab/optimizer.hpp"
#include "vqelab/parallel.hpp"

namespace vqelab {

/// One stationarity-diagnostic row at fixed (eta, N_s). In a quasi-stationary
/// window the SGD chain satisfies  <theta . grad L> = (eta/2) <Tr C~>  with
/// C~ = C + grad grad^T the gradient second moment. The ratio
/// <Tr C~> / <Tr C> measures how far the chain is from the diffusion
/// (SDE) regime, whose stationary fluctuations involve C instead.
struct FdrRow {
    double eta = 0.0;
    long n_shots = 0;
    double theta_dot_grad = 0.0;       // time average of theta . grad L
    double half_eta_second_moment = 0.0; // (eta/2) * time average of Tr C~
    double trace_ratio = 0.0;          // time-avg Tr C~ / time-avg Tr C
    bool valid = false;                // false if the chain escaped mid-window
    long window_steps = 0;
    long burn_in_steps = 0;
};

struct FdrOptions {
    long window_steps = 10000; // measuring window (after burn-in)
    double escape_threshold = -std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;
    bool adapt_window = true; // probe the escape time first, cap window at half of it
    long min_window_steps = 50;
};

namespace detail {

/// First step at which the exact loss drops below the threshold, or 0 if it
/// never does within the budget.
template <Landscape L>
long probe_escape_step(const L& landscape, std::span<const double> start, double eta, long n_shots,
                       double threshold, long budget, RngStream stream) {
    std::vector<double> theta(start.begin(), start.end());
    for (long step = 1; step <= budget; ++step) {
        theta = sgd_step(landscape, theta, eta, n_shots, stream.child(step));
        if (landscape.loss(theta) < threshold) return step;
    }
    return 0;
}

} // namespace detail

template <Landscape L>
FdrRow fdr_scan_single(const L& landscape, std::span<const double> start, double eta, long n_shots,
                       const FdrOptions& opts, RngStream stream) {
    if (!(eta > 0.0) || n_shots < 1) {
        throw std::invalid_argument("fdr_scan_single: need eta > 0 and n_shots >= 1");
    }
    FdrRow row;
    row.eta = eta;
    row.n_shots = n_shots;

    long window = opts.window_steps;
    if (opts.adapt_window && std::isfinite(opts.escape_threshold)) {
        const long probe_budget = opts.window_steps + opts.window_steps / 10;
        const long escape_step = detail::probe_escape_step(landscape, start, eta, n_shots,
                                                           opts.escape_threshold, probe_budget,
                                                           stream.child(0));
        if (escape_step > 0) window = std::max(opts.min_window_steps, escape_step / 2);
    }
    const long burn_in = window / 10;
    row.window_steps = window;
    row.burn_in_steps = burn_in;

    const RngStream run = stream.child(1);
    std::vector<double> theta(start.begin(), start.end());
    double sum_theta_grad = 0.0;
    double sum_trace_c = 0.0;
    double sum_trace_second = 0.0;
    long measured = 0;
    for (long step = 1; step <= burn_in + window; ++step) {
        theta = sgd_step(landscape, theta, eta, n_shots, run.child(step));
        if (landscape.loss(theta) < opts.escape_threshold) {
            row.valid = false;
            return row; // escaped before the window completed
        }
        if (step <= burn_in) continue;
        const GradientNoise gn = landscape.gradient_and_noise(theta, n_shots);
        double theta_grad = 0.0;
        for (std::size_t i = 0; i < theta.size(); ++i) theta_grad += theta[i] * gn.gradient[i];
        double trace_c = 0.0;
        for (double c : gn.covariance_diagonal) trace_c += c;
        sum_theta_grad += theta_grad;
        sum_trace_c += trace_c;
        sum_trace_second += trace_c + gn.gradient_norm_sq();
        ++measured;
    }
    const double n = static_cast<double>(measured);
    row.theta_dot_grad = sum_theta_grad / n;
    row.half_eta_second_moment = 0.5 * eta * (sum_trace_second / n);
    row.trace_ratio = sum_trace_second / sum_trace_c;
    row.valid = true;
    return row;
}

/// One row per eta at the fixed ratio eta/N_s = shots_ratio. Rows run
/// concurrently on substreams derived from the row index.
template <Landscape L>
std::vector<FdrRow> fdr_scan(const L& landscape, std::span<const double> start,
                             std::span<const double> etas, double shots_ratio,
                             const FdrOptions& opts, int threads = 0) {
    if (!(shots_ratio > 0.0)) throw std::invalid_argument("fdr_scan: shots_ratio must be > 0");
    std::vector<FdrRow> rows(etas.size());
    const RngStream root(opts.seed);
    parallel_for(etas.size(), threads, [&](std::size_t i) {
        const double eta = etas[i];
        const long n_shots = std::max(1L, std::lround(eta / shots_ratio));
        rows[i] = fdr_scan_single(landscape, start, eta, n_shots, opts, root.child(i));
    });
    return rows;
}

} // namespace vqelab
