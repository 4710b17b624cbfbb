// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
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

struct EscapeCell {
    double eta = 0.0;
    long n_shots = 0;

    double v() const { return std::sqrt(eta / static_cast<double>(n_shots)); }
};

/// Realize a (eta x v-target) grid with integer shot counts:
/// N_s = max(1, round(eta / v^2)). The realized v = sqrt(eta/N_s) is what
/// gets stored and fitted. Duplicate (eta, N_s) cells are dropped.
inline std::vector<EscapeCell> cells_from_v_targets(std::span<const double> etas,
                                                    std::span<const double> v_targets) {
    std::vector<EscapeCell> cells;
    for (double eta : etas) {
        for (double v : v_targets) {
            if (!(eta > 0.0) || !(v > 0.0)) {
                throw std::invalid_argument("cells_from_v_targets: eta and v must be > 0");
            }
            EscapeCell cell;
            cell.eta = eta;
            cell.n_shots = std::max(1L, std::lround(eta / (v * v)));
            const bool dup = std::any_of(cells.begin(), cells.end(), [&](const EscapeCell& c) {
                return c.eta == cell.eta && c.n_shots == cell.n_shots;
            });
            if (!dup) cells.push_back(cell);
        }
    }
    return cells;
}

struct EscapeResult {
    double eta = 0.0;
    long n_shots = 0;
    double v = 0.0;
    OptimizerKind kind = OptimizerKind::sgd;
    double sde_dt = 0.0; // 0 for discrete kinds
    int instances = 0;
    int censored = 0;
    std::vector<double> escape_times; // uncensored, ascending
    double mean_escape_time = std::numeric_limits<double>::quiet_NaN();
    double mean_stderr = std::numeric_limits<double>::quiet_NaN();

    bool has_mean() const { return !escape_times.empty(); }

    /// Total measurements to escape, up to a constant: N_s * t/eta = t / v^2.
    double measurement_cost() const {
        return has_mean() ? mean_escape_time / (v * v)
                          : std::numeric_limits<double>::quiet_NaN();
    }
};

/// Spec-level accessor; the cost is undefined on an all-censored cell.
inline double measurement_cost(const EscapeResult& result) {
    if (!result.has_mean()) {
        throw std::runtime_error("measurement_cost: all instances censored, mean undefined");
    }
    return result.measurement_cost();
}

struct EscapeSweepOptions {
    double threshold = 0.0;
    int instances = 100;
    double max_time = 400.0; // instances still above threshold at max_time are censored
    std::uint64_t master_seed = 0;
    OptimizerKind kind = OptimizerKind::sgd;
    double sde_time_step = 0.01; // effective step is min(eta, this)
    int threads = 0;             // 0 = resolve from env/hardware
};

namespace detail {

/// One trajectory from `start`; returns the first time the exact loss drops
/// below the threshold, or NaN if censored at max_time.
template <Landscape L>
double escape_time_single(const L& landscape, std::span<const double> start,
                          const EscapeCell& cell, const EscapeSweepOptions& opts,
                          RngStream stream) {
    const bool sde = opts.kind == OptimizerKind::sde;
    const double dt = sde ? std::min(cell.eta, opts.sde_time_step) : cell.eta;
    const long max_steps = static_cast<long>(std::ceil(opts.max_time / dt));
    std::vector<double> theta(start.begin(), start.end());
    for (long step = 1; step <= max_steps; ++step) {
        if (sde) {
            theta = sde_step(landscape, theta, dt, cell.eta, cell.n_shots, stream.child(step));
        } else {
            theta = sgd_step(landscape, theta, cell.eta, cell.n_shots, stream.child(step));
        }
        check_finite(theta, step);
        if (landscape.loss(theta) < opts.threshold) {
            return static_cast<double>(step) * dt;
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace detail

/// All instances of one grid cell, in parallel. Instance randomness is
/// derived as seed -> child(cell_index, instance), so results do not depend
/// on scheduling.
template <Landscape L>
EscapeResult escape_cell(const L& landscape, std::span<const double> start, const EscapeCell& cell,
                         const EscapeSweepOptions& opts, std::uint64_t cell_index) {
    if (opts.instances < 1) throw std::invalid_argument("escape_cell: instances must be >= 1");
    if (cell.n_shots < 1) throw std::invalid_argument("escape_cell: n_shots must be >= 1");
    if (!(opts.threshold < landscape.loss(start))) {
        throw std::invalid_argument("escape_cell: threshold must be below the starting loss");
    }

    const RngStream master(opts.master_seed);
    std::vector<double> times(static_cast<std::size_t>(opts.instances));
    parallel_for(times.size(), opts.threads, [&](std::size_t instance) {
        times[instance] = detail::escape_time_single(landscape, start, cell, opts,
                                                     master.child(cell_index, instance));
    });

    EscapeResult result;
    result.eta = cell.eta;
    result.n_shots = cell.n_shots;
    result.v = cell.v();
    result.kind = opts.kind;
    result.sde_dt = opts.kind == OptimizerKind::sde ? std::min(cell.eta, opts.sde_time_step) : 0.0;
    result.instances = opts.instances;
    for (double t : times) {
        if (std::isnan(t)) {
            ++result.censored;
        } else {
            result.escape_times.push_back(t);
        }
    }
    std::sort(result.escape_times.begin(), result.escape_times.end());
    if (!result.escape_times.empty()) {
        const double n = static_cast<double>(result.escape_times.size());
        double mean = 0.0;
        for (double t : result.escape_times) mean += t;
        mean /= n;
        double var = 0.0;
        for (double t : result.escape_times) var += (t - mean) * (t - mean);
        var = n > 1 ? var / (n - 1) : 0.0;
        result.mean_escape_time = mean;
        result.mean_stderr = std::sqrt(var / n);
    }
    return result;
}

template <Landscape L>
std::vector<EscapeResult> escape_sweep(const L& landscape, std::span<const double> start,
                                       std::span<const EscapeCell> cells,
                                       const EscapeSweepOptions& opts) {
    std::vector<EscapeResult> results;
    results.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        results.push_back(escape_cell(landscape, start, cells[c], opts, c));
    }
    return results;
}

// ---------------------------------------------------------------------------
// Collapse diagnostic: cells sharing the same v (within 1e-9) but different
// eta must produce statistically identical mean escape times.

struct CollapseMember {
    double eta = 0.0;
    long n_shots = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
};

struct CollapseGroup {
    double v = 0.0;
    std::vector<CollapseMember> members;
    double max_z = 0.0; // worst pairwise |mean_a - mean_b| / sqrt(se_a^2 + se_b^2)
};

struct CollapseReport {
    std::vector<CollapseGroup> groups;
    double max_z = 0.0;
    bool empty = true; // no shared-v groups found

    bool passed(double z_limit = 2.5) const { return !empty && max_z <= z_limit; }
};

inline CollapseReport collapse_check(std::span<const EscapeResult> results) {
    std::vector<const EscapeResult*> sorted;
    for (const auto& r : results) {
        if (r.has_mean()) sorted.push_back(&r);
    }
    std::sort(sorted.begin(), sorted.end(),
              [](const EscapeResult* a, const EscapeResult* b) { return a->v < b->v; });

    CollapseReport report;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i + 1;
        while (j < sorted.size() && std::abs(sorted[j]->v - sorted[i]->v) <= 1e-9) ++j;
        bool distinct_eta = false;
        for (std::size_t k = i + 1; k < j; ++k) {
            if (sorted[k]->eta != sorted[i]->eta) distinct_eta = true;
        }
        if (distinct_eta) {
            CollapseGroup group;
            group.v = sorted[i]->v;
            for (std::size_t k = i; k < j; ++k) {
                group.members.push_back({sorted[k]->eta, sorted[k]->n_shots,
                                         sorted[k]->mean_escape_time, sorted[k]->mean_stderr});
            }
            for (std::size_t a = 0; a < group.members.size(); ++a) {
                for (std::size_t b = a + 1; b < group.members.size(); ++b) {
                    const auto& ma = group.members[a];
                    const auto& mb = group.members[b];
                    const double spread = std::sqrt(ma.stderr_ * ma.stderr_ + mb.stderr_ * mb.stderr_);
                    const double diff = std::abs(ma.mean - mb.mean);
                    const double z = spread > 0.0 ? diff / spread
                                                  : (diff == 0.0 ? 0.0
                                                                 : std::numeric_limits<double>::infinity());
                    group.max_z = std::max(group.max_z, z);
                }
            }
            report.max_z = std::max(report.max_z, group.max_z);
            report.groups.push_back(std::move(group));
            report.empty = false;
        }
        i = j;
    }
    return report;
}

} // namespace vqelab
