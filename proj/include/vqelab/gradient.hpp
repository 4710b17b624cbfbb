// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/ansatz.hpp"
#include "vqelab/pauli.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/sampling.hpp"

namespace vqelab {

enum class EstimatorKind { exact, parameter_shift, finite_difference };

struct GradientEstimate {
    std::vector<double> values;
    long shots_per_group = 0; // 0 = exact expectations
    EstimatorKind kind = EstimatorKind::exact;
};

inline double exact_loss(const AnsatzLayout& layout, std::span<const double> params,
                         const Hamiltonian& ham) {
    return exact_expectation(prepare_ansatz_state(layout, params), ham);
}

/// Parameter-shift derivative with exact expectations. Exact for RY gates
/// (generator eigenvalues +-1/2): dL/dtheta_i = [L(theta + pi/2 e_i) -
/// L(theta - pi/2 e_i)] / 2.
inline GradientEstimate exact_gradient(const AnsatzLayout& layout, std::span<const double> params,
                                       const Hamiltonian& ham) {
    constexpr double shift = std::numbers::pi / 2;
    const std::size_t p = params.size();
    std::vector<double> shifted(params.begin(), params.end());
    GradientEstimate grad;
    grad.kind = EstimatorKind::exact;
    grad.values.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        shifted[i] = params[i] + shift;
        const double plus = exact_loss(layout, shifted, ham);
        shifted[i] = params[i] - shift;
        const double minus = exact_loss(layout, shifted, ham);
        shifted[i] = params[i];
        grad.values[i] = 0.5 * (plus - minus);
    }
    return grad;
}

/// Parameter-shift estimator with finite shots. Every energy evaluation,
/// component, shift sign and group draws from its own substream, so the
/// estimator components are independent (and the covariance is diagonal).
inline GradientEstimate sampled_gradient(const AnsatzLayout& layout, std::span<const double> params,
                                         const Hamiltonian& ham, long shots_per_group,
                                         RngStream rng) {
    if (shots_per_group < 1) {
        throw std::invalid_argument("sampled_gradient: shots_per_group must be >= 1");
    }
    constexpr double shift = std::numbers::pi / 2;
    const std::size_t p = params.size();
    std::vector<double> shifted(params.begin(), params.end());
    GradientEstimate grad;
    grad.kind = EstimatorKind::parameter_shift;
    grad.shots_per_group = shots_per_group;
    grad.values.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        shifted[i] = params[i] + shift;
        const double plus = estimate_energy(layout, shifted, ham, shots_per_group, rng.child(i, 0));
        shifted[i] = params[i] - shift;
        const double minus = estimate_energy(layout, shifted, ham, shots_per_group, rng.child(i, 1));
        shifted[i] = params[i];
        grad.values[i] = 0.5 * (plus - minus);
    }
    return grad;
}

/// Central finite difference; biased O(epsilon^2) on the exact loss. With
/// shots_per_group > 0 each loss evaluation is sampled on its own substream.
inline GradientEstimate finite_difference_gradient(const AnsatzLayout& layout,
                                                   std::span<const double> params,
                                                   const Hamiltonian& ham, double epsilon,
                                                   long shots_per_group = 0, RngStream rng = {}) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("finite_difference_gradient: epsilon must be > 0");
    }
    const std::size_t p = params.size();
    std::vector<double> shifted(params.begin(), params.end());
    GradientEstimate grad;
    grad.kind = EstimatorKind::finite_difference;
    grad.shots_per_group = shots_per_group;
    grad.values.resize(p);
    for (std::size_t i = 0; i < p; ++i) {
        shifted[i] = params[i] + epsilon;
        const double plus = shots_per_group > 0
                                ? estimate_energy(layout, shifted, ham, shots_per_group, rng.child(i, 0))
                                : exact_loss(layout, shifted, ham);
        shifted[i] = params[i] - epsilon;
        const double minus = shots_per_group > 0
                                 ? estimate_energy(layout, shifted, ham, shots_per_group, rng.child(i, 1))
                                 : exact_loss(layout, shifted, ham);
        shifted[i] = params[i];
        grad.values[i] = (plus - minus) / (2.0 * epsilon);
    }
    return grad;
}

/// Diagonal covariance of the parameter-shift estimator. Off-diagonals vanish
/// because components are sampled independently.
struct NoiseCovariance {
    std::vector<double> diagonal;

    double trace() const {
        double t = 0.0;
        for (double d : diagonal) t += d;
        return t;
    }
};

/// Exact gradient and exact noise diagonal from one sweep over the shifted
/// points. Both need the same 2P state preparations; the variance of each
/// group at each shifted point is a byproduct of its expectation.
struct GradientNoise {
    std::vector<double> gradient;
    std::vector<double> covariance_diagonal;

    double gradient_norm_sq() const {
        double s = 0.0;
        for (double g : gradient) s += g * g;
        return s;
    }
};

inline GradientNoise gradient_with_noise(const AnsatzLayout& layout, std::span<const double> params,
                                         const Hamiltonian& ham, long shots_per_group) {
    if (shots_per_group < 1) {
        throw std::invalid_argument("gradient_with_noise: shots_per_group must be >= 1");
    }
    constexpr double shift = std::numbers::pi / 2;
    const std::size_t p = params.size();
    std::vector<double> shifted(params.begin(), params.end());
    GradientNoise out;
    out.gradient.resize(p);
    out.covariance_diagonal.resize(p);
    const double shot_factor = 1.0 / (4.0 * static_cast<double>(shots_per_group));
    for (std::size_t i = 0; i < p; ++i) {
        double loss_side[2];
        double var_sum = 0.0;
        for (int side = 0; side < 2; ++side) {
            shifted[i] = params[i] + (side == 0 ? shift : -shift);
            const StateVector state = prepare_ansatz_state(layout, shifted);
            double loss = 0.0;
            for (const auto& group : ham.groups) {
                const GroupMoments m = group_moments(state, group);
                loss += m.mean;
                var_sum += m.variance;
            }
            loss_side[side] = loss;
        }
        shifted[i] = params[i];
        out.gradient[i] = 0.5 * (loss_side[0] - loss_side[1]);
        out.covariance_diagonal[i] = shot_factor * var_sum;
    }
    return out;
}

/// C_ii = 1/(4 N_s) sum_k [Var_{theta + pi/2 e_i}(h_k) + Var_{theta - pi/2 e_i}(h_k)].
inline NoiseCovariance exact_noise_covariance(const AnsatzLayout& layout,
                                              std::span<const double> params,
                                              const Hamiltonian& ham, long shots_per_group) {
    NoiseCovariance cov;
    cov.diagonal = gradient_with_noise(layout, params, ham, shots_per_group).covariance_diagonal;
    return cov;
}

/// Tr of the gradient second-moment matrix: Tr C + |grad L|^2.
inline double second_moment_trace(const AnsatzLayout& layout, std::span<const double> params,
                                  const Hamiltonian& ham, long shots_per_group) {
    const GradientNoise gn = gradient_with_noise(layout, params, ham, shots_per_group);
    double trace = gn.gradient_norm_sq();
    for (double c : gn.covariance_diagonal) trace += c;
    return trace;
}

} // namespace vqelab
