// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <concepts>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/gradient.hpp"
#include "vqelab/hessian.hpp"
#include "vqelab/rng.hpp"

namespace vqelab {

/// What the optimizers and experiment drivers need from a loss landscape.
/// `noise_diagonal` is the diagonal covariance of `sampled_gradient`.
template <class L>
concept Landscape = requires(const L& l, std::span<const double> theta, long shots, RngStream rng) {
    { l.dimension() } -> std::convertible_to<std::size_t>;
    { l.loss(theta) } -> std::convertible_to<double>;
    { l.gradient(theta) } -> std::convertible_to<std::vector<double>>;
    { l.sampled_gradient(theta, shots, rng) } -> std::convertible_to<std::vector<double>>;
    { l.noise_diagonal(theta, shots) } -> std::convertible_to<std::vector<double>>;
    { l.gradient_and_noise(theta, shots) } -> std::convertible_to<GradientNoise>;
    { l.hessian_matrix(theta) } -> std::convertible_to<HessianMatrix>;
};

/// The VQE loss L(theta) = <psi(theta)|H|psi(theta)> with parameter-shift
/// estimators. Holds references; keep layout and hamiltonian alive.
class VqeLandscape {
  public:
    VqeLandscape(const AnsatzLayout& layout, const Hamiltonian& ham)
        : layout_(&layout), ham_(&ham) {
        layout.validate();
        ham.validate();
        if (layout.n_qubits != ham.n_qubits()) {
            throw std::invalid_argument("VqeLandscape: ansatz and Hamiltonian widths differ");
        }
    }

    std::size_t dimension() const { return static_cast<std::size_t>(layout_->parameter_count()); }

    double loss(std::span<const double> theta) const { return exact_loss(*layout_, theta, *ham_); }

    std::vector<double> gradient(std::span<const double> theta) const {
        return exact_gradient(*layout_, theta, *ham_).values;
    }

    std::vector<double> sampled_gradient(std::span<const double> theta, long shots,
                                         RngStream rng) const {
        return vqelab::sampled_gradient(*layout_, theta, *ham_, shots, rng).values;
    }

    std::vector<double> noise_diagonal(std::span<const double> theta, long shots) const {
        return exact_noise_covariance(*layout_, theta, *ham_, shots).diagonal;
    }

    GradientNoise gradient_and_noise(std::span<const double> theta, long shots) const {
        return gradient_with_noise(*layout_, theta, *ham_, shots);
    }

    HessianMatrix hessian_matrix(std::span<const double> theta) const {
        return vqelab::hessian(*layout_, theta, *ham_);
    }

    const AnsatzLayout& layout() const { return *layout_; }
    const Hamiltonian& hamiltonian() const { return *ham_; }

  private:
    const AnsatzLayout* layout_;
    const Hamiltonian* ham_;
};

/// Synthetic quadratic landscape L(theta) = 1/2 sum_i curvature_i theta_i^2
/// with constant additive Gaussian gradient noise of variance `noise_c` per
/// component (shot count is ignored). Gives closed-form Ornstein-Uhlenbeck
/// statistics for validating the optimizers and the stationarity diagnostics.
class QuadraticLandscape {
  public:
    QuadraticLandscape(std::vector<double> curvature, double noise_c)
        : curvature_(std::move(curvature)), noise_c_(noise_c) {
        if (curvature_.empty()) throw std::invalid_argument("QuadraticLandscape: empty curvature");
        if (noise_c_ < 0.0) throw std::invalid_argument("QuadraticLandscape: negative noise");
    }

    std::size_t dimension() const { return curvature_.size(); }

    double loss(std::span<const double> theta) const {
        double s = 0.0;
        for (std::size_t i = 0; i < curvature_.size(); ++i) s += curvature_[i] * theta[i] * theta[i];
        return 0.5 * s;
    }

    std::vector<double> gradient(std::span<const double> theta) const {
        std::vector<double> g(curvature_.size());
        for (std::size_t i = 0; i < curvature_.size(); ++i) g[i] = curvature_[i] * theta[i];
        return g;
    }

    std::vector<double> sampled_gradient(std::span<const double> theta, long /*shots*/,
                                         RngStream rng) const {
        std::vector<double> g = gradient(theta);
        const double sd = std::sqrt(noise_c_);
        for (double& gi : g) gi += sd * rng.normal();
        return g;
    }

    std::vector<double> noise_diagonal(std::span<const double>, long /*shots*/) const {
        return std::vector<double>(curvature_.size(), noise_c_);
    }

    GradientNoise gradient_and_noise(std::span<const double> theta, long shots) const {
        GradientNoise gn;
        gn.gradient = gradient(theta);
        gn.covariance_diagonal = noise_diagonal(theta, shots);
        return gn;
    }

    HessianMatrix hessian_matrix(std::span<const double>) const {
        HessianMatrix h = HessianMatrix::zero(curvature_.size());
        for (std::size_t i = 0; i < curvature_.size(); ++i) h.at(i, i) = curvature_[i];
        return h;
    }

  private:
    std::vector<double> curvature_;
    double noise_c_;
};

static_assert(Landscape<VqeLandscape>);
static_assert(Landscape<QuadraticLandscape>);

} // namespace vqelab
