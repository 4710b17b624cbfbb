// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/gradient.hpp"

namespace vqelab {

struct HessianMatrix {
    std::size_t dim = 0;
    std::vector<double> entries; // row-major, dim x dim

    double& at(std::size_t i, std::size_t j) { return entries[i * dim + j]; }
    double at(std::size_t i, std::size_t j) const { return entries[i * dim + j]; }

    static HessianMatrix zero(std::size_t dim) {
        HessianMatrix h;
        h.dim = dim;
        h.entries.assign(dim * dim, 0.0);
        return h;
    }

    bool is_symmetric(double tol = 1e-9) const {
        for (std::size_t i = 0; i < dim; ++i) {
            for (std::size_t j = i + 1; j < dim; ++j) {
                if (std::abs(at(i, j) - at(j, i)) > tol) return false;
            }
        }
        return true;
    }
};

/// Exact Hessian by the double parameter-shift identity
/// H_ij = 1/4 [L(++) - L(+-) - L(-+) + L(--)]
/// with shifts of pi/2 along e_i and e_j and exact expectations.
inline HessianMatrix hessian(const AnsatzLayout& layout, std::span<const double> params,
                             const Hamiltonian& ham) {
    constexpr double shift = std::numbers::pi / 2;
    const std::size_t p = params.size();
    std::vector<double> shifted(params.begin(), params.end());
    HessianMatrix h = HessianMatrix::zero(p);
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = i; j < p; ++j) {
            double value = 0.0;
            for (int si = 0; si < 2; ++si) {
                for (int sj = 0; sj < 2; ++sj) {
                    shifted[i] += (si == 0 ? shift : -shift);
                    shifted[j] += (sj == 0 ? shift : -shift);
                    const double sign = (si == sj) ? 1.0 : -1.0;
                    value += sign * exact_loss(layout, shifted, ham);
                    shifted[i] = params[i];
                    shifted[j] = params[j];
                }
            }
            h.at(i, j) = 0.25 * value;
            h.at(j, i) = h.at(i, j);
        }
    }
    return h;
}

struct EigenSystem {
    std::vector<double> values;               // ascending
    std::vector<std::vector<double>> vectors; // vectors[k] pairs with values[k]
};

/// Cyclic Jacobi for real symmetric matrices. Converges when the off-diagonal
/// Frobenius norm drops below 1e-12 (relative to the matrix norm), with a
/// hard cap of 100 sweeps. Plenty for the dimensions used here (<= 64).
inline EigenSystem jacobi_eigensystem(const HessianMatrix& input) {
    if (input.entries.size() != input.dim * input.dim) {
        throw std::invalid_argument("jacobi_eigensystem: malformed matrix");
    }
    if (!input.is_symmetric(1e-9)) {
        throw std::invalid_argument("jacobi_eigensystem: matrix is not symmetric");
    }
    const std::size_t n = input.dim;
    std::vector<double> a = input.entries;
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    auto off_norm_sq = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
        return s;
    };
    double scale = 0.0;
    for (double x : a) scale = std::max(scale, std::abs(x));
    const double tol = 1e-12 * std::max(1.0, scale);

    for (int sweep = 0; sweep < 100 && off_norm_sq() > tol * tol; ++sweep) {
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) <= 1e-300) continue;
                const double app = a[p * n + p];
                const double aqq = a[q * n + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k * n + p];
                    const double vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t lhs, std::size_t rhs) { return a[lhs * n + lhs] < a[rhs * n + rhs]; });

    EigenSystem sys;
    sys.values.resize(n);
    sys.vectors.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        sys.values[k] = a[order[k] * n + order[k]];
        for (std::size_t row = 0; row < n; ++row) sys.vectors[k][row] = v[row * n + order[k]];
    }
    return sys;
}

inline std::vector<double> hessian_eigenvalues(const HessianMatrix& h) {
    return jacobi_eigensystem(h).values;
}

} // namespace vqelab
