// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vqelab/pauli.hpp"
#include "vqelab/state_vector.hpp"

namespace vqelab {

struct Spectrum {
    std::vector<double> eigenvalues;       // ascending
    std::vector<StateVector> eigenvectors; // eigenvectors[k] pairs with eigenvalues[k]
};

inline Eigen::MatrixXcd dense_matrix(const Hamiltonian& ham) {
    ham.validate();
    const int n = ham.n_qubits();
    const std::size_t dim = std::size_t{1} << n;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    static constexpr complex_t i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (const auto& group : ham.groups) {
        for (const auto& s : group.strings) {
            const std::uint64_t ym = s.mask_of(Pauli::Y);
            const std::uint64_t flip = s.mask_of(Pauli::X) | ym;
            const std::uint64_t sign_mask = ym | s.mask_of(Pauli::Z);
            const complex_t base = s.coefficient * i_pow[std::popcount(ym) & 3];
            for (std::size_t col = 0; col < dim; ++col) {
                const double sign = (std::popcount(col & sign_mask) & 1) ? -1.0 : 1.0;
                m(col ^ flip, col) += sign * base;
            }
        }
    }
    return m;
}

/// Dense exact diagonalization, the reference for ground/excited energies.
inline Spectrum exact_diagonalize(const Hamiltonian& ham, bool with_vectors = true) {
    const int n = ham.n_qubits();
    if (n < 1 || n > 10) {
        throw std::runtime_error("exact_diagonalize: supported only up to 10 qubits, got " +
                                 std::to_string(n));
    }
    const Eigen::MatrixXcd m = dense_matrix(ham);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        m, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("exact_diagonalize: eigensolver failed");
    }
    Spectrum spec;
    const auto& values = solver.eigenvalues();
    spec.eigenvalues.assign(values.data(), values.data() + values.size());
    if (with_vectors) {
        const auto& vectors = solver.eigenvectors();
        spec.eigenvectors.resize(static_cast<std::size_t>(vectors.cols()));
        for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
            StateVector v;
            v.n_qubits = n;
            v.amplitudes.assign(vectors.col(k).data(), vectors.col(k).data() + vectors.rows());
            spec.eigenvectors[static_cast<std::size_t>(k)] = std::move(v);
        }
    }
    return spec;
}

} // namespace vqelab
