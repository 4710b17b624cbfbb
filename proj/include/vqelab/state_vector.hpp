// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vqelab {

using complex_t = std::complex<double>;

/// Dense n-qubit state. Qubit 0 is the least significant bit of the
/// amplitude index: |q3 q2 q1 q0> lives at index q3*8 + q2*4 + q1*2 + q0.
struct StateVector {
    int n_qubits = 0;
    std::vector<complex_t> amplitudes;

    std::size_t dimension() const { return amplitudes.size(); }

    double norm_sq() const {
        double s = 0.0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
};

inline StateVector init_zero_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > 24) {
        throw std::invalid_argument("init_zero_state: n_qubits must be in [1, 24], got " +
                                    std::to_string(n_qubits));
    }
    StateVector state;
    state.n_qubits = n_qubits;
    state.amplitudes.assign(std::size_t{1} << n_qubits, complex_t{0.0, 0.0});
    state.amplitudes[0] = 1.0;
    return state;
}

inline void check_qubit_index(const StateVector& state, int qubit, const char* where) {
    if (qubit < 0 || qubit >= state.n_qubits) {
        throw std::out_of_range(std::string(where) + ": qubit index " + std::to_string(qubit) +
                                " out of range for " + std::to_string(state.n_qubits) + " qubits");
    }
}

/// Apply a 2x2 matrix u = {u00, u01, u10, u11} (row-major) to one qubit.
inline void apply_one_qubit(StateVector& state, int qubit, const std::array<complex_t, 4>& u) {
    check_qubit_index(state, qubit, "apply_one_qubit");
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t dim = state.dimension();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const complex_t a0 = state.amplitudes[i];
        const complex_t a1 = state.amplitudes[i | bit];
        state.amplitudes[i] = u[0] * a0 + u[1] * a1;
        state.amplitudes[i | bit] = u[2] * a0 + u[3] * a1;
    }
}

/// RY(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]].
inline void apply_ry(StateVector& state, int qubit, double angle) {
    check_qubit_index(state, qubit, "apply_ry");
    const double c = std::cos(0.5 * angle);
    const double s = std::sin(0.5 * angle);
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t dim = state.dimension();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const complex_t a0 = state.amplitudes[i];
        const complex_t a1 = state.amplitudes[i | bit];
        state.amplitudes[i] = c * a0 - s * a1;
        state.amplitudes[i | bit] = s * a0 + c * a1;
    }
}

/// CNOT = |0><0| (x) I + |1><1| (x) X on (control, target).
inline void apply_cnot(StateVector& state, int control, int target) {
    check_qubit_index(state, control, "apply_cnot");
    check_qubit_index(state, target, "apply_cnot");
    if (control == target) {
        throw std::out_of_range("apply_cnot: control and target must differ");
    }
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t dim = state.dimension();
    for (std::size_t i = 0; i < dim; ++i) {
        // swap each pair (control=1, target=0) <-> (control=1, target=1) once
        if ((i & cbit) && !(i & tbit)) {
            std::swap(state.amplitudes[i], state.amplitudes[i | tbit]);
        }
    }
}

/// <a|b>
inline complex_t inner_product(const StateVector& a, const StateVector& b) {
    if (a.dimension() != b.dimension()) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    complex_t s{0.0, 0.0};
    for (std::size_t i = 0; i < a.dimension(); ++i) {
        s += std::conj(a.amplitudes[i]) * b.amplitudes[i];
    }
    return s;
}

} // namespace vqelab
