// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vqelab/state_vector.hpp"

namespace vqelab {

using ParameterVector = std::vector<double>;

/// Hardware-efficient ansatz: n_layers RY layers with the entangler (a fixed
/// CNOT sequence) applied between consecutive layers. Parameters are consumed
/// qubit-major: layer l uses indices [l*n_qubits, (l+1)*n_qubits).
struct AnsatzLayout {
    int n_qubits = 0;
    int n_layers = 0;
    std::vector<std::pair<int, int>> entangler; // (control, target)

    int parameter_count() const { return n_qubits * n_layers; }

    void validate() const {
        if (n_qubits < 1) throw std::invalid_argument("AnsatzLayout: n_qubits must be positive");
        if (n_layers < 1) throw std::invalid_argument("AnsatzLayout: n_layers must be positive");
        for (const auto& [c, t] : entangler) {
            if (c < 0 || c >= n_qubits || t < 0 || t >= n_qubits) {
                throw std::invalid_argument("AnsatzLayout: entangler qubit index out of range");
            }
            if (c == t) {
                throw std::invalid_argument("AnsatzLayout: entangler control equals target");
            }
        }
    }

    /// Descending CNOT ladder (0,1), (1,2), ..., (n-2, n-1).
    static AnsatzLayout linear_entangler(int n_qubits, int n_layers) {
        AnsatzLayout layout;
        layout.n_qubits = n_qubits;
        layout.n_layers = n_layers;
        for (int q = 0; q + 1 < n_qubits; ++q) {
            layout.entangler.emplace_back(q, q + 1);
        }
        layout.validate();
        return layout;
    }
};

/// U(theta)|0...0>. No entangler after the final RY layer.
inline StateVector prepare_ansatz_state(const AnsatzLayout& layout, std::span<const double> params) {
    layout.validate();
    if (static_cast<int>(params.size()) != layout.parameter_count()) {
        throw std::invalid_argument("prepare_ansatz_state: expected " +
                                    std::to_string(layout.parameter_count()) + " parameters, got " +
                                    std::to_string(params.size()));
    }
    StateVector state = init_zero_state(layout.n_qubits);
    for (int layer = 0; layer < layout.n_layers; ++layer) {
        for (int q = 0; q < layout.n_qubits; ++q) {
            apply_ry(state, q, params[static_cast<std::size_t>(layer) * layout.n_qubits + q]);
        }
        if (layer + 1 < layout.n_layers) {
            for (const auto& [c, t] : layout.entangler) {
                apply_cnot(state, c, t);
            }
        }
    }
    return state;
}

} // namespace vqelab
