// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "vqelab/ansatz.hpp"
#include "vqelab/pauli.hpp"
#include "vqelab/rng.hpp"
#include "vqelab/state_vector.hpp"

namespace vqelab {

namespace detail {

// Basis change into the group's diagonal frame: H for X (HXH = Z) and the
// fixed matrix H S^dagger for Y (it conjugates Y to Z). Z needs nothing.
inline void rotate_to_measurement_basis(StateVector& state, const ObservableGroup& group) {
    constexpr double inv_sqrt2 = 0.70710678118654752440;
    const std::array<complex_t, 4> h_gate = {
        complex_t{inv_sqrt2, 0}, complex_t{inv_sqrt2, 0},
        complex_t{inv_sqrt2, 0}, complex_t{-inv_sqrt2, 0}};
    const std::array<complex_t, 4> y_to_z = {
        complex_t{inv_sqrt2, 0}, complex_t{0, -inv_sqrt2},
        complex_t{inv_sqrt2, 0}, complex_t{0, inv_sqrt2}};

    if (group.basis == Pauli::Z) return;
    std::uint64_t active = 0;
    for (const auto& s : group.strings) active |= s.mask_of(group.basis);
    for (int q = 0; q < state.n_qubits; ++q) {
        if (active & (std::uint64_t{1} << q)) {
            apply_one_qubit(state, q, group.basis == Pauli::X ? h_gate : y_to_z);
        }
    }
}

// After rotation every string is a Z-word on its active qubits, so the group
// eigenvalue of bitstring b is sum_s coeff_s * (-1)^popcount(b & mask_s).
inline std::vector<double> diagonal_value_table(const ObservableGroup& group) {
    const std::size_t dim = std::size_t{1} << group.n_qubits();
    std::vector<std::uint64_t> masks;
    masks.reserve(group.strings.size());
    for (const auto& s : group.strings) masks.push_back(s.mask_of(group.basis));
    std::vector<double> table(dim, 0.0);
    for (std::size_t b = 0; b < dim; ++b) {
        double v = 0.0;
        for (std::size_t k = 0; k < masks.size(); ++k) {
            v += (std::popcount(b & masks[k]) & 1) ? -group.strings[k].coefficient
                                                   : group.strings[k].coefficient;
        }
        table[b] = v;
    }
    return table;
}

} // namespace detail

/// Finite-shot estimate of <h> for one same-basis group: rotate a copy of the
/// state into the diagonal frame, draw `shots` bitstrings by inverse CDF over
/// the 2^n probability vector, and average the group eigenvalue. All strings
/// in the group are evaluated on the same shot, as in grouped hardware
/// measurement. Unbiased for exact_expectation(state, group).
inline double sample_group_mean(const StateVector& state, const ObservableGroup& group,
                                long shots, RngStream rng) {
    check_width(state, group.n_qubits(), "sample_group_mean");
    if (shots < 1) throw std::invalid_argument("sample_group_mean: shots must be >= 1");

    StateVector rotated = state;
    detail::rotate_to_measurement_basis(rotated, group);

    const std::size_t dim = rotated.dimension();
    std::vector<double> cdf(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += std::norm(rotated.amplitudes[i]);
        cdf[i] = acc;
    }
    cdf[dim - 1] = 1.0; // guard against rounding in the tail

    const std::vector<double> values = detail::diagonal_value_table(group);
    double total = 0.0;
    for (long shot = 0; shot < shots; ++shot) {
        const double u = rng.uniform01();
        const std::size_t b = std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        total += values[b];
    }
    return total / static_cast<double>(shots);
}

/// Finite-shot loss estimate: sum of independent group means, each group
/// measured `shots_per_group` times on its own substream.
inline double estimate_energy(const AnsatzLayout& layout, std::span<const double> params,
                              const Hamiltonian& ham, long shots_per_group, RngStream rng) {
    if (shots_per_group < 1) {
        throw std::invalid_argument("estimate_energy: shots_per_group must be >= 1");
    }
    const StateVector state = prepare_ansatz_state(layout, params);
    double total = 0.0;
    for (std::size_t g = 0; g < ham.groups.size(); ++g) {
        total += sample_group_mean(state, ham.groups[g], shots_per_group, rng.child(g));
    }
    return total;
}

} // namespace vqelab
