// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "vqelab/state_vector.hpp"

namespace vqelab {

enum class Pauli : unsigned char { I, X, Y, Z };

inline char pauli_letter(Pauli p) {
    switch (p) {
        case Pauli::I: return 'I';
        case Pauli::X: return 'X';
        case Pauli::Y: return 'Y';
        case Pauli::Z: return 'Z';
    }
    return '?';
}

inline Pauli pauli_from_letter(char c) {
    switch (c) {
        case 'I': return Pauli::I;
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
        default: throw std::invalid_argument(std::string("unknown Pauli letter '") + c + "'");
    }
}

/// One weighted Pauli word. ops[q] is the letter on qubit q.
struct PauliString {
    double coefficient = 0.0;
    std::vector<Pauli> ops;

    /// Letters given qubit-0-first, e.g. {"XXII", 1.5} is 1.5 * X_0 X_1.
    static PauliString from_letters(double coefficient, const std::string& letters) {
        PauliString s;
        s.coefficient = coefficient;
        s.ops.reserve(letters.size());
        for (char c : letters) s.ops.push_back(pauli_from_letter(c));
        return s;
    }

    int n_qubits() const { return static_cast<int>(ops.size()); }

    std::uint64_t mask_of(Pauli p) const {
        std::uint64_t m = 0;
        for (std::size_t q = 0; q < ops.size(); ++q) {
            if (ops[q] == p) m |= std::uint64_t{1} << q;
        }
        return m;
    }
};

/// Pauli strings sharing one measurement basis: every non-identity letter
/// equals `basis`, so a single local rotation diagonalizes the whole group.
struct ObservableGroup {
    Pauli basis = Pauli::Z;
    std::vector<PauliString> strings;

    int n_qubits() const { return strings.empty() ? 0 : strings.front().n_qubits(); }

    void validate() const {
        if (basis == Pauli::I) throw std::invalid_argument("ObservableGroup: basis must be X, Y or Z");
        for (const auto& s : strings) {
            if (s.n_qubits() != n_qubits()) {
                throw std::invalid_argument("ObservableGroup: inconsistent string widths");
            }
            if (!std::isfinite(s.coefficient)) {
                throw std::invalid_argument("ObservableGroup: non-finite coefficient");
            }
            for (Pauli p : s.ops) {
                if (p != Pauli::I && p != basis) {
                    throw std::invalid_argument("ObservableGroup: letter does not match group basis");
                }
            }
        }
    }
};

struct Hamiltonian {
    std::string name;
    std::vector<ObservableGroup> groups;

    int n_qubits() const { return groups.empty() ? 0 : groups.front().n_qubits(); }

    void validate() const {
        for (const auto& g : groups) {
            g.validate();
            if (g.n_qubits() != n_qubits()) {
                throw std::invalid_argument("Hamiltonian: inconsistent group widths");
            }
        }
    }
};

/// 1D XYZ chain: sum_i jx X_i X_{i+1} + jy Y_i Y_{i+1} + jz Z_i Z_{i+1},
/// grouped by basis. The bond (n-1, 0) is included iff `periodic`.
inline Hamiltonian heisenberg_preset(int n_sites, double jx, double jy, double jz, bool periodic) {
    if (n_sites < 2) {
        throw std::invalid_argument("heisenberg_preset: need at least 2 sites");
    }
    const int n_bonds = periodic ? n_sites : n_sites - 1;
    Hamiltonian ham;
    ham.name = "heisenberg";
    const Pauli bases[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    const double couplings[3] = {jx, jy, jz};
    for (int b = 0; b < 3; ++b) {
        ObservableGroup group;
        group.basis = bases[b];
        for (int i = 0; i < n_bonds; ++i) {
            PauliString s;
            s.coefficient = couplings[b];
            s.ops.assign(n_sites, Pauli::I);
            s.ops[i] = bases[b];
            s.ops[(i + 1) % n_sites] = bases[b];
            group.strings.push_back(std::move(s));
        }
        ham.groups.push_back(std::move(group));
    }
    ham.validate();
    return ham;
}

inline void check_width(const StateVector& state, int observable_width, const char* where) {
    if (state.n_qubits != observable_width) {
        throw std::invalid_argument(std::string(where) + ": state has " +
                                    std::to_string(state.n_qubits) + " qubits, observable has " +
                                    std::to_string(observable_width));
    }
}

/// accum += P|in> for one Pauli string P. For basis index i the string maps
/// |i> to phase * |i ^ flip> with flip = Xmask|Ymask and
/// phase = coeff * i^{|Y|} * (-1)^{popcount(i & (Ymask|Zmask))}.
inline void accumulate_pauli_apply(const StateVector& in, const PauliString& s, StateVector& accum) {
    const std::uint64_t xm = s.mask_of(Pauli::X);
    const std::uint64_t ym = s.mask_of(Pauli::Y);
    const std::uint64_t zm = s.mask_of(Pauli::Z);
    const std::uint64_t flip = xm | ym;
    const std::uint64_t sign_mask = ym | zm;
    static constexpr complex_t i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const complex_t base = s.coefficient * i_pow[std::popcount(ym) & 3];
    const std::size_t dim = in.dimension();
    for (std::size_t i = 0; i < dim; ++i) {
        const int sign = std::popcount(i & sign_mask) & 1 ? -1 : 1;
        accum.amplitudes[i ^ flip] += static_cast<double>(sign) * base * in.amplitudes[i];
    }
}

inline StateVector apply_group(const StateVector& state, const ObservableGroup& group) {
    check_width(state, group.n_qubits(), "apply_group");
    StateVector out;
    out.n_qubits = state.n_qubits;
    out.amplitudes.assign(state.dimension(), complex_t{0.0, 0.0});
    for (const auto& s : group.strings) {
        accumulate_pauli_apply(state, s, out);
    }
    return out;
}

struct GroupMoments {
    double mean = 0.0;     // <h>
    double variance = 0.0; // <h^2> - <h>^2, clamped to >= 0
};

/// One pass gives both moments: with phi = h|psi>, <h> = Re<psi|phi> and
/// <h^2> = <phi|phi> (h Hermitian).
inline GroupMoments group_moments(const StateVector& state, const ObservableGroup& group) {
    const StateVector phi = apply_group(state, group);
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        mean += std::real(std::conj(state.amplitudes[i]) * phi.amplitudes[i]);
        second += std::norm(phi.amplitudes[i]);
    }
    GroupMoments m;
    m.mean = mean;
    m.variance = std::max(0.0, second - mean * mean);
    return m;
}

inline double exact_expectation(const StateVector& state, const ObservableGroup& group) {
    check_width(state, group.n_qubits(), "exact_expectation");
    const StateVector phi = apply_group(state, group);
    return std::real(inner_product(state, phi));
}

inline double exact_expectation(const StateVector& state, const Hamiltonian& ham) {
    check_width(state, ham.n_qubits(), "exact_expectation");
    double total = 0.0;
    for (const auto& g : ham.groups) total += exact_expectation(state, g);
    return total;
}

inline double exact_variance(const StateVector& state, const ObservableGroup& group) {
    check_width(state, group.n_qubits(), "exact_variance");
    return group_moments(state, group).variance;
}

} // namespace vqelab
