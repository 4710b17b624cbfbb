// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "vqelab/exact_diag.hpp"
#include "vqelab/landscape.hpp"
#include "vqelab/optimizer.hpp"

namespace vqelab {

enum class CriticalKind { saddle, excited, minimum };

inline const char* critical_kind_name(CriticalKind k) {
    switch (k) {
        case CriticalKind::saddle: return "saddle";
        case CriticalKind::excited: return "excited";
        case CriticalKind::minimum: return "minimum";
    }
    return "?";
}

inline CriticalKind critical_kind_from_name(const std::string& s) {
    if (s == "saddle") return CriticalKind::saddle;
    if (s == "excited") return CriticalKind::excited;
    if (s == "minimum") return CriticalKind::minimum;
    throw std::invalid_argument("unknown critical point kind '" + s + "'");
}

/// A frozen critical point: the shared initial condition for escape and
/// fluctuation experiments. `layout.n_qubits == 0` marks a synthetic
/// (non-circuit) landscape; only circuit checkpoints can be saved to disk.
struct CriticalPointCheckpoint {
    AnsatzLayout layout;
    std::vector<double> params;
    double loss = 0.0;
    double grad_norm = 0.0;
    double grad_tol = 0.0;
    std::vector<double> hessian_eigenvalues; // ascending
    CriticalKind kind = CriticalKind::saddle;

    double min_eigenvalue() const {
        return hessian_eigenvalues.empty() ? 0.0 : hessian_eigenvalues.front();
    }
};

/// saddle: a clearly negative direction exists. minimum/excited both have a
/// near-flat-or-positive spectrum; they are told apart by the loss relative
/// to the global minimum when a reference energy is available.
inline CriticalKind classify_critical_point(std::span<const double> eigenvalues_ascending,
                                            double loss,
                                            std::optional<double> ground_energy) {
    const double min_eig = eigenvalues_ascending.empty() ? 0.0 : eigenvalues_ascending.front();
    if (min_eig < -1e-3) return CriticalKind::saddle;
    if (ground_energy && loss > *ground_energy + 1e-3 && std::abs(min_eig) <= 1e-3) {
        return CriticalKind::excited;
    }
    return CriticalKind::minimum;
}

struct LocatorFailure : std::runtime_error {
    LocatorFailure(const std::string& message, Trajectory traj)
        : std::runtime_error(message), trajectory(std::move(traj)) {}
    Trajectory trajectory;
};

struct LocateOptions {
    double learning_rate = 0.05;
    double stop_time = 2000.0;
    double grad_tol = 1e-3;
    long record_stride = 10; // for the trajectory attached to failures
};

/// Exact GD from `init`; stops at the first point with |grad| < grad_tol, or
/// at stop_time. Returns the point plus the trajectory walked to get there.
template <Landscape L>
std::pair<CriticalPointCheckpoint, Trajectory> locate_critical_point(
    const L& landscape, std::span<const double> init, const LocateOptions& opts,
    std::optional<double> ground_energy = std::nullopt) {
    if (!(opts.learning_rate > 0.0) || !(opts.stop_time > 0.0) || !(opts.grad_tol > 0.0)) {
        throw std::invalid_argument("locate_critical_point: eta, stop_time, grad_tol must be > 0");
    }
    const long max_steps = static_cast<long>(std::ceil(opts.stop_time / opts.learning_rate));

    Trajectory traj;
    traj.config.kind = OptimizerKind::gd;
    traj.config.learning_rate = opts.learning_rate;
    traj.config.max_steps = max_steps;
    traj.config.record_stride = opts.record_stride;

    std::vector<double> theta(init.begin(), init.end());
    std::vector<double> grad = landscape.gradient(theta);
    auto norm = [](const std::vector<double>& g) {
        double s = 0.0;
        for (double x : g) s += x * x;
        return std::sqrt(s);
    };
    traj.records.push_back({0, 0.0, landscape.loss(theta)});

    long step = 0;
    while (norm(grad) >= opts.grad_tol && step < max_steps) {
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= opts.learning_rate * grad[i];
        ++step;
        detail::check_finite(theta, step);
        if (step % opts.record_stride == 0 || step == max_steps) {
            traj.records.push_back(
                {step, static_cast<double>(step) * opts.learning_rate, landscape.loss(theta)});
        }
        grad = landscape.gradient(theta);
    }
    traj.steps_taken = step;
    traj.final_params = theta;

    CriticalPointCheckpoint cp;
    cp.params = theta;
    cp.loss = landscape.loss(theta);
    cp.grad_norm = norm(grad);
    cp.grad_tol = opts.grad_tol;
    cp.hessian_eigenvalues = hessian_eigenvalues(landscape.hessian_matrix(theta));
    cp.kind = classify_critical_point(cp.hessian_eigenvalues, cp.loss, ground_energy);
    return {std::move(cp), std::move(traj)};
}

/// VQE flavor: attaches the circuit layout and uses the exact ground energy
/// to separate minima from marginally stable excited states.
inline CriticalPointCheckpoint find_saddle(const AnsatzLayout& layout, const Hamiltonian& ham,
                                           std::span<const double> init, double eta,
                                           double stop_time, double grad_tol) {
    const VqeLandscape landscape(layout, ham);
    LocateOptions opts;
    opts.learning_rate = eta;
    opts.stop_time = stop_time;
    opts.grad_tol = grad_tol;
    const double ground = exact_diagonalize(ham, false).eigenvalues.front();
    auto [cp, traj] = locate_critical_point(landscape, init, opts, ground);
    cp.layout = layout;
    return cp;
}

inline std::vector<double> random_initial_params(const AnsatzLayout& layout, RngStream rng) {
    std::vector<double> params(static_cast<std::size_t>(layout.parameter_count()));
    for (double& p : params) p = (2.0 * rng.uniform01() - 1.0) * std::numbers::pi;
    return params;
}

struct ScanOptions {
    LocateOptions locate;
    int budget = 200;            // number of random initializations to try
    std::uint64_t scan_seed = 0; // stream for drawing initializations
};

/// Random-restart scan for a GD plateau whose loss lands in
/// [loss_min, loss_max] and whose Hessian has a direction below
/// max_min_eigenvalue. Throws LocatorFailure when the budget runs out.
inline CriticalPointCheckpoint scan_for_saddle(const AnsatzLayout& layout, const Hamiltonian& ham,
                                               double loss_min, double loss_max,
                                               double max_min_eigenvalue,
                                               const ScanOptions& opts) {
    const VqeLandscape landscape(layout, ham);
    const double ground = exact_diagonalize(ham, false).eigenvalues.front();
    const RngStream scan(opts.scan_seed);
    Trajectory last;
    for (int attempt = 0; attempt < opts.budget; ++attempt) {
        const std::vector<double> init = random_initial_params(layout, scan.child(attempt));
        auto [cp, traj] = locate_critical_point(landscape, init, opts.locate, ground);
        last = std::move(traj);
        if (cp.grad_norm < opts.locate.grad_tol && cp.loss >= loss_min && cp.loss <= loss_max &&
            cp.min_eigenvalue() < max_min_eigenvalue) {
            cp.layout = layout;
            return cp;
        }
    }
    throw LocatorFailure("scan_for_saddle: no matching saddle within budget " +
                             std::to_string(opts.budget),
                         std::move(last));
}

/// Scan random initializations until GD settles on a marginally stable point
/// whose loss matches a target eigenvalue of the Hamiltonian.
inline CriticalPointCheckpoint find_excited_state(const AnsatzLayout& layout,
                                                  const Hamiltonian& ham, double target_energy,
                                                  double tolerance, const ScanOptions& opts) {
    const Spectrum spec = exact_diagonalize(ham, false);
    bool in_spectrum = false;
    for (double e : spec.eigenvalues) {
        if (std::abs(e - target_energy) < 1e-6) {
            in_spectrum = true;
            break;
        }
    }
    if (!in_spectrum) {
        throw std::invalid_argument("find_excited_state: target energy is not an eigenvalue");
    }

    const VqeLandscape landscape(layout, ham);
    const double ground = spec.eigenvalues.front();
    const RngStream scan(opts.scan_seed);
    Trajectory last;
    for (int attempt = 0; attempt < opts.budget; ++attempt) {
        const std::vector<double> init = random_initial_params(layout, scan.child(attempt));
        auto [cp, traj] = locate_critical_point(landscape, init, opts.locate, ground);
        last = std::move(traj);
        if (cp.grad_norm < opts.locate.grad_tol && std::abs(cp.loss - target_energy) < tolerance &&
            std::abs(cp.min_eigenvalue()) <= 1e-3) {
            cp.kind = CriticalKind::excited;
            cp.layout = layout;
            return cp;
        }
    }
    throw LocatorFailure("find_excited_state: scan budget " + std::to_string(opts.budget) +
                             " exhausted without reaching energy " + std::to_string(target_energy),
                         std::move(last));
}

// ---------------------------------------------------------------------------
// Plain-text persistence. Parameters are written as hex floats so a reloaded
// checkpoint is bit-identical; everything else uses 17 significant digits.

namespace detail {

inline std::string hex_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

inline std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_layout_block(std::ostream& out, const AnsatzLayout& layout) {
    out << "n_qubits " << layout.n_qubits << "\n";
    out << "n_layers " << layout.n_layers << "\n";
    out << "entangler";
    for (const auto& [c, t] : layout.entangler) out << ' ' << c << '>' << t;
    out << "\n";
}

inline void write_params_block(std::ostream& out, std::span<const double> params) {
    out << "params " << params.size() << "\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
        out << "p " << i << ' ' << hex_double(params[i]) << "\n";
    }
}

class LineReader {
  public:
    explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
        if (!in_) throw std::runtime_error("cannot open " + path.string());
    }

    std::istringstream expect(const std::string& keyword) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            if (line.empty()) continue;
            std::istringstream ss(line);
            std::string head;
            ss >> head;
            if (head != keyword) {
                throw std::runtime_error(path_.string() + ":" + std::to_string(line_no_) +
                                         ": expected '" + keyword + "', got '" + head + "'");
            }
            return ss;
        }
        throw std::runtime_error(path_.string() + ": unexpected end of file, expected '" +
                                 keyword + "'");
    }

  private:
    std::filesystem::path path_;
    std::ifstream in_;
    int line_no_ = 0;
};

inline double parse_any_double(const std::string& token, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') {
        throw std::runtime_error(std::string("bad ") + what + " value '" + token + "'");
    }
    return v;
}

inline AnsatzLayout read_layout_block(LineReader& reader) {
    AnsatzLayout layout;
    reader.expect("n_qubits") >> layout.n_qubits;
    reader.expect("n_layers") >> layout.n_layers;
    std::istringstream ent = reader.expect("entangler");
    std::string pair;
    while (ent >> pair) {
        const auto sep = pair.find('>');
        if (sep == std::string::npos) throw std::runtime_error("bad entangler pair '" + pair + "'");
        layout.entangler.emplace_back(std::stoi(pair.substr(0, sep)),
                                      std::stoi(pair.substr(sep + 1)));
    }
    layout.validate();
    return layout;
}

inline std::vector<double> read_params_block(LineReader& reader) {
    std::size_t count = 0;
    reader.expect("params") >> count;
    std::vector<double> params(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::istringstream ss = reader.expect("p");
        std::size_t index = 0;
        std::string token;
        ss >> index >> token;
        if (index >= count) throw std::runtime_error("parameter index out of range");
        params[index] = parse_any_double(token, "parameter");
    }
    return params;
}

} // namespace detail

inline void save_checkpoint(const CriticalPointCheckpoint& cp, const std::filesystem::path& path) {
    if (cp.layout.n_qubits < 1) {
        throw std::invalid_argument("save_checkpoint: checkpoint has no circuit layout");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "vqelab checkpoint v1\n";
    out << "kind " << critical_kind_name(cp.kind) << "\n";
    out << "loss " << detail::g17(cp.loss) << "\n";
    out << "grad_norm " << detail::g17(cp.grad_norm) << "\n";
    out << "grad_tol " << detail::g17(cp.grad_tol) << "\n";
    detail::write_layout_block(out, cp.layout);
    detail::write_params_block(out, cp.params);
    out << "hessian_eigenvalues " << cp.hessian_eigenvalues.size() << "\n";
    for (std::size_t i = 0; i < cp.hessian_eigenvalues.size(); ++i) {
        out << "e " << i << ' ' << detail::g17(cp.hessian_eigenvalues[i]) << "\n";
    }
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline CriticalPointCheckpoint load_checkpoint(const std::filesystem::path& path) {
    detail::LineReader reader(path);
    {
        std::istringstream header = reader.expect("vqelab");
        std::string doc, version;
        header >> doc >> version;
        if (doc != "checkpoint" || version != "v1") {
            throw std::runtime_error(path.string() + ": not a v1 checkpoint file");
        }
    }
    CriticalPointCheckpoint cp;
    std::string kind;
    reader.expect("kind") >> kind;
    cp.kind = critical_kind_from_name(kind);
    std::string token;
    reader.expect("loss") >> token;
    cp.loss = detail::parse_any_double(token, "loss");
    reader.expect("grad_norm") >> token;
    cp.grad_norm = detail::parse_any_double(token, "grad_norm");
    reader.expect("grad_tol") >> token;
    cp.grad_tol = detail::parse_any_double(token, "grad_tol");
    cp.layout = detail::read_layout_block(reader);
    cp.params = detail::read_params_block(reader);
    if (static_cast<int>(cp.params.size()) != cp.layout.parameter_count()) {
        throw std::runtime_error(path.string() + ": parameter count does not match layout");
    }
    std::size_t n_eigs = 0;
    reader.expect("hessian_eigenvalues") >> n_eigs;
    cp.hessian_eigenvalues.resize(n_eigs);
    for (std::size_t i = 0; i < n_eigs; ++i) {
        std::istringstream ss = reader.expect("e");
        std::size_t index = 0;
        ss >> index >> token;
        if (index >= n_eigs) throw std::runtime_error("eigenvalue index out of range");
        cp.hessian_eigenvalues[index] = detail::parse_any_double(token, "eigenvalue");
    }
    return cp;
}

/// Bare layout+parameters file, used for frozen initial conditions.
inline void save_parameter_file(const AnsatzLayout& layout, std::span<const double> params,
                                const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "vqelab params v1\n";
    detail::write_layout_block(out, layout);
    detail::write_params_block(out, params);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::pair<AnsatzLayout, std::vector<double>> load_parameter_file(
    const std::filesystem::path& path) {
    detail::LineReader reader(path);
    {
        std::istringstream header = reader.expect("vqelab");
        std::string doc, version;
        header >> doc >> version;
        if (doc != "params" || version != "v1") {
            throw std::runtime_error(path.string() + ": not a v1 parameter file");
        }
    }
    AnsatzLayout layout = detail::read_layout_block(reader);
    std::vector<double> params = detail::read_params_block(reader);
    if (static_cast<int>(params.size()) != layout.parameter_count()) {
        throw std::runtime_error(path.string() + ": parameter count does not match layout");
    }
    return {std::move(layout), std::move(params)};
}

} // namespace vqelab
