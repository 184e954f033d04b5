// Time evolution in the single-excitation sector
//
// Exact propagation runs through two independent routes: the analytic 2x2
// normal-mode blocks and a dense Jacobi eigendecomposition of H^(1). The weak-
// and strong-coupling effective propagators reuse the mode projection with
// approximated blocks and expose a validity metric instead of refusing to run.

#pragma once

#include "jch/jacobi.hpp"
#include "jch/model.hpp"
#include "jch/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jch {

enum class PropagatorMethod { AnalyticBlocks, DenseOracle, WeakEffective, StrongEffective };

inline const char* to_string(PropagatorMethod m) noexcept {
    switch (m) {
    case PropagatorMethod::AnalyticBlocks: return "analytic";
    case PropagatorMethod::DenseOracle: return "dense";
    case PropagatorMethod::WeakEffective: return "weak";
    case PropagatorMethod::StrongEffective: return "strong";
    }
    return "?";
}

// Uniform grid t_i = t_start + i (t_end - t_start)/(n_samples - 1), units 1/J.
struct TimeGrid {
    double t_start{0.0};
    double t_end{1.0};
    int n_samples{2};

    void validate() const {
        if (!(t_start >= 0.0) || !std::isfinite(t_end) || t_end < t_start) {
            throw std::invalid_argument("TimeGrid: need 0 <= t_start <= t_end");
        }
        if (n_samples < 2) throw std::invalid_argument("TimeGrid: n_samples must be >= 2");
    }

    double step() const noexcept { return (t_end - t_start) / (n_samples - 1); }

    double at(int i) const noexcept {
        if (i == n_samples - 1) return t_end;
        return t_start + (t_end - t_start) * static_cast<double>(i) / (n_samples - 1);
    }

    std::vector<double> times() const {
        validate();
        std::vector<double> t(static_cast<std::size_t>(n_samples));
        for (int i = 0; i < n_samples; ++i) t[static_cast<std::size_t>(i)] = at(i);
        return t;
    }
};

// ------------------------- mode-space projections -----------------------------

namespace detail {

// Photon and atom amplitudes projected on alpha_k / beta_k (v is real, orthogonal).
struct ModeAmplitudes {
    ComplexVector photon;
    ComplexVector atom;
};

inline ModeAmplitudes project(const PureState& state, const ModeTable& modes) {
    const auto& v = modes.profile;
    if (state.n_cavities() != modes.size()) {
        throw std::invalid_argument("state size does not match mode table");
    }
    return {v.transpose().cast<cplx>() * state.photon_block(),
            v.transpose().cast<cplx>() * state.atom_block()};
}

inline PureState reassemble(const ModeAmplitudes& amps, const ModeTable& modes) {
    const auto n = static_cast<Eigen::Index>(modes.size());
    ComplexVector out(2 * n);
    out.head(n) = modes.profile.cast<cplx>() * amps.photon;
    out.tail(n) = modes.profile.cast<cplx>() * amps.atom;
    return PureState(std::move(out));
}

// 2x2 block in the (alpha_k, beta_k) pair: [[pp, pa], [ap, aa]].
struct Block2 {
    cplx pp, pa, ap, aa;
};

// exp(-i t [[w, g], [g, wa]]) in closed form.
inline Block2 exact_block(double w, double wa, double g, double t) {
    const double omega = std::sqrt((wa - w) * (wa - w) + 4.0 * g * g);
    const cplx phase = std::polar(1.0, -0.5 * (w + wa) * t);
    if (omega == 0.0) return {phase, 0.0, 0.0, phase};
    const double c = std::cos(0.5 * omega * t);
    const double s = std::sin(0.5 * omega * t) / omega;
    const cplx i{0.0, 1.0};
    return {phase * (c - i * s * (w - wa)), phase * (-i * s * 2.0 * g), phase * (-i * s * 2.0 * g),
            phase * (c - i * s * (wa - w))};
}

// Resonant JC exchange at rate g on top of a common phase.
inline Block2 rabi_block(double energy, double g, double t) {
    const cplx phase = std::polar(1.0, -energy * t);
    const cplx i{0.0, 1.0};
    return {phase * std::cos(g * t), -i * phase * std::sin(g * t), -i * phase * std::sin(g * t),
            phase * std::cos(g * t)};
}

template <class BlockFn>
PureState evolve_by_blocks(const PureState& state0, const ModeTable& modes, BlockFn&& block_for) {
    auto amps = project(state0, modes);
    for (int m = 1; m <= modes.size(); ++m) {
        const Block2 u = block_for(modes.mode(m));
        const auto idx = static_cast<Eigen::Index>(m - 1);
        const cplx p = amps.photon(idx);
        const cplx a = amps.atom(idx);
        amps.photon(idx) = u.pp * p + u.pa * a;
        amps.atom(idx) = u.ap * p + u.aa * a;
    }
    return reassemble(amps, modes);
}

} // namespace detail

// Exact propagation through the N decoupled (alpha_k, beta_k) blocks.
inline PureState evolve_analytic(const PureState& state0, double t, const ModeTable& modes) {
    const double g = modes.params.coupling;
    const double wa = modes.params.atom_freq;
    return detail::evolve_by_blocks(state0, modes, [&](const Mode& mode) {
        return detail::exact_block(mode.freq, wa, g, t);
    });
}

// ---------------------------- dense oracle -----------------------------------

// Eigenpairs of an arbitrary real symmetric single-excitation Hamiltonian.
class DenseEigensystem {
public:
    explicit DenseEigensystem(const Hamiltonian1Ex& h, const JacobiOptions& opts = {})
        : sys_(jacobi_eigensolve(h.matrix, opts)) {}

    const Eigen::VectorXd& energies() const noexcept { return sys_.values; }
    const Eigen::MatrixXd& vectors() const noexcept { return sys_.vectors; }
    int sweeps() const noexcept { return sys_.sweeps; }

    // sum_n exp(-i E_n t) <n|psi0> |n>
    ComplexVector evolve(const ComplexVector& psi0, double t) const {
        if (psi0.size() != sys_.values.size()) {
            throw std::invalid_argument("DenseEigensystem: state dimension mismatch");
        }
        ComplexVector coeff = sys_.vectors.transpose().cast<cplx>() * psi0;
        for (Eigen::Index n = 0; n < coeff.size(); ++n) {
            coeff(n) *= std::polar(1.0, -sys_.values(n) * t);
        }
        return sys_.vectors.cast<cplx>() * coeff;
    }

private:
    SymmetricEigensystem sys_;
};

inline PureState evolve_dense_oracle(const PureState& state0, double t, const Hamiltonian1Ex& h) {
    return PureState(DenseEigensystem(h).evolve(state0.amplitudes(), t));
}

// ------------------------ effective propagators ------------------------------

// Atomic amplitudes from |e_{x0}> under the single-resonant-mode effective
// Hamiltonian (mode m_res assumed resonant with omega_a).
inline ComplexVector weak_coupling_amplitudes(int x0, double t, const ModeTable& modes, int resonant_m) {
    const int n = modes.size();
    if (x0 < 1 || x0 > n) throw std::out_of_range("weak_coupling_amplitudes: x0 out of range");
    modes.mode(resonant_m);
    const double g = modes.params.coupling;
    const cplx phase = std::polar(1.0, -modes.params.atom_freq * t);
    ComplexVector c(n);
    for (int x = 1; x <= n; ++x) {
        double off_resonant = 0.0;
        for (int m = 1; m <= n; ++m) {
            if (m != resonant_m) off_resonant += modes.v(m, x) * modes.v(m, x0);
        }
        const double resonant = std::cos(g * t) * modes.v(resonant_m, x) * modes.v(resonant_m, x0);
        c(x - 1) = phase * (off_resonant + resonant);
    }
    return c;
}

// Full state for the same evolution, photons populated only through the resonant mode.
inline PureState weak_coupling_state(int x0, double t, const ModeTable& modes, int resonant_m) {
    const int n = modes.size();
    auto state = PureState::zero(n);
    state.amplitudes().tail(n) = weak_coupling_amplitudes(x0, t, modes, resonant_m);
    const double g = modes.params.coupling;
    const cplx factor = cplx{0.0, -1.0} * std::polar(1.0, -modes.params.atom_freq * t) * std::sin(g * t);
    for (int x = 1; x <= n; ++x) {
        state.amplitudes()(x - 1) = factor * modes.v(resonant_m, x) * modes.v(resonant_m, x0);
    }
    return state;
}

// Atomic amplitudes from |e_{x0}> with decoupled polariton branches:
// c_{a,x}(t) = cos(g t) sum_k exp(-i (omega_k + omega_a) t / 2) v_{k,x} v_{k,x0}.
inline ComplexVector strong_coupling_amplitudes(int x0, double t, const ModeTable& modes) {
    const int n = modes.size();
    if (x0 < 1 || x0 > n) throw std::out_of_range("strong_coupling_amplitudes: x0 out of range");
    const double g = modes.params.coupling;
    ComplexVector weights(n);
    for (int m = 1; m <= n; ++m) {
        weights(m - 1) = std::polar(1.0, -0.5 * (modes.mode(m).freq + modes.params.atom_freq) * t) *
                         modes.v(m, x0);
    }
    ComplexVector c = modes.profile.cast<cplx>() * weights;
    return std::cos(g * t) * c;
}

// g / min_{k != k'} |Delta_k|; small means the single-mode picture holds.
inline double weak_validity_metric(const ModeTable& modes, int resonant_m) {
    modes.mode(resonant_m);
    double min_detuning = std::numeric_limits<double>::infinity();
    for (const auto& mode : modes.modes) {
        if (mode.m == resonant_m) continue;
        min_detuning = std::min(min_detuning, std::abs(modes.params.atom_freq - mode.freq));
    }
    return modes.params.coupling / min_detuning;
}

// 2 (2J + |omega_a|) / g; small means g dominates band width and detuning.
inline double strong_validity_metric(const ModelParams& params) {
    if (params.coupling == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * (2.0 * params.hopping + std::abs(params.atom_freq)) / params.coupling;
}

inline constexpr double kValidityThreshold = 0.1;

// -------------------------- polariton basis ----------------------------------

// Columns are |+_x> = (|1_x> + |e_x>)/sqrt2 (first N) and |-_x> (last N) in the
// site basis.
inline RealMatrix polariton_basis(int n_cavities) {
    const auto n = static_cast<Eigen::Index>(n_cavities);
    const double r = 1.0 / std::numbers::sqrt2;
    RealMatrix p = RealMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index x = 0; x < n; ++x) {
        p(x, x) = r;
        p(n + x, x) = r;
        p(x, n + x) = r;
        p(n + x, n + x) = -r;
    }
    return p;
}

// H^(1) written on {|+_x>, |-_x>}. With drop_cross_terms every element coupling
// the two branches is removed, leaving two independent chains at +/- g with
// hopping -J/2.
inline Hamiltonian1Ex build_polariton_hamiltonian(const ModelParams& params, bool drop_cross_terms) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(params.n_cavities);
    const double mean = 0.5 * (params.cavity_freq + params.atom_freq);
    const double half_detuning = 0.5 * (params.cavity_freq - params.atom_freq);
    const double half_hop = 0.5 * params.hopping;
    RealMatrix h = RealMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index x = 0; x < n; ++x) {
        h(x, x) = mean + params.coupling;
        h(n + x, n + x) = mean - params.coupling;
        if (!drop_cross_terms) {
            h(x, n + x) = half_detuning;
            h(n + x, x) = half_detuning;
        }
    }
    for (Eigen::Index x = 0; x + 1 < n; ++x) {
        h(x, x + 1) = h(x + 1, x) = -half_hop;
        h(n + x, n + x + 1) = h(n + x + 1, n + x) = -half_hop;
        if (!drop_cross_terms) {
            h(x, n + x + 1) = h(n + x + 1, x) = -half_hop;
            h(n + x, x + 1) = h(x + 1, n + x) = -half_hop;
        }
    }
    return {std::move(h)};
}

inline PureState to_polariton_basis(const PureState& site_state) {
    return PureState(polariton_basis(site_state.n_cavities()).transpose().cast<cplx>() *
                     site_state.amplitudes());
}

inline PureState from_polariton_basis(const PureState& polariton_state) {
    return PureState(polariton_basis(polariton_state.n_cavities()).cast<cplx>() *
                     polariton_state.amplitudes());
}

// ------------------------------ Propagator -----------------------------------

class Propagator {
public:
    static Propagator analytic(const ModelParams& params) {
        return Propagator(PropagatorMethod::AnalyticBlocks, params);
    }

    static Propagator dense(const ModelParams& params, const JacobiOptions& opts = {}) {
        Propagator p(PropagatorMethod::DenseOracle, params);
        p.dense_ = std::make_shared<const DenseEigensystem>(build_hamiltonian(params), opts);
        return p;
    }

    // Dense oracle on an arbitrary real symmetric Hamiltonian of matching size.
    static Propagator dense(const ModelParams& params, const Hamiltonian1Ex& h,
                            const JacobiOptions& opts = {}) {
        if (h.dim() != static_cast<Eigen::Index>(params.dim())) {
            throw std::invalid_argument("Propagator::dense: Hamiltonian dimension mismatch");
        }
        Propagator p(PropagatorMethod::DenseOracle, params);
        p.dense_ = std::make_shared<const DenseEigensystem>(h, opts);
        return p;
    }

    static Propagator weak(const ModelParams& params, int resonant_m) {
        Propagator p(PropagatorMethod::WeakEffective, params);
        p.modes_->mode(resonant_m);
        p.resonant_m_ = resonant_m;
        return p;
    }

    static Propagator strong(const ModelParams& params) {
        return Propagator(PropagatorMethod::StrongEffective, params);
    }

    PropagatorMethod method() const noexcept { return method_; }
    const ModelParams& params() const noexcept { return params_; }
    const ModeTable& modes() const noexcept { return *modes_; }
    std::optional<int> resonant_mode() const noexcept { return resonant_m_; }
    const DenseEigensystem* dense_eigensystem() const noexcept { return dense_.get(); }

    bool is_exact() const noexcept {
        return method_ == PropagatorMethod::AnalyticBlocks || method_ == PropagatorMethod::DenseOracle;
    }

    // Zero for exact methods.
    double validity_metric() const {
        switch (method_) {
        case PropagatorMethod::WeakEffective: return weak_validity_metric(*modes_, *resonant_m_);
        case PropagatorMethod::StrongEffective: return strong_validity_metric(params_);
        default: return 0.0;
        }
    }

    bool is_valid() const { return validity_metric() <= kValidityThreshold; }

    PureState evolve(const PureState& state0, double t) const {
        if (state0.n_cavities() != params_.n_cavities) {
            throw std::invalid_argument("Propagator::evolve: state size does not match params");
        }
        const double g = params_.coupling;
        const double wa = params_.atom_freq;
        switch (method_) {
        case PropagatorMethod::AnalyticBlocks: return evolve_analytic(state0, t, *modes_);
        case PropagatorMethod::DenseOracle: return PureState(dense_->evolve(state0.amplitudes(), t));
        case PropagatorMethod::WeakEffective: {
            const int res = *resonant_m_;
            return detail::evolve_by_blocks(state0, *modes_, [&](const Mode& mode) {
                if (mode.m == res) return detail::rabi_block(wa, g, t);
                return detail::Block2{std::polar(1.0, -mode.freq * t), 0.0, 0.0, std::polar(1.0, -wa * t)};
            });
        }
        case PropagatorMethod::StrongEffective:
            return detail::evolve_by_blocks(state0, *modes_, [&](const Mode& mode) {
                return detail::rabi_block(0.5 * (mode.freq + wa), g, t);
            });
        }
        throw std::logic_error("Propagator::evolve: unknown method");
    }

private:
    Propagator(PropagatorMethod method, const ModelParams& params)
        : method_(method), params_(params), modes_(std::make_shared<const ModeTable>(mode_table(params))) {}

    PropagatorMethod method_;
    ModelParams params_;
    std::shared_ptr<const ModeTable> modes_;
    std::shared_ptr<const DenseEigensystem> dense_;
    std::optional<int> resonant_m_;
};

// States at each time; every sample is computed from state0 independently.
inline std::vector<PureState> evolve_series(const PureState& state0, std::span<const double> times,
                                            const Propagator& prop) {
    std::vector<PureState> out;
    out.reserve(times.size());
    for (const double t : times) out.push_back(prop.evolve(state0, t));
    return out;
}

inline std::vector<PureState> evolve_series(const PureState& state0, const TimeGrid& grid,
                                            const Propagator& prop) {
    const auto times = grid.times();
    return evolve_series(state0, std::span<const double>(times), prop);
}

} // namespace jch
