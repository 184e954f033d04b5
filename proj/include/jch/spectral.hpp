// Free-field normal modes of the open chain and the dressed
// (polariton) spectrum of the single-excitation JCH problem.

#pragma once

#include "jch/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace jch {

enum class Branch { Plus, Minus };

struct Mode {
    int m{1};                // 1..N
    double momentum{0.0};    // k = pi m / (N+1)
    double freq{0.0};        // omega_k
    // dressed quantities, filled by dressed_spectrum
    double detuning{0.0};    // Delta_k = omega_a - omega_k
    double rabi{0.0};        // Omega_k = sqrt(Delta_k^2 + 4 g^2)
    double a_plus{0.0};
    double a_minus{0.0};
    double b_plus{0.0};
    double b_minus{0.0};
    double eps_plus{0.0};
    double eps_minus{0.0};

    double a(Branch b) const noexcept { return b == Branch::Plus ? a_plus : a_minus; }
    double b(Branch b) const noexcept { return b == Branch::Plus ? b_plus : b_minus; }
    double energy(Branch b) const noexcept { return b == Branch::Plus ? eps_plus : eps_minus; }
};

// Normal modes indexed by m = 1..N plus the site profiles v_{k,x}.
// profile(x-1, m-1) = v_{k_m, x}.
struct ModeTable {
    ModelParams params;
    std::vector<Mode> modes;
    RealMatrix profile;
    bool dressed{false};

    int size() const noexcept { return static_cast<int>(modes.size()); }

    const Mode& mode(int m) const {
        if (m < 1 || m > size()) {
            throw std::out_of_range("ModeTable: mode " + std::to_string(m) + " outside [1, " +
                                    std::to_string(size()) + "]");
        }
        return modes[static_cast<std::size_t>(m - 1)];
    }

    // v_{k_m, x}, 1-based m and x
    double v(int m, int x) const { return profile(x - 1, m - 1); }
};

// v_{k,x} = sqrt(2/(N+1)) sin(k x), k = pi m/(N+1), omega_k = omega_c - 2J cos k.
inline ModeTable free_field_modes(const ModelParams& params) {
    params.validate();
    const int n = params.n_cavities;
    const double norm = std::sqrt(2.0 / (n + 1));
    ModeTable table;
    table.params = params;
    table.modes.resize(static_cast<std::size_t>(n));
    table.profile.resize(n, n);
    for (int m = 1; m <= n; ++m) {
        auto& mode = table.modes[static_cast<std::size_t>(m - 1)];
        mode.m = m;
        mode.momentum = std::numbers::pi * m / (n + 1);
        mode.freq = params.cavity_freq - 2.0 * params.hopping * std::cos(mode.momentum);
        for (int x = 1; x <= n; ++x) {
            // sin(pi m x/(N+1)) with the argument reduced mod 2(N+1) so that
            // nodes come out as exact zeros
            const long phase = (static_cast<long>(m) * x) % (2L * (n + 1));
            table.profile(x - 1, m - 1) =
                (phase == 0 || phase == n + 1)
                    ? 0.0
                    : norm * std::sin(std::numbers::pi * static_cast<double>(phase) / (n + 1));
        }
    }
    return table;
}

namespace detail {

// Normalized (2g, Delta +/- Omega) without cancellation in Delta +/- Omega.
inline void dressed_amplitudes(double g, double delta, double omega, Branch branch,
                               double& a, double& b) {
    double d;
    if (branch == Branch::Plus) {
        d = delta >= 0.0 ? delta + omega : 4.0 * g * g / (omega - delta);
    } else {
        d = delta <= 0.0 ? delta - omega : -4.0 * g * g / (omega + delta);
    }
    const double den = std::hypot(2.0 * g, d);
    if (den == 0.0) {
        // g = 0 limits: degenerate pair at Delta = 0, otherwise the bare photon mode
        if (delta == 0.0) {
            a = 1.0 / std::numbers::sqrt2;
            b = branch == Branch::Plus ? a : -a;
        } else {
            a = 1.0;
            b = 0.0;
        }
        return;
    }
    a = 2.0 * g / den;
    b = d / den;
}

} // namespace detail

inline ModeTable dressed_spectrum(const ModelParams& params, ModeTable modes) {
    params.validate();
    if (modes.size() != params.n_cavities) {
        throw std::invalid_argument("dressed_spectrum: mode table does not match params");
    }
    const double g = params.coupling;
    for (auto& mode : modes.modes) {
        mode.detuning = params.atom_freq - mode.freq;
        mode.rabi = std::sqrt(mode.detuning * mode.detuning + 4.0 * g * g);
        detail::dressed_amplitudes(g, mode.detuning, mode.rabi, Branch::Plus, mode.a_plus, mode.b_plus);
        detail::dressed_amplitudes(g, mode.detuning, mode.rabi, Branch::Minus, mode.a_minus, mode.b_minus);
        mode.eps_plus = 0.5 * (params.atom_freq + mode.freq + mode.rabi);
        mode.eps_minus = 0.5 * (params.atom_freq + mode.freq - mode.rabi);
    }
    modes.params = params;
    modes.dressed = true;
    return modes;
}

inline ModeTable mode_table(const ModelParams& params) {
    return dressed_spectrum(params, free_field_modes(params));
}

// psi_k^{+/-} = A |alpha_k> + B |beta_k> in the site basis.
inline PureState eigenstate_vector(int m, Branch branch, const ModeTable& modes) {
    if (!modes.dressed) {
        throw std::logic_error("eigenstate_vector: mode table has no dressed quantities");
    }
    const auto& mode = modes.mode(m);
    const auto n = static_cast<Eigen::Index>(modes.size());
    ComplexVector amp(2 * n);
    const auto v = modes.profile.col(m - 1);
    amp.head(n) = (mode.a(branch) * v).cast<cplx>();
    amp.tail(n) = (mode.b(branch) * v).cast<cplx>();
    return PureState(std::move(amp));
}

// All 2N dressed energies, ascending.
inline std::vector<double> dressed_energies(const ModeTable& modes) {
    std::vector<double> e;
    e.reserve(2 * modes.modes.size());
    for (const auto& mode : modes.modes) {
        e.push_back(mode.eps_minus);
        e.push_back(mode.eps_plus);
    }
    std::sort(e.begin(), e.end());
    return e;
}

} // namespace jch
