// JCH parameters, single-excitation basis and Hamiltonian assembly

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace jch {

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

// Parameters of a uniform open JCH chain. Energies in units of the hopping J
// unless the caller chooses otherwise; hbar = 1.
struct ModelParams {
    int n_cavities{2};
    double hopping{1.0};     // J
    double coupling{0.0};    // g
    double cavity_freq{0.0}; // omega_c
    double atom_freq{0.0};   // omega_a

    void validate() const {
        if (n_cavities < 2) {
            throw std::invalid_argument("ModelParams: n_cavities must be >= 2, got " +
                                        std::to_string(n_cavities));
        }
        if (!(hopping > 0.0) || !std::isfinite(hopping)) {
            throw std::invalid_argument("ModelParams: hopping must be a finite positive number");
        }
        if (!(coupling >= 0.0) || !std::isfinite(coupling)) {
            throw std::invalid_argument("ModelParams: coupling must be finite and >= 0");
        }
        if (!std::isfinite(cavity_freq) || !std::isfinite(atom_freq)) {
            throw std::invalid_argument("ModelParams: frequencies must be finite");
        }
    }

    std::size_t n() const noexcept { return static_cast<std::size_t>(n_cavities); }
    std::size_t dim() const noexcept { return 2 * n(); }
};

// ------------------------------- basis ---------------------------------------

enum class ExcitationKind { Photon, Atom };

// One of |1_x> or |e_x>, with 1-based site x.
struct BasisIndex {
    ExcitationKind kind{ExcitationKind::Photon};
    int site{1};

    // Photon x -> x-1, Atom x -> N+x-1.
    std::size_t flat(int n_cavities) const {
        if (site < 1 || site > n_cavities) {
            throw std::out_of_range("BasisIndex: site " + std::to_string(site) +
                                    " outside [1, " + std::to_string(n_cavities) + "]");
        }
        const auto offset = kind == ExcitationKind::Photon ? 0 : n_cavities;
        return static_cast<std::size_t>(offset + site - 1);
    }

    static BasisIndex from_flat(std::size_t index, int n_cavities) {
        const auto n = static_cast<std::size_t>(n_cavities);
        if (index >= 2 * n) {
            throw std::out_of_range("BasisIndex: flat index out of range");
        }
        if (index < n) return {ExcitationKind::Photon, static_cast<int>(index) + 1};
        return {ExcitationKind::Atom, static_cast<int>(index - n) + 1};
    }

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

// ------------------------------- states --------------------------------------

// Amplitudes over the 2N single-excitation states: photons c_f[1..N] first,
// then atoms c_a[1..N].
class PureState {
public:
    PureState() = default;
    explicit PureState(ComplexVector amplitudes) : amp_(std::move(amplitudes)) {
        if (amp_.size() < 4 || amp_.size() % 2 != 0) {
            throw std::invalid_argument("PureState: amplitude vector must have even length >= 4");
        }
    }

    static PureState zero(int n_cavities) {
        return PureState(ComplexVector::Zero(2 * static_cast<Eigen::Index>(n_cavities)));
    }

    int n_cavities() const noexcept { return static_cast<int>(amp_.size() / 2); }
    Eigen::Index dim() const noexcept { return amp_.size(); }

    const ComplexVector& amplitudes() const noexcept { return amp_; }
    ComplexVector& amplitudes() noexcept { return amp_; }

    // 1-based site accessors
    cplx photon(int x) const { return amp_(BasisIndex{ExcitationKind::Photon, x}.flat(n_cavities())); }
    cplx atom(int x) const { return amp_(BasisIndex{ExcitationKind::Atom, x}.flat(n_cavities())); }

    auto photon_block() const { return amp_.head(amp_.size() / 2); }
    auto atom_block() const { return amp_.tail(amp_.size() / 2); }

private:
    ComplexVector amp_;
};

inline double norm(const PureState& state) {
    return state.amplitudes().norm();
}

// |e_{x0}>: atom x0 excited, no photons, every other atom in its ground state.
inline PureState initial_atomic_excitation(const ModelParams& params, int x0) {
    params.validate();
    if (x0 < 1 || x0 > params.n_cavities) {
        throw std::out_of_range("initial_atomic_excitation: x0=" + std::to_string(x0) +
                                " outside [1, " + std::to_string(params.n_cavities) + "]");
    }
    auto state = PureState::zero(params.n_cavities);
    state.amplitudes()(BasisIndex{ExcitationKind::Atom, x0}.flat(params.n_cavities)) = 1.0;
    return state;
}

// ----------------------------- Hamiltonian -----------------------------------

// H^(1) restricted to the single-excitation sector. Every matrix element is
// real, so the Hermitian matrix is stored as a real symmetric one.
struct Hamiltonian1Ex {
    RealMatrix matrix;

    Eigen::Index dim() const noexcept { return matrix.rows(); }

    ComplexVector apply(const ComplexVector& psi) const {
        return matrix.cast<cplx>() * psi;
    }

    double expectation(const PureState& state) const {
        const auto& a = state.amplitudes();
        return (a.adjoint() * (matrix.cast<cplx>() * a))(0).real();
    }
};

// Open chain: photon block omega_c on the diagonal and -J on the first
// off-diagonals, atom block omega_a * 1, photon-atom blocks g * 1.
inline Hamiltonian1Ex build_hamiltonian(const ModelParams& params) {
    params.validate();
    const auto n = static_cast<Eigen::Index>(params.n_cavities);
    RealMatrix h = RealMatrix::Zero(2 * n, 2 * n);
    for (Eigen::Index x = 0; x < n; ++x) {
        h(x, x) = params.cavity_freq;
        h(n + x, n + x) = params.atom_freq;
        h(x, n + x) = params.coupling;
        h(n + x, x) = params.coupling;
    }
    for (Eigen::Index x = 0; x + 1 < n; ++x) {
        h(x, x + 1) = -params.hopping;
        h(x + 1, x) = -params.hopping;
    }
    return {std::move(h)};
}

} // namespace jch
