// Atom-field entropy and pairwise atomic concurrence

#pragma once

#include "jch/jacobi.hpp"
#include "jch/model.hpp"
#include "jch/poly_roots.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace jch {

struct BipartiteEntropy {
    double pi_a{1.0};    // total atomic probability
    double pi_f{0.0};    // total photonic probability
    double entropy{0.0}; // bits
};

// Binary entropy in bits with 0 log 0 = 0.
inline double binary_entropy(double p) {
    constexpr double cutoff = 1e-15;
    p = std::clamp(p, 0.0, 1.0);
    const double q = 1.0 - p;
    double s = 0.0;
    if (p > cutoff) s -= p * std::log2(p);
    if (q > cutoff) s -= q * std::log2(q);
    return s;
}

// The atomic reduced state is diag(Pi_f, Pi_a) in the {|no atom excited>,
// |one atom excited>} split, so S reduces to the binary entropy of Pi_a.
inline BipartiteEntropy atom_field_entropy(const PureState& state) {
    BipartiteEntropy out;
    out.pi_a = state.atom_block().squaredNorm();
    out.pi_f = state.photon_block().squaredNorm();
    out.entropy = binary_entropy(out.pi_a);
    return out;
}

// ----------------------------- two-qubit states ------------------------------

// rho over {|gg>, |ge>, |eg>, |ee>} for atoms (i, j).
struct TwoQubitState {
    Eigen::Matrix4cd rho{Eigen::Matrix4cd::Zero()};

    double trace() const { return rho.trace().real(); }
    double min_eigenvalue() const { return hermitian_eigenvalues(rho).minCoeff(); }
};

namespace detail {

inline void check_pair(const PureState& state, int i, int j, const char* where) {
    const int n = state.n_cavities();
    if (i == j) throw std::invalid_argument(std::string(where) + ": sites must differ");
    if (i < 1 || i > n || j < 1 || j > n) {
        throw std::out_of_range(std::string(where) + ": site outside [1, " + std::to_string(n) + "]");
    }
}

} // namespace detail

// Reduced state of atoms i and j after tracing out the field and all other atoms.
inline TwoQubitState reduce_to_pair(const PureState& state, int i, int j) {
    detail::check_pair(state, i, j, "reduce_to_pair");
    const cplx ci = state.atom(i);
    const cplx cj = state.atom(j);
    TwoQubitState out;
    out.rho(0, 0) = 1.0 - std::norm(ci) - std::norm(cj);
    out.rho(1, 1) = std::norm(ci);
    out.rho(2, 2) = std::norm(cj);
    out.rho(1, 2) = ci * std::conj(cj);
    out.rho(2, 1) = cj * std::conj(ci);
    return out;
}

inline double concurrence_closed_form(const PureState& state, int i, int j) {
    detail::check_pair(state, i, j, "concurrence_closed_form");
    return 2.0 * std::abs(state.atom(i)) * std::abs(state.atom(j));
}

struct WoottersOptions {
    double psd_tolerance{1e-12};
    // Eigenvalues of rho*rho_tilde below this fraction of the largest one are
    // indistinguishable from rounding noise and are treated as zero.
    double relative_zero{1e-12};
};

// max{0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4)} over the eigenvalues of
// rho (sy x sy) rho* (sy x sy), found as roots of the characteristic polynomial.
inline double concurrence_wootters_oracle(const TwoQubitState& state, const WoottersOptions& opts = {}) {
    const Eigen::Matrix4cd& rho = state.rho;
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > opts.psd_tolerance) {
        throw std::invalid_argument("concurrence_wootters_oracle: rho is not Hermitian");
    }
    if (state.min_eigenvalue() < -opts.psd_tolerance) {
        throw std::invalid_argument("concurrence_wootters_oracle: rho is not positive semidefinite");
    }

    Eigen::Matrix2cd sy;
    sy << 0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0;
    Eigen::Matrix4cd yy;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
                for (int d = 0; d < 2; ++d) yy(2 * a + c, 2 * b + d) = sy(a, b) * sy(c, d);

    const Eigen::Matrix4cd rho_tilde = yy * rho.conjugate() * yy;
    const Eigen::Matrix4cd product = rho * rho_tilde;

    const auto roots = polynomial_roots(characteristic_polynomial(product));
    std::vector<double> lambda;
    lambda.reserve(roots.size());
    for (const auto& r : roots) lambda.push_back(std::max(0.0, r.real()));
    std::sort(lambda.begin(), lambda.end(), std::greater<>());
    const double floor = opts.relative_zero * lambda.front();
    for (auto& l : lambda) {
        if (l <= floor) l = 0.0;
    }
    double c = std::sqrt(lambda[0]);
    for (std::size_t k = 1; k < lambda.size(); ++k) c -= std::sqrt(lambda[k]);
    return std::max(0.0, c);
}

// ----------------------------- concurrence maps ------------------------------

// N x N symmetric matrix of pairwise concurrence, zero diagonal, 1-based access.
class ConcurrenceMap {
public:
    ConcurrenceMap() = default;
    explicit ConcurrenceMap(int n) : values_(RealMatrix::Zero(n, n)) {}
    explicit ConcurrenceMap(RealMatrix values) : values_(std::move(values)) {
        if (values_.rows() != values_.cols()) {
            throw std::invalid_argument("ConcurrenceMap: matrix must be square");
        }
    }

    int size() const noexcept { return static_cast<int>(values_.rows()); }
    double operator()(int i, int j) const { return values_(i - 1, j - 1); }
    const RealMatrix& values() const noexcept { return values_; }

    // Elementwise max with another map of the same size.
    void merge_max(const ConcurrenceMap& other) {
        if (other.size() != size()) throw std::invalid_argument("ConcurrenceMap: size mismatch");
        values_ = values_.cwiseMax(other.values_);
    }

private:
    RealMatrix values_;
};

// C_{i,j} = 2 |c_{a,i}| |c_{a,j}| for all pairs.
inline ConcurrenceMap concurrence_map(const PureState& state) {
    const Eigen::VectorXd mod = state.atom_block().cwiseAbs();
    RealMatrix c = 2.0 * mod * mod.transpose();
    c.diagonal().setZero();
    return ConcurrenceMap(std::move(c));
}

// Streaming elementwise maximum, for long trajectories that are not stored.
class RunningMaxMap {
public:
    explicit RunningMaxMap(int n) : map_(n) {}

    void add(const PureState& state) {
        if (state.n_cavities() != map_.size()) {
            throw std::invalid_argument("RunningMaxMap: state size mismatch");
        }
        map_.merge_max(concurrence_map(state));
        ++count_;
    }

    std::size_t count() const noexcept { return count_; }
    const ConcurrenceMap& map() const noexcept { return map_; }

private:
    ConcurrenceMap map_;
    std::size_t count_{0};
};

inline ConcurrenceMap running_max_map(std::span<const PureState> series) {
    if (series.empty()) throw std::invalid_argument("running_max_map: empty series");
    RunningMaxMap acc(series.front().n_cavities());
    for (const auto& s : series) acc.add(s);
    return acc.map();
}

} // namespace jch
