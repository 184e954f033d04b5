// Characteristic polynomials and companion-matrix root finding
// for small complex matrices (used by the two-qubit concurrence oracle).

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace jch {

namespace detail {

// Laplace expansion; exact zeros in a row or column stay exactly zero.
inline std::complex<double> laplace_det(const Eigen::MatrixXcd& m) {
    const auto n = m.rows();
    if (n == 0) return 1.0;
    if (n == 1) return m(0, 0);
    if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    std::complex<double> det = 0.0;
    for (Eigen::Index col = 0; col < n; ++col) {
        if (m(0, col) == 0.0) continue;
        Eigen::MatrixXcd minor(n - 1, n - 1);
        for (Eigen::Index r = 1; r < n; ++r) {
            Eigen::Index cc = 0;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (c == col) continue;
                minor(r - 1, cc++) = m(r, c);
            }
        }
        const double sign = (col % 2 == 0) ? 1.0 : -1.0;
        det += sign * m(0, col) * laplace_det(minor);
    }
    return det;
}

} // namespace detail

// Coefficients c[0..n] of det(lambda*I - A) = sum_k c[k] lambda^k (c[n] = 1),
// from sums of principal minors. Intended for n <= 6.
inline std::vector<std::complex<double>> characteristic_polynomial(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("characteristic_polynomial: matrix must be square");
    }
    const auto n = static_cast<int>(a.rows());
    if (n > 10) {
        throw std::invalid_argument("characteristic_polynomial: principal-minor expansion limited to n <= 10");
    }
    std::vector<std::complex<double>> minor_sums(static_cast<std::size_t>(n) + 1, 0.0);
    minor_sums[0] = 1.0;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<Eigen::Index> idx;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) idx.push_back(i);
        }
        const auto k = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd sub(k, k);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (Eigen::Index c = 0; c < k; ++c) {
                sub(r, c) = a(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
            }
        }
        minor_sums[static_cast<std::size_t>(k)] += detail::laplace_det(sub);
    }
    // det(lambda I - A) = sum_k (-1)^k E_k lambda^(n-k)
    std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        coeffs[static_cast<std::size_t>(n - k)] = sign * minor_sums[static_cast<std::size_t>(k)];
    }
    return coeffs;
}

class QrNonConvergence : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR with
// Wilkinson shifts and Givens rotations.
inline std::vector<std::complex<double>> hessenberg_qr_eigenvalues(Eigen::MatrixXcd h,
                                                                   int max_iter_per_value = 60) {
    using C = std::complex<double>;
    const auto n = h.rows();
    std::vector<C> values;
    values.reserve(static_cast<std::size_t>(n));
    const double eps = std::numeric_limits<double>::epsilon();

    Eigen::Index hi = n - 1;
    int iter = 0;
    while (hi >= 0) {
        if (hi == 0) {
            values.push_back(h(0, 0));
            break;
        }
        Eigen::Index lo = hi;
        while (lo > 0) {
            const double scale = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
            if (std::abs(h(lo, lo - 1)) <= eps * (scale == 0.0 ? 1.0 : scale)) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            values.push_back(h(hi, hi));
            --hi;
            iter = 0;
            continue;
        }
        if (++iter > max_iter_per_value) {
            throw QrNonConvergence("hessenberg_qr_eigenvalues: no convergence");
        }

        // Wilkinson shift: eigenvalue of the trailing 2x2 block closest to h(hi,hi)
        C shift;
        if (iter % 11 == 10) {
            shift = h(hi, hi) + std::abs(h(hi, hi - 1)) * 0.75;
        } else {
            const C a = h(hi - 1, hi - 1);
            const C b = h(hi - 1, hi);
            const C c = h(hi, hi - 1);
            const C d = h(hi, hi);
            const C tr_half = 0.5 * (a + d);
            const C disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
            const C r1 = tr_half + disc;
            const C r2 = tr_half - disc;
            shift = std::abs(r1 - d) < std::abs(r2 - d) ? r1 : r2;
        }

        const Eigen::Index m = hi - lo + 1;
        auto block = h.block(lo, lo, m, m);
        for (Eigen::Index i = 0; i < m; ++i) block(i, i) -= shift;

        std::vector<C> cs(static_cast<std::size_t>(m - 1));
        std::vector<C> sn(static_cast<std::size_t>(m - 1));
        for (Eigen::Index k = 0; k + 1 < m; ++k) {
            const C x = block(k, k);
            const C y = block(k + 1, k);
            const double r = std::hypot(std::abs(x), std::abs(y));
            C c = 1.0;
            C s = 0.0;
            if (r != 0.0) {
                c = x / r;
                s = y / r;
            }
            cs[static_cast<std::size_t>(k)] = c;
            sn[static_cast<std::size_t>(k)] = s;
            for (Eigen::Index j = k; j < m; ++j) {
                const C top = block(k, j);
                const C bot = block(k + 1, j);
                block(k, j) = std::conj(c) * top + std::conj(s) * bot;
                block(k + 1, j) = -s * top + c * bot;
            }
        }
        for (Eigen::Index k = 0; k + 1 < m; ++k) {
            const C c = cs[static_cast<std::size_t>(k)];
            const C s = sn[static_cast<std::size_t>(k)];
            const Eigen::Index last = std::min<Eigen::Index>(k + 1, m - 1);
            for (Eigen::Index i = 0; i <= last; ++i) {
                const C left = block(i, k);
                const C right = block(i, k + 1);
                block(i, k) = c * left + s * right;
                block(i, k + 1) = -std::conj(s) * left + std::conj(c) * right;
            }
        }
        for (Eigen::Index i = 0; i < m; ++i) block(i, i) += shift;
    }
    return values;
}

// Roots of sum_k coeffs[k] x^k. Exact zero low-order coefficients are split
// off as exact zero roots before the companion matrix is formed.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<std::complex<double>> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.size() < 2) {
        throw std::invalid_argument("polynomial_roots: polynomial must have degree >= 1");
    }
    std::vector<std::complex<double>> roots;
    std::size_t shift = 0;
    while (coeffs[shift] == 0.0) {
        roots.emplace_back(0.0);
        ++shift;
    }
    const auto degree = static_cast<Eigen::Index>(coeffs.size() - 1 - shift);
    if (degree == 0) return roots;

    const auto lead = coeffs.back();
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
    for (Eigen::Index j = 0; j < degree; ++j) {
        companion(0, j) = -coeffs[shift + static_cast<std::size_t>(degree - 1 - j)] / lead;
    }
    for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;

    for (const auto& r : hessenberg_qr_eigenvalues(companion)) roots.push_back(r);
    return roots;
}

} // namespace jch
