// Cyclic Jacobi eigensolver for dense real symmetric matrices
//
// Row-cyclic ordering (p < q, row by row) so results are reproducible bit for
// bit. Hermitian matrices are handled through their real 2n x 2n embedding.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace jch {

struct JacobiOptions {
    double off_tolerance{1e-13}; // Frobenius norm of the strict off-diagonal part
    int max_sweeps{100};
    bool compute_vectors{true};
};

class JacobiNonConvergence : public std::runtime_error {
public:
    JacobiNonConvergence(int sweeps, double off)
        : std::runtime_error("jacobi: no convergence after " + std::to_string(sweeps) +
                             " sweeps (off-diagonal norm " + std::to_string(off) + ")"),
          sweeps_(sweeps), off_(off) {}
    int sweeps() const noexcept { return sweeps_; }
    double off_norm() const noexcept { return off_; }

private:
    int sweeps_;
    double off_;
};

struct SymmetricEigensystem {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns, matching values
    int sweeps{0};
};

namespace detail {

inline double off_diagonal_norm(const Eigen::MatrixXd& a) {
    double sum = 0.0;
    const auto n = a.rows();
    for (Eigen::Index q = 0; q < n; ++q) {
        for (Eigen::Index p = 0; p < q; ++p) {
            sum += a(p, q) * a(p, q);
        }
    }
    return std::sqrt(2.0 * sum);
}

} // namespace detail

inline SymmetricEigensystem jacobi_eigensolve(const Eigen::MatrixXd& input,
                                              const JacobiOptions& opts = {}) {
    if (input.rows() != input.cols()) {
        throw std::invalid_argument("jacobi: matrix must be square");
    }
    const auto n = input.rows();
    Eigen::MatrixXd a = input;
    Eigen::MatrixXd v;
    if (opts.compute_vectors) v = Eigen::MatrixXd::Identity(n, n);

    int sweep = 0;
    double off = detail::off_diagonal_norm(a);
    while (off > opts.off_tolerance) {
        if (sweep >= opts.max_sweeps) throw JacobiNonConvergence(sweep, off);
        ++sweep;
        for (Eigen::Index p = 0; p + 1 < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;

                // Smaller root of t^2 + 2 tau t - 1 = 0 keeps the rotation angle <= pi/4.
                const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(tau) > 1e150) {
                    t = 0.5 / tau;
                } else {
                    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                }
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (Eigen::Index k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    const double nkp = c * akp - s * akq;
                    const double nkq = s * akp + c * akq;
                    a(k, p) = nkp;
                    a(p, k) = nkp;
                    a(k, q) = nkq;
                    a(q, k) = nkq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                if (opts.compute_vectors) {
                    for (Eigen::Index k = 0; k < n; ++k) {
                        const double vkp = v(k, p);
                        const double vkq = v(k, q);
                        v(k, p) = c * vkp - s * vkq;
                        v(k, q) = s * vkp + c * vkq;
                    }
                }
            }
        }
        off = detail::off_diagonal_norm(a);
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

    SymmetricEigensystem out;
    out.sweeps = sweep;
    out.values.resize(n);
    if (opts.compute_vectors) out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto src = order[static_cast<std::size_t>(i)];
        out.values(i) = a(src, src);
        if (opts.compute_vectors) out.vectors.col(i) = v.col(src);
    }
    return out;
}

inline Eigen::VectorXd jacobi_eigenvalues(const Eigen::MatrixXd& a, JacobiOptions opts = {}) {
    opts.compute_vectors = false;
    return jacobi_eigensolve(a, opts).values;
}

// Eigenvalues of a complex Hermitian matrix H = X + iY from the real symmetric
// embedding [[X, -Y], [Y, X]], whose spectrum is that of H with every value doubled.
inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h, JacobiOptions opts = {}) {
    if (h.rows() != h.cols()) {
        throw std::invalid_argument("hermitian_eigenvalues: matrix must be square");
    }
    const auto n = h.rows();
    const Eigen::MatrixXcd herm = 0.5 * (h + h.adjoint());
    Eigen::MatrixXd big(2 * n, 2 * n);
    big.topLeftCorner(n, n) = herm.real();
    big.bottomRightCorner(n, n) = herm.real();
    big.topRightCorner(n, n) = -herm.imag();
    big.bottomLeftCorner(n, n) = herm.imag();
    const Eigen::VectorXd doubled = jacobi_eigenvalues(big, opts);
    Eigen::VectorXd values(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        values(i) = 0.5 * (doubled(2 * i) + doubled(2 * i + 1));
    }
    return values;
}

} // namespace jch
