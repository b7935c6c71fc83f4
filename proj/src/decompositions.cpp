#include "dilatic/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dilatic {

namespace {

double offdiag_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One Jacobi rotation zeroing a(p,q). Updates a in place (both sides)
// and accumulates the rotation into v (columns).
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cplx apq = a(p, q);
    const double beta = std::abs(apq);
    if (beta == 0.0) return;

    const cplx phase = apq / beta;
    const double alpha = a(p, p).real();
    const double gamma = a(q, q).real();
    const double tau = (gamma - alpha) / (2.0 * beta);
    // Smaller root of t^2 - 2 tau t - 1 = 0, the angle that annihilates
    // the pivot under the update convention below.
    double t;
    if (tau >= 0.0)
        t = -1.0 / (tau + std::sqrt(1.0 + tau * tau));
    else
        t = 1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const std::size_t n = a.rows();
    // Right-multiply columns p,q by the rotation.
    for (std::size_t r = 0; r < n; ++r) {
        const cplx arp = a(r, p);
        const cplx arq = a(r, q);
        a(r, p) = c * arp + s * std::conj(phase) * arq;
        a(r, q) = -s * phase * arp + c * arq;
    }
    // Left-multiply rows p,q by the adjoint.
    for (std::size_t col = 0; col < n; ++col) {
        const cplx apc = a(p, col);
        const cplx aqc = a(q, col);
        a(p, col) = c * apc + s * phase * aqc;
        a(q, col) = -s * std::conj(phase) * apc + c * aqc;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cplx{a(p, p).real(), 0.0};
    a(q, q) = cplx{a(q, q).real(), 0.0};

    for (std::size_t r = 0; r < v.rows(); ++r) {
        const cplx vrp = v(r, p);
        const cplx vrq = v(r, q);
        v(r, p) = c * vrp + s * std::conj(phase) * vrq;
        v(r, q) = -s * phase * vrp + c * vrq;
    }
}

// Largest-magnitude component real nonnegative, ties by lowest index.
void fix_column_phases(ComplexMatrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t best = 0;
        double best_mag = -1.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            const double mag = std::abs(v(i, j));
            if (mag > best_mag + 1e-15) {
                best_mag = mag;
                best = i;
            }
        }
        if (best_mag <= 0.0) continue;
        const cplx phase = v(best, j) / best_mag;
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) *= std::conj(phase);
        v(best, j) = cplx{std::abs(v(best, j)), 0.0};
    }
}

// Orthonormalize columns in order (modified Gram-Schmidt), then append
// greedy completions of the canonical basis until the matrix is square.
void orthonormal_complete(ComplexMatrix& v, std::size_t filled) {
    const std::size_t n = v.rows();
    for (std::size_t j = 0; j < filled; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(v(i, k)) * v(i, j);
            for (std::size_t i = 0; i < n; ++i) v(i, j) -= dot * v(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(v(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) v(i, j) /= norm;
    }
    for (std::size_t j = filled; j < n; ++j) {
        // Candidate canonical vector with the largest residual.
        cvector best_res;
        double best_norm = -1.0;
        for (std::size_t cand = 0; cand < n; ++cand) {
            cvector res(n, cplx{0.0, 0.0});
            res[cand] = 1.0;
            for (std::size_t k = 0; k < j; ++k) {
                cplx dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += std::conj(v(i, k)) * res[i];
                for (std::size_t i = 0; i < n; ++i) res[i] -= dot * v(i, k);
            }
            const double norm = vector_norm(res);
            if (norm > best_norm) {
                best_norm = norm;
                best_res = std::move(res);
            }
        }
        // Re-orthogonalize once for good measure.
        for (std::size_t k = 0; k < j; ++k) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(v(i, k)) * best_res[i];
            for (std::size_t i = 0; i < n; ++i) best_res[i] -= dot * v(i, k);
        }
        const double norm = vector_norm(best_res);
        for (std::size_t i = 0; i < n; ++i) v(i, j) = best_res[i] / norm;
    }
}

} // namespace

HermitianEigen hermitian_eigen(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols()) throw NotHermitian("matrix is not square");
    if (!m.all_finite()) throw NotHermitian("matrix has non-finite entries");
    const double defect = m.hermiticity_defect();
    if (defect > tol)
        throw NotHermitian("hermiticity defect " + std::to_string(defect) +
                           " exceeds tolerance");

    const std::size_t n = m.rows();
    // Symmetrize the working copy so round-off asymmetry cannot drift.
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = a.frobenius_norm();
    const double threshold = 1e-14 * std::max(scale, 1e-300);
    constexpr int max_sweeps = 100;
    int sweep = 0;
    while (offdiag_frobenius(a) > threshold) {
        if (++sweep > max_sweeps)
            throw NoConvergence("Jacobi eigensolver exceeded sweep limit");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    HermitianEigen out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
    }
    fix_column_phases(out.eigenvectors);
    return out;
}

SvdResult svd(const ComplexMatrix& k, double tol) {
    if (!k.all_finite()) throw NotHermitian("matrix has non-finite entries");
    const std::size_t n_out = k.rows();
    const std::size_t n_in = k.cols();
    const std::size_t r = std::min(n_in, n_out);

    SvdResult out;
    out.singular_values.resize(r);

    if (n_in >= n_out) {
        // Diagonalize K K† for the left factor.
        const ComplexMatrix gram = k * k.adjoint();
        HermitianEigen eig = hermitian_eigen(gram, std::max(tol, 1e-9 * std::max(1.0, gram.max_abs())));
        out.u = eig.eigenvectors;
        for (std::size_t i = 0; i < r; ++i)
            out.singular_values[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));

        const double cutoff = 1e-10 * std::max(1.0, out.singular_values.empty() ? 0.0
                                                                                : out.singular_values[0]);
        out.v = ComplexMatrix(n_in, n_in);
        const ComplexMatrix kh = k.adjoint();
        std::size_t filled = 0;
        for (; filled < r && out.singular_values[filled] > cutoff; ++filled) {
            for (std::size_t i = 0; i < n_in; ++i) {
                cplx acc = 0.0;
                for (std::size_t j = 0; j < n_out; ++j) acc += kh(i, j) * out.u(j, filled);
                out.v(i, filled) = acc / out.singular_values[filled];
            }
        }
        orthonormal_complete(out.v, filled);
    } else {
        const ComplexMatrix gram = k.adjoint() * k;
        HermitianEigen eig = hermitian_eigen(gram, std::max(tol, 1e-9 * std::max(1.0, gram.max_abs())));
        out.v = eig.eigenvectors;
        for (std::size_t i = 0; i < r; ++i)
            out.singular_values[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));

        const double cutoff = 1e-10 * std::max(1.0, out.singular_values.empty() ? 0.0
                                                                                : out.singular_values[0]);
        out.u = ComplexMatrix(n_out, n_out);
        std::size_t filled = 0;
        for (; filled < r && out.singular_values[filled] > cutoff; ++filled) {
            for (std::size_t i = 0; i < n_out; ++i) {
                cplx acc = 0.0;
                for (std::size_t j = 0; j < n_in; ++j) acc += k(i, j) * out.v(j, filled);
                out.u(i, filled) = acc / out.singular_values[filled];
            }
        }
        orthonormal_complete(out.u, filled);
    }
    return out;
}

ComplexMatrix cholesky_psd(const ComplexMatrix& p, double tol) {
    if (p.rows() != p.cols()) throw NotHermitian("matrix is not square");
    const double defect = p.hermiticity_defect();
    if (defect > tol)
        throw NotHermitian("hermiticity defect " + std::to_string(defect) +
                           " exceeds tolerance");
    {
        HermitianEigen eig = hermitian_eigen(p, std::max(tol, defect * 2));
        if (!eig.eigenvalues.empty() && eig.eigenvalues.back() < -tol)
            throw NotPositive("eigenvalue " + std::to_string(eig.eigenvalues.back()) +
                              " below -tolerance");
    }

    const std::size_t n = p.rows();
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double d = p(i, i).real();
        for (std::size_t k = 0; k < i; ++k) d -= std::norm(a(k, i));
        if (d <= tol) {
            // Rank-deficient pivot: the whole row stays zero.
            continue;
        }
        const double aii = std::sqrt(d);
        a(i, i) = aii;
        for (std::size_t j = i + 1; j < n; ++j) {
            cplx s = p(i, j);
            for (std::size_t k = 0; k < i; ++k) s -= std::conj(a(k, i)) * a(k, j);
            a(i, j) = s / aii;
        }
    }
    return a;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& p, double tol) {
    HermitianEigen eig = hermitian_eigen(p, tol);
    const std::size_t n = p.rows();
    std::vector<double> roots(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lambda = eig.eigenvalues[i];
        if (lambda < -tol)
            throw NotPositive("eigenvalue " + std::to_string(lambda) + " below -tolerance");
        roots[i] = std::sqrt(std::max(lambda, 0.0));
    }
    ComplexMatrix s = eig.eigenvectors * ComplexMatrix::diagonal(roots) * eig.eigenvectors.adjoint();
    // Re-symmetrize.
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const cplx avg = 0.5 * (s(i, j) + std::conj(s(j, i)));
            s(i, j) = avg;
            s(j, i) = std::conj(avg);
        }
    return s;
}

std::vector<double> pinv_diag(const std::vector<double>& d, double rank_tol) {
    std::vector<double> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) out[i] = d[i] > rank_tol ? 1.0 / d[i] : 0.0;
    return out;
}

double operator_norm(const ComplexMatrix& m) {
    const ComplexMatrix gram =
        m.rows() <= m.cols() ? m * m.adjoint() : m.adjoint() * m;
    HermitianEigen eig = hermitian_eigen(gram, 1e-9 * std::max(1.0, gram.max_abs()));
    if (eig.eigenvalues.empty()) return 0.0;
    return std::sqrt(std::max(eig.eigenvalues.front(), 0.0));
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol) {
    SvdResult s = svd(m);
    const std::vector<double> inv = pinv_diag(s.singular_values, rank_tol);
    ComplexMatrix sigma_plus(m.cols(), m.rows());
    for (std::size_t i = 0; i < inv.size(); ++i) sigma_plus(i, i) = inv[i];
    return s.v * sigma_plus * s.u.adjoint();
}

} // namespace dilatic
