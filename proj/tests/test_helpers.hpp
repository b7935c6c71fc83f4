#ifndef DILATIC_TEST_HELPERS_HPP
#define DILATIC_TEST_HELPERS_HPP

#include <cmath>
#include <random>

#include "dilatic/matrix.hpp"

namespace dilatic::testing {

inline ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols,
                                     std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (auto& z : m.data()) z = cplx{dist(rng), dist(rng)};
    return m;
}

inline ComplexMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
    const ComplexMatrix g = random_gaussian(n, n, rng);
    return (g + g.adjoint()) * cplx{0.5, 0.0};
}

/// Random PSD of the given rank: B†B with B rank x n.
inline ComplexMatrix random_psd(std::size_t n, std::size_t rank, std::mt19937_64& rng) {
    const ComplexMatrix b = random_gaussian(rank, n, rng);
    return b.adjoint() * b;
}

/// Haar-ish unitary: Gram-Schmidt on the columns of a Gaussian matrix.
/// Independent of the library's decompositions.
inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
    ComplexMatrix g = random_gaussian(n, n, rng);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx dot = 0.0;
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
            for (std::size_t i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) norm += std::norm(g(i, j));
        norm = std::sqrt(norm);
        for (std::size_t i = 0; i < n; ++i) g(i, j) /= norm;
    }
    return g;
}

/// Guaranteed contraction: Frobenius norm bounds the operator norm.
inline ComplexMatrix random_contraction(std::size_t rows, std::size_t cols,
                                        std::mt19937_64& rng, double scale = 0.9) {
    ComplexMatrix g = random_gaussian(rows, cols, rng);
    double fro = g.frobenius_norm();
    for (auto& z : g.data()) z *= scale / fro;
    return g;
}

inline cvector random_unit_state(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    cvector v(n);
    for (auto& z : v) z = cplx{dist(rng), dist(rng)};
    const double norm = vector_norm(v);
    for (auto& z : v) z /= norm;
    return v;
}

/// Power iteration on M†M; the independent operator-norm oracle.
inline double power_iteration_norm(const ComplexMatrix& m, int iters = 2000) {
    const ComplexMatrix gram = m.adjoint() * m;
    std::mt19937_64 rng(12345);
    cvector v = random_unit_state(gram.rows(), rng);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        cvector w = gram.apply(v);
        lambda = vector_norm(w);
        if (lambda == 0.0) return 0.0;
        for (auto& z : w) z /= lambda;
        v = std::move(w);
    }
    return std::sqrt(lambda);
}

/// Random POVM: n random PSD matrices P_i whitened to
/// S^{-1/2} P_i S^{-1/2} with S their sum.
std::vector<ComplexMatrix> random_povm(std::size_t dim, std::size_t n, std::mt19937_64& rng);

} // namespace dilatic::testing

#endif
