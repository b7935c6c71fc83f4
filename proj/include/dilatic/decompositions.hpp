#ifndef DILATIC_DECOMPOSITIONS_HPP
#define DILATIC_DECOMPOSITIONS_HPP

#include <vector>

#include "dilatic/matrix.hpp"

namespace dilatic {

/// Eigendecomposition of a Hermitian matrix: M = V diag(lambda) V†,
/// eigenvalues descending, eigenvector columns orthonormal and
/// phase-fixed (largest-magnitude component real nonnegative, ties
/// broken by lowest index).
struct HermitianEigen {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// K = U Sigma V†, singular values descending.
struct SvdResult {
    ComplexMatrix u;
    ComplexMatrix v;
    std::vector<double> singular_values;
};

HermitianEigen hermitian_eigen(const ComplexMatrix& m, double tol = 1e-10);

/// Built on the Hermitian eigensolver: diagonalizes K K† when
/// rows <= cols, K† K otherwise, and completes the other factor by
/// orthonormal completion. Negative round-off eigenvalues are clamped
/// to zero before the square root.
SvdResult svd(const ComplexMatrix& k, double tol = 1e-10);

/// Upper-triangular A with A†A = P for Hermitian PSD P. Rank-deficient
/// input is handled by zeroing the row whose pivot falls below tol.
ComplexMatrix cholesky_psd(const ComplexMatrix& p, double tol = 1e-10);

/// Hermitian PSD square root: S with S·S = P.
ComplexMatrix sqrt_psd(const ComplexMatrix& p, double tol = 1e-10);

/// Reduced-rank inverse of a nonnegative diagonal: entries above
/// rank_tol are inverted, the rest become zero.
std::vector<double> pinv_diag(const std::vector<double>& d, double rank_tol = 1e-10);

/// Largest singular value.
double operator_norm(const ComplexMatrix& m);

/// Moore-Penrose pseudo-inverse via SVD with pinv_diag truncation.
ComplexMatrix pseudo_inverse(const ComplexMatrix& m, double rank_tol = 1e-10);

} // namespace dilatic

#endif
