#ifndef DILATIC_DILATION_HPP
#define DILATIC_DILATION_HPP

#include <vector>

#include "dilatic/decompositions.hpp"
#include "dilatic/matrix.hpp"

namespace dilatic {

/// A validated contraction K (operator norm <= 1) together with its
/// input/output dimensions.
struct ContractionMap {
    ComplexMatrix k; // n_out x n_in
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    double rescale_factor = 1.0; // 1 unless the rescale policy fired
};

enum class ContractionPolicy { reject, rescale };

/// Unitary dilation of a contraction: u_big = U G V† on
/// M = 2 max(n_in, n_out) modes, whose top-left n_out x n_in corner
/// is K. All intermediate factors are exposed.
struct DilationResult {
    std::size_t n_in = 0;
    std::size_t n_out = 0;
    std::size_t total_modes = 0; // M
    ComplexMatrix u_big;
    ComplexMatrix u; // extended to M x M
    ComplexMatrix v; // extended to M x M
    ComplexMatrix g;
    std::vector<double> sigma_prime; // length max(n_in, n_out)
    std::vector<double> thetas;      // arccos(sigma_i), length min(n_in, n_out)
};

ContractionMap validate_contraction(const ComplexMatrix& k,
                                    ContractionPolicy policy = ContractionPolicy::reject);

/// Extends the rectangular singular-value matrix to a square diagonal:
/// the min(n_in, n_out) singular values followed by identity padding.
std::vector<double> extend_sigma(const std::vector<double>& singular_values,
                                 std::size_t n_in, std::size_t n_out);

/// [[S, C], [C, -S]] with C = (I - S^2)^{1/2}, S = diag(sigma_prime).
ComplexMatrix build_g(const std::vector<double>& sigma_prime);

DilationResult dilate(const ContractionMap& k);

/// Pads the input with vacuum ancillas and applies u_big; the first
/// n_out amplitudes carry K * input.
cvector apply_dilation(const DilationResult& d, const cvector& input);

} // namespace dilatic

#endif
