#include "dilatic/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace dilatic {

namespace {
constexpr double kNormSlack = 1e-9;
}

ContractionMap validate_contraction(const ComplexMatrix& k, ContractionPolicy policy) {
    if (k.rows() == 0 || k.cols() == 0)
        throw DimensionMismatch("empty matrix cannot be a contraction");
    if (!k.all_finite()) throw NotContraction(std::nan(""));

    const double norm = operator_norm(k);
    ContractionMap out;
    out.n_in = k.cols();
    out.n_out = k.rows();
    if (norm <= 1.0 + kNormSlack) {
        out.k = k;
        return out;
    }
    if (policy == ContractionPolicy::rescale) {
        out.k = k * cplx{1.0 / norm, 0.0};
        out.rescale_factor = norm;
        return out;
    }
    throw NotContraction(norm);
}

std::vector<double> extend_sigma(const std::vector<double>& singular_values,
                                 std::size_t n_in, std::size_t n_out) {
    const std::size_t m = std::max(n_in, n_out);
    const std::size_t r = std::min(n_in, n_out);
    std::vector<double> out(m, 1.0);
    for (std::size_t i = 0; i < r && i < singular_values.size(); ++i) {
        double s = std::abs(singular_values[i]);
        if (s > 1.0 && s <= 1.0 + kNormSlack) s = 1.0; // round-off clamp
        // Values within round-off of 1 are treated as exactly 1, so the
        // mode pair decouples instead of picking up a sqrt-amplified
        // residual coupling.
        if (s < 1.0 && 1.0 - s <= 1e-12) s = 1.0;
        out[i] = s;
    }
    return out;
}

ComplexMatrix build_g(const std::vector<double>& sigma_prime) {
    const std::size_t m = sigma_prime.size();
    ComplexMatrix g(2 * m, 2 * m);
    for (std::size_t i = 0; i < m; ++i) {
        const double s = sigma_prime[i];
        const double c = std::sqrt(std::max(1.0 - s * s, 0.0));
        g(i, i) = s;
        g(i, i + m) = c;
        g(i + m, i) = c;
        g(i + m, i + m) = -s;
    }
    return g;
}

DilationResult dilate(const ContractionMap& k) {
    DilationResult out;
    out.n_in = k.n_in;
    out.n_out = k.n_out;
    const std::size_t m = std::max(k.n_in, k.n_out);
    out.total_modes = 2 * m;

    SvdResult s = svd(k.k);
    out.sigma_prime = extend_sigma(s.singular_values, k.n_in, k.n_out);
    out.g = build_g(out.sigma_prime);

    out.thetas.resize(std::min(k.n_in, k.n_out));
    for (std::size_t i = 0; i < out.thetas.size(); ++i)
        out.thetas[i] = std::acos(std::clamp(out.sigma_prime[i], 0.0, 1.0));

    // Extend U and V with identity beyond their native block.
    out.u = ComplexMatrix::identity(out.total_modes);
    out.u.set_block(0, 0, s.u);
    out.v = ComplexMatrix::identity(out.total_modes);
    out.v.set_block(0, 0, s.v);

    out.u_big = out.u * out.g * out.v.adjoint();
    return out;
}

cvector apply_dilation(const DilationResult& d, const cvector& input) {
    if (input.size() != d.n_in)
        throw DimensionMismatch("dilation input has wrong dimension");
    cvector padded(d.total_modes, cplx{0.0, 0.0});
    std::copy(input.begin(), input.end(), padded.begin());
    return d.u_big.apply(padded);
}

} // namespace dilatic
