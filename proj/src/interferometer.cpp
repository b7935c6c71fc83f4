#include "dilatic/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dilatic {

namespace {

constexpr double kPruneTol = 1e-12;

double wrap_phase(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    if (phi <= -std::numbers::pi) phi += two_pi;
    if (phi > std::numbers::pi) phi -= two_pi;
    return phi;
}

// In-place left multiply: rows (i, j) of m mixed by the beam splitter
// block, or row i scaled by the phase.
void apply_element_left(const OpticalElement& e, ComplexMatrix& m) {
    if (e.kind == ElementKind::phase_shifter) {
        const cplx ph = std::polar(1.0, e.phi);
        for (std::size_t c = 0; c < m.cols(); ++c) m(e.mode_i, c) *= ph;
        return;
    }
    const double ct = std::cos(e.theta);
    const double st = std::sin(e.theta);
    const cplx eip = std::polar(1.0, e.phi);
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const cplx a = m(e.mode_i, c);
        const cplx b = m(e.mode_j, c);
        m(e.mode_i, c) = ct * a - st * eip * b;
        m(e.mode_j, c) = st * std::conj(eip) * a + ct * b;
    }
}

} // namespace

std::size_t OpticalCircuit::beam_splitter_count() const {
    return static_cast<std::size_t>(
        std::count_if(elements.begin(), elements.end(), [](const OpticalElement& e) {
            return e.kind == ElementKind::beam_splitter;
        }));
}

ComplexMatrix element_matrix(const OpticalElement& e, std::size_t mode_count) {
    ComplexMatrix m = ComplexMatrix::identity(mode_count);
    if (e.kind == ElementKind::phase_shifter) {
        m(e.mode_i, e.mode_i) = std::polar(1.0, e.phi);
        return m;
    }
    const double ct = std::cos(e.theta);
    const double st = std::sin(e.theta);
    const cplx eip = std::polar(1.0, e.phi);
    m(e.mode_i, e.mode_i) = ct;
    m(e.mode_i, e.mode_j) = -st * eip;
    m(e.mode_j, e.mode_i) = st * std::conj(eip);
    m(e.mode_j, e.mode_j) = ct;
    return m;
}

OpticalCircuit reck_decompose(const ComplexMatrix& u, double tol) {
    if (u.rows() != u.cols()) throw NotUnitary("matrix is not square");
    const double defect = u.unitarity_defect();
    if (defect > tol)
        throw NotUnitary("unitarity defect " + std::to_string(defect) + " exceeds tolerance");

    const std::size_t n = u.rows();
    ComplexMatrix w = u;
    OpticalCircuit circuit;
    circuit.mode_count = n;

    // Null the lower triangle row by row from the bottom. Each entry
    // (row, col) is cleared by mixing columns col and row; the inverse
    // of the nulling rotation (same theta, phi shifted by pi) goes to
    // the element list.
    for (std::size_t row = n; row-- > 1;) {
        for (std::size_t col = 0; col < row; ++col) {
            const cplx uval = w(row, col);
            const cplx wval = w(row, row);
            const double theta = std::atan2(std::abs(uval), std::abs(wval));
            if (theta < kPruneTol) continue;
            const double phi = wrap_phase(std::arg(wval) - std::arg(uval) + std::numbers::pi);
            const double ct = std::cos(theta);
            const double st = std::sin(theta);
            const cplx eip = std::polar(1.0, phi);
            for (std::size_t r = 0; r < n; ++r) {
                const cplx a = w(r, col);
                const cplx b = w(r, row);
                w(r, col) = ct * a + st * std::conj(eip) * b;
                w(r, row) = -st * eip * a + ct * b;
            }
            w(row, col) = 0.0;

            OpticalElement e;
            e.kind = ElementKind::beam_splitter;
            e.mode_i = col;
            e.mode_j = row;
            e.theta = theta;
            e.phi = wrap_phase(phi + std::numbers::pi);
            circuit.elements.push_back(e);
        }
    }

    // Residual diagonal phases become trailing phase shifters.
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = wrap_phase(std::arg(w(i, i)));
        if (std::abs(phi) < kPruneTol) continue;
        OpticalElement e;
        e.kind = ElementKind::phase_shifter;
        e.mode_i = i;
        e.mode_j = i;
        e.phi = phi;
        circuit.elements.push_back(e);
    }
    return circuit;
}

ComplexMatrix recompose(const OpticalCircuit& c) {
    ComplexMatrix m = ComplexMatrix::identity(c.mode_count);
    for (const auto& e : c.elements) apply_element_left(e, m);
    return m;
}

OpticalCircuit dilation_to_circuit(const DilationResult& d) {
    const std::size_t m_modes = d.total_modes;
    const std::size_t half = m_modes / 2;
    OpticalCircuit circuit;
    circuit.mode_count = m_modes;

    auto append_module = [&circuit](const std::string& name, const OpticalCircuit& part) {
        const std::size_t begin = circuit.elements.size();
        circuit.elements.insert(circuit.elements.end(), part.elements.begin(),
                                part.elements.end());
        circuit.module_labels.push_back({name, begin, circuit.elements.size()});
    };

    append_module("V_dagger", reck_decompose(d.v.adjoint()));

    // G: one beam splitter per singular value below 1 coupling mode i
    // with its ancilla partner, plus the pi phase shifters realizing
    // the -Sigma' sign on the lower block.
    OpticalCircuit gpart;
    gpart.mode_count = m_modes;
    for (std::size_t i = 0; i < half; ++i) {
        const double theta = std::acos(std::clamp(d.sigma_prime[i], 0.0, 1.0));
        if (theta >= kPruneTol) {
            OpticalElement bs;
            bs.kind = ElementKind::beam_splitter;
            bs.mode_i = i;
            bs.mode_j = i + half;
            bs.theta = theta;
            bs.phi = std::numbers::pi;
            gpart.elements.push_back(bs);
        }
        OpticalElement ps;
        ps.kind = ElementKind::phase_shifter;
        ps.mode_i = i + half;
        ps.mode_j = i + half;
        ps.phi = std::numbers::pi;
        gpart.elements.push_back(ps);
    }
    append_module("G", gpart);

    append_module("U", reck_decompose(d.u));
    return circuit;
}

double beam_splitter_bound(std::size_t n_in, std::size_t n_out) {
    const double a = static_cast<double>(n_in);
    const double b = static_cast<double>(n_out);
    return a * a / 2.0 + b * b / 2.0 - std::abs(a / 2.0 - b / 2.0);
}

} // namespace dilatic
