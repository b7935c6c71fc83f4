#ifndef DILATIC_INTERFEROMETER_HPP
#define DILATIC_INTERFEROMETER_HPP

#include <string>
#include <vector>

#include "dilatic/dilation.hpp"
#include "dilatic/matrix.hpp"

namespace dilatic {

enum class ElementKind { beam_splitter, phase_shifter };

/// One physical element. Beam splitter convention: a real mixing angle
/// theta in [0, pi/2] and one tunable phase phi on the off-diagonal,
///   [[cos t, -sin t e^{i p}], [sin t e^{-i p}, cos t]]
/// acting on modes (i, j), i < j. Reflection probability R = sin^2 t.
/// Phase shifter: e^{i p} on one mode.
struct OpticalElement {
    ElementKind kind = ElementKind::phase_shifter;
    std::size_t mode_i = 0;
    std::size_t mode_j = 0; // unused for phase shifters
    double theta = 0.0;
    double phi = 0.0;
};

struct ModuleLabel {
    std::string name;
    std::size_t begin = 0; // element range [begin, end)
    std::size_t end = 0;
};

/// Elements applied left to right: the state is multiplied by
/// element_matrix(e[0]) first.
struct OpticalCircuit {
    std::size_t mode_count = 0;
    std::vector<OpticalElement> elements;
    std::vector<ModuleLabel> module_labels;

    std::size_t beam_splitter_count() const;
};

ComplexMatrix element_matrix(const OpticalElement& e, std::size_t mode_count);

/// Triangular (Reck) decomposition: at most N(N-1)/2 beam splitters plus
/// trailing per-mode phase shifters for the residual diagonal.
OpticalCircuit reck_decompose(const ComplexMatrix& u, double tol = 1e-10);

/// Ordered product of element matrices (the verification oracle).
ComplexMatrix recompose(const OpticalCircuit& c);

/// Three labeled modules (V-dagger, G, U) realizing the dilation u_big.
OpticalCircuit dilation_to_circuit(const DilationResult& d);

/// Upper bound on the beam splitters needed to dilate an
/// n_out x n_in contraction: n_in^2/2 + n_out^2/2 - |n_in - n_out|/2.
double beam_splitter_bound(std::size_t n_in, std::size_t n_out);

} // namespace dilatic

#endif
