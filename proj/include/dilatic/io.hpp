#ifndef DILATIC_IO_HPP
#define DILATIC_IO_HPP

#include <optional>
#include <string>
#include <vector>

#include "dilatic/interferometer.hpp"
#include "dilatic/matrix.hpp"
#include "dilatic/povm.hpp"

namespace dilatic {

enum class FileKind { contraction, unitary, povm, state, density };

/// Parsed matrix document. Depending on kind, either `matrix`,
/// `povm_elements`, or `state` carries the payload.
struct MatrixFile {
    FileKind kind = FileKind::contraction;
    std::string label;
    std::string comment;
    std::size_t dim = 0; // povm/state
    ComplexMatrix matrix;
    std::vector<ComplexMatrix> povm_elements;
    cvector state;
};

/// Circuit document: elements plus optional compiled-map dimensions
/// and, for POVM bundles, routing and detection operators.
struct CircuitFile {
    OpticalCircuit circuit;
    std::size_t signal_dim = 0;
    std::optional<std::size_t> output_dim;
    std::vector<OutcomeRoute> routing;
    std::vector<ComplexMatrix> detection_ops;

    bool is_povm_bundle() const { return !routing.empty(); }
};

/// Path "-" reads stdin / writes stdout.
MatrixFile read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const MatrixFile& doc);

CircuitFile read_circuit_file(const std::string& path);
void write_circuit_file(const std::string& path, const CircuitFile& doc);

std::string file_kind_name(FileKind kind);

} // namespace dilatic

#endif
