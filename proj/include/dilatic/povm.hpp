#ifndef DILATIC_POVM_HPP
#define DILATIC_POVM_HPP

#include <optional>
#include <string>
#include <vector>

#include "dilatic/decompositions.hpp"
#include "dilatic/interferometer.hpp"
#include "dilatic/matrix.hpp"

namespace dilatic {

/// Validated POVM: Hermitian PSD elements summing to the identity.
struct PovmSpec {
    std::size_t dim = 0;
    std::vector<ComplexMatrix> elements;
};

/// A with A†A = Pi, fixed to the upper-triangular Cholesky
/// representative.
struct DetectionOperator {
    ComplexMatrix a;
    std::size_t index = 0;
};

/// One stage of the sequential synthesis: the residual line enters with
/// active_dim live ports, is rotated by u_stage, split by the diagonal
/// contraction sigma_star (complement sigma_c continues), and the
/// captured branch is finished by v_stage.
struct StageDecomposition {
    ComplexMatrix u_stage;
    std::vector<double> sigma_star;
    std::vector<double> sigma_c;
    ComplexMatrix v_stage;
    std::size_t active_dim = 0;
    std::size_t rank_drop = 0; // ports gone dark after this stage
};

/// One unitary module of the compiled setup, acting on the listed
/// global modes (identity elsewhere).
struct UnitaryModule {
    std::string label;
    std::vector<std::size_t> modes;
    ComplexMatrix u;
};

struct OutcomeRoute {
    std::size_t outcome = 0;
    std::size_t port_begin = 0;
    std::size_t port_end = 0;
    /// Row positions of the detection operator the ports map back to
    /// (used to re-embed outcome blocks into the signal space).
    std::vector<std::size_t> embed_rows;
};

/// Fully compiled POVM.
struct PovmCircuitBundle {
    std::size_t dim = 0;
    std::size_t total_modes = 0;
    std::vector<StageDecomposition> stages;
    std::vector<UnitaryModule> modules; // length 3n-2
    std::vector<DetectionOperator> detection_ops;
    std::vector<OutcomeRoute> routing;

    /// Dense end-to-end unitary over all total_modes modes.
    ComplexMatrix end_to_end_unitary() const;
    /// The outcome-i block of the end-to-end map: rows = its ports,
    /// columns = the first dim input modes.
    ComplexMatrix outcome_block(std::size_t outcome) const;
};

PovmSpec validate_povm(const std::vector<ComplexMatrix>& elements, std::size_t dim);

std::vector<DetectionOperator> detection_operators(const PovmSpec& p);

/// Running residual of the synthesis: c has c†c = I - sum of the
/// elements consumed so far.
struct ResidualContext {
    ComplexMatrix c;          // active_dim x dim
    std::size_t active_dim = 0;
};

StageDecomposition compile_stage(ResidualContext& ctx, const ComplexMatrix& pi_next,
                                 double rank_tol = 1e-10);

PovmCircuitBundle compile_povm(const PovmSpec& p);

/// Replaces the stage's output unitary. The default (no override) is
/// the one making the outcome block reproduce the Cholesky detection
/// operator; any unitary override leaves outcome probabilities
/// untouched.
ComplexMatrix choose_v(const ComplexMatrix& stage_block, const ComplexMatrix& target,
                       const std::optional<ComplexMatrix>& v_override = std::nullopt);

/// Swaps the V module of one outcome for an arbitrary unitary of the
/// same port dimension. Outcome probabilities are unaffected.
void override_v(PovmCircuitBundle& bundle, std::size_t outcome, const ComplexMatrix& v);

/// Expands every module into beam splitters and phase shifters.
OpticalCircuit povm_to_circuit(const PovmCircuitBundle& bundle);

} // namespace dilatic

#endif
