#ifndef DILATIC_SIMULATOR_HPP
#define DILATIC_SIMULATOR_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "dilatic/dilation.hpp"
#include "dilatic/interferometer.hpp"
#include "dilatic/matrix.hpp"
#include "dilatic/povm.hpp"

namespace dilatic {

/// Amplitude vector over spatial modes (multiple-rail encoding); may
/// be sub-normalized.
struct QuditState {
    cvector amplitudes;

    double norm() const { return vector_norm(amplitudes); }
    std::size_t dim() const { return amplitudes.size(); }
};

struct DensityMatrix {
    ComplexMatrix rho;
};

struct ShotRecord {
    std::uint64_t seed = 0;
    std::uint64_t total = 0;
    std::vector<std::uint64_t> counts;
};

struct MeasurementRecord {
    std::vector<double> outcome_probs;
    std::vector<QuditState> outcome_states; // normalized, one per outcome
    std::optional<ShotRecord> shots;
};

/// Zero-pads the state to the circuit width and applies the circuit.
QuditState propagate(const OpticalCircuit& c, const QuditState& psi);

/// Pure-map action: normalized K psi plus the success probability
/// <psi|K†K|psi>.
std::pair<QuditState, double> apply_pure_map(const ContractionMap& k, const QuditState& psi);

/// Kraus-sum channel on a density matrix; returns the normalized
/// output and the pre-normalization trace.
std::pair<DensityMatrix, double> apply_quantum_operation(const std::vector<ContractionMap>& kraus,
                                                         const DensityMatrix& rho);

MeasurementRecord measure_povm(const PovmCircuitBundle& bundle, const QuditState& psi,
                               std::optional<std::uint64_t> shots = std::nullopt,
                               std::optional<std::uint64_t> seed = std::nullopt);

/// Dephases the extended output across outcome blocks and contracts
/// the blocks into the signal space: (sum_i A_i rho A_i†)/n.
DensityMatrix dephase_and_mix(const PovmCircuitBundle& bundle, const DensityMatrix& rho);

/// Circuit preparing an arbitrary (possibly sub-normalized) qudit from
/// a photon in the first mode.
OpticalCircuit prepare_qudit(const QuditState& target);

/// Diagonal filter equalizing Schmidt coefficients by one-party
/// operation; returns the map and its success probability.
std::pair<ContractionMap, double> entanglement_filter(const std::vector<double>& schmidt);

} // namespace dilatic

#endif
