#include "dilatic/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace dilatic {

QuditState propagate(const OpticalCircuit& c, const QuditState& psi) {
    if (psi.dim() > c.mode_count)
        throw DimensionMismatch("state has more modes than the circuit");
    cvector padded(c.mode_count, cplx{0.0, 0.0});
    std::copy(psi.amplitudes.begin(), psi.amplitudes.end(), padded.begin());
    const ComplexMatrix u = recompose(c);
    return QuditState{u.apply(padded)};
}

std::pair<QuditState, double> apply_pure_map(const ContractionMap& k, const QuditState& psi) {
    if (psi.dim() != k.n_in) throw DimensionMismatch("state dimension mismatch");
    const cvector out = k.k.apply(psi.amplitudes);
    const double norm = vector_norm(out);
    const double prob = norm * norm;
    if (norm < 1e-14) throw ZeroOutcome("map annihilates the state");
    QuditState normalized{out};
    for (auto& z : normalized.amplitudes) z /= norm;
    return {normalized, prob};
}

std::pair<DensityMatrix, double> apply_quantum_operation(const std::vector<ContractionMap>& kraus,
                                                         const DensityMatrix& rho) {
    if (kraus.empty()) throw KrausBoundViolated("empty Kraus set");
    const std::size_t n_in = kraus.front().n_in;
    if (rho.rho.rows() != n_in || rho.rho.cols() != n_in)
        throw DimensionMismatch("density matrix dimension mismatch");

    ComplexMatrix bound(n_in, n_in);
    for (const auto& k : kraus) {
        if (k.n_in != n_in) throw DimensionMismatch("Kraus operators disagree on input dim");
        bound = bound + k.k.adjoint() * k.k;
    }
    {
        ComplexMatrix defect = bound - ComplexMatrix::identity(n_in);
        HermitianEigen eig = hermitian_eigen(defect, 1e-8);
        if (!eig.eigenvalues.empty() && eig.eigenvalues.front() > 1e-9)
            throw KrausBoundViolated("sum K†K exceeds identity by " +
                                     std::to_string(eig.eigenvalues.front()));
    }

    const std::size_t n_out = kraus.front().n_out;
    ComplexMatrix out(n_out, n_out);
    for (const auto& k : kraus) out = out + k.k * rho.rho * k.k.adjoint();
    const double prob = out.trace().real();
    if (prob < 1e-14) throw ZeroOutcome("operation annihilates the state");
    return {DensityMatrix{out * cplx{1.0 / prob, 0.0}}, prob};
}

MeasurementRecord measure_povm(const PovmCircuitBundle& bundle, const QuditState& psi,
                               std::optional<std::uint64_t> shots,
                               std::optional<std::uint64_t> seed) {
    if (psi.dim() != bundle.dim) throw DimensionMismatch("state dimension mismatch");

    const ComplexMatrix full = bundle.end_to_end_unitary();
    cvector padded(bundle.total_modes, cplx{0.0, 0.0});
    std::copy(psi.amplitudes.begin(), psi.amplitudes.end(), padded.begin());
    const cvector extended = full.apply(padded);

    const std::size_t n = bundle.routing.size();
    MeasurementRecord record;
    record.outcome_probs.resize(n, 0.0);
    record.outcome_states.resize(n);
    for (const auto& route : bundle.routing) {
        double p = 0.0;
        for (std::size_t m = route.port_begin; m < route.port_end; ++m)
            p += std::norm(extended[m]);
        record.outcome_probs[route.outcome] = p;
        // Post-measurement state, re-embedded into the signal space.
        cvector state(bundle.dim, cplx{0.0, 0.0});
        if (p > 1e-14) {
            const double inv = 1.0 / std::sqrt(p);
            for (std::size_t i = 0; i < route.port_end - route.port_begin; ++i)
                state[route.embed_rows[i]] = extended[route.port_begin + i] * inv;
        }
        record.outcome_states[route.outcome] = QuditState{state};
    }

    if (shots) {
        ShotRecord sr;
        sr.seed = seed.value_or(std::random_device{}());
        sr.total = *shots;
        sr.counts.assign(n, 0);
        std::mt19937_64 rng(sr.seed);
        std::discrete_distribution<std::size_t> dist(record.outcome_probs.begin(),
                                                     record.outcome_probs.end());
        for (std::uint64_t s = 0; s < sr.total; ++s) sr.counts[dist(rng)]++;
        record.shots = sr;
    }
    return record;
}

DensityMatrix dephase_and_mix(const PovmCircuitBundle& bundle, const DensityMatrix& rho) {
    if (rho.rho.rows() != bundle.dim || rho.rho.cols() != bundle.dim)
        throw DimensionMismatch("density matrix dimension mismatch");

    const ComplexMatrix full = bundle.end_to_end_unitary();
    ComplexMatrix padded(bundle.total_modes, bundle.total_modes);
    padded.set_block(0, 0, rho.rho);
    const ComplexMatrix rho_ext = full * padded * full.adjoint();

    // Dephasing zeroes inter-outcome coherences; the contraction then
    // folds each block back into the signal space with weight 1/n.
    const double n = static_cast<double>(bundle.routing.size());
    ComplexMatrix out(bundle.dim, bundle.dim);
    for (const auto& route : bundle.routing) {
        const std::size_t r = route.port_end - route.port_begin;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j)
                out(route.embed_rows[i], route.embed_rows[j]) +=
                    rho_ext(route.port_begin + i, route.port_begin + j) / n;
    }
    return DensityMatrix{out};
}

OpticalCircuit prepare_qudit(const QuditState& target) {
    const double norm = target.norm();
    if (norm > 1.0 + 1e-9) throw NotContraction(norm);
    ComplexMatrix column(target.dim(), 1);
    for (std::size_t i = 0; i < target.dim(); ++i) column(i, 0) = target.amplitudes[i];
    return dilation_to_circuit(dilate(validate_contraction(column)));
}

std::pair<ContractionMap, double> entanglement_filter(const std::vector<double>& schmidt) {
    double sum = 0.0;
    double cmin = 1.0;
    for (double c : schmidt) {
        if (c <= 0.0) throw DegenerateInput("Schmidt coefficients must be positive");
        sum += c * c;
        cmin = std::min(cmin, c);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw DegenerateInput("Schmidt coefficients must be normalized");

    std::vector<double> diag(schmidt.size());
    for (std::size_t i = 0; i < schmidt.size(); ++i) diag[i] = cmin / schmidt[i];
    ContractionMap map;
    map.k = ComplexMatrix::diagonal(diag);
    map.n_in = schmidt.size();
    map.n_out = schmidt.size();
    const double prob = static_cast<double>(schmidt.size()) * cmin * cmin;
    return {map, prob};
}

} // namespace dilatic
