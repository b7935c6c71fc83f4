#include "dilatic/povm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dilatic {

namespace {

constexpr double kSigmaStarSlack = 1e-6;
constexpr double kPruneTol = 1e-12;

ComplexMatrix embed_module(const UnitaryModule& mod, std::size_t total_modes) {
    ComplexMatrix full = ComplexMatrix::identity(total_modes);
    for (std::size_t i = 0; i < mod.modes.size(); ++i)
        for (std::size_t j = 0; j < mod.modes.size(); ++j)
            full(mod.modes[i], mod.modes[j]) = mod.u(i, j);
    return full;
}

// Left-multiply acc by the module embedded at its global modes.
void apply_module(const UnitaryModule& mod, ComplexMatrix& acc) {
    const std::size_t d = mod.modes.size();
    std::vector<cplx> col(d);
    for (std::size_t c = 0; c < acc.cols(); ++c) {
        for (std::size_t i = 0; i < d; ++i) col[i] = acc(mod.modes[i], c);
        for (std::size_t i = 0; i < d; ++i) {
            cplx sum = 0.0;
            for (std::size_t j = 0; j < d; ++j) sum += mod.u(i, j) * col[j];
            acc(mod.modes[i], c) = sum;
        }
    }
}

// Rows of a with norm above tol, in order; at most max_rows of them
// (largest first if over budget).
std::vector<std::size_t> nonzero_rows(const ComplexMatrix& a, std::size_t max_rows) {
    std::vector<std::pair<std::size_t, double>> norms;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += std::norm(a(i, j));
        if (std::sqrt(s) > kPruneTol) norms.emplace_back(i, std::sqrt(s));
    }
    if (norms.size() > max_rows) {
        std::stable_sort(norms.begin(), norms.end(),
                         [](const auto& x, const auto& y) { return x.second > y.second; });
        norms.resize(max_rows);
        std::stable_sort(norms.begin(), norms.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    std::vector<std::size_t> rows;
    rows.reserve(norms.size());
    for (const auto& [i, n] : norms) rows.push_back(i);
    return rows;
}

} // namespace

ComplexMatrix PovmCircuitBundle::end_to_end_unitary() const {
    ComplexMatrix acc = ComplexMatrix::identity(total_modes);
    for (const auto& mod : modules) apply_module(mod, acc);
    return acc;
}

ComplexMatrix PovmCircuitBundle::outcome_block(std::size_t outcome) const {
    const ComplexMatrix full = end_to_end_unitary();
    for (const auto& route : routing)
        if (route.outcome == outcome)
            return full.block(route.port_begin, 0, route.port_end - route.port_begin, dim);
    throw DimensionMismatch("no route for outcome " + std::to_string(outcome));
}

PovmSpec validate_povm(const std::vector<ComplexMatrix>& elements, std::size_t dim) {
    if (elements.size() < 2) throw Error("a POVM needs at least two elements");
    ComplexMatrix sum(dim, dim);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto& pi = elements[i];
        if (pi.rows() != dim || pi.cols() != dim)
            throw DimensionMismatch("POVM element " + std::to_string(i) +
                                    " has wrong dimensions");
        if (pi.hermiticity_defect() > 1e-10)
            throw NotHermitian("POVM element " + std::to_string(i) + " is not Hermitian");
        HermitianEigen eig = hermitian_eigen(pi, 1e-10);
        if (!eig.eigenvalues.empty() && eig.eigenvalues.back() < -1e-10)
            throw NotPositive("POVM element " + std::to_string(i) +
                              " has eigenvalue " + std::to_string(eig.eigenvalues.back()));
        sum = sum + pi;
    }
    for (std::size_t i = 0; i < dim; ++i) sum(i, i) -= 1.0;
    const double residual = sum.max_abs();
    if (residual > 1e-9) throw NotComplete(residual);

    PovmSpec spec;
    spec.dim = dim;
    spec.elements = elements;
    return spec;
}

std::vector<DetectionOperator> detection_operators(const PovmSpec& p) {
    std::vector<DetectionOperator> ops;
    ops.reserve(p.elements.size());
    for (std::size_t i = 0; i < p.elements.size(); ++i)
        ops.push_back({cholesky_psd(p.elements[i], 1e-10), i});
    return ops;
}

StageDecomposition compile_stage(ResidualContext& ctx, const ComplexMatrix& pi_next,
                                 double rank_tol) {
    const std::size_t r = ctx.active_dim;
    const ComplexMatrix c_plus = pseudo_inverse(ctx.c, rank_tol);
    ComplexMatrix m = c_plus.adjoint() * pi_next * c_plus;
    // Symmetrize before the eigensolver.
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
            const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
            m(i, j) = avg;
            m(j, i) = std::conj(avg);
        }

    HermitianEigen eig = hermitian_eigen(m, 1e-8 * std::max(1.0, m.max_abs()));

    StageDecomposition stage;
    stage.active_dim = r;
    stage.u_stage = eig.eigenvectors.adjoint();
    stage.sigma_star.resize(r);
    stage.sigma_c.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        double s = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
        if (s > 1.0 + kSigmaStarSlack)
            throw StageInfeasible("stage singular value " + std::to_string(s) +
                                  " exceeds 1; POVM inconsistent or tolerance failure");
        if (s > 1.0) s = 1.0;
        stage.sigma_star[i] = s;
        stage.sigma_c[i] = std::sqrt(std::max(1.0 - s * s, 0.0));
    }

    // Dark ports: complement values at zero, always the leading rows
    // since sigma_star is descending.
    std::size_t drop = 0;
    while (drop < r && stage.sigma_c[drop] <= rank_tol) ++drop;
    stage.rank_drop = drop;

    const ComplexMatrix rotated = stage.u_stage * ctx.c;
    ComplexMatrix next(r - drop, ctx.c.cols());
    for (std::size_t i = drop; i < r; ++i)
        for (std::size_t j = 0; j < ctx.c.cols(); ++j)
            next(i - drop, j) = stage.sigma_c[i] * rotated(i, j);
    ctx.c = next;
    ctx.active_dim = r - drop;
    return stage;
}

ComplexMatrix choose_v(const ComplexMatrix& stage_block, const ComplexMatrix& target,
                       const std::optional<ComplexMatrix>& v_override) {
    const std::size_t r = stage_block.rows();
    if (v_override) {
        if (v_override->rows() != r || v_override->cols() != r)
            throw NotUnitary("override has wrong dimensions");
        if (v_override->unitarity_defect() > 1e-8)
            throw NotUnitary("override is not unitary");
        return *v_override;
    }
    // Orthogonal Procrustes: the unitary closest to mapping the stage
    // block onto the target.
    const ComplexMatrix x = target * stage_block.adjoint();
    SvdResult s = svd(x);
    return s.u * s.v.adjoint();
}

PovmCircuitBundle compile_povm(const PovmSpec& p) {
    const std::size_t n = p.elements.size();
    const std::size_t dim = p.dim;

    PovmCircuitBundle bundle;
    bundle.dim = dim;
    bundle.detection_ops = detection_operators(p);

    ResidualContext ctx{ComplexMatrix::identity(dim), dim};

    struct StageRecord {
        ComplexMatrix c_enter; // residual entering the stage
    };
    std::vector<StageRecord> records;

    for (std::size_t k = 0; k + 1 < n; ++k) {
        records.push_back({ctx.c});
        bundle.stages.push_back(compile_stage(ctx, p.elements[k]));
    }

    // Port layout: outcome k keeps the segment its stage ran on; the
    // complement continues on freshly allocated ancilla modes, minus
    // any dark ports.
    std::size_t seg_begin = 0;
    std::size_t alloc_top = dim;

    auto make_target = [&](std::size_t outcome, std::size_t ports,
                           std::vector<std::size_t>& embed) {
        const ComplexMatrix& a = bundle.detection_ops[outcome].a;
        embed = nonzero_rows(a, ports);
        ComplexMatrix target(ports, dim);
        for (std::size_t i = 0; i < embed.size(); ++i)
            for (std::size_t j = 0; j < dim; ++j) target(i, j) = a(embed[i], j);
        // Pad the embedding with the unused (zero) row positions.
        for (std::size_t row = 0; row < dim && embed.size() < ports; ++row)
            if (std::find(embed.begin(), embed.end(), row) == embed.end())
                embed.push_back(row);
        return target;
    };

    for (std::size_t k = 0; k + 1 < n; ++k) {
        StageDecomposition& stage = bundle.stages[k];
        const std::size_t r = stage.active_dim;
        std::vector<std::size_t> seg(r);
        for (std::size_t i = 0; i < r; ++i) seg[i] = seg_begin + i;
        std::vector<std::size_t> anc(r);
        for (std::size_t i = 0; i < r; ++i) anc[i] = alloc_top + i;

        const std::string tag = std::to_string(k + 1);
        bundle.modules.push_back(
            {k == 0 ? "U_1" : "U_" + tag + "L", seg, stage.u_stage});

        std::vector<std::size_t> g_modes = seg;
        g_modes.insert(g_modes.end(), anc.begin(), anc.end());
        bundle.modules.push_back({"G_" + tag, g_modes, build_g(stage.sigma_star)});

        // Captured branch: V making the block reproduce the Cholesky
        // detection operator.
        const ComplexMatrix block =
            ComplexMatrix::diagonal(stage.sigma_star) * stage.u_stage * records[k].c_enter;
        std::vector<std::size_t> embed;
        const ComplexMatrix target = make_target(k, r, embed);
        stage.v_stage = choose_v(block, target);
        bundle.modules.push_back({"V_" + tag, seg, stage.v_stage});

        bundle.routing.push_back({k, seg_begin, seg_begin + r, embed});

        seg_begin = alloc_top + stage.rank_drop;
        alloc_top += r;
    }

    // Last outcome: the residual line itself, finished by V_n.
    {
        const std::size_t r = ctx.active_dim;
        std::vector<std::size_t> seg(r);
        for (std::size_t i = 0; i < r; ++i) seg[i] = seg_begin + i;

        std::vector<std::size_t> embed;
        const ComplexMatrix target = make_target(n - 1, r, embed);
        const ComplexMatrix v_last = choose_v(ctx.c, target);
        bundle.modules.push_back({"V_" + std::to_string(n), seg, v_last});
        bundle.routing.push_back({n - 1, seg_begin, seg_begin + r, embed});

        StageDecomposition last;
        last.active_dim = r;
        last.v_stage = v_last;
        bundle.stages.push_back(last);
    }

    bundle.total_modes = alloc_top;
    return bundle;
}

void override_v(PovmCircuitBundle& bundle, std::size_t outcome, const ComplexMatrix& v) {
    const std::size_t n = bundle.stages.size();
    if (outcome >= n) throw DimensionMismatch("outcome index out of range");
    const std::size_t module_idx = outcome + 1 < n ? 3 * outcome + 2 : 3 * (n - 1);
    UnitaryModule& mod = bundle.modules[module_idx];
    if (v.rows() != mod.modes.size() || v.cols() != mod.modes.size())
        throw NotUnitary("override has wrong dimensions");
    if (v.unitarity_defect() > 1e-8) throw NotUnitary("override is not unitary");
    mod.u = v;
    bundle.stages[outcome].v_stage = v;
}

OpticalCircuit povm_to_circuit(const PovmCircuitBundle& bundle) {
    OpticalCircuit circuit;
    circuit.mode_count = bundle.total_modes;

    for (const auto& mod : bundle.modules) {
        const std::size_t begin = circuit.elements.size();
        if (mod.label.rfind("G_", 0) == 0) {
            const std::size_t half = mod.modes.size() / 2;
            for (std::size_t i = 0; i < half; ++i) {
                const double sigma = mod.u(i, i).real();
                const double theta = std::acos(std::clamp(sigma, 0.0, 1.0));
                if (theta >= kPruneTol) {
                    OpticalElement bs;
                    bs.kind = ElementKind::beam_splitter;
                    bs.mode_i = mod.modes[i];
                    bs.mode_j = mod.modes[i + half];
                    bs.theta = theta;
                    bs.phi = std::numbers::pi;
                    circuit.elements.push_back(bs);
                }
                OpticalElement ps;
                ps.kind = ElementKind::phase_shifter;
                ps.mode_i = mod.modes[i + half];
                ps.mode_j = ps.mode_i;
                ps.phi = std::numbers::pi;
                circuit.elements.push_back(ps);
            }
        } else {
            OpticalCircuit part = reck_decompose(mod.u);
            for (OpticalElement e : part.elements) {
                e.mode_i = mod.modes[e.mode_i];
                if (e.kind == ElementKind::beam_splitter) e.mode_j = mod.modes[e.mode_j];
                else e.mode_j = e.mode_i;
                circuit.elements.push_back(e);
            }
        }
        circuit.module_labels.push_back({mod.label, begin, circuit.elements.size()});
    }
    return circuit;
}

} // namespace dilatic
