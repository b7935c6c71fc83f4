#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dilatic/decompositions.hpp"
#include "dilatic/dilation.hpp"
#include "dilatic/interferometer.hpp"
#include "dilatic/io.hpp"
#include "dilatic/povm.hpp"
#include "dilatic/simulator.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using namespace dilatic;

double default_tol() {
    if (const char* env = std::getenv("DILATIC_TOL")) {
        try {
            return std::stod(env);
        } catch (...) {
            throw ParseError("DILATIC_TOL is not a number");
        }
    }
    return 1e-10;
}

void print_header(double tol) {
    std::cout << "dilatic " << kVersion << "\n";
    std::cout << "tolerance: " << tol << "\n";
}

int cmd_compile_map(const std::string& input, const std::string& output, bool rescale,
                    double tol) {
    const MatrixFile doc = read_matrix_file(input);
    if (doc.kind != FileKind::contraction) {
        std::cerr << "error: input kind must be contraction, got "
                  << file_kind_name(doc.kind) << "\n";
        return 2;
    }
    const ContractionMap map = validate_contraction(
        doc.matrix, rescale ? ContractionPolicy::rescale : ContractionPolicy::reject);
    const DilationResult dil = dilate(map);
    const OpticalCircuit circuit = dilation_to_circuit(dil);

    const ComplexMatrix recomposed = recompose(circuit);
    const double residual =
        (recomposed.block(0, 0, map.n_out, map.n_in) - map.k).max_abs();

    CircuitFile out;
    out.circuit = circuit;
    out.signal_dim = map.n_in;
    out.output_dim = map.n_out;
    write_circuit_file(output, out);

    print_header(tol);
    std::cout << "input dim:  " << map.n_in << "\n";
    std::cout << "output dim: " << map.n_out << "\n";
    if (map.rescale_factor != 1.0)
        std::cout << "rescaled by: " << std::setprecision(15) << map.rescale_factor << "\n";
    std::cout << "singular values:";
    for (std::size_t i = 0; i < std::min(map.n_in, map.n_out); ++i)
        std::cout << " " << std::setprecision(15) << dil.sigma_prime[i];
    std::cout << "\n";
    std::cout << "beam splitters: " << circuit.beam_splitter_count() << "\n";
    std::cout << "bound: " << beam_splitter_bound(map.n_in, map.n_out) << "\n";
    std::cout << "verification residual: " << residual << "\n";
    if (residual > tol) {
        std::cerr << "error: residual exceeds tolerance\n";
        return 1;
    }
    return 0;
}

int cmd_compile_povm(const std::string& input, const std::string& output,
                     const std::string& order, double tol) {
    const MatrixFile doc = read_matrix_file(input);
    if (doc.kind != FileKind::povm) {
        std::cerr << "error: input kind must be povm, got " << file_kind_name(doc.kind)
                  << "\n";
        return 2;
    }
    std::vector<ComplexMatrix> elements = doc.povm_elements;
    std::vector<std::size_t> perm(elements.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    if (order == "auto") {
        // Unit-eigenvalue elements first: their dark ports shrink every
        // later stage.
        std::vector<double> top(elements.size());
        for (std::size_t i = 0; i < elements.size(); ++i)
            top[i] = operator_norm(elements[i]);
        std::stable_sort(perm.begin(), perm.end(),
                         [&](std::size_t a, std::size_t b) { return top[a] > top[b]; });
        std::vector<ComplexMatrix> reordered;
        for (std::size_t i : perm) reordered.push_back(elements[i]);
        elements = std::move(reordered);
    }

    const PovmSpec spec = validate_povm(elements, doc.dim);
    const PovmCircuitBundle bundle = compile_povm(spec);
    const OpticalCircuit circuit = povm_to_circuit(bundle);

    CircuitFile out;
    out.circuit = circuit;
    out.signal_dim = bundle.dim;
    out.routing = bundle.routing;
    for (const auto& op : bundle.detection_ops) out.detection_ops.push_back(op.a);
    write_circuit_file(output, out);

    print_header(tol);
    const std::size_t n = spec.elements.size();
    std::cout << "elements: " << n << "  dim: " << spec.dim << "\n";
    if (order == "auto") {
        std::cout << "element order:";
        for (std::size_t i : perm) std::cout << " " << i;
        std::cout << "\n";
    }
    for (std::size_t k = 0; k + 1 < bundle.stages.size(); ++k) {
        const auto& st = bundle.stages[k];
        std::cout << "stage " << k + 1 << " sigma*:";
        for (double s : st.sigma_star) std::cout << " " << std::setprecision(15) << s;
        std::cout << "  rank drop: " << st.rank_drop << "\n";
    }
    std::cout << "modules: " << bundle.modules.size() << "\n";
    std::cout << "beam splitters: " << circuit.beam_splitter_count() << "\n";
    std::cout << "total modes: " << bundle.total_modes << "\n";
    return 0;
}

int cmd_simulate(const std::string& circuit_path, const std::string& state_path,
                 std::optional<std::uint64_t> shots, std::optional<std::uint64_t> seed,
                 bool as_json, double tol) {
    const CircuitFile cf = read_circuit_file(circuit_path);
    const MatrixFile sf = read_matrix_file(state_path);
    if (sf.kind != FileKind::state) {
        std::cerr << "error: state file kind must be state\n";
        return 2;
    }
    if (sf.state.size() != cf.signal_dim) {
        std::cerr << "error: state dim " << sf.state.size()
                  << " does not match circuit signal dim " << cf.signal_dim << "\n";
        return 2;
    }

    const ComplexMatrix u = recompose(cf.circuit);
    cvector padded(cf.circuit.mode_count, cplx{0.0, 0.0});
    std::copy(sf.state.begin(), sf.state.end(), padded.begin());
    const cvector out = u.apply(padded);

    std::vector<double> probs;
    std::vector<std::string> prob_names;
    if (cf.is_povm_bundle()) {
        probs.resize(cf.routing.size(), 0.0);
        for (const auto& route : cf.routing) {
            double p = 0.0;
            for (std::size_t m = route.port_begin; m < route.port_end; ++m)
                p += std::norm(out[m]);
            probs[route.outcome] = p;
            prob_names.push_back("outcome " + std::to_string(route.outcome));
        }
    } else {
        for (std::size_t m = 0; m < out.size(); ++m) {
            probs.push_back(std::norm(out[m]));
            prob_names.push_back("port " + std::to_string(m));
        }
    }

    std::optional<ShotRecord> shot_record;
    if (shots) {
        ShotRecord sr;
        sr.seed = seed.value_or(std::random_device{}());
        sr.total = *shots;
        sr.counts.assign(probs.size(), 0);
        std::mt19937_64 rng(sr.seed);
        std::discrete_distribution<std::size_t> dist(probs.begin(), probs.end());
        for (std::uint64_t s = 0; s < sr.total; ++s) sr.counts[dist(rng)]++;
        shot_record = sr;
    }

    if (as_json) {
        nlohmann::json j;
        j["version"] = kVersion;
        j["tolerance"] = tol;
        j["probabilities"] = probs;
        nlohmann::json amps = nlohmann::json::array();
        for (const auto& z : out) amps.push_back({z.real(), z.imag()});
        j["output_amplitudes"] = std::move(amps);
        if (cf.output_dim) {
            double success = 0.0;
            for (std::size_t m = 0; m < *cf.output_dim; ++m) success += std::norm(out[m]);
            j["success_prob"] = success;
            j["leak_prob"] = 1.0 - success;
        }
        if (shot_record) {
            j["seed"] = shot_record->seed;
            j["shots"] = shot_record->total;
            j["counts"] = shot_record->counts;
        }
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    print_header(tol);
    std::cout << std::setprecision(12);
    for (std::size_t i = 0; i < probs.size(); ++i)
        std::cout << prob_names[i] << " prob: " << probs[i] << "\n";
    if (cf.output_dim && !cf.is_povm_bundle()) {
        double success = 0.0;
        for (std::size_t m = 0; m < *cf.output_dim; ++m) success += std::norm(out[m]);
        std::cout << "success prob: " << success << "\n";
        std::cout << "leak prob: " << 1.0 - success << "\n";
    }
    if (cf.is_povm_bundle()) {
        for (const auto& route : cf.routing) {
            std::cout << "outcome " << route.outcome << " state:";
            const double p = probs[route.outcome];
            for (std::size_t m = route.port_begin; m < route.port_end; ++m) {
                const cplx z = p > 1e-14 ? out[m] / std::sqrt(p) : cplx{0.0, 0.0};
                std::cout << " (" << z.real() << "," << z.imag() << ")";
            }
            std::cout << "\n";
        }
    } else {
        std::cout << "output amplitudes:";
        for (const auto& z : out) std::cout << " (" << z.real() << "," << z.imag() << ")";
        std::cout << "\n";
    }
    if (shot_record) {
        std::cout << "seed: " << shot_record->seed << "\n";
        std::cout << "shots: " << shot_record->total << "\n";
        std::cout << "counts:";
        for (auto c : shot_record->counts) std::cout << " " << c;
        std::cout << "\n";
    }
    return 0;
}

int cmd_verify(const std::string& circuit_path, const std::string& matrix_path, double tol) {
    const CircuitFile cf = read_circuit_file(circuit_path);
    const MatrixFile mf = read_matrix_file(matrix_path);
    const ComplexMatrix recomposed = recompose(cf.circuit);

    double residual = 0.0;
    switch (mf.kind) {
        case FileKind::unitary: {
            if (mf.matrix.rows() != recomposed.rows()) {
                std::cerr << "error: dimension mismatch\n";
                return 2;
            }
            residual = (recomposed - mf.matrix).max_abs();
            break;
        }
        case FileKind::contraction: {
            const std::size_t n_out = cf.output_dim.value_or(mf.matrix.rows());
            if (n_out != mf.matrix.rows() || cf.signal_dim != mf.matrix.cols() ||
                n_out > recomposed.rows() || cf.signal_dim > recomposed.cols()) {
                std::cerr << "error: dimension mismatch\n";
                return 2;
            }
            residual =
                (recomposed.block(0, 0, n_out, mf.matrix.cols()) - mf.matrix).max_abs();
            break;
        }
        case FileKind::povm: {
            if (!cf.is_povm_bundle() || cf.routing.size() != mf.povm_elements.size()) {
                std::cerr << "error: circuit is not a bundle for this POVM\n";
                return 2;
            }
            for (const auto& route : cf.routing) {
                const ComplexMatrix block = recomposed.block(
                    route.port_begin, 0, route.port_end - route.port_begin, cf.signal_dim);
                const ComplexMatrix gram = block.adjoint() * block;
                residual = std::max(residual,
                                    (gram - mf.povm_elements[route.outcome]).max_abs());
            }
            break;
        }
        default:
            std::cerr << "error: matrix kind must be unitary, contraction or povm\n";
            return 2;
    }

    print_header(tol);
    std::cout << "max residual: " << std::setprecision(6) << residual << "\n";
    if (residual > tol) {
        std::cout << "verification: FAIL\n";
        return 1;
    }
    std::cout << "verification: PASS\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"linear-optics compiler and simulator for single-photon qudits"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("dilatic ") + kVersion);

    std::string input, output, order = "given";
    bool rescale = false, as_json = false;
    double tol = -1.0;
    std::optional<std::uint64_t> shots, seed;

    auto* compile_map = app.add_subcommand("compile-map", "compile a contraction into a circuit");
    compile_map->add_option("input", input)->required();
    compile_map->add_option("output", output)->required();
    compile_map->add_flag("--rescale", rescale, "rescale non-contractions to unit norm");
    compile_map->add_option("--tol", tol);

    auto* compile_povm = app.add_subcommand("compile-povm", "compile a POVM into a bundle");
    compile_povm->add_option("input", input)->required();
    compile_povm->add_option("output", output)->required();
    compile_povm->add_option("--order", order)->check(CLI::IsMember({"given", "auto"}));
    compile_povm->add_option("--tol", tol);

    auto* simulate = app.add_subcommand("simulate", "propagate a state through a circuit");
    simulate->add_option("circuit", input)->required();
    simulate->add_option("state", output)->required();
    std::uint64_t shots_arg = 0, seed_arg = 0;
    auto* shots_opt = simulate->add_option("--shots", shots_arg);
    auto* seed_opt = simulate->add_option("--seed", seed_arg);
    simulate->add_flag("--json", as_json);

    auto* verify = app.add_subcommand("verify", "check a circuit against a matrix");
    verify->add_option("circuit", input)->required();
    verify->add_option("matrix", output)->required();
    verify->add_option("--tol", tol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (tol < 0.0) tol = default_tol();
        if (*shots_opt) shots = shots_arg;
        if (*seed_opt) seed = seed_arg;

        if (app.got_subcommand(compile_map))
            return cmd_compile_map(input, output, rescale, tol);
        if (app.got_subcommand(compile_povm))
            return cmd_compile_povm(input, output, order, tol);
        if (app.got_subcommand(simulate))
            return cmd_simulate(input, output, shots, seed, as_json, tol);
        if (app.got_subcommand(verify)) return cmd_verify(input, output, tol);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
