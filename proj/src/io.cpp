#include "dilatic/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

namespace dilatic {

namespace {

using nlohmann::json;

std::string read_all(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_all(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path + " for writing");
    out << text;
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

json parse_document(const std::string& path) {
    const std::string text = read_all(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(path + ":" + std::to_string(line_of_offset(text, e.byte)) +
                         ": " + e.what());
    }
}

double finite_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ParseError(what + " is not a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(what + " is not finite");
    return v;
}

cplx parse_entry(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError(what + " must be a [re, im] pair");
    return {finite_number(j[0], what + " real part"),
            finite_number(j[1], what + " imaginary part")};
}

ComplexMatrix parse_matrix(const json& j, const std::string& what) {
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("entries"))
        throw ParseError(what + " needs rows, cols, entries");
    const std::size_t rows = j["rows"].get<std::size_t>();
    const std::size_t cols = j["cols"].get<std::size_t>();
    if (rows < 1 || cols < 1) throw ParseError(what + " must be at least 1x1");
    const json& entries = j["entries"];
    if (!entries.is_array() || entries.size() != rows * cols)
        throw ParseError(what + " entry count does not match declared dims");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows * cols; ++i)
        m.data()[i] = parse_entry(entries[i], what + " entry " + std::to_string(i));
    return m;
}

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (const auto& z : m.data()) entries.push_back({z.real(), z.imag()});
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

json vector_to_json(const cvector& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back({z.real(), z.imag()});
    return out;
}

} // namespace

std::string file_kind_name(FileKind kind) {
    switch (kind) {
        case FileKind::contraction: return "contraction";
        case FileKind::unitary: return "unitary";
        case FileKind::povm: return "povm";
        case FileKind::state: return "state";
        case FileKind::density: return "density";
    }
    return "unknown";
}

MatrixFile read_matrix_file(const std::string& path) {
    const json j = parse_document(path);
    MatrixFile doc;
    if (!j.contains("kind") || !j["kind"].is_string())
        throw ParseError(path + ": missing \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "contraction") doc.kind = FileKind::contraction;
    else if (kind == "unitary") doc.kind = FileKind::unitary;
    else if (kind == "povm") doc.kind = FileKind::povm;
    else if (kind == "state") doc.kind = FileKind::state;
    else if (kind == "density") doc.kind = FileKind::density;
    else throw ParseError(path + ": unknown kind \"" + kind + "\"");

    doc.label = j.value("label", "");
    doc.comment = j.value("comment", "");

    switch (doc.kind) {
        case FileKind::povm: {
            if (!j.contains("dim") || !j.contains("elements"))
                throw ParseError(path + ": povm needs dim and elements");
            doc.dim = j["dim"].get<std::size_t>();
            for (std::size_t i = 0; i < j["elements"].size(); ++i)
                doc.povm_elements.push_back(
                    parse_matrix(j["elements"][i], path + ": element " + std::to_string(i)));
            break;
        }
        case FileKind::state: {
            if (!j.contains("amplitudes"))
                throw ParseError(path + ": state needs amplitudes");
            const json& amps = j["amplitudes"];
            for (std::size_t i = 0; i < amps.size(); ++i)
                doc.state.push_back(
                    parse_entry(amps[i], path + ": amplitude " + std::to_string(i)));
            if (doc.state.empty()) throw ParseError(path + ": empty state");
            doc.dim = doc.state.size();
            break;
        }
        default:
            doc.matrix = parse_matrix(j, path);
            break;
    }
    return doc;
}

void write_matrix_file(const std::string& path, const MatrixFile& doc) {
    json j;
    j["kind"] = file_kind_name(doc.kind);
    if (!doc.label.empty()) j["label"] = doc.label;
    if (!doc.comment.empty()) j["comment"] = doc.comment;
    switch (doc.kind) {
        case FileKind::povm: {
            j["dim"] = doc.dim;
            json elems = json::array();
            for (const auto& e : doc.povm_elements) elems.push_back(matrix_to_json(e));
            j["elements"] = std::move(elems);
            break;
        }
        case FileKind::state:
            j["amplitudes"] = vector_to_json(doc.state);
            break;
        default: {
            json m = matrix_to_json(doc.matrix);
            j.update(m);
            break;
        }
    }
    write_all(path, j.dump(2) + "\n");
}

CircuitFile read_circuit_file(const std::string& path) {
    const json j = parse_document(path);
    CircuitFile doc;
    if (!j.contains("mode_count") || !j.contains("elements"))
        throw ParseError(path + ": circuit needs mode_count and elements");
    doc.circuit.mode_count = j["mode_count"].get<std::size_t>();
    for (std::size_t i = 0; i < j["elements"].size(); ++i) {
        const json& je = j["elements"][i];
        const std::string what = path + ": element " + std::to_string(i);
        OpticalElement e;
        const std::string kind = je.value("kind", "");
        if (kind == "beam_splitter") e.kind = ElementKind::beam_splitter;
        else if (kind == "phase_shifter") e.kind = ElementKind::phase_shifter;
        else throw ParseError(what + ": unknown element kind");
        const json& modes = je.at("modes");
        if (e.kind == ElementKind::beam_splitter) {
            if (modes.size() != 2) throw ParseError(what + ": beam splitter needs two modes");
            e.mode_i = modes[0].get<std::size_t>();
            e.mode_j = modes[1].get<std::size_t>();
            if (e.mode_i >= e.mode_j) throw ParseError(what + ": modes must satisfy i < j");
            e.theta = finite_number(je.at("theta"), what + " theta");
        } else {
            if (modes.size() != 1) throw ParseError(what + ": phase shifter needs one mode");
            e.mode_i = modes[0].get<std::size_t>();
            e.mode_j = e.mode_i;
        }
        e.phi = finite_number(je.at("phi"), what + " phi");
        if (std::max(e.mode_i, e.mode_j) >= doc.circuit.mode_count)
            throw ParseError(what + ": mode index out of range");
        doc.circuit.elements.push_back(e);
    }
    for (const json& jl : j.value("module_labels", json::array()))
        doc.circuit.module_labels.push_back({jl.at("name").get<std::string>(),
                                             jl.at("begin").get<std::size_t>(),
                                             jl.at("end").get<std::size_t>()});
    doc.signal_dim = j.value("signal_dim", doc.circuit.mode_count);
    if (j.contains("output_dim")) doc.output_dim = j["output_dim"].get<std::size_t>();
    for (const json& jr : j.value("routing", json::array())) {
        OutcomeRoute route;
        route.outcome = jr.at("outcome").get<std::size_t>();
        route.port_begin = jr.at("port_begin").get<std::size_t>();
        route.port_end = jr.at("port_end").get<std::size_t>();
        for (const json& e : jr.value("embed_rows", json::array()))
            route.embed_rows.push_back(e.get<std::size_t>());
        doc.routing.push_back(route);
    }
    for (std::size_t i = 0; i < j.value("detection_ops", json::array()).size(); ++i)
        doc.detection_ops.push_back(parse_matrix(j["detection_ops"][i],
                                                 path + ": detection op " + std::to_string(i)));
    return doc;
}

void write_circuit_file(const std::string& path, const CircuitFile& doc) {
    json j;
    j["mode_count"] = doc.circuit.mode_count;
    json elems = json::array();
    for (const auto& e : doc.circuit.elements) {
        json je;
        if (e.kind == ElementKind::beam_splitter) {
            je["kind"] = "beam_splitter";
            je["modes"] = {e.mode_i, e.mode_j};
            je["theta"] = e.theta;
        } else {
            je["kind"] = "phase_shifter";
            je["modes"] = {e.mode_i};
        }
        je["phi"] = e.phi;
        elems.push_back(std::move(je));
    }
    j["elements"] = std::move(elems);
    json labels = json::array();
    for (const auto& l : doc.circuit.module_labels)
        labels.push_back({{"name", l.name}, {"begin", l.begin}, {"end", l.end}});
    j["module_labels"] = std::move(labels);
    j["signal_dim"] = doc.signal_dim;
    if (doc.output_dim) j["output_dim"] = *doc.output_dim;
    if (!doc.routing.empty()) {
        json routes = json::array();
        for (const auto& r : doc.routing)
            routes.push_back({{"outcome", r.outcome},
                              {"port_begin", r.port_begin},
                              {"port_end", r.port_end},
                              {"embed_rows", r.embed_rows}});
        j["routing"] = std::move(routes);
    }
    if (!doc.detection_ops.empty()) {
        json ops = json::array();
        for (const auto& a : doc.detection_ops) ops.push_back(matrix_to_json(a));
        j["detection_ops"] = std::move(ops);
    }
    write_all(path, j.dump(2) + "\n");
}

} // namespace dilatic
