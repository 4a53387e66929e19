#pragma once

// Text formats: the network JSON document, flow files, DIMACS-style CNF, template
// lists, reduction side-files and DOT export.
//
// Network document:
//   {
//     "version": 1,
//     "state_count": 2,
//     "prior": [0.5, 0.5],
//     "vertices": ["s", "a", "t"],
//     "source": "s", "sink": "t",
//     "edges": [{"id": "e1", "from": "s", "to": "a", "reliability": [0.9, 0.4]}, ...]
//   }
// With "probabilities": "failure" the edges carry "failure" arrays instead, which are
// complemented on load. Documents are always written in reliability form.
//
// Flow file:
//   # comment
//   network diamond.json
//   e1 0.5
//   e2 0.5

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrp/model.hpp"
#include "mrp/reductions.hpp"
#include "mrp/rounding.hpp"

namespace mrp {

inline constexpr int kDocumentVersion = 1;

inline std::string read_file(const std::string& filename) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw parse_error("cannot open '" + filename + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Shortest decimal text that reads back to the same double.
inline std::string format_double(double x) {
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

// ---------------------------------------------------------------------------
// Network document

inline Network network_from_json(const nlohmann::json& doc) {
    try {
        if (!doc.is_object()) throw parse_error("network document must be a JSON object");
        if (doc.contains("version") && doc.at("version").get<int>() != kDocumentVersion)
            throw parse_error("unsupported document version " + doc.at("version").dump());

        bool failure = false;
        if (doc.contains("probabilities")) {
            auto kind = doc.at("probabilities").get<std::string>();
            if (kind == "failure")
                failure = true;
            else if (kind != "reliability")
                throw parse_error("'probabilities' must be \"reliability\" or \"failure\"");
        }

        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges")) {
            Edge edge{e.at("id").get<std::string>(), e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                      e.at(failure ? "failure" : "reliability").get<std::vector<double>>()};
            if (failure)
                for (double& x : edge.reliability) x = 1.0 - x;
            edges.push_back(std::move(edge));
        }
        return Network(doc.at("state_count").get<std::size_t>(), doc.at("prior").get<std::vector<double>>(),
                       doc.at("vertices").get<std::vector<std::string>>(), doc.at("source").get<std::string>(),
                       doc.at("sink").get<std::string>(), std::move(edges));
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed network document: ") + e.what());
    }
}

inline Network parse_network(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what());
    }
    return network_from_json(doc);
}

inline Network load_network(const std::string& filename) { return parse_network(read_file(filename)); }

inline nlohmann::ordered_json network_to_json(const Network& net) {
    nlohmann::ordered_json doc;
    doc["version"] = kDocumentVersion;
    doc["state_count"] = net.state_count();
    doc["prior"] = net.prior();
    doc["vertices"] = net.vertices();
    doc["source"] = net.source();
    doc["sink"] = net.sink();
    doc["edges"] = nlohmann::ordered_json::array();
    for (const Edge& e : net.edges()) {
        nlohmann::ordered_json edge;
        edge["id"] = e.id;
        edge["from"] = e.from;
        edge["to"] = e.to;
        edge["reliability"] = e.reliability;
        doc["edges"].push_back(std::move(edge));
    }
    return doc;
}

inline std::string serialize_network(const Network& net) { return network_to_json(net).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Flow files

struct FlowDocument {
    std::string network;  // the network file the flow refers to
    Flow flow;
};

inline FlowDocument parse_flow(std::istream& in) {
    FlowDocument doc;
    bool have_header = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(line);
        std::string key, value, extra;
        if (!(fields >> key) || key[0] == '#') continue;
        if (!(fields >> value) || (fields >> extra))
            throw parse_error("flow line " + std::to_string(lineno) + ": expected two fields");
        if (!have_header) {
            if (key != "network") throw parse_error("flow file must start with 'network <file>'");
            doc.network = value;
            have_header = true;
            continue;
        }
        double x = 0.0;
        auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
        if (ec != std::errc() || end != value.data() + value.size())
            throw parse_error("flow line " + std::to_string(lineno) + ": '" + value + "' is not a number");
        if (!doc.flow.values.emplace(key, x).second)
            throw parse_error("flow line " + std::to_string(lineno) + ": edge '" + key + "' listed twice");
    }
    if (!have_header) throw parse_error("flow file has no 'network' header");
    return doc;
}

inline FlowDocument load_flow(const std::string& filename) {
    std::istringstream in(read_file(filename));
    return parse_flow(in);
}

inline std::string serialize_flow(const FlowDocument& doc) {
    std::string out = "network " + doc.network + "\n";
    for (const auto& [id, x] : doc.flow.values) out += id + " " + format_double(x) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// CNF (DIMACS clause list) and template lists

inline CnfFormula parse_cnf(std::istream& in) {
    CnfFormula cnf;
    std::size_t declared = 0;
    bool have_header = false;
    std::vector<int> pending;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first) || first == "c" || first[0] == '%') continue;
        if (first == "p") {
            std::string format;
            if (have_header || !(fields >> format >> cnf.variable_count >> declared) || format != "cnf")
                throw parse_error("bad CNF header line: '" + line + "'");
            have_header = true;
            continue;
        }
        if (!have_header) throw parse_error("CNF clauses before the 'p cnf' header");
        std::istringstream literals(line);
        int lit = 0;
        std::string token;
        while (literals >> token) {
            auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), lit);
            if (ec != std::errc() || end != token.data() + token.size())
                throw parse_error("bad CNF literal '" + token + "'");
            if (lit != 0) {
                pending.push_back(lit);
                continue;
            }
            if (pending.size() != 3)
                throw parse_error("clause " + std::to_string(cnf.clauses.size() + 1) + " has " +
                                  std::to_string(pending.size()) + " literals, expected 3");
            cnf.clauses.push_back({pending[0], pending[1], pending[2]});
            pending.clear();
        }
    }
    if (!have_header) throw parse_error("missing 'p cnf' header");
    if (!pending.empty()) throw parse_error("last clause is not terminated by 0");
    if (cnf.clauses.size() != declared)
        throw parse_error("header declares " + std::to_string(declared) + " clauses, found " +
                          std::to_string(cnf.clauses.size()));
    check_cnf(cnf);
    return cnf;
}

inline std::string serialize_cnf(const CnfFormula& cnf) {
    std::string out = "p cnf " + std::to_string(cnf.variable_count) + " " + std::to_string(cnf.clauses.size()) + "\n";
    for (const auto& c : cnf.clauses)
        out += std::to_string(c[0]) + " " + std::to_string(c[1]) + " " + std::to_string(c[2]) + " 0\n";
    return out;
}

inline TemplateSet parse_templates(std::istream& in) {
    TemplateSet ts;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream fields(line);
        std::string t;
        if (!(fields >> t) || t[0] == '#') continue;
        if (ts.templates.empty()) ts.length = t.size();
        if (t.size() != ts.length)
            throw parse_error("template '" + t + "' has width " + std::to_string(t.size()) + ", expected " +
                              std::to_string(ts.length));
        if (t.find_first_not_of("01*") != std::string::npos)
            throw parse_error("template '" + t + "' contains symbols other than 0, 1, *");
        ts.templates.push_back(t);
    }
    return ts;
}

inline nlohmann::ordered_json reduction_side_file(const ReductionArtifact& art, const TemplateSet& ts) {
    nlohmann::ordered_json doc;
    doc["template_count"] = art.template_count;
    doc["width"] = ts.length;
    doc["templates"] = ts.templates;
    doc["bit_to_edges"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < art.bit_to_edges.size(); ++i) {
        doc["bit_to_edges"].push_back(
            {{"position", i + 1}, {"one", art.bit_to_edges[i].one}, {"zero", art.bit_to_edges[i].zero}});
    }
    return doc;
}

// ---------------------------------------------------------------------------
// DOT export

inline std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

inline std::string export_dot(const Network& net) {
    std::string out = "digraph network {\n  rankdir=LR;\n";
    for (const auto& v : net.vertices()) {
        out += "  " + dot_quote(v);
        if (v == net.source())
            out += " [shape=doublecircle, style=bold, xlabel=\"source\"]";
        else if (v == net.sink())
            out += " [shape=doublecircle, style=filled, xlabel=\"sink\"]";
        out += ";\n";
    }
    for (const Edge& e : net.edges()) {
        std::string label = e.id + " [";
        for (std::size_t k = 0; k < e.reliability.size(); ++k) {
            if (k) label += ", ";
            label += format_double(e.reliability[k]);
        }
        label += "]";
        out += "  " + dot_quote(e.from) + " -> " + dot_quote(e.to) + " [id=" + dot_quote(e.id) +
               ", label=" + dot_quote(label) + "];\n";
    }
    return out + "}\n";
}

}  // namespace mrp
